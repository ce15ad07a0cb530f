#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "minorperc/dense_pipeline.hpp"
#include "minorperc/error.hpp"
#include "minorperc/generators.hpp"
#include "minorperc/graph.hpp"
#include "minorperc/minor.hpp"
#include "minorperc/random.hpp"
#include "minorperc/sprinkling_minor.hpp"
#include "minorperc/tree_growth.hpp"

namespace minorperc {

enum class Pipeline { kTreeGrowth, kDense, kSprinklingOnly };

inline const char* to_string(Pipeline p) {
  switch (p) {
    case Pipeline::kTreeGrowth: return "tree-growth";
    case Pipeline::kDense: return "dense";
    case Pipeline::kSprinklingOnly: return "sprinkling-only";
  }
  return "?";
}

inline Pipeline parse_pipeline(std::string_view name) {
  if (name == "tree-growth") return Pipeline::kTreeGrowth;
  if (name == "dense") return Pipeline::kDense;
  if (name == "sprinkling-only") return Pipeline::kSprinklingOnly;
  throw ParameterError("unknown pipeline '" + std::string(name) + "'");
}

struct ExperimentConfig {
  Family family = Family::kComplete;
  std::vector<std::size_t> ks;
  double epsilon = 0.2;
  double nu = 0.9;
  Pipeline pipeline = Pipeline::kDense;
  std::size_t trials = 1;
  std::uint64_t master_seed = 1;
  std::optional<double> delta;
  std::optional<std::size_t> K;
  /// clique-union: copies of K_{k+1}. random-regular: n = size_factor (k+1),
  /// bumped by one if n k is odd.
  std::size_t copies = 10;
  std::size_t size_factor = 4;
  std::string host_file;
  std::string out_dir;
  std::size_t threads = 0;  // 0: hardware concurrency
  bool timing = false;      // wall_ms stays 0 unless set, keeping CSVs byte-identical
  bool write_trace = true;

  void validate() const {
    if (trials < 1) throw ParameterError("trials must be at least 1");
    if (ks.empty()) throw ParameterError("at least one k is required");
    for (std::size_t i = 0; i < ks.size(); ++i) {
      if (ks[i] == 0) throw ParameterError("k values must be positive");
      if (i && ks[i] <= ks[i - 1]) throw ParameterError("k values must be strictly increasing");
    }
    if (!(epsilon > 0.0)) throw ParameterError("epsilon must be positive");
    if (family == Family::kFile && host_file.empty()) throw ParameterError("file family needs a host path");
  }
};

struct ExperimentRecord {
  std::size_t k = 0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::string pipeline;
  std::string exit_kind;
  std::size_t minor_order = 0;
  std::size_t upper_bound = 0;
  std::uint64_t wall_ms = 0;
  std::string method;
  std::vector<StageRecord> stages;
};

inline constexpr const char* kCsvHeader = "k,trial,seed,pipeline,exit_kind,minor_order,upper_bound,wall_ms";

inline std::string csv_row(const ExperimentRecord& r) {
  std::ostringstream out;
  out << r.k << ',' << r.trial << ',' << r.seed << ',' << r.pipeline << ',' << r.exit_kind << ',' << r.minor_order
      << ',' << r.upper_bound << ',' << r.wall_ms;
  return out.str();
}

inline std::uint64_t trial_seed(std::uint64_t master, std::size_t k, std::size_t trial) {
  return derive_seed(master, k, trial);
}

/// Host graph for one k-point; deterministic in (config, k).
inline Graph experiment_host(const ExperimentConfig& cfg, std::size_t k) {
  GeneratorSpec spec;
  spec.family = cfg.family;
  spec.k = k;
  spec.seed = derive_seed(cfg.master_seed, k, 0x686f7374ULL);
  switch (cfg.family) {
    case Family::kComplete: spec.n = k + 1; break;
    case Family::kCompleteBipartite: spec.a = k; spec.b = k; break;
    case Family::kHypercube: spec.d = k; break;
    case Family::kCliqueUnion: spec.copies = cfg.copies; break;
    case Family::kRandomRegular:
      spec.n = cfg.size_factor * (k + 1);
      if ((spec.n * k) % 2) ++spec.n;
      break;
    case Family::kFile: spec.path = cfg.host_file; break;
  }
  return generate(spec).graph;
}

/// Sprinkling lemma on a host taken as given: pieces are BFS-carved
/// clusters of exactly floor(sqrt k) vertices (leftovers dropped), T is the
/// BFS tree inside each cluster, F is every host edge on the covered
/// vertices, and p = c2/k with c2 = 1/4.
inline SprinklingInstance host_sprinkling_instance(const Graph& g, std::size_t k, double c2 = 0.25) {
  const std::size_t n = g.num_vertices();
  const std::size_t s = std::max<std::size_t>(isqrt(k), 1);
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> cluster(n, kNone);
  SprinklingInstance inst;
  inst.universe = n;
  inst.k = k;
  for (Vertex root = 0; root < n; ++root) {
    if (cluster[root] != kNone) continue;
    const std::size_t id = inst.pieces.size();
    VertexSet piece{root};
    std::vector<Edge> tree;
    cluster[root] = id;
    for (std::size_t head = 0; head < piece.size() && piece.size() < s; ++head) {
      for (Vertex w : g.neighbors(piece[head])) {
        if (cluster[w] != kNone || piece.size() >= s) continue;
        cluster[w] = id;
        piece.push_back(w);
        tree.push_back(Edge{piece[head], w}.canonical());
      }
    }
    if (piece.size() < s) {
      for (Vertex v : piece) cluster[v] = kNone - 1;  // dropped
      continue;
    }
    std::sort(piece.begin(), piece.end());
    inst.pieces.push_back(std::move(piece));
    inst.forest.insert(inst.forest.end(), tree.begin(), tree.end());
  }
  for (Vertex u = 0; u < n; ++u) {
    if (cluster[u] >= kNone - 1) continue;
    for (Vertex w : g.neighbors(u)) {
      if (u < w && cluster[w] < kNone - 1) inst.reservoir.push_back({u, w});
    }
  }
  const double rk = std::sqrt(static_cast<double>(k));
  inst.b1 = static_cast<double>(s) / rk;
  inst.b2 = static_cast<double>(s) / rk;
  const std::size_t covered = inst.num_vertices();
  inst.c1 = covered ? static_cast<double>(inst.reservoir.size()) / (static_cast<double>(k) * static_cast<double>(covered))
                    : 0.0;
  inst.set_c2(c2);
  return inst;
}

/// One trial. The certificate is re-verified against the realized graph
/// before the record is produced.
inline ExperimentRecord run_trial(const ExperimentConfig& cfg, const Graph& host, std::size_t k, std::size_t trial) {
  ExperimentRecord rec;
  rec.k = k;
  rec.trial = trial;
  rec.seed = trial_seed(cfg.master_seed, k, trial);
  rec.pipeline = to_string(cfg.pipeline);
  const auto start = std::chrono::steady_clock::now();
  MinorCertificate cert;
  Graph realized;
  switch (cfg.pipeline) {
    case Pipeline::kTreeGrowth: {
      const GrowthParams params = GrowthParams::make(k, cfg.epsilon, cfg.delta, cfg.K);
      GrowthRun r = run(host, params, rec.seed);
      cert = std::move(r.certificate);
      realized = std::move(r.realized);
      rec.exit_kind = r.exit_kind;
      rec.method = r.method;
      // Layer t as a stage: measured |S_t|, threshold |T_t|, passed on Continue.
      for (const StepTrace& t : r.trace) {
        rec.stages.push_back({"layer-" + std::to_string(t.step) + "-" + t.exit, t.exit == "continue",
                              static_cast<double>(t.frontier), static_cast<double>(t.tree)});
      }
      break;
    }
    case Pipeline::kDense: {
      const DenseParams params = DenseParams::make(k, host.num_vertices(), cfg.nu, cfg.epsilon);
      DenseRun r = run_dense(host, params, rec.seed);
      cert = std::move(r.certificate);
      realized = std::move(r.realized);
      rec.exit_kind = r.failed_stage == "none" ? "complete" : "failed-" + r.failed_stage;
      rec.method = r.method;
      rec.stages = std::move(r.stages);
      break;
    }
    case Pipeline::kSprinklingOnly: {
      const SprinklingInstance inst = host_sprinkling_instance(host, k);
      SprinklingResult r = extract(inst, rec.seed);
      cert = std::move(r.certificate);
      realized = std::move(r.realized);
      rec.exit_kind = r.degenerate ? "degenerate" : "complete";
      rec.method = "sprinkling";
      break;
    }
  }
  const VerifyResult check = verify_minor(realized, cert);
  if (!check.ok) throw ContractError("trial certificate failed re-verification: " + check.describe());
  rec.minor_order = cert.order();
  rec.upper_bound = hadwiger_upper(realized);
  if (rec.minor_order < 1 || rec.minor_order > rec.upper_bound) {
    throw ContractError("trial certificate order outside [1, hadwiger_upper]");
  }
  if (cfg.timing) {
    rec.wall_ms = static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count());
  }
  return rec;
}

/// Runs every (k, trial) on a worker pool. Rows are written to
/// <out_dir>/results.csv in (k, trial) order as soon as every earlier row is
/// done; stage traces (dense stages, tree-growth layers) go to <out_dir>/trace.csv.
inline std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  std::ofstream csv;
  std::ofstream trace;
  if (!cfg.out_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(cfg.out_dir, ec);
    csv.open(std::filesystem::path(cfg.out_dir) / "results.csv");
    if (!csv) throw ParameterError("cannot write to output directory '" + cfg.out_dir + "'");
    csv << kCsvHeader << '\n' << std::flush;
    if (cfg.write_trace) {
      trace.open(std::filesystem::path(cfg.out_dir) / "trace.csv");
      trace << "k,trial,method,stage,passed,measured,threshold\n";
    }
  }
  std::vector<Graph> hosts;
  hosts.reserve(cfg.ks.size());
  for (std::size_t k : cfg.ks) hosts.push_back(experiment_host(cfg, k));

  const std::size_t total = cfg.ks.size() * cfg.trials;
  std::vector<std::optional<ExperimentRecord>> results(total);
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::size_t flushed = 0;
  std::exception_ptr failure;

  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= total) return;
      const std::size_t ki = i / cfg.trials;
      try {
        ExperimentRecord rec = run_trial(cfg, hosts[ki], cfg.ks[ki], i % cfg.trials);
        std::lock_guard lock(mu);
        results[i] = std::move(rec);
        while (flushed < total && results[flushed]) {
          const ExperimentRecord& r = *results[flushed];
          if (csv.is_open()) csv << csv_row(r) << '\n' << std::flush;
          if (trace.is_open()) {
            for (const auto& s : r.stages) {
              trace << r.k << ',' << r.trial << ',' << r.method << ',' << s.stage << ',' << (s.passed ? 1 : 0) << ','
                    << s.measured << ',' << s.threshold << '\n';
            }
          }
          ++flushed;
        }
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
        next.store(total);
        return;
      }
    }
  };
  std::size_t threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, total);
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  std::vector<ExperimentRecord> out;
  out.reserve(total);
  for (auto& r : results) out.push_back(std::move(*r));
  return out;
}

inline std::vector<ExperimentRecord> read_results_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw ParseError(1, "missing or unexpected CSV header");
  std::vector<ExperimentRecord> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 8) throw ParseError(line_no, "expected 8 fields");
    ExperimentRecord r;
    r.k = detail::parse_uint(f[0], line_no);
    r.trial = detail::parse_uint(f[1], line_no);
    r.seed = detail::parse_uint(f[2], line_no);
    r.pipeline = f[3];
    r.exit_kind = f[4];
    r.minor_order = detail::parse_uint(f[5], line_no);
    r.upper_bound = detail::parse_uint(f[6], line_no);
    r.wall_ms = detail::parse_uint(f[7], line_no);
    out.push_back(std::move(r));
  }
  return out;
}

inline std::vector<ExperimentRecord> load_results_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open results file '" + path + "'");
  return read_results_csv(in);
}

struct ScalingPoint {
  std::size_t k = 0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  std::size_t trials = 0;
};

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
  std::vector<double> residuals;
};

struct ScalingFit {
  std::vector<ScalingPoint> points;
  LineFit vs_log_k;            // log median against log k
  LineFit vs_log_k_over_log;   // log median against log(k / log k)
};

namespace detail {

/// Linear-interpolation quantile of sorted data.
inline double quantile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

inline LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    f.residuals.push_back(y[i] - (f.intercept + f.slope * x[i]));
    sse += f.residuals.back() * f.residuals.back();
  }
  f.slope_se = x.size() > 2 ? std::sqrt(sse / (n - 2.0) / sxx) : 0.0;
  return f;
}

}  // namespace detail

inline ScalingFit fit_scaling(const std::vector<ExperimentRecord>& records) {
  std::map<std::size_t, std::vector<double>> by_k;
  for (const auto& r : records) by_k[r.k].push_back(static_cast<double>(r.minor_order));
  if (by_k.size() < 3) throw ParameterError("scaling fit needs at least 3 distinct k");
  ScalingFit fit;
  std::vector<double> lk, lkl, lm;
  for (auto& [k, orders] : by_k) {
    std::sort(orders.begin(), orders.end());
    ScalingPoint pt{k, detail::quantile(orders, 0.5), detail::quantile(orders, 0.25), detail::quantile(orders, 0.75),
                    orders.size()};
    if (!(pt.median > 0.0)) throw ParameterError("medians must be positive for a log-log fit");
    const double kd = static_cast<double>(k);
    if (!(std::log(kd) > 0.0 && kd / std::log(kd) > 0.0)) throw ParameterError("k too small for the log(k/log k) model");
    fit.points.push_back(pt);
    lk.push_back(std::log(kd));
    lkl.push_back(std::log(kd / std::log(kd)));
    lm.push_back(std::log(pt.median));
  }
  fit.vs_log_k = detail::least_squares(lk, lm);
  fit.vs_log_k_over_log = detail::least_squares(lkl, lm);
  return fit;
}

/// gnuplot-friendly columns: k median q1 q3.
inline void write_gnuplot_data(std::ostream& out, const ScalingFit& fit) {
  out << "# k median q1 q3\n";
  for (const auto& p : fit.points) out << p.k << ' ' << p.median << ' ' << p.q1 << ' ' << p.q3 << '\n';
}

/// 0: valid certificate, 1: invalid (violation written to `message`),
/// 2: a file failed to parse or open.
inline int verify_file(const std::string& graph_path, const std::string& cert_path, std::ostream& message) {
  Graph g;
  MinorCertificate c;
  try {
    g = load_edge_list(graph_path);
    c = load_certificate(cert_path);
  } catch (const ParseError& e) {
    message << "parse error: " << e.what() << '\n';
    return 2;
  } catch (const ParameterError& e) {
    message << "error: " << e.what() << '\n';
    return 2;
  }
  try {
    const VerifyResult r = verify_minor(g, c);
    if (r.ok) {
      message << "valid K_" << c.order() << " minor\n";
      return 0;
    }
    message << "invalid: " << r.describe() << '\n';
    return 1;
  } catch (const ParameterError& e) {
    message << "invalid: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace minorperc
