// Command-line front end: graph generation, percolation, minor extraction,
// certificate checking, experiments and bound tables.

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "minorperc/minorperc.hpp"

using namespace minorperc;

namespace {

void write_graph(const std::string& path, const Graph& g) {
  if (path.empty() || path == "-") {
    write_edge_list(std::cout, g);
  } else {
    save_edge_list(path, g);
  }
}

Graph read_graph(const std::string& path) {
  if (path.empty() || path == "-") return read_edge_list(std::cin);
  return load_edge_list(path);
}

void print_report(const char* name, const BoundReport& r) {
  std::cout << std::setprecision(12) << name << ": bound=" << r.bound << " value=" << r.value << " slack=" << r.slack
            << " as_probability=" << r.as_probability << " holds=" << (r.holds ? "yes" : "no") << '\n';
}

// Lets a config file list bare `key = value` lines: keys outside any
// [section] are routed to the subcommand given on the command line.
class FlatConfig : public CLI::ConfigTOML {
 public:
  explicit FlatConfig(const CLI::App* app) : app_(app) {}

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    auto items = CLI::ConfigTOML::from_config(input);
    const auto subs = app_->get_subcommands();
    if (subs.empty()) return items;
    for (auto& item : items) {
      if (item.parents.empty() && item.name != "--") item.parents = {subs.front()->get_name()};
    }
    return items;
  }

 private:
  const CLI::App* app_;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Large complete minors in percolated graphs"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Flat key = value file mirroring the subcommand's flags");
  app.config_formatter(std::make_shared<FlatConfig>(&app));
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.fallthrough();

  // generate
  GeneratorSpec gen;
  std::string family_name = "complete";
  std::string gen_out;
  auto* generate_cmd = app.add_subcommand("generate", "Write a host graph as an edge list");
  generate_cmd->add_option("--family", family_name, "complete, complete-bipartite, random-regular, hypercube, clique-union, file");
  generate_cmd->add_option("--n", gen.n, "Vertex count (complete, random-regular)");
  generate_cmd->add_option("--k", gen.k, "Degree (random-regular) or clique size minus one (clique-union)");
  generate_cmd->add_option("--a", gen.a, "Left side (complete-bipartite)");
  generate_cmd->add_option("--b", gen.b, "Right side (complete-bipartite)");
  generate_cmd->add_option("--d", gen.d, "Dimension (hypercube)");
  generate_cmd->add_option("--copies", gen.copies, "Number of cliques (clique-union)");
  generate_cmd->add_option("--path", gen.path, "Input edge list (file)");
  generate_cmd->add_option("--seed", gen.seed, "Seed (random-regular)");
  generate_cmd->add_option("--out", gen_out, "Output file, '-' for stdout");

  // percolate
  std::string perc_in, perc_out;
  std::optional<double> perc_p;
  std::size_t perc_k = 0;
  double perc_eps = 0.2;
  std::string perc_round = "full";
  std::uint64_t perc_seed = 1;
  auto* percolate_cmd = app.add_subcommand("percolate", "Keep each edge independently");
  percolate_cmd->add_option("--in", perc_in, "Host edge list, '-' for stdin")->required();
  percolate_cmd->add_option("--p", perc_p, "Edge probability; otherwise derived from --k and --epsilon");
  percolate_cmd->add_option("--k", perc_k, "k for p = (1+eps)/k");
  percolate_cmd->add_option("--epsilon", perc_eps, "eps for p = (1+eps)/k");
  percolate_cmd->add_option("--round", perc_round, "full: p; first: p1; both: p1 then sprinkle p2")
      ->check(CLI::IsMember({"full", "first", "both"}));
  percolate_cmd->add_option("--seed", perc_seed, "Seed");
  percolate_cmd->add_option("--out", perc_out, "Output file, '-' for stdout");

  // find-minor
  std::string fm_in, fm_out, fm_realized, fm_pipeline = "tree-growth";
  std::size_t fm_k = 0;
  double fm_eps = 0.2, fm_nu = 0.9;
  std::uint64_t fm_seed = 1;
  auto* find_cmd = app.add_subcommand("find-minor", "Run one pipeline and write the certificate");
  find_cmd->add_option("--in", fm_in, "Host edge list, '-' for stdin")->required();
  find_cmd->add_option("--pipeline", fm_pipeline, "tree-growth, dense or sprinkling-only");
  find_cmd->add_option("--k", fm_k, "k (defaults to the minimum degree)");
  find_cmd->add_option("--epsilon", fm_eps, "eps");
  find_cmd->add_option("--nu", fm_nu, "nu (dense pipeline)");
  find_cmd->add_option("--seed", fm_seed, "Seed");
  find_cmd->add_option("--out", fm_out, "Certificate file, '-' for stdout");
  find_cmd->add_option("--realized", fm_realized, "Also write the percolated graph the certificate refers to");

  // verify
  std::string v_graph, v_cert;
  auto* verify_cmd = app.add_subcommand("verify", "Check a certificate: exit 0 valid, 1 invalid, 2 unreadable");
  verify_cmd->add_option("--graph", v_graph, "Edge list")->required();
  verify_cmd->add_option("--cert", v_cert, "Certificate")->required();

  // experiment
  ExperimentConfig cfg;
  std::string exp_family = "complete", exp_pipeline = "dense", exp_gnuplot;
  std::vector<std::size_t> exp_ks;
  auto* exp_cmd = app.add_subcommand("experiment", "Trials over a k grid, results.csv in --out");
  exp_cmd->add_option("--family", exp_family, "Host family");
  exp_cmd->add_option("--k", exp_ks, "k values, strictly increasing")->delimiter(',')->required();
  exp_cmd->add_option("--epsilon", cfg.epsilon, "eps");
  exp_cmd->add_option("--nu", cfg.nu, "nu (dense pipeline)");
  exp_cmd->add_option("--pipeline", exp_pipeline, "tree-growth, dense or sprinkling-only");
  exp_cmd->add_option("--trials", cfg.trials, "Trials per k");
  exp_cmd->add_option("--seed", cfg.master_seed, "Master seed");
  exp_cmd->add_option("--out", cfg.out_dir, "Output directory")->required();
  exp_cmd->add_option("--delta", cfg.delta, "Tree-growth delta override");
  exp_cmd->add_option("--K", cfg.K, "Tree-growth star size override");
  exp_cmd->add_option("--copies", cfg.copies, "Cliques in the clique-union host");
  exp_cmd->add_option("--size-factor", cfg.size_factor, "random-regular host has this many times k+1 vertices");
  exp_cmd->add_option("--host-file", cfg.host_file, "Host edge list for the file family");
  exp_cmd->add_option("--threads", cfg.threads, "Worker threads, 0 for all cores");
  exp_cmd->add_flag("--timing", cfg.timing, "Record wall_ms (breaks byte-identical reruns)");
  exp_cmd->add_option("--gnuplot", exp_gnuplot, "Write k/median/quartile columns here");

  // bounds
  std::string b_kind;
  std::size_t b_n = 100, b_K = 20, b_k = 10000;
  double b_p = 0.02, b_t = 10.0, b_mu = 1000.0, b_eps = 0.2;
  std::optional<double> b_delta;
  double b_Kreal = 1.0;
  auto* bounds_cmd = app.add_subcommand("bounds", "Evaluate a probabilistic bound against its exact value");
  bounds_cmd->add_option("kind", b_kind, "restricted, hoeffding, chebyshev, trial-failure or chain")
      ->required()
      ->check(CLI::IsMember({"restricted", "hoeffding", "chebyshev", "trial-failure", "chain"}));
  bounds_cmd->add_option("--n", b_n, "Number of trials or summands");
  bounds_cmd->add_option("--p", b_p, "Success probability (restricted)");
  bounds_cmd->add_option("--cap", b_K, "Cap K (restricted)");
  bounds_cmd->add_option("--range", b_Kreal, "Summand range K (hoeffding)");
  bounds_cmd->add_option("--t", b_t, "Deviation (hoeffding)");
  bounds_cmd->add_option("--mu", b_mu, "Mean (chebyshev)");
  bounds_cmd->add_option("--epsilon", b_eps, "eps (trial-failure, chain)");
  bounds_cmd->add_option("--k", b_k, "k (trial-failure, chain)");
  bounds_cmd->add_option("--delta", b_delta, "delta (chain), default min(eps^2/100, 0.01)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*generate_cmd) {
      gen.family = parse_family(family_name);
      const GeneratedGraph g = generate(gen);
      write_graph(gen_out, g.graph);
      std::cerr << "n=" << g.graph.num_vertices() << " m=" << g.graph.num_edges() << " min_degree=" << g.min_degree;
      if (gen.family == Family::kRandomRegular) std::cerr << " rejections=" << g.rejections;
      std::cerr << '\n';
      return 0;
    }
    if (*percolate_cmd) {
      const Graph host = read_graph(perc_in);
      Graph out;
      if (perc_p) {
        check_probability(*perc_p, "p");
        out = percolate(host, *perc_p, perc_seed);
      } else {
        if (perc_k == 0) throw ParameterError("give --p or --k");
        const PercolationParams pp = PercolationParams::make(perc_k, perc_eps);
        if (perc_round == "full") {
          out = percolate(host, pp.p, perc_seed);
        } else {
          out = percolate(host, pp.p1, derive_seed(perc_seed, 1));
          if (perc_round == "both") out = sprinkle(out, host, pp.p2, derive_seed(perc_seed, 2));
        }
      }
      write_graph(perc_out, out);
      return 0;
    }
    if (*find_cmd) {
      const Graph host = read_graph(fm_in);
      if (host.num_vertices() == 0) throw ParameterError("empty host graph");
      const std::size_t k = fm_k ? fm_k : min_degree(host);
      MinorCertificate cert;
      Graph realized;
      std::string method, exit_kind;
      switch (parse_pipeline(fm_pipeline)) {
        case Pipeline::kTreeGrowth: {
          GrowthRun r = run(host, GrowthParams::make(k, fm_eps), fm_seed);
          cert = std::move(r.certificate);
          realized = std::move(r.realized);
          method = r.method;
          exit_kind = r.exit_kind;
          break;
        }
        case Pipeline::kDense: {
          DenseRun r = run_dense(host, DenseParams::make(k, host.num_vertices(), fm_nu, fm_eps), fm_seed);
          cert = std::move(r.certificate);
          realized = std::move(r.realized);
          method = r.method;
          exit_kind = r.failed_stage == "none" ? "complete" : "failed-" + r.failed_stage;
          break;
        }
        case Pipeline::kSprinklingOnly: {
          SprinklingResult r = extract(host_sprinkling_instance(host, k), fm_seed);
          cert = std::move(r.certificate);
          realized = std::move(r.realized);
          method = "sprinkling";
          exit_kind = r.degenerate ? "degenerate" : "complete";
          break;
        }
      }
      if (fm_out.empty() || fm_out == "-") {
        write_certificate(std::cout, cert);
      } else {
        save_certificate(fm_out, cert);
      }
      if (!fm_realized.empty()) save_edge_list(fm_realized, realized);
      std::cerr << "order=" << cert.order() << " upper=" << hadwiger_upper(realized) << " method=" << method
                << " exit=" << exit_kind << '\n';
      return 0;
    }
    if (*verify_cmd) {
      return verify_file(v_graph, v_cert, std::cout);
    }
    if (*exp_cmd) {
      cfg.family = parse_family(exp_family);
      cfg.pipeline = parse_pipeline(exp_pipeline);
      cfg.ks = exp_ks;
      const auto records = run_experiment(cfg);
      std::cout << records.size() << " rows written to " << cfg.out_dir << "/results.csv\n";
      std::map<std::size_t, std::size_t> distinct;
      for (const auto& r : records) ++distinct[r.k];
      if (distinct.size() >= 3) {
        const ScalingFit fit = fit_scaling(records);
        for (const auto& p : fit.points) {
          std::cout << "k=" << p.k << " median=" << p.median << " q1=" << p.q1 << " q3=" << p.q3 << '\n';
        }
        std::cout << "slope vs log k: " << fit.vs_log_k.slope << " (se " << fit.vs_log_k.slope_se << ")\n";
        std::cout << "slope vs log(k/log k): " << fit.vs_log_k_over_log.slope << " (se "
                  << fit.vs_log_k_over_log.slope_se << ")\n";
        if (!exp_gnuplot.empty()) {
          std::ofstream out(exp_gnuplot);
          if (!out) throw ParameterError("cannot write '" + exp_gnuplot + "'");
          write_gnuplot_data(out, fit);
        }
      } else if (!exp_gnuplot.empty()) {
        throw ParameterError("--gnuplot needs at least 3 k values");
      }
      return 0;
    }
    if (*bounds_cmd) {
      if (b_kind == "restricted") print_report("restricted", restricted_binomial_lower(b_n, b_p, b_K));
      if (b_kind == "hoeffding") print_report("hoeffding", hoeffding_tail(static_cast<double>(b_n), b_Kreal, b_t));
      if (b_kind == "chebyshev") print_report("chebyshev", chebyshev_eH(b_mu));
      if (b_kind == "trial-failure") print_report("trial-failure", trial_failure_rate(b_eps, b_k));
      if (b_kind == "chain") {
        const ChainBound c = chain_bound(b_eps, b_k, b_delta.value_or(std::min(b_eps * b_eps / 100.0, 0.01)));
        print_report("chain", c.restricted);
        std::cout << "target=" << c.target << " reaches_target=" << (c.reaches_target ? "yes" : "no") << '\n';
      }
      return 0;
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 2;
  } catch (const ParameterError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const ContractError& e) {
    std::cerr << "internal check failed: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
