#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "minorperc/experiments.hpp"
#include "minorperc/graph_io.hpp"

using namespace minorperc;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("minorperc_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentRecord synthetic(std::size_t k, std::size_t trial, std::size_t order) {
  ExperimentRecord r;
  r.k = k;
  r.trial = trial;
  r.minor_order = order;
  return r;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(MINORPERC_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Config, Validation) {
  ExperimentConfig cfg;
  EXPECT_THROW(cfg.validate(), ParameterError);  // no k
  cfg.ks = {100, 200};
  EXPECT_NO_THROW(cfg.validate());
  cfg.trials = 0;
  EXPECT_THROW(cfg.validate(), ParameterError);
  cfg.trials = 1;
  cfg.ks = {200, 100};
  EXPECT_THROW(cfg.validate(), ParameterError);
  cfg.ks = {100, 100};
  EXPECT_THROW(cfg.validate(), ParameterError);
  cfg.ks = {100};
  cfg.family = Family::kFile;
  EXPECT_THROW(cfg.validate(), ParameterError);
  EXPECT_EQ(parse_pipeline("sprinkling-only"), Pipeline::kSprinklingOnly);
  EXPECT_THROW(parse_pipeline("bogus"), ParameterError);
}

TEST(Run, SingleTrialRow) {
  const fs::path dir = scratch("single");
  ExperimentConfig cfg;
  cfg.ks = {100};
  cfg.out_dir = dir.string();
  const auto records = run_experiment(cfg);
  ASSERT_EQ(records.size(), 1u);
  EXPECT_GE(records[0].minor_order, 1u);
  EXPECT_LE(records[0].minor_order, records[0].upper_bound);
  EXPECT_EQ(records[0].seed, trial_seed(cfg.master_seed, 100, 0));
  const auto back = load_results_csv((dir / "results.csv").string());
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(csv_row(back[0]), csv_row(records[0]));
  EXPECT_EQ(slurp(dir / "results.csv").substr(0, std::string(kCsvHeader).size()), kCsvHeader);
  EXPECT_TRUE(fs::exists(dir / "trace.csv"));
}

TEST(Run, ByteIdenticalRepeats) {
  for (Pipeline p : {Pipeline::kDense, Pipeline::kTreeGrowth, Pipeline::kSprinklingOnly}) {
    ExperimentConfig cfg;
    cfg.pipeline = p;
    cfg.family = p == Pipeline::kTreeGrowth ? Family::kCliqueUnion : Family::kComplete;
    cfg.copies = 3;
    cfg.ks = {30, 60};
    cfg.trials = 3;
    cfg.master_seed = 42;
    const fs::path a = scratch(std::string("repeat_a_") + to_string(p));
    const fs::path b = scratch(std::string("repeat_b_") + to_string(p));
    cfg.out_dir = a.string();
    cfg.threads = 1;
    run_experiment(cfg);
    cfg.out_dir = b.string();
    cfg.threads = 3;
    run_experiment(cfg);
    EXPECT_EQ(slurp(a / "results.csv"), slurp(b / "results.csv")) << to_string(p);
    EXPECT_EQ(slurp(a / "trace.csv"), slurp(b / "trace.csv")) << to_string(p);
    // Rows = k-points x trials.
    EXPECT_EQ(load_results_csv((a / "results.csv").string()).size(), 6u);
  }
}

TEST(Run, DifferentSeedsDiffer) {
  ExperimentConfig cfg;
  cfg.ks = {50};
  cfg.trials = 4;
  cfg.master_seed = 1;
  const auto a = run_experiment(cfg);
  cfg.master_seed = 2;
  const auto b = run_experiment(cfg);
  EXPECT_NE(a[0].seed, b[0].seed);
}

TEST(Run, UnwritableOutput) {
  const fs::path dir = scratch("unwritable");
  const fs::path blocker = dir / "file";
  std::ofstream(blocker) << "x";
  ExperimentConfig cfg;
  cfg.ks = {20};
  cfg.out_dir = (blocker / "sub").string();
  EXPECT_THROW(run_experiment(cfg), ParameterError);
}

TEST(Run, HostFamilies) {
  ExperimentConfig cfg;
  cfg.family = Family::kRandomRegular;
  const Graph rr = experiment_host(cfg, 5);
  EXPECT_EQ(rr.num_vertices(), 24u);
  EXPECT_EQ(min_degree(rr), 5u);
  cfg.family = Family::kCliqueUnion;
  cfg.copies = 4;
  EXPECT_EQ(experiment_host(cfg, 9).num_vertices(), 40u);
  cfg.family = Family::kCompleteBipartite;
  EXPECT_EQ(experiment_host(cfg, 7).num_edges(), 49u);
  cfg.family = Family::kHypercube;
  EXPECT_EQ(experiment_host(cfg, 4).num_vertices(), 16u);
}

TEST(Fit, SyntheticSqrt) {
  std::vector<ExperimentRecord> recs;
  for (std::size_t k : {100, 400, 1600, 6400}) {
    for (std::size_t t = 0; t < 3; ++t) recs.push_back(synthetic(k, t, static_cast<std::size_t>(3 * std::sqrt(k))));
  }
  const ScalingFit fit = fit_scaling(recs);
  EXPECT_NEAR(fit.vs_log_k.slope, 0.5, 1e-9);
  EXPECT_NEAR(fit.vs_log_k.intercept, std::log(3.0), 1e-9);
  for (double r : fit.vs_log_k.residuals) EXPECT_NEAR(r, 0.0, 1e-9);
  EXPECT_NEAR(fit.vs_log_k.slope_se, 0.0, 1e-9);
  ASSERT_EQ(fit.points.size(), 4u);
  EXPECT_DOUBLE_EQ(fit.points[1].median, 60.0);
}

TEST(Fit, ConstantMedians) {
  std::vector<ExperimentRecord> recs;
  for (std::size_t k : {100, 200, 400}) {
    recs.push_back(synthetic(k, 0, 7));
    recs.push_back(synthetic(k, 1, 2));
    recs.push_back(synthetic(k, 2, 9));
  }
  const ScalingFit fit = fit_scaling(recs);
  EXPECT_NEAR(fit.vs_log_k.slope, 0.0, 1e-12);
  EXPECT_NEAR(fit.vs_log_k_over_log.slope, 0.0, 1e-12);
  EXPECT_DOUBLE_EQ(fit.points[0].median, 7.0);
  EXPECT_DOUBLE_EQ(fit.points[0].q1, 4.5);
  EXPECT_DOUBLE_EQ(fit.points[0].q3, 8.0);
}

TEST(Fit, NeedsThreePoints) {
  std::vector<ExperimentRecord> recs{synthetic(10, 0, 2), synthetic(20, 0, 3), synthetic(20, 1, 3)};
  EXPECT_THROW(fit_scaling(recs), ParameterError);
}

TEST(Fit, CsvRoundTripIsBitExact) {
  const fs::path dir = scratch("fit_roundtrip");
  ExperimentConfig cfg;
  cfg.ks = {20, 40, 80};
  cfg.trials = 3;
  cfg.out_dir = dir.string();
  const auto records = run_experiment(cfg);
  const ScalingFit mem = fit_scaling(records);
  const ScalingFit disk = fit_scaling(load_results_csv((dir / "results.csv").string()));
  EXPECT_EQ(mem.vs_log_k.slope, disk.vs_log_k.slope);
  EXPECT_EQ(mem.vs_log_k.intercept, disk.vs_log_k.intercept);
  EXPECT_EQ(mem.vs_log_k_over_log.slope, disk.vs_log_k_over_log.slope);
  std::ostringstream a, b;
  write_gnuplot_data(a, mem);
  write_gnuplot_data(b, disk);
  EXPECT_EQ(a.str(), b.str());
}

TEST(Csv, ParseErrors) {
  std::stringstream bad_header("k,trial\n");
  EXPECT_THROW(read_results_csv(bad_header), ParseError);
  std::stringstream short_row(std::string(kCsvHeader) + "\n1,2,3\n");
  try {
    read_results_csv(short_row);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(VerifyFile, ExitCodes) {
  const fs::path dir = scratch("verify");
  save_edge_list((dir / "k4.txt").string(), complete_graph(4));
  save_edge_list((dir / "p4.txt").string(), path_graph(4));
  save_certificate((dir / "singletons.txt").string(), MinorCertificate{{{0}, {1}, {2}, {3}}});
  save_certificate((dir / "pair.txt").string(), MinorCertificate{{{0}, {3}}});
  std::ofstream(dir / "garbage.txt") << "not a certificate\n";
  std::ostringstream msg;
  EXPECT_EQ(verify_file((dir / "k4.txt").string(), (dir / "singletons.txt").string(), msg), 0);
  EXPECT_EQ(verify_file((dir / "p4.txt").string(), (dir / "pair.txt").string(), msg), 1);
  EXPECT_NE(msg.str().find("invalid"), std::string::npos);
  EXPECT_EQ(verify_file((dir / "k4.txt").string(), (dir / "garbage.txt").string(), msg), 2);
  EXPECT_EQ(verify_file((dir / "missing.txt").string(), (dir / "pair.txt").string(), msg), 2);
  // A certificate naming a vertex outside the graph is invalid, not unreadable.
  save_certificate((dir / "far.txt").string(), MinorCertificate{{{0}, {9}}});
  EXPECT_EQ(verify_file((dir / "p4.txt").string(), (dir / "far.txt").string(), msg), 1);
}

TEST(Cli, EndToEnd) {
  const fs::path dir = scratch("cli");
  const std::string d = dir.string();
  EXPECT_EQ(run_cli("generate --family complete --n 30 --out " + d + "/k30.txt"), 0);
  EXPECT_EQ(run_cli("find-minor --in " + d + "/k30.txt --pipeline dense --k 29 --nu 0.9 --out " + d +
                    "/cert.txt --realized " + d + "/real.txt"),
            0);
  EXPECT_EQ(run_cli("verify --graph " + d + "/real.txt --cert " + d + "/cert.txt"), 0);
  EXPECT_EQ(run_cli("verify --graph " + d + "/real.txt --cert " + d + "/missing.txt"), 2);
  EXPECT_EQ(run_cli("percolate --in " + d + "/k30.txt --k 29 --round both --out " + d + "/perc.txt"), 0);
  EXPECT_TRUE(fs::exists(dir / "perc.txt"));
  EXPECT_EQ(run_cli("bounds chain --epsilon 0.1"), 0);
  EXPECT_NE(run_cli("bounds restricted --n 100 --p 0.5 --cap 2"), 0);
  EXPECT_NE(run_cli("experiment --k 20,10 --out " + d + "/bad"), 0);

  std::ofstream(dir / "exp.cfg") << "family = \"clique-union\"\ncopies = 2\nk = [10, 20, 40]\ntrials = 2\n"
                                 << "pipeline = \"tree-growth\"\nseed = 5\nout = \"" << d << "/exp\"\n";
  EXPECT_EQ(run_cli("experiment --config " + d + "/exp.cfg"), 0);
  const auto rows = load_results_csv(d + "/exp/results.csv");
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[0].pipeline, "tree-growth");
  // The flags and the config file produce the same run.
  EXPECT_EQ(run_cli("experiment --family clique-union --copies 2 --k 10,20,40 --trials 2 --pipeline tree-growth "
                    "--seed 5 --out " + d + "/exp2 --gnuplot " + d + "/fit.dat"),
            0);
  EXPECT_EQ(slurp(dir / "exp" / "results.csv"), slurp(dir / "exp2" / "results.csv"));
  EXPECT_TRUE(fs::exists(dir / "fit.dat"));
  std::ofstream(dir / "typo.cfg") << "trails = 2\n";
  EXPECT_NE(run_cli("experiment --k 10 --out " + d + "/typo --config " + d + "/typo.cfg"), 0);
}
