#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "gcnet/bench.hpp"
#include "gcnet/error.hpp"
#include "gcnet/fixtures.hpp"
#include "gcnet/io.hpp"
#include "gcnet/lasso.hpp"
#include "gcnet/metrics.hpp"
#include "gcnet/parallel.hpp"
#include "gcnet/recovery.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kInputError = 2;

// Bad paths and unreadable files are input errors, reported with exit 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "' for reading");
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot open '" + path + "' for writing");
  return out;
}

gcnet::SeriesMatrix load_series(const std::string& path, bool header) {
  auto in = open_in(path);
  return gcnet::read_series_csv(in, header);
}

gcnet::DirectedGraph load_graph(const std::string& path) {
  auto in = open_in(path);
  return gcnet::read_edge_list(in);
}

void save_graph(const std::string& path, const gcnet::DirectedGraph& g) {
  auto out = open_out(path);
  gcnet::write_edge_list(out, g);
}

void save_model(const std::string& path, const gcnet::VarModel& m) {
  auto out = open_out(path);
  out << gcnet::model_to_json(m).dump(1) << '\n';
}

void report_metrics(const gcnet::DirectedGraph& truth, const gcnet::DirectedGraph& est) {
  const auto c = gcnet::confusion(truth, est);
  std::cout << "TP=" << c.tp << " FP=" << c.fp << " TN=" << c.tn << " FN=" << c.fn << '\n'
            << "MCC=" << gcnet::mcc(c) << " FDP=" << gcnet::fdp(c) << '\n';
}

struct SimulateArgs {
  std::string topology = "scg";
  double q = 0.04;
  std::size_t n = 50;
  std::size_t p = 5;
  std::size_t T = 1250;
  std::uint64_t seed = 0;
  std::string out = "sim";
  bool header = false;
};

int cmd_simulate(const SimulateArgs& a) {
  gcnet::TopologySpec topo;
  if (a.topology == "scg") {
    topo.kind = gcnet::TopologyKind::scg;
  } else if (a.topology == "dag") {
    if (!(a.q >= 0.0 && a.q <= 1.0)) throw UsageError("--q must lie in [0, 1]");
    topo = {gcnet::TopologyKind::dag, a.q};
  } else {
    throw UsageError("--topology must be scg or dag");
  }
  if (a.n == 0 || a.p == 0 || a.T == 0) throw UsageError("--n, --p and --T must be positive");

  const auto rep = gcnet::draw_replicate(topo, a.n, a.p, a.T, a.seed);
  save_graph(a.out + ".graph.txt", rep.graph);
  save_model(a.out + ".model.json", rep.model);
  auto series = open_out(a.out + ".series.csv");
  gcnet::write_series_csv(series, rep.series, a.header);
  std::cout << "wrote " << a.out << ".{graph.txt,model.json,series.csv}: " << a.T << " x " << a.n
            << ", " << rep.graph.edge_count() << " edges\n";
  return kOk;
}

struct EstimateArgs {
  std::string series;
  bool header = false;
  std::size_t p_max = 10;
  double alpha = 0.05;
  std::string out = "est";
  std::string truth;
  std::string dump_stats;
  std::string trace;
};

int cmd_pwgc(const EstimateArgs& a, std::size_t threads) {
  if (!(a.alpha > 0.0 && a.alpha < 1.0)) throw UsageError("--alpha must lie in (0, 1)");
  if (a.p_max == 0) throw UsageError("--p-max must be positive");
  const auto x = load_series(a.series, a.header);
  gcnet::PairwiseOptions opts;
  opts.threads = threads;
  const auto res = gcnet::pwgc_pipeline(x, a.p_max, a.alpha, opts);

  save_graph(a.out + ".graph.txt", res.recovery.graph);
  save_model(a.out + ".model.json", res.refit.model);
  if (!a.dump_stats.empty()) {
    auto out = open_out(a.dump_stats);
    gcnet::write_stats_csv(out, res.stats);
  }
  if (!a.trace.empty()) {
    auto out = open_out(a.trace);
    gcnet::write_trace_jsonl(out, res.recovery.trace);
  }
  std::cout << "delta=" << res.delta << " edges=" << res.recovery.graph.edge_count()
            << " refit_order=" << res.refit_order << '\n';
  if (res.refit.rank_deficient) std::cout << "warning: rank-deficient refit, minimum-norm solution used\n";
  if (!a.truth.empty()) report_metrics(load_graph(a.truth), res.recovery.graph);
  return kOk;
}

int cmd_alasso(const EstimateArgs& a, std::size_t threads) {
  if (a.p_max == 0) throw UsageError("--p-max must be positive");
  const auto x = load_series(a.series, a.header);
  const auto res = gcnet::adalasso_graph(x, a.p_max, {}, threads);
  for (const auto& e : res.errors) std::cerr << "warning: " << e << '\n';
  save_graph(a.out + ".graph.txt", res.graph);
  save_model(a.out + ".model.json", res.model);
  std::cout << "edges=" << res.graph.edge_count() << '\n';
  if (!a.truth.empty()) report_metrics(load_graph(a.truth), res.graph);
  return kOk;
}

struct BenchArgs {
  std::string config;
  std::string records;
  std::string summary;
  bool timing = false;
};

int cmd_bench(const BenchArgs& a, std::size_t threads) {
  auto in = open_in(a.config);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("config is not valid JSON: ") + e.what());
  }
  gcnet::BenchConfig config = gcnet::bench_config_from_json(j);
  if (!a.records.empty()) config.records_path = a.records;
  if (!a.summary.empty()) config.summary_path = a.summary;
  config.threads = threads;

  const auto records = gcnet::run_benchmark(config);
  {
    auto out = open_out(config.records_path);
    gcnet::write_records_csv(out, records, a.timing);
  }
  const auto rows = gcnet::summarize(records);
  {
    auto out = open_out(config.summary_path);
    gcnet::write_summary_csv(out, rows);
  }

  std::size_t failed = 0;
  for (const auto& r : records) {
    if (!r.failure.empty()) {
      ++failed;
      std::cerr << "failed: " << r.topology << " T=" << r.T << " rep=" << r.replicate << ' '
                << r.algorithm << ": " << r.failure << '\n';
    }
  }
  std::cout << "records=" << records.size() << " failed=" << failed << " -> " << config.records_path
            << ", " << config.summary_path << '\n';
  return failed * 10 <= records.size() ? kOk : kFailure;
}

int cmd_check_oracle(std::size_t trials, std::uint64_t seed, std::size_t threads) {
  gcnet::OracleOptions opts;
  opts.threads = threads;
  const auto results = gcnet::fixtures::oracle_battery(trials, seed, opts);
  std::size_t failed = 0;
  for (const auto& r : results) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name;
    if (!r.passed && !r.detail.empty()) std::cout << ": " << r.detail;
    std::cout << '\n';
    if (!r.passed) ++failed;
  }
  std::cout << (results.size() - failed) << '/' << results.size() << " passed\n";
  return failed == 0 ? kOk : kFailure;
}

int cmd_score(const std::string& truth, const std::string& estimate) {
  report_metrics(load_graph(truth), load_graph(estimate));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse Granger-causality graphs from pairwise causality tests"};
  app.require_subcommand(1);
  std::size_t threads = 0;
  app.add_option("--threads", threads, "Worker threads (default: GCNET_THREADS or all cores)");

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Draw a random graph, VAR model and series");
  simulate->add_option("--topology", sim.topology, "scg or dag")->capture_default_str();
  simulate->add_option("--q", sim.q, "Edge probability for dag")->capture_default_str();
  simulate->add_option("--n", sim.n, "Number of series")->capture_default_str();
  simulate->add_option("--p", sim.p, "Model order")->capture_default_str();
  simulate->add_option("--T", sim.T, "Series length")->capture_default_str();
  simulate->add_option("--seed", sim.seed, "Random seed")->capture_default_str();
  simulate->add_option("--out", sim.out, "Output prefix")->capture_default_str();
  simulate->add_flag("--header", sim.header, "Write a header row to the series CSV");

  EstimateArgs est;
  auto add_estimate_options = [&](CLI::App* sub) {
    sub->add_option("series", est.series, "Series CSV, one row per time step")->required();
    sub->add_flag("--header", est.header, "Series CSV has a header row");
    sub->add_option("--p-max", est.p_max, "Largest lag considered")->capture_default_str();
    sub->add_option("--out", est.out, "Output prefix")->capture_default_str();
    sub->add_option("--truth", est.truth, "True edge list; prints MCC and FDP");
  };
  auto* pwgc = app.add_subcommand("pwgc", "Estimate a graph with pairwise Granger tests");
  add_estimate_options(pwgc);
  pwgc->add_option("--alpha", est.alpha, "False discovery rate")->capture_default_str();
  pwgc->add_option("--dump-stats", est.dump_stats, "Write pairwise statistics CSV");
  pwgc->add_option("--trace", est.trace, "Write recovery trace JSONL");
  auto* alasso = app.add_subcommand("alasso", "Estimate a graph with the adaptive lasso");
  add_estimate_options(alasso);

  BenchArgs bench_args;
  auto* bench = app.add_subcommand("bench", "Run a Monte-Carlo benchmark");
  bench->add_option("config", bench_args.config, "JSON configuration")->required();
  bench->add_option("--records", bench_args.records, "Override the records CSV path");
  bench->add_option("--summary", bench_args.summary, "Override the summary CSV path");
  bench->add_flag("--timing", bench_args.timing, "Add wall time to the records CSV");

  std::size_t trials = 100;
  std::uint64_t oracle_seed = 1;
  auto* check = app.add_subcommand("check-oracle", "Population-level fixture battery");
  check->add_option("--trials", trials, "Random strongly causal systems")->capture_default_str();
  check->add_option("--seed", oracle_seed, "Random seed")->capture_default_str();

  std::string truth_path, estimate_path;
  auto* score = app.add_subcommand("score", "Compare two edge lists");
  score->add_option("truth", truth_path)->required();
  score->add_option("estimate", estimate_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  if (threads == 0) threads = gcnet::default_thread_count();
  try {
    if (*simulate) return cmd_simulate(sim);
    if (*pwgc) return cmd_pwgc(est, threads);
    if (*alasso) return cmd_alasso(est, threads);
    if (*bench) return cmd_bench(bench_args, threads);
    if (*check) return cmd_check_oracle(trials, oracle_seed, threads);
    if (*score) return cmd_score(truth_path, estimate_path);
  } catch (const gcnet::InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "failed: " << e.what() << '\n';
    return kFailure;
  }
  return kOk;
}
