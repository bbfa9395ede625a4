#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "gcnet/graph.hpp"
#include "gcnet/series.hpp"
#include "gcnet/var_model.hpp"

namespace gcnet {

enum class TopologyKind { scg, dag };

struct TopologySpec {
  TopologyKind kind = TopologyKind::scg;
  double q = 0.0;  // edge probability for dag

  /// "SCG" or the edge probability, e.g. "0.04".
  std::string tag() const;
};

enum class Algorithm { pwgc, alasso };

const char* to_string(Algorithm a);

struct BenchConfig {
  std::vector<TopologySpec> topologies{TopologySpec{}};
  std::size_t n = 50;
  std::size_t p_true = 5;
  std::size_t p_max = 10;
  std::vector<std::size_t> T_values{1250};
  std::vector<Algorithm> algorithms{Algorithm::pwgc, Algorithm::alasso};
  std::size_t replicates = 20;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  std::size_t T_out = 10000;
  std::size_t threads = 0;  // replicate workers; 0 = default
  std::string records_path = "bench_records.csv";
  std::string summary_path = "bench_summary.csv";

  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;
};

/// Documented JSON schema:
/// {"topologies": ["scg", {"dag": 0.04}, ...], "n": 50, "p_true": 5,
///  "p_max": 10, "T": [50, 250, 1250], "algorithms": ["pwgc", "alasso"],
///  "replicates": 20, "alpha": 0.05, "seed": 1, "T_out": 10000,
///  "records": "records.csv", "summary": "summary.csv"}
/// Missing keys keep their defaults. Throws std::invalid_argument.
BenchConfig bench_config_from_json(const nlohmann::json& j);

/// Ground truth and data of one replicate, reproducible from `seed`: the
/// graph, then the model, then the series are drawn from one generator.
struct Replicate {
  DirectedGraph graph;
  VarModel model;
  SeriesMatrix series;
};

Replicate draw_replicate(const TopologySpec& topology, std::size_t n, std::size_t p,
                         std::size_t T, std::uint64_t seed);

struct BenchRecord {
  std::string topology;
  std::size_t n = 0;
  std::size_t p = 0;
  std::size_t p_max = 0;
  std::size_t T = 0;
  std::size_t replicate = 0;
  std::uint64_t seed = 0;
  std::string algorithm;
  double mcc = 0.0;
  double fdp = 0.0;
  double lre = 0.0;
  bool lre_valid = true;
  double wall_time = 0.0;  // seconds
  std::string failure;     // empty on success
};

/// Every (topology, T, replicate) cell draws one dataset that all algorithms
/// share. Records come back ordered by topology, T, replicate, algorithm,
/// whatever the worker count.
std::vector<BenchRecord> run_benchmark(const BenchConfig& config);

/// Wall time is left out unless `with_timing`, keeping the file a pure
/// function of the configuration.
void write_records_csv(std::ostream& out, const std::vector<BenchRecord>& records,
                       bool with_timing = false);

struct Quartiles {
  double mean = 0.0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
};

/// Linear-interpolation quartiles; all NaN for an empty sample.
Quartiles quartiles(std::vector<double> values);

struct SummaryRow {
  std::string topology;
  std::size_t T = 0;
  std::string algorithm;
  std::size_t replicates = 0;
  std::size_t failures = 0;
  std::size_t lre_excluded = 0;
  Quartiles mcc;
  Quartiles fdp;
  Quartiles lre;
};

std::vector<SummaryRow> summarize(const std::vector<BenchRecord>& records);

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);

}  // namespace gcnet
