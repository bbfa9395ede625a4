#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "gcnet/graph.hpp"
#include "gcnet/ols_refit.hpp"
#include "gcnet/pairwise.hpp"
#include "gcnet/series.hpp"

namespace gcnet {

enum class Decision {
  accepted,
  rejected_by_path,      // an i -> j path is already known
  rejected_by_sc,        // the edge would break strong causality
  dropped_bidirectional  // pairwise causality in both directions
};

const char* to_string(Decision d);

struct TraceEvent {
  std::size_t iteration = 0;  // k; 0 for decisions taken before peeling
  std::size_t step = 0;       // r in the exact algorithm, rank in the finite one
  Edge edge{};
  Decision decision = Decision::accepted;
  double score = 0.0;         // F statistic for finite-sample decisions
};

struct TraceLayer {
  std::size_t iteration = 0;
  std::vector<Node> remaining;  // S_k
  std::vector<Node> layer;      // P_k
};

struct RecoveryTrace {
  std::vector<Edge> candidates;  // W or W_delta
  std::vector<TraceLayer> layers;
  std::vector<TraceEvent> events;
};

struct RecoveryResult {
  DirectedGraph graph;
  RecoveryTrace trace;
};

/// Exact recovery from pairwise relations: candidates are one-directional
/// pairwise causal pairs; parent-less nodes are peeled layer by layer and
/// each new layer is linked to earlier layers walking backwards, skipping
/// pairs already connected by a known path.
///
/// Throws std::runtime_error when peeling stalls (inconsistent input that no
/// acyclic system could produce).
RecoveryResult recover_oracle(const PairwiseRelations& rel);

/// The same procedure on an explicit candidate set W (edges i -> j).
RecoveryResult recover_from_candidates(std::size_t n, const std::vector<Edge>& candidates);

/// W_delta: i -> j when x_i's test on x_j passes the threshold and
/// F(j, i) > F(i, j). Exact ties enter in neither direction.
std::vector<Edge> finite_candidates(const PairwiseStats& stats, double delta);

/// Finite-sample recovery: layers by total incident edge probability,
/// candidate edges from all earlier layers added by descending F while the
/// graph stays strongly causal. Always returns a strongly causal graph.
RecoveryResult recover_finite(const PairwiseStats& stats, double delta);

struct PipelineResult {
  PairwiseStats stats;
  double delta = 0.0;
  RecoveryResult recovery;
  std::size_t refit_order = 1;
  RefitResult refit;
};

/// Pairwise statistics -> BH threshold -> finite recovery -> OLS refit at
/// the largest selected order among accepted edges (1 if there are none).
PipelineResult pwgc_pipeline(const SeriesMatrix& x, std::size_t p_max, double alpha,
                             const PairwiseOptions& opts = {});

/// One JSON object per line: layers first, then decisions. Nodes 1-based.
void write_trace_jsonl(std::ostream& out, const RecoveryTrace& trace);

}  // namespace gcnet
