#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "gcnet/graph.hpp"
#include "gcnet/pairwise.hpp"
#include "gcnet/var_model.hpp"

namespace gcnet::fixtures {

/// Diamond 1 -> {2, 3} -> 4 with B(1) rows (0), (a), (-a), (0 1 1 0) and unit
/// noise. The two length-2 paths from node 1 to node 4 cancel.
VarModel diamond(double a = 0.5);

/// Three nodes, 1 -> 2 at lag 1 with weight -a, 2 -> 3 at lag 1, 1 -> 3 at
/// lag 2 with weight a. The direct and the indirect lag-2 effects of node 1
/// on node 3 cancel.
VarModel lag_cancellation(double a = 0.5);

/// Fork 2 <- 1 -> 3 with weight a on both edges; `memory` adds an
/// autoregressive term b x_1(t - 1) to the root.
VarModel fork(double a = 0.5, double memory = 0.0);

/// Six nodes with edges 1 -> 3, 3 -> 4, 2 -> 4, 3 -> 5, 4 -> 6 (0-based here).
DirectedGraph six_node_graph();

/// Draws a random persistent VAR(p) on a random strongly causal graph,
/// redrawing the coefficients until the persistence check passes.
VarModel random_persistent_scg_model(std::size_t n, std::size_t p, Rng& rng);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Counterexample fixtures, the six-node system and `trials` random strongly
/// causal systems, each checked through the population pairwise relations.
std::vector<CheckResult> oracle_battery(std::size_t trials, std::uint64_t seed,
                                        const OracleOptions& opts = {});

}  // namespace gcnet::fixtures
