#pragma once

#include <cstddef>

#include "gcnet/graph.hpp"
#include "gcnet/series.hpp"
#include "gcnet/var_model.hpp"

namespace gcnet {

struct RefitResult {
  VarModel model;
  /// Some node's design was rank deficient; its coefficients are the
  /// minimum-norm least-squares solution.
  bool rank_deficient = false;
};

/// Conditional least squares on rows p..T-1: each x_i(t) is regressed on
/// lags 1..p of x_j for j in parents(i) plus i itself. All other
/// coefficients are exactly zero; noise variances are residual mean squares.
RefitResult ols_refit(const SeriesMatrix& x, const DirectedGraph& g, std::size_t p);

}  // namespace gcnet
