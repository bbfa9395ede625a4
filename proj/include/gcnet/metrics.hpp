#pragma once

#include <cstddef>

#include "gcnet/graph.hpp"
#include "gcnet/random.hpp"
#include "gcnet/series.hpp"
#include "gcnet/var_model.hpp"

namespace gcnet {

/// Edge-slot confusion counts over the n(n-1) ordered off-diagonal pairs.
struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total() const noexcept { return tp + fp + tn + fn; }
};

/// Throws std::invalid_argument when the graphs differ in size.
ConfusionCounts confusion(const DirectedGraph& truth, const DirectedGraph& estimate);

/// Matthews correlation coefficient; 0 when any marginal is empty.
double mcc(const ConfusionCounts& c);

/// FP / (FP + TP); 0 without discoveries.
double fdp(const ConfusionCounts& c);

/// ln tr(Sigma_hat) / ln tr(Sigma_v), Sigma_hat being the mean outer product
/// of one-step prediction errors of `estimate` on `holdout`. The first
/// estimate.order() rows only seed the predictor. Throws DegenerateError
/// when |ln tr Sigma_v| < 1e-6.
double lre_on(const VarModel& truth, const VarModel& estimate, const SeriesMatrix& holdout);

/// lre_on over T_out fresh samples drawn from `truth` (plus the warm-up rows
/// the estimate needs).
double lre(const VarModel& truth, const VarModel& estimate, std::size_t T_out, Rng& rng);

}  // namespace gcnet
