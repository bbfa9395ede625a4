#include "gcnet/metrics.hpp"

#include <cmath>
#include <stdexcept>

#include "gcnet/error.hpp"

namespace gcnet {

ConfusionCounts confusion(const DirectedGraph& truth, const DirectedGraph& estimate) {
  if (truth.size() != estimate.size()) throw std::invalid_argument("confusion: graph sizes differ");
  const std::size_t n = truth.size();
  ConfusionCounts c;
  for (const Edge& e : estimate.edges()) {
    if (truth.has_edge(e.from, e.to)) {
      ++c.tp;
    } else {
      ++c.fp;
    }
  }
  c.fn = truth.edge_count() - c.tp;
  c.tn = n * (n - 1) - c.tp - c.fp - c.fn;
  return c;
}

double mcc(const ConfusionCounts& c) {
  const double tp = static_cast<double>(c.tp);
  const double fp = static_cast<double>(c.fp);
  const double tn = static_cast<double>(c.tn);
  const double fn = static_cast<double>(c.fn);
  const double denom = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
  if (denom == 0.0) return 0.0;
  return (tp * tn - fp * fn) / std::sqrt(denom);
}

double fdp(const ConfusionCounts& c) {
  const std::size_t found = c.tp + c.fp;
  return found == 0 ? 0.0 : static_cast<double>(c.fp) / static_cast<double>(found);
}

double lre_on(const VarModel& truth, const VarModel& estimate, const SeriesMatrix& holdout) {
  if (truth.dim() != estimate.dim() || holdout.dim() != truth.dim()) {
    throw std::invalid_argument("lre: dimension mismatch");
  }
  const double denom = std::log(truth.noise_vars().sum());
  if (std::abs(denom) < 1e-6) {
    throw DegenerateError("lre: ln tr Sigma_v is too close to zero", 0);
  }
  const std::size_t q = estimate.order();
  if (holdout.length() <= q) throw std::invalid_argument("lre: holdout shorter than the estimate's order");
  const auto rows = static_cast<Eigen::Index>(holdout.length() - q);
  const auto& v = holdout.values();

  Eigen::MatrixXd err = v.bottomRows(rows);
  for (std::size_t tau = 1; tau <= q; ++tau) {
    err.noalias() -= v.middleRows(static_cast<Eigen::Index>(q - tau), rows) * estimate.lag(tau).transpose();
  }
  const double trace = err.squaredNorm() / static_cast<double>(rows);
  return std::log(trace) / denom;
}

double lre(const VarModel& truth, const VarModel& estimate, std::size_t T_out, Rng& rng) {
  const SeriesMatrix holdout =
      simulate(truth, T_out + estimate.order(), default_burn_in(truth.dim(), truth.order()), rng);
  return lre_on(truth, estimate, holdout);
}

}  // namespace gcnet
