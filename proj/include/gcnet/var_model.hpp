#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gcnet/autocov.hpp"
#include "gcnet/graph.hpp"
#include "gcnet/random.hpp"
#include "gcnet/series.hpp"

namespace gcnet {

/// x(t) = sum_{tau=1}^{p} B(tau) x(t - tau) + v(t) with v(t) ~ N(0, diag(noise_vars)).
///
/// Entry (i, j) of B(tau) weights x_j(t - tau) in x_i(t). Off-diagonal
/// entries are zero unless the topology has the edge j -> i.
class VarModel {
 public:
  VarModel() = default;

  /// Validates shapes, positive noise variances and that every nonzero
  /// off-diagonal coefficient is backed by an edge of `topology`.
  VarModel(std::vector<Eigen::MatrixXd> coeffs, Eigen::VectorXd noise_vars,
           DirectedGraph topology);

  /// Topology inferred from the nonzero off-diagonal coefficients.
  static VarModel from_coefficients(std::vector<Eigen::MatrixXd> coeffs,
                                    Eigen::VectorXd noise_vars);

  std::size_t dim() const noexcept { return noise_vars_.size(); }
  std::size_t order() const noexcept { return coeffs_.size(); }

  /// B(tau) for tau = 1..order().
  const Eigen::MatrixXd& lag(std::size_t tau) const { return coeffs_.at(tau - 1); }
  const std::vector<Eigen::MatrixXd>& coeffs() const noexcept { return coeffs_; }
  const Eigen::VectorXd& noise_vars() const noexcept { return noise_vars_; }
  const DirectedGraph& topology() const noexcept { return topology_; }

 private:
  std::vector<Eigen::MatrixXd> coeffs_;
  Eigen::VectorXd noise_vars_;
  DirectedGraph topology_;
};

/// Truncated moving-average expansion, terms[k] = A(k), A(0) = I.
struct MaExpansion {
  std::vector<Eigen::MatrixXd> terms;

  std::size_t order() const noexcept { return terms.size() - 1; }
};

struct PersistenceOptions {
  std::size_t horizon = 200;  // K
  std::size_t tail = 50;      // last lags inspected for tau_infinity
  double tol = 0.0;           // |A_ik(tau)| > tol counts as nonzero
};

struct PersistenceReport {
  bool persistent = true;
  /// (i, k) with k an ancestor of i whose filter A_ik is identically zero
  /// or dies out inside the horizon.
  std::vector<std::pair<Node, Node>> failures;
};

inline constexpr double kStabilityMargin = 1e-9;
inline constexpr double kPoleRadius = 0.75;

/// Coefficients b(1..p) of z^p - b(1) z^{p-1} - ... - b(p) = prod (z - r_k)
/// for p roots drawn uniformly in the open disc of the given radius. Roots
/// come in conjugate pairs plus one real root when p is odd.
Eigen::VectorXd random_filter_from_poles(std::size_t p, double radius, Rng& rng);

/// Random VAR(p) on a DAG: every edge and every diagonal gets an independent
/// pole-placed filter, sigma_i^2 = 1/2 + Exp(mean 1/2).
/// Throws std::invalid_argument for a cyclic topology.
VarModel build_var_model(const DirectedGraph& g, std::size_t p, Rng& rng);

/// np x np companion matrix of the stacked state [x(t); ...; x(t-p+1)].
Eigen::MatrixXd companion_matrix(const VarModel& m);
double spectral_radius(const VarModel& m);
bool is_stable(const VarModel& m);

/// 10 n p samples, at least 1000.
std::size_t default_burn_in(std::size_t n, std::size_t p);

/// Gaussian trajectory from a zero initial state. The first burn_in samples
/// are discarded. Throws UnstableModelError for an unstable model.
SeriesMatrix simulate(const VarModel& m, std::size_t T, std::size_t burn_in, Rng& rng);

/// A(0..K) through A(k) = sum_{tau=1}^{min(k, p)} B(tau) A(k - tau).
MaExpansion ma_expansion(const VarModel& m, std::size_t K);

PersistenceReport is_persistent(const VarModel& m, const PersistenceOptions& opts = {});

/// Exact R(0..max_lag): stacked-state covariance from the discrete Lyapunov
/// equation, then the Yule-Walker recursion R(tau) = sum_k B(k) R(tau - k).
AutocovSeq population_autocovariance(const VarModel& m, std::size_t max_lag);

}  // namespace gcnet
