#pragma once

#include <cstddef>
#include <iosfwd>

#include <Eigen/Dense>

#include "gcnet/autocov.hpp"
#include "gcnet/series.hpp"
#include "gcnet/var_model.hpp"

namespace gcnet {

using BoolMatrix = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

/// Pairwise test results. Cell (i, j) concerns "x_j causes x_i"; the
/// diagonal is unused and left at zero.
struct PairwiseStats {
  std::size_t T = 0;
  Eigen::MatrixXi orders;  // p_ij
  Eigen::MatrixXd F;       // >= 0
  Eigen::MatrixXd P;       // chi^2(p_ij) CDF of F
  BoolMatrix degenerate;   // recursion hit a singular covariance

  std::size_t dim() const noexcept { return static_cast<std::size_t>(F.rows()); }
};

/// pw(i, j) is true iff x_j pairwise Granger-causes x_i. Diagonal false.
struct PairwiseRelations {
  BoolMatrix pw;

  std::size_t dim() const noexcept { return static_cast<std::size_t>(pw.rows()); }
};

/// Which order enters the restricted (univariate) fit and the degrees of
/// freedom. `bivariate` uses the bivariate BIC order p_ij for both models;
/// `max_of_both` uses max(p_ij, univariate BIC order of x_i).
enum class RestrictedOrder { bivariate, max_of_both };

struct PairwiseOptions {
  std::size_t threads = 0;  // 0: default_thread_count()
  RestrictedOrder order_rule = RestrictedOrder::bivariate;
};

/// F = (T / p) (xi_restricted / xi_full - 1), clamped below at zero.
/// Throws std::invalid_argument for xi_full <= 0, p == 0 or T <= p.
double gc_statistic(double xi_restricted, double xi_full, std::size_t p, std::size_t T);

/// Chi-square CDF with `dof` degrees of freedom.
double chi2_cdf(double x, std::size_t dof);

/// Autocovariance once, then per unordered pair a bivariate Whittle curve
/// with BIC order selection and the F test in both directions. Pairs with a
/// degenerate recursion get F = P = 0 and a flag; the batch continues.
PairwiseStats compute_pairwise_matrix(const SeriesMatrix& x, std::size_t p_max,
                                      const PairwiseOptions& opts = {});

/// Same, starting from a precomputed covariance sequence of a length-T
/// sample.
PairwiseStats compute_pairwise_matrix(const AutocovSeq& r, std::size_t T,
                                      const PairwiseOptions& opts = {});

/// p-value of a cell as used for thresholding: 1 - P.
inline double edge_p_value(double P) { return 1.0 - P; }

/// An edge passes the threshold when its p-value 1 - P is at most delta.
inline bool passes_threshold(double P, double delta) { return edge_p_value(P) <= delta; }

/// Benjamini-Hochberg step-up over the n(n-1) off-diagonal p-values 1 - P.
/// Returns the largest sorted p-value q(k) with q(k) <= alpha k / m, or 0
/// when none qualifies.
double bh_threshold(const Eigen::MatrixXd& P, double alpha);

inline constexpr std::size_t kMinOracleOrder = 100;

struct OracleOptions {
  std::size_t p_oracle = 0;   // starting order; 0: default_oracle_order(model)
  std::size_t max_order = 0;  // 0: 8 p_oracle; equal to p_oracle for a fixed order
  double tol = 1e-26;         // relative variance reduction counted as causal
  double settled = 1e-6;      // gaps above this are never re-examined
  std::size_t threads = 1;
};

/// max(100, 20 p): pairwise projections of a VAR(p) are VAR(infinity).
std::size_t default_oracle_order(const VarModel& m);

/// Relative variance reductions (xi_i - xi_ij) / xi_i of the population
/// univariate and bivariate projections, computed in extended precision.
/// Gaps between tol and `settled` are recomputed at doubled orders (up to
/// max_order) until they settle or fall below tol, which separates small
/// genuine effects from truncation error of the finite-order projection.
Eigen::MatrixXd oracle_gaps(const VarModel& m, const OracleOptions& opts = {});

/// Population pairwise relations: j causes i pairwise iff gap(i, j) > tol.
PairwiseRelations oracle_pairwise(const VarModel& m, const OracleOptions& opts = {});

/// CSV "i,j,p_ij,F,P" (1-based, header included) for every ordered pair i != j.
void write_stats_csv(std::ostream& out, const PairwiseStats& stats);

}  // namespace gcnet
