#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gcnet/graph.hpp"
#include "gcnet/series.hpp"
#include "gcnet/var_model.hpp"

namespace gcnet {

struct LassoOptions {
  double tol = 1e-7;             // max coefficient change for convergence
  std::size_t max_sweeps = 10000;
  bool track_objective = false;  // record the objective after every full sweep
};

struct LassoSolution {
  Eigen::VectorXd coef;
  std::size_t sweeps = 0;
  bool converged = false;
  std::vector<double> objective;  // filled when track_objective is set
};

/// Weighted lasso in covariance form. With G = X^T X / N, c = X^T y / N and
/// yy = y^T y / N the objective
///   (1/N) ||y - X b||^2 + lambda sum_k w_k |b_k|
/// equals yy - 2 c^T b + b^T G b + lambda sum_k w_k |b_k|.
/// Cyclic coordinate descent with active-set passes; `warm` seeds the
/// iterate. A coordinate with an infinite weight or G_kk == 0 stays at zero.
LassoSolution lasso_gram(const Eigen::MatrixXd& G, const Eigen::VectorXd& c, double yy,
                         double lambda, const Eigen::VectorXd& weights,
                         const Eigen::VectorXd* warm = nullptr, const LassoOptions& opts = {});

/// Coordinate descent on an explicit design. Throws std::invalid_argument
/// for non-finite inputs or a negative lambda.
LassoSolution lasso_cd(const Eigen::MatrixXd& design, const Eigen::VectorXd& target, double lambda,
                       const Eigen::VectorXd& weights, const LassoOptions& opts = {});

/// Smallest lambda whose solution is identically zero:
/// max_k (2/N) |X_k^T y| / w_k.
double lasso_lambda_max(const Eigen::MatrixXd& design, const Eigen::VectorXd& target,
                        const Eigen::VectorXd& weights);

/// Gradient of the smooth part, -(2/N) X^T (y - X b).
Eigen::VectorXd lasso_gradient(const Eigen::MatrixXd& design, const Eigen::VectorXd& target,
                               const Eigen::VectorXd& coef);

enum class PilotKind { ridge, lasso };

struct AdaLassoOptions {
  PilotKind pilot = PilotKind::lasso;  // weights from a BIC-selected plain lasso, or a ridge
  double ridge = 0.0;           // pilot ridge on standardised columns; <= 0: GCV
  double gamma = 2.0;           // weight exponent
  double weight_eps = 1e-8;
  std::size_t path_points = 50;
  double path_ratio = 1e-4;     // smallest lambda / lambda_max
  /// The path stops early once the active set reaches this fraction of the
  /// number of regression rows, or the fit explains more than
  /// max_explained of the target's mean square.
  double max_df_fraction = 1.0;
  double max_explained = 0.999;
  /// ... or after this many consecutive points without a BIC improvement.
  std::size_t patience = 10;
  LassoOptions cd{};
};

/// Adaptive-lasso fit of one node on lags 1..p_max of every series.
struct LassoFit {
  Node node = 0;
  Eigen::MatrixXd coef;       // (j, tau - 1), natural units
  double lambda = 0.0;
  double bic = 0.0;
  double residual_var = 0.0;  // mean square residual over rows p_max..T-1
  std::vector<Node> active;   // j with any nonzero coefficient (may include node)
};

/// Lagged regression design shared by all nodes: rows t = p_max..T-1,
/// column j * p_max + tau - 1 holds x_j(t - tau).
class LaggedDesign {
 public:
  LaggedDesign(const SeriesMatrix& x, std::size_t p_max);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t dim() const noexcept { return n_; }
  std::size_t p_max() const noexcept { return p_max_; }

  const Eigen::MatrixXd& gram() const noexcept { return gram_; }      // standardised
  const Eigen::VectorXd& scale() const noexcept { return scale_; }    // column RMS
  /// X_std^T y_i / N and y_i^T y_i / N.
  Eigen::VectorXd cross(Node i) const;
  double target_power(Node i) const;

 private:
  std::size_t n_;
  std::size_t p_max_;
  std::size_t rows_;
  Eigen::MatrixXd standardized_;
  Eigen::MatrixXd targets_;
  Eigen::VectorXd scale_;
  Eigen::MatrixXd gram_;
};

LassoFit adalasso_node(const LaggedDesign& design, Node i, const AdaLassoOptions& opts = {});
LassoFit adalasso_node(const SeriesMatrix& x, Node i, std::size_t p_max,
                       const AdaLassoOptions& opts = {});

struct AdaLassoResult {
  DirectedGraph graph;
  VarModel model;
  std::vector<LassoFit> fits;
  std::vector<std::string> errors;  // per-node failures; those nodes keep zero rows
};

/// Per-node fits (parallel over nodes); edge j -> i iff j != i is active
/// for node i.
AdaLassoResult adalasso_graph(const SeriesMatrix& x, std::size_t p_max,
                              const AdaLassoOptions& opts = {}, std::size_t threads = 0);

}  // namespace gcnet
