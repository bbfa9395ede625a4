#include "gcnet/ols_refit.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include <Eigen/QR>

namespace gcnet {

RefitResult ols_refit(const SeriesMatrix& x, const DirectedGraph& g, std::size_t p) {
  const std::size_t T = x.length();
  const auto n = static_cast<Eigen::Index>(x.dim());
  if (g.size() != x.dim()) throw std::invalid_argument("ols_refit: graph/series dimension mismatch");
  if (p == 0) throw std::invalid_argument("ols_refit: order must be >= 1");
  if (T <= p) throw std::invalid_argument("ols_refit: need T > p");

  const auto rows = static_cast<Eigen::Index>(T - p);
  const auto& v = x.values();
  std::vector<Eigen::MatrixXd> coeffs(p, Eigen::MatrixXd::Zero(n, n));
  Eigen::VectorXd noise(n);
  bool deficient = false;

  for (Eigen::Index i = 0; i < n; ++i) {
    std::vector<Node> regressors = g.parents(static_cast<Node>(i));
    regressors.push_back(static_cast<Node>(i));
    std::sort(regressors.begin(), regressors.end());

    const auto k = static_cast<Eigen::Index>(regressors.size() * p);
    Eigen::MatrixXd design(rows, k);
    for (std::size_t r = 0; r < regressors.size(); ++r) {
      for (std::size_t tau = 1; tau <= p; ++tau) {
        design.col(static_cast<Eigen::Index>(r * p + tau - 1)) =
            v.col(static_cast<Eigen::Index>(regressors[r]))
                .segment(static_cast<Eigen::Index>(p - tau), rows);
      }
    }
    const Eigen::VectorXd target = v.col(i).tail(rows);

    Eigen::VectorXd beta;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() == k) {
      beta = qr.solve(target);
    } else {
      deficient = true;
      beta = Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd>(design).solve(target);
    }

    for (std::size_t r = 0; r < regressors.size(); ++r) {
      for (std::size_t tau = 1; tau <= p; ++tau) {
        coeffs[tau - 1](i, static_cast<Eigen::Index>(regressors[r])) =
            beta(static_cast<Eigen::Index>(r * p + tau - 1));
      }
    }
    const double ms = (target - design * beta).squaredNorm() / static_cast<double>(rows);
    noise(i) = std::max(ms, std::numeric_limits<double>::min());
  }

  return RefitResult{VarModel(std::move(coeffs), std::move(noise), g), deficient};
}

}  // namespace gcnet
