#include "gcnet/order_select.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gcnet {

namespace {

std::size_t argmin_first(const std::vector<double>& v) {
  std::size_t best = 0;
  for (std::size_t p = 1; p < v.size(); ++p) {
    if (v[p] < v[best]) best = p;
  }
  return best;
}

double penalty_per_order(std::size_t T) {
  if (T < 2) throw std::invalid_argument("BIC: T must be at least 2");
  const double t = static_cast<double>(T);
  return std::log(t) / t;
}

}  // namespace

std::vector<double> bic_univariate(const ScalarOrderCurve& curve, std::size_t T) {
  const double pen = penalty_per_order(T);
  std::vector<double> out(curve.xi.size());
  for (std::size_t p = 0; p < out.size(); ++p) {
    out[p] = std::log(std::max(curve.xi[p], kVarianceFloor)) + static_cast<double>(p) * pen;
  }
  return out;
}

std::vector<double> bic_multivariate(const BlockOrderCurve& curve, std::size_t T) {
  const double pen = penalty_per_order(T);
  std::vector<double> out(curve.sigma.size());
  for (std::size_t p = 0; p < out.size(); ++p) {
    const auto& s = curve.sigma[p];
    const double params = static_cast<double>(s.rows() * s.rows() * static_cast<Eigen::Index>(p));
    out[p] = std::log(std::max(s.determinant(), kVarianceFloor)) + params * pen;
  }
  return out;
}

std::size_t select_order(const ScalarOrderCurve& curve, std::size_t T) {
  return argmin_first(bic_univariate(curve, T));
}

std::size_t select_order(const BlockOrderCurve& curve, std::size_t T) {
  return argmin_first(bic_multivariate(curve, T));
}

}  // namespace gcnet
