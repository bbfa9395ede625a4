#pragma once

#include <vector>

#include <Eigen/Dense>

#include "gcnet/autocov.hpp"

namespace gcnet {

/// Vector AR fits of orders 0..p_max. coeffs[p] holds A(1..p) with
/// x(t) ~ sum_k A(k) x(t - k); sigma[p] is the forward residual covariance
/// (sigma[0] = R(0)). coeffs is left empty unless requested.
struct BlockOrderCurve {
  std::vector<Eigen::MatrixXd> sigma;
  std::vector<std::vector<Eigen::MatrixXd>> coeffs;

  std::size_t max_order() const noexcept { return sigma.size() - 1; }
};

/// Whittle's multichannel Levinson recursion on R(0..p_max), tracking
/// forward and backward predictors. Works for any block size; the pairwise
/// tests use 2 x 2.
///
/// Throws DegenerateError naming the order at which a forward or backward
/// error covariance stops being positive definite.
BlockOrderCurve whittle_recursion(const AutocovSeq& r, std::size_t p_max,
                                  bool keep_coefficients = true);

inline BlockOrderCurve whittle_bivariate(const AutocovSeq& r, bool keep_coefficients = true) {
  return whittle_recursion(r, r.max_lag(), keep_coefficients);
}

}  // namespace gcnet
