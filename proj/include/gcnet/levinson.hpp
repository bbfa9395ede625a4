#pragma once

#include <span>
#include <vector>

namespace gcnet {

/// AR fits of orders 0..p_max for a scalar covariance sequence.
/// coeffs[p] holds a(1..p) of x(t) ~ sum_k a(k) x(t - k); xi[p] is the
/// prediction error variance of that fit (xi[0] = r(0)). coeffs is left
/// empty unless requested.
struct ScalarOrderCurve {
  std::vector<double> xi;
  std::vector<std::vector<double>> coeffs;

  std::size_t max_order() const noexcept { return xi.size() - 1; }
};

/// Levinson-Durbin recursion over r(0..p_max), O(p_max^2).
///
/// Throws DegenerateError when r(0) <= 0 or a reflection coefficient reaches
/// magnitude 1 (input not strictly positive definite).
ScalarOrderCurve levinson_durbin(std::span<const double> r, bool keep_coefficients = true);

}  // namespace gcnet
