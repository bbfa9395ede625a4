#pragma once

#include <cstddef>
#include <vector>

#include "gcnet/levinson.hpp"
#include "gcnet/whittle.hpp"

namespace gcnet {

/// Floor applied to residual variances / determinants before taking logs.
inline constexpr double kVarianceFloor = 1e-300;

/// ln xi(p) + p ln(T) / T for p = 0..p_max.
std::vector<double> bic_univariate(const ScalarOrderCurve& curve, std::size_t T);

/// ln det Sigma(p) + d^2 p ln(T) / T for p = 0..p_max (d = 2 gives 4p).
std::vector<double> bic_multivariate(const BlockOrderCurve& curve, std::size_t T);

/// argmin of the BIC, ties resolved toward the smaller order.
std::size_t select_order(const ScalarOrderCurve& curve, std::size_t T);
std::size_t select_order(const BlockOrderCurve& curve, std::size_t T);

}  // namespace gcnet
