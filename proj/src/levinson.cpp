#include "gcnet/levinson.hpp"

#include <cmath>
#include <string>

#include "gcnet/error.hpp"

namespace gcnet {

ScalarOrderCurve levinson_durbin(std::span<const double> r, bool keep_coefficients) {
  if (r.empty()) throw DegenerateError("levinson_durbin: empty sequence", 0);
  if (!(r[0] > 0.0)) throw DegenerateError("levinson_durbin: r(0) must be positive", 0);

  const std::size_t p_max = r.size() - 1;
  ScalarOrderCurve curve;
  curve.xi.reserve(p_max + 1);
  if (keep_coefficients) curve.coeffs.reserve(p_max + 1);
  curve.xi.push_back(r[0]);
  if (keep_coefficients) curve.coeffs.emplace_back();

  std::vector<double> a;
  a.reserve(p_max);
  double err = r[0];
  for (std::size_t m = 1; m <= p_max; ++m) {
    double acc = r[m];
    for (std::size_t k = 1; k < m; ++k) acc -= a[k - 1] * r[m - k];
    const double kappa = acc / err;
    if (!(std::abs(kappa) < 1.0)) {
      throw DegenerateError("levinson_durbin: reflection coefficient " + std::to_string(kappa) +
                                " at order " + std::to_string(m),
                            m);
    }
    // in-place update, pairing k with m - k
    for (std::size_t k = 1; 2 * k < m; ++k) {
      const double lo = a[k - 1], hi = a[m - k - 1];
      a[k - 1] = lo - kappa * hi;
      a[m - k - 1] = hi - kappa * lo;
    }
    if (m % 2 == 0) a[m / 2 - 1] *= 1.0 - kappa;
    a.push_back(kappa);
    err *= (1.0 - kappa * kappa);
    curve.xi.push_back(err);
    if (keep_coefficients) curve.coeffs.push_back(a);
  }
  return curve;
}

}  // namespace gcnet
