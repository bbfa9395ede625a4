#include "gcnet/whittle.hpp"

#include <stdexcept>
#include <string>

#include "gcnet/error.hpp"

namespace gcnet {

namespace {

Eigen::LLT<Eigen::MatrixXd> checked_llt(const Eigen::MatrixXd& s, const char* which,
                                        std::size_t order) {
  Eigen::LLT<Eigen::MatrixXd> llt(s);
  if (llt.info() != Eigen::Success || !(llt.matrixLLT().diagonal().array() > 0.0).all()) {
    throw DegenerateError(std::string("whittle_recursion: singular ") + which +
                              " error covariance at order " + std::to_string(order),
                          order);
  }
  return llt;
}

}  // namespace

BlockOrderCurve whittle_recursion(const AutocovSeq& r, std::size_t p_max,
                                  bool keep_coefficients) {
  if (p_max > r.max_lag()) {
    throw std::invalid_argument("whittle_recursion: p_max exceeds available lags");
  }
  const Eigen::Index d = static_cast<Eigen::Index>(r.dim());

  BlockOrderCurve curve;
  curve.sigma.reserve(p_max + 1);
  Eigen::MatrixXd sf = r[0];
  Eigen::MatrixXd sb = r[0];
  auto llt_f = checked_llt(sf, "forward", 0);
  auto llt_b = llt_f;
  curve.sigma.push_back(sf);
  if (keep_coefficients) curve.coeffs.emplace_back();

  std::vector<Eigen::MatrixXd> fwd;  // A(1..m)
  std::vector<Eigen::MatrixXd> bwd;  // backward B(1..m): x(t) ~ sum_k B(k) x(t + k)
  fwd.reserve(p_max);
  bwd.reserve(p_max);
  for (std::size_t m = 0; m < p_max; ++m) {
    Eigen::MatrixXd delta = r[m + 1];
    for (std::size_t k = 1; k <= m; ++k) delta.noalias() -= fwd[k - 1] * r[m + 1 - k];

    // Kf = delta Sb^{-1}, Kb = delta^T Sf^{-1} (both covariances symmetric).
    const Eigen::MatrixXd kf = llt_b.solve(delta.transpose()).transpose();
    const Eigen::MatrixXd kb = llt_f.solve(delta).transpose();

    std::vector<Eigen::MatrixXd> next_fwd(m + 1, Eigen::MatrixXd(d, d));
    std::vector<Eigen::MatrixXd> next_bwd(m + 1, Eigen::MatrixXd(d, d));
    for (std::size_t k = 1; k <= m; ++k) {
      next_fwd[k - 1] = fwd[k - 1] - kf * bwd[m - k];
      next_bwd[k - 1] = bwd[k - 1] - kb * fwd[m - k];
    }
    next_fwd[m] = kf;
    next_bwd[m] = kb;
    fwd = std::move(next_fwd);
    bwd = std::move(next_bwd);

    sf -= kf * delta.transpose();
    sb -= kb * delta;
    sf = 0.5 * (sf + sf.transpose()).eval();
    sb = 0.5 * (sb + sb.transpose()).eval();
    llt_f = checked_llt(sf, "forward", m + 1);
    llt_b = checked_llt(sb, "backward", m + 1);

    curve.sigma.push_back(sf);
    if (keep_coefficients) curve.coeffs.push_back(fwd);
  }
  return curve;
}

}  // namespace gcnet
