// Population pairwise relations in extended precision.
//
// Genuine pairwise effects induced by a distant confounder can be as small
// as 1e-16 relative to the innovation variance, which is exactly where the
// rounding noise of a double-precision recursion sits. The oracle therefore
// runs the Lyapunov solve and both recursions in quad precision and only
// rounds the final relative gaps to double.

#include <algorithm>
#include <array>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "gcnet/error.hpp"
#include "gcnet/pairwise.hpp"
#include "gcnet/parallel.hpp"

namespace gcnet {

namespace {

#if defined(__SIZEOF_FLOAT128__)
using Real = __float128;
constexpr Real kEps = 1e-32;
#else
using Real = long double;
constexpr Real kEps = 1e-19L;
#endif

Real abs_r(Real v) { return v < 0 ? -v : v; }

// Row-major square matrix.
struct Mat {
  std::size_t n = 0;
  std::vector<Real> a;
  explicit Mat(std::size_t size = 0) : n(size), a(size * size, Real(0)) {}
  Real& operator()(std::size_t i, std::size_t j) { return a[i * n + j]; }
  Real operator()(std::size_t i, std::size_t j) const { return a[i * n + j]; }
};

Mat multiply(const Mat& x, const Mat& y) {
  Mat out(x.n);
  for (std::size_t i = 0; i < x.n; ++i) {
    for (std::size_t k = 0; k < x.n; ++k) {
      const Real v = x(i, k);
      if (v == 0) continue;
      for (std::size_t j = 0; j < x.n; ++j) out.a[i * x.n + j] += v * y(k, j);
    }
  }
  return out;
}

Mat multiply_transposed(const Mat& x, const Mat& y) {  // x y^T
  Mat out(x.n);
  for (std::size_t i = 0; i < x.n; ++i) {
    for (std::size_t j = 0; j < x.n; ++j) {
      Real s = 0;
      for (std::size_t k = 0; k < x.n; ++k) s += x(i, k) * y(j, k);
      out(i, j) = s;
    }
  }
  return out;
}

Real max_abs(const Mat& x) {
  Real m = 0;
  for (Real v : x.a) m = std::max(m, abs_r(v));
  return m;
}

// Appends R(tau) = sum_k B(k) R(tau - k) up to max_lag.
void extend_autocovariance(const VarModel& m, std::vector<Mat>& lags, std::size_t max_lag) {
  const std::size_t n = m.dim();
  const std::size_t p = m.order();
  if (p == 0) {
    if (lags.size() < max_lag + 1) lags.resize(max_lag + 1, Mat(n));
    return;
  }
  for (std::size_t tau = lags.size(); tau <= max_lag; ++tau) {
    Mat r(n);
    for (std::size_t k = 1; k <= p; ++k) {
      const Eigen::MatrixXd& b = m.coeffs()[k - 1];
      const Mat& prev = lags[tau - k];
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t l = 0; l < n; ++l) {
          const double c = b(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l));
          if (c == 0.0) continue;
          for (std::size_t j = 0; j < n; ++j) r(i, j) += c * prev(l, j);
        }
      }
    }
    lags.push_back(std::move(r));
  }
}

// R(0..max_lag): stacked-state covariance by Lyapunov doubling, then the
// Yule-Walker recursion.
std::vector<Mat> autocovariance(const VarModel& m, std::size_t max_lag) {
  const std::size_t n = m.dim();
  const std::size_t p = m.order();
  std::vector<Mat> lags;
  if (p == 0) {
    Mat r0(n);
    for (std::size_t i = 0; i < n; ++i) r0(i, i) = m.noise_vars()(static_cast<Eigen::Index>(i));
    lags.push_back(r0);
    extend_autocovariance(m, lags, max_lag);
    return lags;
  }

  const std::size_t dim = n * p;
  Mat a(dim);
  for (std::size_t tau = 0; tau < p; ++tau) {
    const Eigen::MatrixXd& b = m.coeffs()[tau];
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        a(i, tau * n + j) = b(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      }
    }
  }
  for (std::size_t i = n; i < dim; ++i) a(i, i - n) = 1;

  Mat x(dim);
  for (std::size_t i = 0; i < n; ++i) x(i, i) = m.noise_vars()(static_cast<Eigen::Index>(i));
  bool converged = false;
  for (int iter = 0; iter < 80; ++iter) {
    const Mat inc = multiply_transposed(multiply(a, x), a);
    for (std::size_t k = 0; k < x.a.size(); ++k) x.a[k] += inc.a[k];
    if (max_abs(inc) <= kEps * max_abs(x)) {
      converged = true;
      break;
    }
    a = multiply(a, a);
  }
  if (!converged) throw UnstableModelError("oracle: Lyapunov iteration did not converge");

  for (std::size_t tau = 0; tau <= max_lag && tau < p; ++tau) {
    Mat r(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) r(i, j) = x(i, tau * n + j);
    }
    lags.push_back(std::move(r));
  }
  extend_autocovariance(m, lags, max_lag);
  return lags;
}

// Order-recursive Levinson-Durbin on node i; xi[k] is the order-k
// innovation variance.
class NodeRecursion {
 public:
  NodeRecursion(const std::vector<Mat>& r, std::size_t i) : r_(&r), i_(i) {
    const Real v = r[0](i, i);
    if (!(v > 0)) throw DegenerateError("oracle: zero variance", 0);
    xi.push_back(v);
  }

  void extend(std::size_t target) {
    const std::vector<Mat>& r = *r_;
    while (phi_.size() < target) {
      const std::size_t m = phi_.size();
      Real acc = r[m + 1](i_, i_);
      for (std::size_t k = 1; k <= m; ++k) acc -= phi_[k - 1] * r[m + 1 - k](i_, i_);
      const Real kappa = acc / xi.back();
      next_.assign(m + 1, 0);
      for (std::size_t k = 1; k <= m; ++k) next_[k - 1] = phi_[k - 1] - kappa * phi_[m - k];
      next_[m] = kappa;
      phi_.swap(next_);
      const Real v = xi.back() * (1 - kappa * kappa);
      if (!(v > 0)) throw DegenerateError("oracle: singular univariate recursion", m + 1);
      xi.push_back(v);
    }
  }

  std::vector<Real> xi;

 private:
  const std::vector<Mat>* r_;
  std::size_t i_;
  std::vector<Real> phi_, next_;
};

using M2 = std::array<Real, 4>;  // row-major 2 x 2

M2 mul(const M2& x, const M2& y) {
  return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3],
          x[2] * y[0] + x[3] * y[2], x[2] * y[1] + x[3] * y[3]};
}
M2 sub(const M2& x, const M2& y) { return {x[0] - y[0], x[1] - y[1], x[2] - y[2], x[3] - y[3]}; }
M2 transpose(const M2& x) { return {x[0], x[2], x[1], x[3]}; }
M2 inverse(const M2& x, std::size_t order) {
  const Real det = x[0] * x[3] - x[1] * x[2];
  if (!(det > 0) || !(x[0] > 0)) throw DegenerateError("oracle: singular bivariate recursion", order);
  return {x[3] / det, -x[1] / det, -x[2] / det, x[0] / det};
}

// Order-recursive bivariate Whittle recursion on the (i, j) sub-process.
class PairRecursion {
 public:
  PairRecursion(const std::vector<Mat>& r, std::size_t i, std::size_t j) : r_(&r), i_(i), j_(j) {
    sf_ = block(0);
    sb_ = sf_;
  }

  std::size_t order() const { return fwd_.size(); }

  /// Forward innovation covariance at `target` >= order().
  const M2& sigma_at(std::size_t target) {
    while (order() < target) step();
    inverse(sf_, order());
    return sf_;
  }

 private:
  M2 block(std::size_t tau) const {
    const Mat& x = (*r_)[tau];
    return {x(i_, i_), x(i_, j_), x(j_, i_), x(j_, j_)};
  }

  void step() {
    const std::size_t m = order();
    M2 delta = block(m + 1);
    for (std::size_t k = 1; k <= m; ++k) delta = sub(delta, mul(fwd_[k - 1], block(m + 1 - k)));
    const M2 kf = mul(delta, inverse(sb_, m));
    const M2 kb = mul(transpose(delta), inverse(sf_, m));
    next_fwd_.assign(m + 1, M2{});
    next_bwd_.assign(m + 1, M2{});
    for (std::size_t k = 1; k <= m; ++k) {
      next_fwd_[k - 1] = sub(fwd_[k - 1], mul(kf, bwd_[m - k]));
      next_bwd_[k - 1] = sub(bwd_[k - 1], mul(kb, fwd_[m - k]));
    }
    next_fwd_[m] = kf;
    next_bwd_[m] = kb;
    fwd_.swap(next_fwd_);
    bwd_.swap(next_bwd_);
    sf_ = sub(sf_, mul(kf, transpose(delta)));
    sb_ = sub(sb_, mul(kb, delta));
    sf_[1] = sf_[2] = (sf_[1] + sf_[2]) / 2;
    sb_[1] = sb_[2] = (sb_[1] + sb_[2]) / 2;
  }

  const std::vector<Mat>* r_;
  std::size_t i_, j_;
  M2 sf_{}, sb_{};
  std::vector<M2> fwd_, bwd_, next_fwd_, next_bwd_;
};

struct PairState {
  std::size_t i, j;
  PairRecursion rec;
  std::array<Real, 2> gap{};
  bool open = true;
};

}  // namespace

std::size_t default_oracle_order(const VarModel& m) {
  return std::max<std::size_t>(kMinOracleOrder, 20 * m.order());
}

Eigen::MatrixXd oracle_gaps(const VarModel& m, const OracleOptions& opts) {
  const std::size_t p0 = opts.p_oracle == 0 ? default_oracle_order(m) : opts.p_oracle;
  const std::size_t cap = std::max(p0, opts.max_order == 0 ? 8 * p0 : opts.max_order);
  const std::size_t n = m.dim();
  // The recursions hold a pointer to this vector, which grows as orders double.
  std::vector<Mat> r = autocovariance(m, p0);

  std::vector<NodeRecursion> nodes;
  nodes.reserve(n);
  for (std::size_t i = 0; i < n; ++i) nodes.emplace_back(r, i);
  std::vector<PairState> pairs;
  pairs.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) pairs.push_back({i, j, PairRecursion(r, i, j)});
  }

  const Real tol = opts.tol;
  const Real settled = opts.settled;
  auto ambiguous = [&](Real v) { return v > tol && v < settled; };
  auto gaps_at = [&](PairState& s, std::size_t order) {
    const M2& sig = s.rec.sigma_at(order);
    const Real xi_i = nodes[s.i].xi[order];
    const Real xi_j = nodes[s.j].xi[order];
    return std::array<Real, 2>{(xi_i - sig[0]) / xi_i, (xi_j - sig[3]) / xi_j};
  };

  // Small gaps are either genuine or truncation error of the finite-order
  // projection. Truncation error collapses as the order doubles while
  // genuine gaps settle, so ambiguous pairs are re-examined at doubled
  // orders until every gap has done one or the other.
  std::size_t order = p0;
  parallel_for(n, opts.threads, [&](std::size_t i) { nodes[i].extend(order); });
  parallel_for(pairs.size(), opts.threads, [&](std::size_t k) {
    PairState& s = pairs[k];
    s.gap = gaps_at(s, order);
    s.open = ambiguous(s.gap[0]) || ambiguous(s.gap[1]);
  });
  while (order < cap) {
    std::vector<std::size_t> open;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      if (pairs[k].open) open.push_back(k);
    }
    if (open.empty()) break;
    const std::size_t next = std::min(2 * order, cap);
    extend_autocovariance(m, r, next);
    parallel_for(n, opts.threads, [&](std::size_t i) { nodes[i].extend(next); });
    parallel_for(open.size(), opts.threads, [&](std::size_t k) {
      PairState& s = pairs[open[k]];
      const std::array<Real, 2> h = gaps_at(s, next);
      bool stable = true;
      for (int d = 0; d < 2; ++d) {
        if (ambiguous(h[d]) && abs_r(h[d] - s.gap[d]) > Real(0.01) * h[d]) stable = false;
      }
      s.gap = h;
      s.open = !stable;
    });
    order = next;
  }

  const auto nn = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd gaps = Eigen::MatrixXd::Zero(nn, nn);
  for (const PairState& s : pairs) {
    gaps(static_cast<Eigen::Index>(s.i), static_cast<Eigen::Index>(s.j)) = static_cast<double>(s.gap[0]);
    gaps(static_cast<Eigen::Index>(s.j), static_cast<Eigen::Index>(s.i)) = static_cast<double>(s.gap[1]);
  }
  return gaps;
}

PairwiseRelations oracle_pairwise(const VarModel& m, const OracleOptions& opts) {
  const Eigen::MatrixXd gaps = oracle_gaps(m, opts);
  PairwiseRelations rel;
  rel.pw = (gaps.array() > opts.tol).matrix();
  rel.pw.diagonal().setConstant(false);
  return rel;
}

}  // namespace gcnet
