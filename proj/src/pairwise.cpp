#include "gcnet/pairwise.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "gcnet/error.hpp"
#include "gcnet/format.hpp"
#include "gcnet/levinson.hpp"
#include "gcnet/order_select.hpp"
#include "gcnet/parallel.hpp"
#include "gcnet/whittle.hpp"

namespace gcnet {

double gc_statistic(double xi_restricted, double xi_full, std::size_t p, std::size_t T) {
  if (!(xi_full > 0.0)) throw std::invalid_argument("gc_statistic: xi_full must be positive");
  if (p == 0 || T <= p) throw std::invalid_argument("gc_statistic: need 1 <= p < T");
  const double f = static_cast<double>(T) / static_cast<double>(p) * (xi_restricted / xi_full - 1.0);
  return std::max(f, 0.0);
}

double chi2_cdf(double x, std::size_t dof) {
  if (dof == 0) throw std::invalid_argument("chi2_cdf: dof must be >= 1");
  if (!(x > 0.0)) return 0.0;
  if (std::isinf(x)) return 1.0;
  return boost::math::gamma_p(0.5 * static_cast<double>(dof), 0.5 * x);
}

PairwiseStats compute_pairwise_matrix(const SeriesMatrix& x, std::size_t p_max,
                                      const PairwiseOptions& opts) {
  if (p_max == 0) throw std::invalid_argument("compute_pairwise_matrix: p_max must be >= 1");
  if (x.length() <= p_max) throw std::invalid_argument("compute_pairwise_matrix: need T > p_max");
  return compute_pairwise_matrix(estimate_autocovariance(x, p_max), x.length(), opts);
}

PairwiseStats compute_pairwise_matrix(const AutocovSeq& r, std::size_t T,
                                      const PairwiseOptions& opts) {
  const std::size_t n = r.dim();
  const std::size_t p_max = r.max_lag();
  if (p_max == 0) throw std::invalid_argument("compute_pairwise_matrix: p_max must be >= 1");
  if (T <= p_max) throw std::invalid_argument("compute_pairwise_matrix: need T > p_max");

  PairwiseStats stats;
  stats.T = T;
  const auto nn = static_cast<Eigen::Index>(n);
  stats.orders = Eigen::MatrixXi::Zero(nn, nn);
  stats.F = Eigen::MatrixXd::Zero(nn, nn);
  stats.P = Eigen::MatrixXd::Zero(nn, nn);
  stats.degenerate = BoolMatrix::Constant(nn, nn, false);

  // Univariate curves: xi_i(p) for every node.
  std::vector<ScalarOrderCurve> uni(n);
  std::vector<std::size_t> uni_order(n, 0);
  std::vector<char> uni_ok(n, 1);
  parallel_for(n, opts.threads, [&](std::size_t i) {
    try {
      const auto ri = r.scalar(i);
      uni[i] = levinson_durbin(ri, false);
      uni_order[i] = select_order(uni[i], T);
    } catch (const DegenerateError&) {
      uni_ok[i] = 0;
    }
  });

  // Unordered pairs (i < j), enumerated row by row.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  }

  parallel_for(pairs.size(), opts.threads, [&](std::size_t k) {
    const auto [i, j] = pairs[k];
    const auto ii = static_cast<Eigen::Index>(i);
    const auto jj = static_cast<Eigen::Index>(j);
    auto flag = [&] {
      stats.degenerate(ii, jj) = true;
      stats.degenerate(jj, ii) = true;
    };
    if (!uni_ok[i] || !uni_ok[j]) {
      flag();
      return;
    }
    BlockOrderCurve curve;
    try {
      curve = whittle_recursion(r.pair(i, j), p_max, false);
    } catch (const DegenerateError&) {
      flag();
      return;
    }
    const std::size_t p_pair = select_order(curve, T);

    // target a is explained, source b is the candidate cause; component c of
    // the pair curve holds a's bivariate residual variance.
    auto fill = [&](std::size_t a, std::size_t b, Eigen::Index c) {
      const auto aa = static_cast<Eigen::Index>(a);
      const auto bb = static_cast<Eigen::Index>(b);
      std::size_t p = p_pair;
      if (opts.order_rule == RestrictedOrder::max_of_both) p = std::max(p, uni_order[a]);
      stats.orders(aa, bb) = static_cast<int>(p);
      if (p == 0) return;
      const double xi_full = curve.sigma[p](c, c);
      double xi_restricted = uni[a].xi[p];
      if (!(xi_full > 0.0)) {
        stats.degenerate(aa, bb) = true;
        return;
      }
      xi_restricted = std::max(xi_restricted, kVarianceFloor);
      const double f = gc_statistic(xi_restricted, xi_full, p, T);
      stats.F(aa, bb) = f;
      stats.P(aa, bb) = chi2_cdf(f, p);
    };
    fill(i, j, 0);
    fill(j, i, 1);
  });
  return stats;
}

double bh_threshold(const Eigen::MatrixXd& P, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("bh_threshold: alpha must lie in (0, 1)");
  if (P.rows() != P.cols()) throw std::invalid_argument("bh_threshold: P must be square");
  const Eigen::Index n = P.rows();
  std::vector<double> q;
  q.reserve(static_cast<std::size_t>(n * (n - 1)));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i != j) q.push_back(edge_p_value(P(i, j)));
    }
  }
  std::sort(q.begin(), q.end());
  const double m = static_cast<double>(q.size());
  double delta = 0.0;
  for (std::size_t k = q.size(); k >= 1; --k) {
    if (q[k - 1] <= alpha * static_cast<double>(k) / m) {
      delta = q[k - 1];
      break;
    }
  }
  return delta;
}

void write_stats_csv(std::ostream& out, const PairwiseStats& stats) {
  out << "i,j,p_ij,F,P\n";
  const auto n = static_cast<Eigen::Index>(stats.dim());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      out << (i + 1) << ',' << (j + 1) << ',' << stats.orders(i, j) << ','
          << format_double(stats.F(i, j)) << ',' << format_double(stats.P(i, j)) << '\n';
    }
  }
}

}  // namespace gcnet
