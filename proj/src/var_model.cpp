#include "gcnet/var_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

#include "gcnet/error.hpp"

namespace gcnet {

VarModel::VarModel(std::vector<Eigen::MatrixXd> coeffs, Eigen::VectorXd noise_vars,
                   DirectedGraph topology)
    : coeffs_(std::move(coeffs)),
      noise_vars_(std::move(noise_vars)),
      topology_(std::move(topology)) {
  const auto n = static_cast<Eigen::Index>(noise_vars_.size());
  if (n == 0) throw std::invalid_argument("VarModel: dimension must be positive");
  if (topology_.size() != static_cast<std::size_t>(n)) {
    throw std::invalid_argument("VarModel: topology size does not match dimension");
  }
  if (!(noise_vars_.array() > 0.0).all() || !noise_vars_.allFinite()) {
    throw std::invalid_argument("VarModel: noise variances must be positive and finite");
  }
  for (std::size_t tau = 0; tau < coeffs_.size(); ++tau) {
    const auto& b = coeffs_[tau];
    if (b.rows() != n || b.cols() != n) {
      throw std::invalid_argument("VarModel: coefficient matrix has wrong shape");
    }
    if (!b.allFinite()) throw std::invalid_argument("VarModel: non-finite coefficient");
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        if (i != j && b(i, j) != 0.0 && !topology_.has_edge(j, i)) {
          throw std::invalid_argument("VarModel: coefficient (" + std::to_string(i) + ", " +
                                      std::to_string(j) + ") has no supporting edge");
        }
      }
    }
  }
}

VarModel VarModel::from_coefficients(std::vector<Eigen::MatrixXd> coeffs,
                                     Eigen::VectorXd noise_vars) {
  DirectedGraph g(noise_vars.size());
  for (const auto& b : coeffs) {
    for (Eigen::Index i = 0; i < b.rows(); ++i) {
      for (Eigen::Index j = 0; j < b.cols(); ++j) {
        if (i != j && j < static_cast<Eigen::Index>(g.size()) &&
            i < static_cast<Eigen::Index>(g.size()) && b(i, j) != 0.0) {
          g.add_edge(j, i);
        }
      }
    }
  }
  return VarModel(std::move(coeffs), std::move(noise_vars), std::move(g));
}

Eigen::VectorXd random_filter_from_poles(std::size_t p, double radius, Rng& rng) {
  if (p == 0) throw std::invalid_argument("random_filter_from_poles: p must be >= 1");
  if (!(radius > 0.0 && radius < 1.0)) {
    throw std::invalid_argument("random_filter_from_poles: radius must lie in (0, 1)");
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  // Monic polynomial coefficients, highest power first.
  std::vector<double> poly{1.0};
  auto multiply = [&poly](const std::vector<double>& factor) {
    std::vector<double> out(poly.size() + factor.size() - 1, 0.0);
    for (std::size_t a = 0; a < poly.size(); ++a) {
      for (std::size_t b = 0; b < factor.size(); ++b) out[a + b] += poly[a] * factor[b];
    }
    poly = std::move(out);
  };

  for (std::size_t k = 0; k < p / 2; ++k) {
    // Uniform in the disc: radius scales with sqrt of a uniform draw.
    const double r = radius * std::sqrt(unit(rng));
    const double theta = 2.0 * std::numbers::pi * unit(rng);
    multiply({1.0, -2.0 * r * std::cos(theta), r * r});
  }
  if (p % 2 == 1) {
    std::uniform_real_distribution<double> real_root(-radius, radius);
    multiply({1.0, -real_root(rng)});
  }

  Eigen::VectorXd b(p);
  for (std::size_t k = 1; k <= p; ++k) b(k - 1) = -poly[k];
  return b;
}

VarModel build_var_model(const DirectedGraph& g, std::size_t p, Rng& rng) {
  if (!is_dag(g)) {
    throw std::invalid_argument("build_var_model: topology must be acyclic");
  }
  if (p == 0) throw std::invalid_argument("build_var_model: p must be >= 1");
  const auto n = static_cast<Eigen::Index>(g.size());
  std::vector<Eigen::MatrixXd> coeffs(p, Eigen::MatrixXd::Zero(n, n));

  auto place = [&](Eigen::Index i, Eigen::Index j) {
    const Eigen::VectorXd b = random_filter_from_poles(p, kPoleRadius, rng);
    for (std::size_t tau = 0; tau < p; ++tau) coeffs[tau](i, j) = b(tau);
  };
  for (Eigen::Index i = 0; i < n; ++i) {
    place(i, i);
    auto pa = g.parents(i);
    std::sort(pa.begin(), pa.end());
    for (Node j : pa) place(i, static_cast<Eigen::Index>(j));
  }

  std::exponential_distribution<double> extra(2.0);  // mean 1/2
  Eigen::VectorXd noise(n);
  for (Eigen::Index i = 0; i < n; ++i) noise(i) = 0.5 + extra(rng);

  return VarModel(std::move(coeffs), std::move(noise), g);
}

Eigen::MatrixXd companion_matrix(const VarModel& m) {
  const auto n = static_cast<Eigen::Index>(m.dim());
  const auto p = static_cast<Eigen::Index>(m.order());
  if (p == 0) return Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n * p, n * p);
  for (Eigen::Index tau = 0; tau < p; ++tau) {
    c.block(0, tau * n, n, n) = m.coeffs()[tau];
  }
  if (p > 1) c.block(n, 0, n * (p - 1), n * (p - 1)).setIdentity();
  return c;
}

double spectral_radius(const VarModel& m) {
  const Eigen::MatrixXd c = companion_matrix(m);
  if (c.isZero(0.0)) return 0.0;
  Eigen::EigenSolver<Eigen::MatrixXd> es(c, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

bool is_stable(const VarModel& m) {
  return spectral_radius(m) < 1.0 - kStabilityMargin;
}

namespace {

void require_stable(const VarModel& m, const char* who) {
  if (!is_stable(m)) {
    throw UnstableModelError(std::string(who) + ": model is not stable");
  }
}

// Nonzero coefficients of row i as (j, tau - 1, value), for sparse
// propagation of the recursion.
struct Term {
  Eigen::Index j;
  std::size_t lag;
  double value;
};

std::vector<std::vector<Term>> row_terms(const VarModel& m) {
  const auto n = static_cast<Eigen::Index>(m.dim());
  std::vector<std::vector<Term>> rows(n);
  for (std::size_t tau = 0; tau < m.order(); ++tau) {
    const auto& b = m.coeffs()[tau];
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        if (b(i, j) != 0.0) rows[i].push_back({j, tau, b(i, j)});
      }
    }
  }
  return rows;
}

}  // namespace

std::size_t default_burn_in(std::size_t n, std::size_t p) {
  return std::max<std::size_t>(1000, 10 * n * p);
}

SeriesMatrix simulate(const VarModel& m, std::size_t T, std::size_t burn_in, Rng& rng) {
  require_stable(m, "simulate");
  if (T == 0) throw std::invalid_argument("simulate: T must be >= 1");
  const auto n = static_cast<Eigen::Index>(m.dim());
  const std::size_t p = m.order();
  const auto rows = row_terms(m);
  const Eigen::VectorXd sd = m.noise_vars().cwiseSqrt();

  // Row-major history; the first p rows are the zero initial state.
  using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const std::size_t total = p + burn_in + T;
  RowMatrix hist = RowMatrix::Zero(static_cast<Eigen::Index>(total), n);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (std::size_t t = p; t < total; ++t) {
    for (Eigen::Index i = 0; i < n; ++i) {
      double acc = sd(i) * gauss(rng);
      for (const Term& term : rows[i]) {
        acc += term.value * hist(static_cast<Eigen::Index>(t - 1 - term.lag), term.j);
      }
      hist(static_cast<Eigen::Index>(t), i) = acc;
    }
  }
  Eigen::MatrixXd out = hist.bottomRows(static_cast<Eigen::Index>(T));
  return SeriesMatrix(std::move(out));
}

namespace {

MaExpansion ma_expansion_scaled(const VarModel& m, std::size_t K, double scale) {
  const auto n = static_cast<Eigen::Index>(m.dim());
  const std::size_t p = m.order();
  std::vector<Eigen::MatrixXd> b(p);
  double s = 1.0;
  for (std::size_t tau = 0; tau < p; ++tau) {
    s *= scale;
    b[tau] = m.coeffs()[tau] * s;
  }
  MaExpansion ma;
  ma.terms.reserve(K + 1);
  ma.terms.push_back(Eigen::MatrixXd::Identity(n, n));
  for (std::size_t k = 1; k <= K; ++k) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t tau = 1; tau <= std::min(k, p); ++tau) {
      a.noalias() += b[tau - 1] * ma.terms[k - tau];
    }
    ma.terms.push_back(std::move(a));
  }
  return ma;
}

}  // namespace

MaExpansion ma_expansion(const VarModel& m, std::size_t K) {
  require_stable(m, "ma_expansion");
  return ma_expansion_scaled(m, K, 1.0);
}

PersistenceReport is_persistent(const VarModel& m, const PersistenceOptions& opts) {
  require_stable(m, "is_persistent");
  if (opts.tail == 0 || opts.tail > opts.horizon) {
    throw std::invalid_argument("is_persistent: tail must be in 1..horizon");
  }
  // A(k) rho^{-k} is the expansion of B(tau) rho^{-tau}; the rescaling keeps
  // the dominant modes O(1) over the horizon and leaves exact zeros exact.
  const double rho = spectral_radius(m);
  const double scale = rho > 0.0 ? 1.0 / rho : 1.0;
  const MaExpansion ma = ma_expansion_scaled(m, opts.horizon, scale);
  const auto& g = m.topology();

  PersistenceReport report;
  const std::size_t first_tail = opts.horizon - opts.tail + 1;
  for (Node i = 0; i < g.size(); ++i) {
    for (Node k : ancestors(g, i)) {
      const auto ii = static_cast<Eigen::Index>(i);
      const auto kk = static_cast<Eigen::Index>(k);
      bool starts = false;
      bool lasts = false;
      for (std::size_t tau = 1; tau <= opts.horizon; ++tau) {
        if (std::abs(ma.terms[tau](ii, kk)) > opts.tol) {
          starts = true;
          if (tau >= first_tail) {
            lasts = true;
            break;
          }
        }
      }
      if (!(starts && lasts)) {
        report.persistent = false;
        report.failures.emplace_back(i, k);
      }
    }
  }
  return report;
}

AutocovSeq population_autocovariance(const VarModel& m, std::size_t max_lag) {
  require_stable(m, "population_autocovariance");
  const auto n = static_cast<Eigen::Index>(m.dim());
  const std::size_t p = m.order();

  std::vector<Eigen::MatrixXd> lags;
  lags.reserve(max_lag + 1);
  if (p == 0) {
    lags.push_back(m.noise_vars().asDiagonal());
    for (std::size_t tau = 1; tau <= max_lag; ++tau) lags.push_back(Eigen::MatrixXd::Zero(n, n));
    return AutocovSeq(std::move(lags), AutocovSource::population);
  }

  // Sigma = C Sigma C^T + Q by squaring: after k steps X sums the first 2^k
  // terms of sum_j C^j Q C^jT.
  Eigen::MatrixXd a = companion_matrix(m);
  const Eigen::Index dim = a.rows();
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(dim, dim);
  x.topLeftCorner(n, n) = m.noise_vars().asDiagonal();
  bool converged = false;
  for (int iter = 0; iter < 80; ++iter) {
    const Eigen::MatrixXd increment = a * x * a.transpose();
    x += increment;
    if (increment.cwiseAbs().maxCoeff() <= 1e-17 * x.cwiseAbs().maxCoeff()) {
      converged = true;
      break;
    }
    a = (a * a).eval();
  }
  if (!converged) {
    throw UnstableModelError("population_autocovariance: Lyapunov iteration did not converge");
  }
  x = 0.5 * (x + x.transpose()).eval();

  for (std::size_t tau = 0; tau <= max_lag && tau < p; ++tau) {
    lags.push_back(x.block(0, static_cast<Eigen::Index>(tau) * n, n, n));
  }
  for (std::size_t tau = p; tau <= max_lag; ++tau) {
    Eigen::MatrixXd r = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t k = 1; k <= p; ++k) r.noalias() += m.coeffs()[k - 1] * lags[tau - k];
    lags.push_back(std::move(r));
  }
  return AutocovSeq(std::move(lags), AutocovSource::population);
}

}  // namespace gcnet
