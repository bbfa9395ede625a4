#include "gcnet/lasso.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>

#include "gcnet/parallel.hpp"

namespace gcnet {

namespace {

double soft_threshold(double z, double t) {
  if (z > t) return z - t;
  if (z < -t) return z + t;
  return 0.0;
}

double gram_objective(const Eigen::MatrixXd& G, const Eigen::VectorXd& c, double yy,
                      double lambda, const Eigen::VectorXd& w, const Eigen::VectorXd& b) {
  double penalty = 0.0;
  for (Eigen::Index k = 0; k < b.size(); ++k) {
    if (b(k) != 0.0) penalty += w(k) * std::abs(b(k));
  }
  return yy - 2.0 * c.dot(b) + b.dot(G * b) + lambda * penalty;
}

}  // namespace

LassoSolution lasso_gram(const Eigen::MatrixXd& G, const Eigen::VectorXd& c, double yy,
                         double lambda, const Eigen::VectorXd& weights,
                         const Eigen::VectorXd* warm, const LassoOptions& opts) {
  const Eigen::Index p = c.size();
  if (G.rows() != p || G.cols() != p || weights.size() != p) {
    throw std::invalid_argument("lasso_gram: dimension mismatch");
  }
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("lasso_gram: lambda must be finite and >= 0");
  }

  LassoSolution sol;
  sol.coef = warm ? *warm : Eigen::VectorXd::Zero(p);
  // grad holds c - G b, i.e. minus half the gradient of the smooth part.
  Eigen::VectorXd grad = c - G * sol.coef;

  auto frozen = [&](Eigen::Index k) { return !(G(k, k) > 0.0) || std::isinf(weights(k)); };
  auto update = [&](Eigen::Index k) {
    if (frozen(k)) {
      if (sol.coef(k) != 0.0) {
        grad += G.col(k) * sol.coef(k);
        sol.coef(k) = 0.0;
      }
      return 0.0;
    }
    const double old = sol.coef(k);
    const double next = soft_threshold(grad(k) + G(k, k) * old, 0.5 * lambda * weights(k)) / G(k, k);
    const double change = next - old;
    if (change != 0.0) {
      grad.noalias() -= G.col(k) * change;
      sol.coef(k) = next;
    }
    return std::abs(change);
  };

  std::vector<Eigen::Index> active;
  while (sol.sweeps < opts.max_sweeps) {
    double max_change = 0.0;
    for (Eigen::Index k = 0; k < p; ++k) max_change = std::max(max_change, update(k));
    ++sol.sweeps;
    if (opts.track_objective) sol.objective.push_back(gram_objective(G, c, yy, lambda, weights, sol.coef));
    if (max_change < opts.tol) {
      sol.converged = true;
      break;
    }
    // Iterate on the current support until it settles, then re-check all.
    active.clear();
    for (Eigen::Index k = 0; k < p; ++k) {
      if (sol.coef(k) != 0.0) active.push_back(k);
    }
    while (sol.sweeps < opts.max_sweeps) {
      double inner = 0.0;
      for (Eigen::Index k : active) inner = std::max(inner, update(k));
      ++sol.sweeps;
      if (opts.track_objective) sol.objective.push_back(gram_objective(G, c, yy, lambda, weights, sol.coef));
      if (inner < opts.tol) break;
    }
  }
  return sol;
}

LassoSolution lasso_cd(const Eigen::MatrixXd& design, const Eigen::VectorXd& target, double lambda,
                       const Eigen::VectorXd& weights, const LassoOptions& opts) {
  if (design.rows() != target.size() || design.cols() != weights.size()) {
    throw std::invalid_argument("lasso_cd: dimension mismatch");
  }
  if (design.rows() == 0) throw std::invalid_argument("lasso_cd: empty design");
  if (!design.allFinite() || !target.allFinite() || !std::isfinite(lambda) ||
      weights.hasNaN() || (weights.array() < 0.0).any()) {
    throw std::invalid_argument("lasso_cd: non-finite input");
  }
  const double N = static_cast<double>(design.rows());
  const Eigen::MatrixXd G = design.transpose() * design / N;
  const Eigen::VectorXd c = design.transpose() * target / N;
  return lasso_gram(G, c, target.squaredNorm() / N, lambda, weights, nullptr, opts);
}

double lasso_lambda_max(const Eigen::MatrixXd& design, const Eigen::VectorXd& target,
                        const Eigen::VectorXd& weights) {
  const double N = static_cast<double>(design.rows());
  const Eigen::VectorXd c = design.transpose() * target / N;
  double best = 0.0;
  for (Eigen::Index k = 0; k < c.size(); ++k) {
    if (weights(k) > 0.0 && std::isfinite(weights(k))) best = std::max(best, 2.0 * std::abs(c(k)) / weights(k));
  }
  return best;
}

Eigen::VectorXd lasso_gradient(const Eigen::MatrixXd& design, const Eigen::VectorXd& target,
                               const Eigen::VectorXd& coef) {
  const double N = static_cast<double>(design.rows());
  return -2.0 / N * (design.transpose() * (target - design * coef));
}

LaggedDesign::LaggedDesign(const SeriesMatrix& x, std::size_t p_max)
    : n_(x.dim()), p_max_(p_max) {
  if (p_max == 0) throw std::invalid_argument("LaggedDesign: p_max must be >= 1");
  if (x.length() <= p_max) throw std::invalid_argument("LaggedDesign: need T > p_max");
  rows_ = x.length() - p_max;
  const auto N = static_cast<Eigen::Index>(rows_);
  const auto& v = x.values();
  standardized_.resize(N, static_cast<Eigen::Index>(n_ * p_max));
  scale_.resize(standardized_.cols());
  for (std::size_t j = 0; j < n_; ++j) {
    for (std::size_t tau = 1; tau <= p_max; ++tau) {
      const auto col = static_cast<Eigen::Index>(j * p_max + tau - 1);
      standardized_.col(col) =
          v.col(static_cast<Eigen::Index>(j)).segment(static_cast<Eigen::Index>(p_max - tau), N);
      const double rms = std::sqrt(standardized_.col(col).squaredNorm() / static_cast<double>(N));
      scale_(col) = rms;
      if (rms > 0.0) standardized_.col(col) /= rms;
    }
  }
  targets_ = v.bottomRows(N);
  gram_.noalias() = standardized_.transpose() * standardized_;
  gram_ /= static_cast<double>(N);
}

Eigen::VectorXd LaggedDesign::cross(Node i) const {
  return standardized_.transpose() * targets_.col(static_cast<Eigen::Index>(i)) /
         static_cast<double>(rows_);
}

double LaggedDesign::target_power(Node i) const {
  return targets_.col(static_cast<Eigen::Index>(i)).squaredNorm() / static_cast<double>(rows_);
}

namespace {

// Ridge pilot on the standardised design. One eigendecomposition of the
// Gram matrix serves every node; with a non-positive ridge the penalty is
// chosen per node by generalised cross-validation.
class RidgePilot {
 public:
  RidgePilot(const LaggedDesign& d, double ridge) : ridge_(ridge), rows_(static_cast<double>(d.rows())) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(d.gram());
    if (es.info() != Eigen::Success) throw std::runtime_error("adaptive lasso: ridge pilot failed");
    values_ = es.eigenvalues().cwiseMax(0.0);
    vectors_ = es.eigenvectors();
  }

  Eigen::VectorXd solve(const Eigen::VectorXd& c, double yy) const {
    const Eigen::VectorXd z = vectors_.transpose() * c;
    return vectors_ * (z.array() / (values_.array() + penalty(z, yy))).matrix();
  }

 private:
  double penalty(const Eigen::VectorXd& z, double yy) const {
    if (ridge_ > 0.0) return ridge_;
    // GCV(rho) = resid(rho) / (1 - df(rho) / N)^2 on a log grid relative to
    // the mean eigenvalue.
    const double scale = std::max(values_.mean(), 1e-300);
    double best_rho = scale;
    double best = std::numeric_limits<double>::infinity();
    for (int s = 0; s <= 60; ++s) {
      const double rho = scale * std::pow(10.0, -6.0 + 0.125 * s);
      const Eigen::ArrayXd shrink = values_.array() / (values_.array() + rho);
      // resid = yy - 2 c^T b + b^T G b with b = V diag(1/(e + rho)) z.
      const double fit = (z.array().square() * (2.0 - shrink) / (values_.array() + rho)).sum();
      const double resid = std::max(yy - fit, 0.0);
      const double df = shrink.sum();
      if (df >= rows_) continue;
      const double gcv = resid / std::pow(1.0 - df / rows_, 2);
      if (gcv < best) {
        best = gcv;
        best_rho = rho;
      }
    }
    return best_rho;
  }

  double ridge_;
  double rows_;
  Eigen::VectorXd values_;
  Eigen::MatrixXd vectors_;
};

struct PathBest {
  Eigen::VectorXd coef;
  double lambda = 0.0;
  double bic = 0.0;
  double resid = 0.0;
};

// Warm-started weighted lasso path from lambda_max down, keeping the BIC
// minimiser.
PathBest bic_path(const Eigen::MatrixXd& G, const Eigen::VectorXd& c, double yy, const Eigen::VectorXd& w,
                  double N, const AdaLassoOptions& opts) {
  const Eigen::Index k = c.size();
  double lambda_max = 0.0;
  for (Eigen::Index q = 0; q < k; ++q) {
    if (std::isfinite(w(q))) lambda_max = std::max(lambda_max, 2.0 * std::abs(c(q)) / w(q));
  }
  const double penalty = std::log(N) / N;
  auto bic_of = [&](double resid, std::size_t df) {
    return std::log(std::max(resid, 1e-300)) + static_cast<double>(df) * penalty;
  };
  PathBest out{Eigen::VectorXd::Zero(k), lambda_max, bic_of(yy, 0), yy};
  if (!(lambda_max > 0.0)) return out;

  Eigen::VectorXd current = Eigen::VectorXd::Zero(k);
  const std::size_t points = std::max<std::size_t>(opts.path_points, 2);
  const double step = std::log(opts.path_ratio) / static_cast<double>(points - 1);
  std::size_t since_best = 0;
  for (std::size_t s = 0; s < points; ++s) {
    const double lambda = lambda_max * std::exp(step * static_cast<double>(s));
    LassoSolution sol = lasso_gram(G, c, yy, lambda, w, &current, opts.cd);
    current = std::move(sol.coef);
    const double resid = std::max(yy - 2.0 * c.dot(current) + current.dot(G * current), 0.0);
    const auto df = static_cast<std::size_t>((current.array() != 0.0).count());
    const double bic = bic_of(resid, df);
    if (bic < out.bic) {
      out.bic = bic;
      out.lambda = lambda;
      out.resid = resid;
      out.coef = current;
      since_best = 0;
    } else if (++since_best >= opts.patience) {
      break;
    }
    if (static_cast<double>(df) >= opts.max_df_fraction * N ||
        (yy > 0.0 && resid < (1.0 - opts.max_explained) * yy)) {
      break;
    }
  }
  return out;
}

LassoFit fit_node(const LaggedDesign& d, const RidgePilot& pilot, Node i, const AdaLassoOptions& opts) {
  if (i >= d.dim()) throw std::out_of_range("adalasso_node: node out of range");
  const Eigen::MatrixXd& G = d.gram();
  const Eigen::VectorXd c = d.cross(i);
  const double yy = d.target_power(i);
  const Eigen::Index k = c.size();
  const double N = static_cast<double>(d.rows());
  constexpr double inf = std::numeric_limits<double>::infinity();

  Eigen::VectorXd w(k);
  for (Eigen::Index q = 0; q < k; ++q) w(q) = d.scale()(q) > 0.0 ? 1.0 : inf;
  // Coefficients the pilot leaves at exactly zero get infinite weight.
  const Eigen::VectorXd b_pilot = opts.pilot == PilotKind::lasso ? bic_path(G, c, yy, w, N, opts).coef
                                                                 : pilot.solve(c, yy);
  for (Eigen::Index q = 0; q < k; ++q) {
    if (!std::isfinite(w(q))) continue;
    const double a = std::abs(b_pilot(q));
    w(q) = opts.pilot == PilotKind::lasso && a == 0.0 ? inf
                                                      : 1.0 / (std::pow(a, opts.gamma) + opts.weight_eps);
  }

  const PathBest best = bic_path(G, c, yy, w, N, opts);
  LassoFit fit;
  fit.node = i;
  fit.coef = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d.dim()), static_cast<Eigen::Index>(d.p_max()));
  fit.lambda = best.lambda;
  fit.bic = best.bic;
  fit.residual_var = best.resid;
  for (std::size_t j = 0; j < d.dim(); ++j) {
    bool any = false;
    for (std::size_t tau = 1; tau <= d.p_max(); ++tau) {
      const auto q = static_cast<Eigen::Index>(j * d.p_max() + tau - 1);
      if (best.coef(q) != 0.0) {
        fit.coef(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(tau - 1)) = best.coef(q) / d.scale()(q);
        any = true;
      }
    }
    if (any) fit.active.push_back(j);
  }
  return fit;
}

}  // namespace

LassoFit adalasso_node(const LaggedDesign& design, Node i, const AdaLassoOptions& opts) {
  const RidgePilot pilot(design, opts.ridge);
  return fit_node(design, pilot, i, opts);
}

LassoFit adalasso_node(const SeriesMatrix& x, Node i, std::size_t p_max, const AdaLassoOptions& opts) {
  return adalasso_node(LaggedDesign(x, p_max), i, opts);
}

AdaLassoResult adalasso_graph(const SeriesMatrix& x, std::size_t p_max, const AdaLassoOptions& opts,
                              std::size_t threads) {
  const LaggedDesign design(x, p_max);
  const RidgePilot pilot(design, opts.ridge);
  const std::size_t n = design.dim();

  AdaLassoResult result;
  result.fits.resize(n);
  std::vector<std::string> errors(n);
  parallel_for(n, threads, [&](std::size_t i) {
    try {
      result.fits[i] = fit_node(design, pilot, i, opts);
    } catch (const std::exception& e) {
      errors[i] = e.what();
      result.fits[i].node = i;
      result.fits[i].coef = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p_max));
      result.fits[i].residual_var = design.target_power(i);
    }
  });
  for (std::size_t i = 0; i < n; ++i) {
    if (!errors[i].empty()) result.errors.push_back("node " + std::to_string(i + 1) + ": " + errors[i]);
  }

  const auto nn = static_cast<Eigen::Index>(n);
  DirectedGraph g(n);
  std::vector<Eigen::MatrixXd> coeffs(p_max, Eigen::MatrixXd::Zero(nn, nn));
  Eigen::VectorXd noise(nn);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& fit = result.fits[i];
    for (Node j : fit.active) {
      if (j != i) g.add_edge(j, i);
    }
    for (std::size_t tau = 0; tau < p_max; ++tau) {
      coeffs[tau].row(static_cast<Eigen::Index>(i)) = fit.coef.col(static_cast<Eigen::Index>(tau)).transpose();
    }
    noise(static_cast<Eigen::Index>(i)) = std::max(fit.residual_var, std::numeric_limits<double>::min());
  }
  result.model = VarModel(std::move(coeffs), std::move(noise), g);
  result.graph = std::move(g);
  return result;
}

}  // namespace gcnet
