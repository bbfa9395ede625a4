#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "doctest.h"
#include "gcnet/lasso.hpp"
#include "gcnet/metrics.hpp"
#include "gcnet/random.hpp"

using namespace gcnet;

namespace {

Eigen::MatrixXd gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> z;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = z(rng);
  return m;
}

double soft(double x, double t) { return x > t ? x - t : (x < -t ? x + t : 0.0); }

double kkt_violation(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double lambda,
                     const Eigen::VectorXd& w, const Eigen::VectorXd& b) {
  const Eigen::VectorXd g = lasso_gradient(X, y, b);
  double worst = 0.0;
  for (Eigen::Index k = 0; k < b.size(); ++k) {
    const double v = b(k) != 0.0 ? std::abs(g(k) + lambda * w(k) * (b(k) > 0 ? 1.0 : -1.0))
                                 : std::max(0.0, std::abs(g(k)) - lambda * w(k));
    worst = std::max(worst, v);
  }
  return worst;
}

}  // namespace

TEST_CASE("lambda = 0 gives least squares") {
  Rng rng(1);
  const auto X = gaussian(200, 6, rng);
  const Eigen::VectorXd y = gaussian(200, 1, rng);
  const auto sol = lasso_cd(X, y, 0.0, Eigen::VectorXd::Ones(6), {.tol = 1e-12});
  const Eigen::VectorXd ols = X.colPivHouseholderQr().solve(y);
  CHECK((sol.coef - ols).cwiseAbs().maxCoeff() < 1e-6);
  CHECK(sol.converged);
}

TEST_CASE("lambda_max zeroes the solution") {
  Rng rng(2);
  const auto X = gaussian(100, 8, rng);
  const Eigen::VectorXd y = X.col(2) * 0.7 + gaussian(100, 1, rng);
  Eigen::VectorXd w = Eigen::VectorXd::Ones(8);
  w(3) = 2.5;
  const double lmax = lasso_lambda_max(X, y, w);
  const Eigen::VectorXd c = X.transpose() * y / 100.0;
  CHECK(lmax == doctest::Approx((2.0 * c.cwiseAbs().array() / w.array()).maxCoeff()));
  CHECK(lasso_cd(X, y, lmax, w).coef.isZero());
  CHECK(lasso_cd(X, y, lmax * 1.5, w).coef.isZero());
  CHECK_FALSE(lasso_cd(X, y, lmax * 0.9, w).coef.isZero());
}

TEST_CASE("orthogonal design matches soft thresholding") {
  Rng rng(3);
  const Eigen::Index N = 64, k = 5;
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(gaussian(N, k, rng));
  Eigen::MatrixXd X = qr.householderQ() * Eigen::MatrixXd::Identity(N, k);
  Eigen::VectorXd norms(k);
  norms << 1.0, 3.0, 8.0, 0.5, 64.0;  // squared column norms
  for (Eigen::Index j = 0; j < k; ++j) X.col(j) *= std::sqrt(norms(j));
  const Eigen::VectorXd y = gaussian(N, 1, rng) * 3.0;
  const Eigen::VectorXd w = (Eigen::VectorXd(k) << 1.0, 0.5, 2.0, 1.0, 0.1).finished();
  const double lambda = 0.05;
  const auto sol = lasso_cd(X, y, lambda, w, {.tol = 1e-13});
  for (Eigen::Index j = 0; j < k; ++j) {
    const double ols = X.col(j).dot(y) / norms(j);
    CHECK(std::abs(sol.coef(j) - soft(ols, lambda * w(j) * N / (2.0 * norms(j)))) < 1e-8);
  }
}

TEST_CASE("KKT conditions and monotone objective") {
  Rng rng(4);
  std::uniform_real_distribution<double> u(0.2, 3.0);
  for (int rep = 0; rep < 100; ++rep) {
    const Eigen::Index N = 40 + rep, k = 5 + rep % 30;
    Eigen::MatrixXd X = gaussian(N, k, rng);
    X.col(0) += 0.8 * X.col(1);  // some correlation
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(k);
    beta(1) = 1.0;
    beta(k - 1) = -0.5;
    const Eigen::VectorXd y = X * beta + gaussian(N, 1, rng);
    Eigen::VectorXd w(k);
    for (auto& v : w) v = u(rng);
    const double lambda = lasso_lambda_max(X, y, w) * (0.02 + 0.3 * (rep % 5) / 4.0);
    const auto sol = lasso_cd(X, y, lambda, w, {.tol = 1e-10, .track_objective = true});
    CHECK(kkt_violation(X, y, lambda, w, sol.coef) <= 1e-5);
    for (std::size_t s = 1; s < sol.objective.size(); ++s)
      CHECK(sol.objective[s] <= sol.objective[s - 1] + 1e-12);
  }
}

TEST_CASE("infinite weights and bad input") {
  Rng rng(5);
  const auto X = gaussian(50, 3, rng);
  const Eigen::VectorXd y = X.col(0);
  Eigen::VectorXd w = Eigen::VectorXd::Ones(3);
  w(0) = std::numeric_limits<double>::infinity();
  CHECK(lasso_cd(X, y, 0.01, w).coef(0) == 0.0);
  CHECK_THROWS_AS(lasso_cd(X, y, -1.0, Eigen::VectorXd::Ones(3)), std::invalid_argument);
}

namespace {

SeriesMatrix two_node(std::size_t T, std::uint64_t seed, double b = 0.5) {
  Rng rng(seed);
  std::normal_distribution<double> z;
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(T, 2);
  for (Eigen::Index t = 0; t < v.rows(); ++t) {
    v(t, 0) = z(rng);
    v(t, 1) = (t > 0 ? b * v(t - 1, 0) : 0.0) + z(rng);
  }
  return SeriesMatrix(v);
}

SeriesMatrix noise(std::size_t T, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  return SeriesMatrix(gaussian(static_cast<Eigen::Index>(T), static_cast<Eigen::Index>(n), rng));
}

}  // namespace

TEST_CASE("adaptive lasso recovers a single lagged effect") {
  const auto fit = adalasso_node(two_node(10000, 7), 1, 5);
  CHECK(std::find(fit.active.begin(), fit.active.end(), 0) != fit.active.end());
  for (Node j : fit.active) CHECK(j <= 1);
  CHECK(std::abs(fit.coef(0, 0) - 0.5) < 0.1);
}

TEST_CASE("adaptive lasso on an independent target") {
  int empty = 0;
  for (std::uint64_t s = 0; s < 20; ++s) empty += adalasso_node(noise(5000, 5, s), 0, 5).active.empty();
  CHECK(empty >= 18);
}

TEST_CASE("adaptive lasso graph on an edgeless truth") {
  std::vector<double> fdps;
  for (std::uint64_t s = 0; s < 9; ++s) {
    const auto res = adalasso_graph(noise(5000, 10, 100 + s), 10, {}, 1);
    fdps.push_back(fdp(confusion(DirectedGraph(10), res.graph)));
  }
  std::nth_element(fdps.begin(), fdps.begin() + 4, fdps.end());
  CHECK(fdps[4] <= 0.1);
}

TEST_CASE("target scale does not change the active set") {
  const auto x = two_node(2000, 9, 0.2);
  Eigen::MatrixXd v = x.values();
  v.col(1) *= 10.0;
  const auto a = adalasso_node(x, 1, 4);
  const auto b = adalasso_node(SeriesMatrix(v), 1, 4);
  CHECK(a.active == b.active);
}

TEST_CASE("adaptive lasso is deterministic across thread counts") {
  const auto x = noise(400, 6, 3);
  const auto a = adalasso_graph(x, 3, {}, 1);
  const auto b = adalasso_graph(x, 3, {}, 4);
  CHECK(a.graph == b.graph);
  for (std::size_t t = 1; t <= a.model.order(); ++t) CHECK(a.model.lag(t) == b.model.lag(t));
  CHECK_THROWS_AS(LaggedDesign(x, 400), std::invalid_argument);
}
