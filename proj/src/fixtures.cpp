#include "gcnet/fixtures.hpp"

#include <array>
#include <sstream>
#include <stdexcept>

#include "gcnet/recovery.hpp"

namespace gcnet::fixtures {

using Eigen::MatrixXd;
using Eigen::VectorXd;

VarModel diamond(double a) {
  MatrixXd b = MatrixXd::Zero(4, 4);
  b(1, 0) = a;
  b(2, 0) = -a;
  b(3, 1) = 1.0;
  b(3, 2) = 1.0;
  return VarModel::from_coefficients({b}, VectorXd::Ones(4));
}

VarModel lag_cancellation(double a) {
  MatrixXd b1 = MatrixXd::Zero(3, 3);
  MatrixXd b2 = MatrixXd::Zero(3, 3);
  b1(1, 0) = -a;
  b1(2, 1) = 1.0;
  b2(2, 0) = a;
  return VarModel::from_coefficients({b1, b2}, VectorXd::Ones(3));
}

VarModel fork(double a, double memory) {
  MatrixXd b = MatrixXd::Zero(3, 3);
  b(0, 0) = memory;
  b(1, 0) = a;
  b(2, 0) = a;
  return VarModel::from_coefficients({b}, VectorXd::Ones(3));
}

DirectedGraph six_node_graph() {
  DirectedGraph g(6);
  for (auto [from, to] : std::array<std::pair<Node, Node>, 5>{{{0, 2}, {2, 3}, {1, 3}, {2, 4}, {3, 5}}}) {
    g.add_edge(from, to);
  }
  return g;
}

VarModel random_persistent_scg_model(std::size_t n, std::size_t p, Rng& rng) {
  const DirectedGraph g = random_scg(n, rng);
  for (int attempt = 0; attempt < 100; ++attempt) {
    VarModel m = build_var_model(g, p, rng);
    if (is_persistent(m).persistent) return m;
  }
  throw std::runtime_error("no persistent model found in 100 draws");
}

namespace {

std::string edge_list(const DirectedGraph& g) {
  std::ostringstream os;
  bool first = true;
  for (const Edge& e : g.edges()) {
    os << (first ? "" : " ") << e.from + 1 << "->" << e.to + 1;
    first = false;
  }
  return os.str();
}

CheckResult pw_check(std::string name, const VarModel& m, Node i, Node j, bool expected,
                     const OracleOptions& opts) {
  const bool got = oracle_pairwise(m, opts).pw(i, j);
  std::ostringstream detail;
  detail << "pw[" << i + 1 << "][" << j + 1 << "] = " << (got ? "true" : "false") << ", expected "
         << (expected ? "true" : "false");
  return {std::move(name), got == expected, detail.str()};
}

CheckResult recovery_check(std::string name, const VarModel& m, const OracleOptions& opts) {
  CheckResult r{std::move(name), false, {}};
  try {
    const auto rec = recover_oracle(oracle_pairwise(m, opts));
    r.passed = rec.graph == m.topology();
    if (!r.passed) {
      r.detail = "recovered {" + edge_list(rec.graph) + "}, truth {" + edge_list(m.topology()) + "}";
    }
  } catch (const std::exception& e) {
    r.detail = e.what();
  }
  return r;
}

}  // namespace

std::vector<CheckResult> oracle_battery(std::size_t trials, std::uint64_t seed,
                                        const OracleOptions& opts) {
  std::vector<CheckResult> out;
  out.push_back(pw_check("diamond: 1 does not cause 4 pairwise", diamond(), 3, 0, false, opts));
  out.push_back(pw_check("lag cancellation: 1 does not cause 3 pairwise", lag_cancellation(), 2, 0,
                         false, opts));
  out.push_back(pw_check("memoryless fork: 2 does not cause 3 pairwise", fork(0.5, 0.0), 2, 1, false,
                         opts));
  out.push_back(pw_check("fork with memory: 2 causes 3 pairwise", fork(0.5, 0.5), 2, 1, true, opts));

  Rng rng = make_stream(seed, 0);
  out.push_back(recovery_check("six-node system", build_var_model(six_node_graph(), 2, rng), opts));

  constexpr std::array<std::size_t, 3> sizes{6, 10, 20};
  constexpr std::array<std::size_t, 3> orders{1, 2, 5};
  for (std::size_t t = 0; t < trials; ++t) {
    Rng trial_rng = make_stream(seed, t + 1);
    const std::size_t n = sizes[t % sizes.size()];
    const std::size_t p = orders[(t / sizes.size()) % orders.size()];
    std::ostringstream name;
    name << "random SCG trial " << t + 1 << " (n=" << n << ", p=" << p << ")";
    try {
      out.push_back(recovery_check(name.str(), random_persistent_scg_model(n, p, trial_rng), opts));
    } catch (const std::exception& e) {
      out.push_back({name.str(), false, e.what()});
    }
  }
  return out;
}

}  // namespace gcnet::fixtures
