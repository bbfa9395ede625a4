#include <algorithm>
#include <sstream>

#include "doctest.h"
#include "gcnet/fixtures.hpp"
#include "gcnet/pairwise.hpp"
#include "gcnet/recovery.hpp"
#include "json.hpp"

using namespace gcnet;

namespace {

// Pairwise relations implied by a strongly causal graph with persistent
// dynamics: j reaches i pairwise iff j is an ancestor of i or the two share a
// confounder.
PairwiseRelations implied_relations(const DirectedGraph& g) {
  const auto n = static_cast<Eigen::Index>(g.size());
  PairwiseRelations rel{BoolMatrix::Constant(n, n, false)};
  for (Node i = 0; i < g.size(); ++i) {
    const auto anc = ancestors(g, i);
    for (Node j = 0; j < g.size(); ++j) {
      if (i == j) continue;
      rel.pw(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          anc.count(j) > 0 || !confounders(g, i, j).empty();
    }
  }
  return rel;
}

bool has_event(const RecoveryTrace& t, Node from, Node to, Decision d) {
  return std::any_of(t.events.begin(), t.events.end(),
                     [&](const TraceEvent& e) { return e.edge == Edge{from, to} && e.decision == d; });
}

PairwiseStats empty_stats(std::size_t n) {
  const auto m = static_cast<Eigen::Index>(n);
  PairwiseStats s;
  s.T = 100;
  s.orders = Eigen::MatrixXi::Ones(m, m);
  s.F = Eigen::MatrixXd::Zero(m, m);
  s.P = Eigen::MatrixXd::Zero(m, m);
  s.degenerate = BoolMatrix::Constant(m, m, false);
  return s;
}

}  // namespace

TEST_CASE("worked example on the six-node graph") {
  const auto g = fixtures::six_node_graph();
  const auto res = recover_oracle(implied_relations(g));
  CHECK(res.graph == g);
  // 1-based (1,4), (1,5), (1,6), (3,6), (2,6) are explained by known paths
  for (Edge e : {Edge{0, 3}, Edge{0, 4}, Edge{0, 5}, Edge{2, 5}, Edge{1, 5}})
    CHECK(has_event(res.trace, e.from, e.to, Decision::rejected_by_path));
  // 4 and 5 share the confounder 3
  CHECK(has_event(res.trace, 3, 4, Decision::dropped_bidirectional));
  CHECK(std::find(res.trace.candidates.begin(), res.trace.candidates.end(), Edge{3, 4}) ==
        res.trace.candidates.end());
  CHECK(res.trace.layers.size() == 4);

  // the same through the population relations of a random system on it
  Rng rng(17);
  CHECK(recover_oracle(oracle_pairwise(build_var_model(g, 3, rng))).graph == g);
}

TEST_CASE("implied relations recover random strongly causal graphs") {
  for (std::uint64_t s = 0; s < 200; ++s) {
    const auto g = random_scg(5 + s % 30, s);
    CHECK(recover_oracle(implied_relations(g)).graph == g);
  }
}

TEST_CASE("edge cases of the exact recovery") {
  PairwiseRelations none{BoolMatrix::Constant(5, 5, false)};
  const auto r = recover_oracle(none);
  CHECK(r.graph.edge_count() == 0);
  CHECK(r.trace.layers.size() == 1);

  PairwiseRelations cyc{BoolMatrix::Constant(3, 3, false)};
  cyc.pw(1, 0) = cyc.pw(2, 1) = cyc.pw(0, 2) = true;
  CHECK_THROWS_AS(recover_oracle(cyc), std::runtime_error);
  CHECK_THROWS_AS(recover_from_candidates(3, {Edge{0, 0}}), std::invalid_argument);
}

TEST_CASE("finite candidates") {
  auto s = empty_stats(3);
  s.P(1, 0) = 0.999;
  s.F(1, 0) = 20.0;  // 0 -> 1
  s.F(0, 1) = 1.0;
  s.P(2, 1) = 0.999;  // exact tie between 1 and 2
  s.P(1, 2) = 0.999;
  s.F(2, 1) = 5.0;
  s.F(1, 2) = 5.0;
  const auto c = finite_candidates(s, 0.01);
  CHECK(c == std::vector<Edge>{{0, 1}});
  CHECK(finite_candidates(s, 0.0).empty());
}

TEST_CASE("finite recovery") {
  const auto none = recover_finite(empty_stats(6), 0.05);
  CHECK(none.graph.edge_count() == 0);

  Rng rng(2);
  std::uniform_real_distribution<double> u;
  std::exponential_distribution<double> ex(0.2);
  for (int rep = 0; rep < 200; ++rep) {
    auto s = empty_stats(12);
    for (Eigen::Index i = 0; i < 12; ++i)
      for (Eigen::Index j = 0; j < 12; ++j)
        if (i != j) {
          s.F(i, j) = ex(rng);
          s.P(i, j) = u(rng);
        }
    const auto res = recover_finite(s, 0.3);
    CHECK(is_strongly_causal(res.graph));
    for (auto e : res.graph.edges()) {
      CHECK(passes_threshold(s.P(static_cast<Eigen::Index>(e.to), static_cast<Eigen::Index>(e.from)), 0.3));
    }
  }
}

TEST_CASE("finite recovery on simulated six-node data") {
  const auto g = fixtures::six_node_graph();
  Rng mrng(5);
  const auto m = build_var_model(g, 2, mrng);
  int exact = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    Rng rng(s);
    const auto res = pwgc_pipeline(simulate(m, 10000, 1000, rng), 6, 0.05, {.threads = 1});
    exact += res.recovery.graph == g;
  }
  CHECK(exact >= 90);
}

TEST_CASE("pipeline on white noise and determinism") {
  int empty = 0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    Rng rng(s);
    std::normal_distribution<double> z;
    Eigen::MatrixXd v(2000, 5);
    for (Eigen::Index t = 0; t < v.rows(); ++t)
      for (Eigen::Index j = 0; j < 5; ++j) v(t, j) = z(rng);
    const auto res = pwgc_pipeline(SeriesMatrix(v), 10, 0.05, {.threads = 1});
    empty += res.recovery.graph.edge_count() == 0;
    if (s == 0) {
      CHECK(res.refit_order == 1);
      CHECK(pwgc_pipeline(SeriesMatrix(v), 10, 0.05, {.threads = 3}).recovery.graph == res.recovery.graph);
    }
  }
  CHECK(empty >= 45);
}

TEST_CASE("trace JSON lines") {
  const auto res = recover_oracle(implied_relations(fixtures::six_node_graph()));
  std::ostringstream out;
  write_trace_jsonl(out, res.trace);
  std::istringstream in(out.str());
  std::string line;
  std::size_t layers = 0, decisions = 0;
  while (std::getline(in, line)) {
    const auto j = nlohmann::json::parse(line);
    if (j["type"] == "layer") ++layers;
    if (j["type"] == "decision") {
      ++decisions;
      CHECK(j["from"].get<std::size_t>() >= 1);
    }
  }
  CHECK(layers == res.trace.layers.size());
  CHECK(decisions == res.trace.events.size());
}
