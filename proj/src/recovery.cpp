#include "gcnet/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <ostream>
#include <stdexcept>
#include <string>

#include <boost/dynamic_bitset.hpp>

#include "json.hpp"

namespace gcnet {

const char* to_string(Decision d) {
  switch (d) {
    case Decision::accepted: return "accepted";
    case Decision::rejected_by_path: return "rejected-by-path";
    case Decision::rejected_by_sc: return "rejected-by-SC";
    case Decision::dropped_bidirectional: return "dropped-bidirectional";
  }
  return "unknown";
}

namespace {

using Bits = boost::dynamic_bitset<>;

bool has_path(const DirectedGraph& g, Node from, Node to) {
  Bits seen(g.size());
  std::deque<Node> queue{from};
  while (!queue.empty()) {
    const Node u = queue.front();
    queue.pop_front();
    for (Node v : g.children(u)) {
      if (v == to) return true;
      if (!seen.test(v)) {
        seen.set(v);
        queue.push_back(v);
      }
    }
  }
  return false;
}

std::vector<Node> members(const Bits& set) {
  std::vector<Node> out;
  for (auto k = set.find_first(); k != Bits::npos; k = set.find_next(k)) out.push_back(k);
  return out;
}

// Ancestor / descendant bookkeeping for incremental strong-causality checks.
class StrongCausalityGuard {
 public:
  explicit StrongCausalityGuard(std::size_t n) : down_(n, Bits(n)), up_(n, Bits(n)) {
    for (Node a = 0; a < n; ++a) {
      down_[a].set(a);
      up_[a].set(a);
    }
  }

  // Adding i -> j creates a second path a -> b for some a upstream of i and b
  // downstream of j exactly when a already reaches b; j reaching i would
  // close a cycle.
  bool can_add(Node i, Node j) const {
    if (down_[j].test(i)) return false;
    const Bits& targets = down_[j];
    for (auto a = up_[i].find_first(); a != Bits::npos; a = up_[i].find_next(a)) {
      if (down_[a].intersects(targets)) return false;
    }
    return true;
  }

  void add(Node i, Node j) {
    const Bits sources = up_[i];
    const Bits targets = down_[j];
    for (auto a = sources.find_first(); a != Bits::npos; a = sources.find_next(a)) down_[a] |= targets;
    for (auto b = targets.find_first(); b != Bits::npos; b = targets.find_next(b)) up_[b] |= sources;
  }

 private:
  std::vector<Bits> down_;  // reflexive descendants
  std::vector<Bits> up_;    // reflexive ancestors
};

}  // namespace

RecoveryResult recover_from_candidates(std::size_t n, const std::vector<Edge>& candidates) {
  BoolMatrix w = BoolMatrix::Constant(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n), false);
  for (const Edge& e : candidates) {
    if (e.from >= n || e.to >= n || e.from == e.to) {
      throw std::invalid_argument("recover_from_candidates: invalid candidate edge");
    }
    w(static_cast<Eigen::Index>(e.from), static_cast<Eigen::Index>(e.to)) = true;
  }

  RecoveryResult result{DirectedGraph(n), {}};
  auto& trace = result.trace;
  trace.candidates = candidates;
  std::sort(trace.candidates.begin(), trace.candidates.end());

  Bits remaining(n);
  remaining.set();
  auto parentless = [&](const Bits& s) {
    Bits out(n);
    for (auto i = s.find_first(); i != Bits::npos; i = s.find_next(i)) {
      bool has_parent = false;
      for (auto src = s.find_first(); src != Bits::npos && !has_parent; src = s.find_next(src)) {
        has_parent = w(static_cast<Eigen::Index>(src), static_cast<Eigen::Index>(i));
      }
      if (!has_parent) out.set(i);
    }
    return out;
  };
  auto stall = [](std::size_t k) {
    return std::runtime_error("recover_oracle: non-DAG pairwise input (peeling stalled at layer " +
                              std::to_string(k) + ")");
  };

  std::vector<std::vector<Node>> layers;
  if (n == 0) return result;
  layers.push_back(members(parentless(remaining)));
  if (layers[0].empty()) throw stall(0);
  trace.layers.push_back({0, members(remaining), layers[0]});

  for (std::size_t k = 1;; ++k) {
    for (Node i : layers[k - 1]) remaining.reset(i);
    if (remaining.none()) break;
    layers.push_back(members(parentless(remaining)));
    if (layers[k].empty()) throw stall(k);
    trace.layers.push_back({k, members(remaining), layers[k]});

    for (std::size_t r = 1; r <= k; ++r) {
      std::vector<Edge> added;
      for (Node i : layers[k - r]) {
        for (Node j : layers[k]) {
          if (!w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))) continue;
          if (has_path(result.graph, i, j)) {
            trace.events.push_back({k, r, {i, j}, Decision::rejected_by_path, 0.0});
          } else {
            added.push_back({i, j});
            trace.events.push_back({k, r, {i, j}, Decision::accepted, 0.0});
          }
        }
      }
      // D_kr is judged against edges known before step r only.
      for (const Edge& e : added) result.graph.add_edge(e.from, e.to);
    }
  }
  return result;
}

RecoveryResult recover_oracle(const PairwiseRelations& rel) {
  const std::size_t n = rel.dim();
  std::vector<Edge> candidates;
  std::vector<TraceEvent> dropped;
  for (Node i = 0; i < n; ++i) {
    for (Node j = 0; j < n; ++j) {
      if (i == j) continue;
      // pw(j, i): x_i pairwise-causes x_j, i.e. candidate i -> j.
      const bool forward = rel.pw(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i));
      const bool backward = rel.pw(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (forward && !backward) candidates.push_back({i, j});
      if (forward && backward && i < j) {
        dropped.push_back({0, 0, {i, j}, Decision::dropped_bidirectional, 0.0});
      }
    }
  }
  RecoveryResult result = recover_from_candidates(n, candidates);
  result.trace.events.insert(result.trace.events.begin(), dropped.begin(), dropped.end());
  return result;
}

std::vector<Edge> finite_candidates(const PairwiseStats& stats, double delta) {
  const std::size_t n = stats.dim();
  std::vector<Edge> out;
  for (Node i = 0; i < n; ++i) {
    for (Node j = 0; j < n; ++j) {
      if (i == j) continue;
      const auto ii = static_cast<Eigen::Index>(i);
      const auto jj = static_cast<Eigen::Index>(j);
      if (passes_threshold(stats.P(jj, ii), delta) && stats.F(jj, ii) > stats.F(ii, jj)) {
        out.push_back({i, j});
      }
    }
  }
  return out;
}

RecoveryResult recover_finite(const PairwiseStats& stats, double delta) {
  if (!(delta >= 0.0 && delta < 1.0)) throw std::invalid_argument("recover_finite: delta must lie in [0, 1)");
  const std::size_t n = stats.dim();
  RecoveryResult result{DirectedGraph(n), {}};
  auto& trace = result.trace;
  trace.candidates = finite_candidates(stats, delta);
  if (n == 0) return result;

  BoolMatrix w = BoolMatrix::Constant(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n), false);
  for (const Edge& e : trace.candidates) {
    w(static_cast<Eigen::Index>(e.from), static_cast<Eigen::Index>(e.to)) = true;
  }

  Bits remaining(n);
  remaining.set();
  // Nodes of S whose total incoming candidate probability from S is below
  // the ceiling of the minimum (or at most it, if that selects nothing).
  auto next_layer = [&]() {
    std::vector<std::pair<Node, double>> incident;
    double lowest = INFINITY;
    for (auto i = remaining.find_first(); i != Bits::npos; i = remaining.find_next(i)) {
      double total = 0.0;
      for (auto j = remaining.find_first(); j != Bits::npos; j = remaining.find_next(j)) {
        if (w(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i))) {
          total += stats.P(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        }
      }
      incident.emplace_back(i, total);
      lowest = std::min(lowest, total);
    }
    const double cut = std::ceil(lowest);
    std::vector<Node> layer;
    for (const auto& [i, total] : incident) {
      if (total < cut) layer.push_back(i);
    }
    if (layer.empty()) {
      for (const auto& [i, total] : incident) {
        if (total <= cut) layer.push_back(i);
      }
    }
    return layer;
  };

  StrongCausalityGuard guard(n);
  std::vector<std::vector<Node>> layers;
  layers.push_back(next_layer());
  trace.layers.push_back({0, members(remaining), layers[0]});
  for (std::size_t k = 1;; ++k) {
    for (Node i : layers[k - 1]) remaining.reset(i);
    if (remaining.none()) break;
    layers.push_back(next_layer());
    trace.layers.push_back({k, members(remaining), layers[k]});

    std::vector<Edge> batch;
    for (std::size_t r = 1; r <= k; ++r) {
      for (Node i : layers[k - r]) {
        for (Node j : layers[k]) {
          if (w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))) batch.push_back({i, j});
        }
      }
    }
    auto strength = [&](const Edge& e) {
      return stats.F(static_cast<Eigen::Index>(e.to), static_cast<Eigen::Index>(e.from));
    };
    std::sort(batch.begin(), batch.end(), [&](const Edge& a, const Edge& b) {
      const double fa = strength(a);
      const double fb = strength(b);
      if (fa != fb) return fa > fb;
      return a < b;
    });
    for (std::size_t rank = 0; rank < batch.size(); ++rank) {
      const Edge& e = batch[rank];
      if (guard.can_add(e.from, e.to)) {
        guard.add(e.from, e.to);
        result.graph.add_edge(e.from, e.to);
        trace.events.push_back({k, rank, e, Decision::accepted, strength(e)});
      } else {
        trace.events.push_back({k, rank, e, Decision::rejected_by_sc, strength(e)});
      }
    }
  }
  return result;
}

PipelineResult pwgc_pipeline(const SeriesMatrix& x, std::size_t p_max, double alpha,
                             const PairwiseOptions& opts) {
  PipelineResult out;
  out.stats = compute_pairwise_matrix(x, p_max, opts);
  out.delta = bh_threshold(out.stats.P, alpha);
  out.recovery = recover_finite(out.stats, out.delta);
  std::size_t order = 0;
  for (const Edge& e : out.recovery.graph.edges()) {
    order = std::max<std::size_t>(
        order, static_cast<std::size_t>(
                   out.stats.orders(static_cast<Eigen::Index>(e.to), static_cast<Eigen::Index>(e.from))));
  }
  out.refit_order = order == 0 ? 1 : order;
  out.refit = ols_refit(x, out.recovery.graph, out.refit_order);
  return out;
}

void write_trace_jsonl(std::ostream& out, const RecoveryTrace& trace) {
  auto one_based = [](const std::vector<Node>& nodes) {
    std::vector<std::size_t> v;
    v.reserve(nodes.size());
    for (Node u : nodes) v.push_back(u + 1);
    return v;
  };
  nlohmann::json cand = nlohmann::json::array();
  for (const Edge& e : trace.candidates) cand.push_back({e.from + 1, e.to + 1});
  out << nlohmann::json{{"type", "candidates"}, {"edges", cand}}.dump() << '\n';
  for (const auto& layer : trace.layers) {
    out << nlohmann::json{{"type", "layer"},
                          {"k", layer.iteration},
                          {"remaining", one_based(layer.remaining)},
                          {"layer", one_based(layer.layer)}}
               .dump()
        << '\n';
  }
  for (const auto& ev : trace.events) {
    out << nlohmann::json{{"type", "decision"},
                          {"k", ev.iteration},
                          {"step", ev.step},
                          {"from", ev.edge.from + 1},
                          {"to", ev.edge.to + 1},
                          {"decision", to_string(ev.decision)},
                          {"score", ev.score}}
               .dump()
        << '\n';
  }
}

}  // namespace gcnet
