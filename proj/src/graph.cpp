#include "gcnet/graph.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>
#include <string>

namespace gcnet {

DirectedGraph::DirectedGraph(std::size_t n)
    : n_(n), parents_(n), children_(n) {}

DirectedGraph::DirectedGraph(std::size_t n, std::span<const Edge> edges)
    : DirectedGraph(n) {
  for (const Edge& e : edges) add_edge(e.from, e.to);
}

void DirectedGraph::check_node(Node i) const {
  if (i >= n_) {
    throw std::out_of_range("node " + std::to_string(i) +
                            " out of range for graph of size " +
                            std::to_string(n_));
  }
}

bool DirectedGraph::has_edge(Node from, Node to) const {
  check_node(from);
  check_node(to);
  return edges_.contains(Edge{from, to});
}

bool DirectedGraph::add_edge(Node from, Node to) {
  check_node(from);
  check_node(to);
  if (from == to) {
    throw std::invalid_argument("self loops are not graph edges (node " +
                                std::to_string(from) + ")");
  }
  if (!edges_.insert(Edge{from, to}).second) return false;
  parents_[to].push_back(from);
  children_[from].push_back(to);
  return true;
}

const std::vector<Node>& DirectedGraph::parents(Node i) const {
  check_node(i);
  return parents_[i];
}

const std::vector<Node>& DirectedGraph::children(Node i) const {
  check_node(i);
  return children_[i];
}

namespace {

// Nodes reachable from `start` along out-edges (or in-edges when
// `reverse`), skipping `blocked`. `start` is not marked unless revisited.
boost::dynamic_bitset<> search(const DirectedGraph& g, Node start,
                               bool reverse, Node blocked) {
  boost::dynamic_bitset<> seen(g.size());
  std::deque<Node> queue{start};
  while (!queue.empty()) {
    const Node u = queue.front();
    queue.pop_front();
    const auto& next = reverse ? g.parents(u) : g.children(u);
    for (Node v : next) {
      if (v == blocked || seen.test(v)) continue;
      seen.set(v);
      queue.push_back(v);
    }
  }
  return seen;
}

constexpr Node kNoNode = static_cast<Node>(-1);

NodeSet to_set(const boost::dynamic_bitset<>& bits) {
  NodeSet out;
  for (auto k = bits.find_first(); k != boost::dynamic_bitset<>::npos;
       k = bits.find_next(k)) {
    out.insert(k);
  }
  return out;
}

}  // namespace

std::vector<boost::dynamic_bitset<>> reachability(const DirectedGraph& g) {
  std::vector<boost::dynamic_bitset<>> reach;
  reach.reserve(g.size());
  for (Node a = 0; a < g.size(); ++a) {
    reach.push_back(search(g, a, false, kNoNode));
  }
  return reach;
}

NodeSet ancestors(const DirectedGraph& g, Node i) {
  if (i >= g.size()) throw std::out_of_range("ancestors: node out of range");
  return to_set(search(g, i, true, kNoNode));
}

NodeSet descendants(const DirectedGraph& g, Node i) {
  if (i >= g.size()) throw std::out_of_range("descendants: node out of range");
  return to_set(search(g, i, false, kNoNode));
}

std::vector<Node> topological_order(const DirectedGraph& g) {
  std::vector<std::size_t> indegree(g.size());
  for (Node i = 0; i < g.size(); ++i) indegree[i] = g.parents(i).size();
  std::deque<Node> ready;
  for (Node i = 0; i < g.size(); ++i) {
    if (indegree[i] == 0) ready.push_back(i);
  }
  std::vector<Node> order;
  order.reserve(g.size());
  while (!ready.empty()) {
    const Node u = ready.front();
    ready.pop_front();
    order.push_back(u);
    for (Node v : g.children(u)) {
      if (--indegree[v] == 0) ready.push_back(v);
    }
  }
  if (order.size() != g.size()) order.clear();
  return order;
}

bool is_dag(const DirectedGraph& g) {
  return g.size() == 0 || !topological_order(g).empty();
}

bool is_strongly_causal(const DirectedGraph& g) {
  const auto order = topological_order(g);
  if (order.size() != g.size()) return false;

  // Path counts from each source, saturated at 2.
  std::vector<std::uint8_t> count(g.size());
  for (Node s = 0; s < g.size(); ++s) {
    std::fill(count.begin(), count.end(), 0);
    count[s] = 1;
    for (Node u : order) {
      if (count[u] == 0) continue;
      for (Node v : g.children(u)) {
        count[v] = static_cast<std::uint8_t>(std::min(2, count[v] + count[u]));
        if (count[v] > 1) return false;
      }
    }
  }
  return true;
}

NodeSet confounders(const DirectedGraph& g, Node i, Node j) {
  if (i >= g.size() || j >= g.size()) {
    throw std::out_of_range("confounders: node out of range");
  }
  if (i == j) throw std::invalid_argument("confounders: requires i != j");

  // k reaches i avoiding j  <=>  k is found searching backwards from i with j
  // removed, and symmetrically for j.
  const auto reach_i = search(g, i, true, j);
  const auto reach_j = search(g, j, true, i);
  auto both = reach_i & reach_j;
  both.reset(i);
  both.reset(j);
  return to_set(both);
}

std::vector<std::size_t> depths(const DirectedGraph& g) {
  const auto order = topological_order(g);
  if (order.size() != g.size()) {
    throw std::invalid_argument("depths: graph has a cycle");
  }
  std::vector<std::size_t> depth(g.size(), 0);
  for (Node u : order) {
    for (Node v : g.children(u)) depth[v] = std::max(depth[v], depth[u] + 1);
  }
  return depth;
}

DirectedGraph random_scg(std::size_t n, Rng& rng) {
  DirectedGraph g(n);
  if (n < 2) return g;
  if (n == 2) {
    g.add_edge(0, 1);
    return g;
  }

  std::uniform_int_distribution<Node> pick(0, n - 1);
  std::vector<Node> prufer(n - 2);
  for (auto& s : prufer) s = pick(rng);

  std::vector<std::size_t> degree(n, 1);
  for (Node s : prufer) ++degree[s];

  auto connect = [&g](Node a, Node b) {
    g.add_edge(std::min(a, b), std::max(a, b));
  };
  // Linear-time decoding with a moving pointer to the smallest leaf.
  Node ptr = 0;
  while (degree[ptr] != 1) ++ptr;
  Node leaf = ptr;
  for (Node s : prufer) {
    connect(leaf, s);
    if (--degree[s] == 1 && s < ptr) {
      leaf = s;
    } else {
      ++ptr;
      while (degree[ptr] != 1) ++ptr;
      leaf = ptr;
    }
  }
  connect(leaf, n - 1);
  return g;
}

DirectedGraph random_scg(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  return random_scg(n, rng);
}

DirectedGraph random_dag(std::size_t n, double q, Rng& rng) {
  if (!(q >= 0.0 && q <= 1.0)) {
    throw std::invalid_argument("random_dag: q must lie in [0, 1]");
  }
  DirectedGraph g(n);
  std::bernoulli_distribution coin(q);
  for (Node i = 0; i < n; ++i) {
    for (Node j = i + 1; j < n; ++j) {
      if (coin(rng)) g.add_edge(i, j);
    }
  }
  return g;
}

DirectedGraph random_dag(std::size_t n, double q, std::uint64_t seed) {
  Rng rng(seed);
  return random_dag(n, q, rng);
}

}  // namespace gcnet
