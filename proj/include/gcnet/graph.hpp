#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <set>
#include <span>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "gcnet/random.hpp"

namespace gcnet {

using Node = std::size_t;
using NodeSet = std::set<Node>;

/// Directed edge from -> to. Nodes are 0-based in memory; the text formats
/// handled by io.hpp are 1-based.
struct Edge {
  Node from;
  Node to;

  auto operator<=>(const Edge&) const = default;
};

/// Directed graph without self loops or duplicate edges. Autoregressive
/// self terms live in VarModel, never here.
class DirectedGraph {
 public:
  DirectedGraph() = default;
  explicit DirectedGraph(std::size_t n);
  DirectedGraph(std::size_t n, std::span<const Edge> edges);

  std::size_t size() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  bool has_edge(Node from, Node to) const;

  /// Inserts from -> to. Returns false if the edge was already present.
  /// Throws std::out_of_range for bad endpoints and std::invalid_argument
  /// for a loop.
  bool add_edge(Node from, Node to);

  const std::vector<Node>& parents(Node i) const;
  const std::vector<Node>& children(Node i) const;

  /// Edges in lexicographic (from, to) order.
  const std::set<Edge>& edges() const noexcept { return edges_; }

  friend bool operator==(const DirectedGraph& a, const DirectedGraph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

 private:
  void check_node(Node i) const;

  std::size_t n_ = 0;
  std::set<Edge> edges_;
  std::vector<std::vector<Node>> parents_;
  std::vector<std::vector<Node>> children_;
};

/// Row a has bit b set iff a directed path a -> ... -> b of length >= 1
/// exists.
std::vector<boost::dynamic_bitset<>> reachability(const DirectedGraph& g);

/// All j with a directed path j -> ... -> i. i itself is included only when
/// it lies on a cycle.
NodeSet ancestors(const DirectedGraph& g, Node i);
NodeSet descendants(const DirectedGraph& g, Node i);

bool is_dag(const DirectedGraph& g);

/// Kahn order; empty when the graph has a cycle (and n > 0).
std::vector<Node> topological_order(const DirectedGraph& g);

/// At most one directed path between every ordered pair of nodes. Cyclic
/// graphs are never strongly causal.
bool is_strongly_causal(const DirectedGraph& g);

/// Nodes k outside {i, j} with a path k -> i avoiding j and a path k -> j
/// avoiding i.
NodeSet confounders(const DirectedGraph& g, Node i, Node j);

/// Longest path length from any parent-less node; requires a DAG.
std::vector<std::size_t> depths(const DirectedGraph& g);

/// Uniform random labelled tree (Pruefer decoding) with every edge directed
/// from the lower to the higher index.
DirectedGraph random_scg(std::size_t n, Rng& rng);
DirectedGraph random_scg(std::size_t n, std::uint64_t seed);

/// Erdos-Renyi graph on pairs i < j with each edge i -> j present with
/// probability q.
DirectedGraph random_dag(std::size_t n, double q, Rng& rng);
DirectedGraph random_dag(std::size_t n, double q, std::uint64_t seed);

}  // namespace gcnet
