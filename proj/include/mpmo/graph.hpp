#ifndef MPMO_GRAPH_HPP
#define MPMO_GRAPH_HPP

#include <array>
#include <boost/multiprecision/cpp_int.hpp>
#include <compare>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "mpmo/dominance.hpp"
#include "mpmo/rng.hpp"

namespace mpmo {

using EdgeId = int;
/// (w11, w12, w21, w22): party-major edge weights.
using EdgeWeights = std::array<std::int64_t, 4>;
/// Y(T) = (f1 of party 1, f2 of party 1, f1 of party 2, f2 of party 2), minimized.
using JointVector = std::array<std::int64_t, 4>;
using PartyVector = std::array<std::int64_t, 2>;

struct Edge {
  int u = 0;
  int v = 0;
  EdgeWeights w{};
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Simple connected undirected graph with four positive weights per edge.
/// Edge ids are positions in the input list.
class MultiWeightedGraph {
 public:
  MultiWeightedGraph(int n_vertices, std::vector<Edge> edges, std::int64_t w_max);

  [[nodiscard]] int n_vertices() const { return n_vertices_; }
  [[nodiscard]] int n_edges() const { return static_cast<int>(edges_.size()); }
  [[nodiscard]] const std::vector<Edge>& edges() const { return edges_; }
  [[nodiscard]] const Edge& edge(EdgeId id) const { return edges_.at(static_cast<std::size_t>(id)); }
  [[nodiscard]] std::int64_t w_max() const { return w_max_; }
  /// W = (n-1) w_max, an upper bound on every tree objective.
  [[nodiscard]] std::int64_t weight_bound() const { return (n_vertices_ - 1) * w_max_; }

 private:
  int n_vertices_;
  std::vector<Edge> edges_;
  std::int64_t w_max_;
};

/// Edge ids of a spanning tree, kept sorted.
struct SpanningTree {
  std::vector<EdgeId> edge_ids;

  SpanningTree() = default;
  explicit SpanningTree(std::vector<EdgeId> ids);

  friend auto operator<=>(const SpanningTree&, const SpanningTree&) = default;
  friend bool operator==(const SpanningTree&, const SpanningTree&) = default;
};

/// Spanning subgraph of a host graph given by a sorted edge-id subset.
struct Subgraph {
  int n_vertices = 0;
  std::vector<EdgeId> edge_ids;
};

Subgraph full_subgraph(const MultiWeightedGraph& g);

bool is_spanning_tree(const SpanningTree& t, const MultiWeightedGraph& g);
bool is_connected(const Subgraph& h, const MultiWeightedGraph& g);

struct TreeObjectives {
  ObjectiveVector party1;
  ObjectiveVector party2;
  JointVector y{};
};

/// Throws ContractViolation if `t` is not a spanning tree of `g`.
TreeObjectives tree_objectives(const SpanningTree& t, const MultiWeightedGraph& g);
/// Unchecked weight sums.
JointVector joint_vector(const SpanningTree& t, const MultiWeightedGraph& g);

inline PartyVector party_vector(const JointVector& y, int party) {
  return party == 1 ? PartyVector{y[0], y[1]} : PartyVector{y[2], y[3]};
}

/// Adds a uniform non-tree edge and removes a uniform edge from the cycle it
/// closes, never the added one. Returns `t` when `g` has no non-tree edge.
SpanningTree one_edge_exchange(const SpanningTree& t, const MultiWeightedGraph& g, Rng& rng);

/// G[T_r ∪ T_s]. Each call increments edge_union_calls() for this thread.
Subgraph edge_union(const SpanningTree& t_r, const SpanningTree& t_s, const MultiWeightedGraph& g);
std::uint64_t edge_union_calls();

/// Wilson's loop-erased random walk; exactly uniform over spanning trees of h.
SpanningTree uniform_spanning_tree(const Subgraph& h, const MultiWeightedGraph& g, Rng& rng);

/// Laplacian cofactor via fraction-free elimination.
boost::multiprecision::cpp_int count_spanning_trees(const Subgraph& h, const MultiWeightedGraph& g);

/// All spanning trees of h in lexicographic order of their sorted edge ids.
/// Throws RefusalError when the count exceeds `cap`.
std::vector<SpanningTree> enumerate_spanning_trees(const Subgraph& h, const MultiWeightedGraph& g,
                                                   std::size_t cap);

/// Candidate whose sorted edge-id list is lexicographically smallest.
SpanningTree canonical_tree(std::span<const SpanningTree> candidates);

inline bool canonical_less(const SpanningTree& a, const SpanningTree& b) { return a.edge_ids < b.edge_ids; }

}  // namespace mpmo

#endif  // MPMO_GRAPH_HPP
