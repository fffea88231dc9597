#include "mpmo/graph.hpp"

#include <algorithm>
#include <boost/pending/disjoint_sets.hpp>
#include <set>
#include <string>

#include "mpmo/error.hpp"

namespace mpmo {

using boost::multiprecision::cpp_int;

namespace {

thread_local std::uint64_t g_edge_union_calls = 0;

struct Neighbor {
  int vertex;
  EdgeId edge;
};

std::vector<std::vector<Neighbor>> adjacency(int n_vertices, std::span<const EdgeId> ids,
                                             const MultiWeightedGraph& g) {
  std::vector<std::vector<Neighbor>> adj(static_cast<std::size_t>(n_vertices));
  for (EdgeId id : ids) {
    const Edge& e = g.edge(id);
    adj[e.u].push_back({e.v, id});
    adj[e.v].push_back({e.u, id});
  }
  return adj;
}

bool spans_connected(int n_vertices, std::span<const EdgeId> ids, const MultiWeightedGraph& g) {
  boost::disjoint_sets_with_storage<> sets(static_cast<std::size_t>(n_vertices));
  for (int v = 0; v < n_vertices; ++v) sets.make_set(v);
  int components = n_vertices;
  for (EdgeId id : ids) {
    const Edge& e = g.edge(id);
    if (sets.find_set(e.u) != sets.find_set(e.v)) {
      sets.link(sets.find_set(e.u), sets.find_set(e.v));
      --components;
    }
  }
  return components <= 1;
}

bool is_forest(int n_vertices, std::span<const EdgeId> ids, const MultiWeightedGraph& g) {
  boost::disjoint_sets_with_storage<> sets(static_cast<std::size_t>(n_vertices));
  for (int v = 0; v < n_vertices; ++v) sets.make_set(v);
  for (EdgeId id : ids) {
    const Edge& e = g.edge(id);
    if (sets.find_set(e.u) == sets.find_set(e.v)) return false;
    sets.link(sets.find_set(e.u), sets.find_set(e.v));
  }
  return true;
}

void check_ids(std::span<const EdgeId> ids, const MultiWeightedGraph& g, const char* what) {
  for (EdgeId id : ids) {
    require(id >= 0 && id < g.n_edges(), std::string(what) + ": edge id out of range");
  }
}

}  // namespace

MultiWeightedGraph::MultiWeightedGraph(int n_vertices, std::vector<Edge> edges, std::int64_t w_max)
    : n_vertices_(n_vertices), edges_(std::move(edges)), w_max_(w_max) {
  require(n_vertices >= 1, "graph: needs at least one vertex");
  require(w_max >= 1, "graph: w_max must be positive");
  std::set<std::pair<int, int>> seen;
  for (const Edge& e : edges_) {
    require(e.u >= 0 && e.u < n_vertices && e.v >= 0 && e.v < n_vertices, "graph: endpoint out of range");
    require(e.u != e.v, "graph: self-loop");
    require(seen.insert(std::minmax(e.u, e.v)).second, "graph: parallel edge");
    for (auto w : e.w) require(w >= 1 && w <= w_max, "graph: weight outside [1, w_max]");
  }
  std::vector<EdgeId> all(edges_.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<EdgeId>(i);
  require(spans_connected(n_vertices, all, *this), "graph: not connected");
}

SpanningTree::SpanningTree(std::vector<EdgeId> ids) : edge_ids(std::move(ids)) {
  std::sort(edge_ids.begin(), edge_ids.end());
}

Subgraph full_subgraph(const MultiWeightedGraph& g) {
  Subgraph h{g.n_vertices(), std::vector<EdgeId>(static_cast<std::size_t>(g.n_edges()))};
  for (int i = 0; i < g.n_edges(); ++i) h.edge_ids[i] = i;
  return h;
}

bool is_spanning_tree(const SpanningTree& t, const MultiWeightedGraph& g) {
  if (static_cast<int>(t.edge_ids.size()) != g.n_vertices() - 1) return false;
  for (std::size_t i = 0; i < t.edge_ids.size(); ++i) {
    const EdgeId id = t.edge_ids[i];
    if (id < 0 || id >= g.n_edges()) return false;
    if (i > 0 && t.edge_ids[i - 1] >= id) return false;
  }
  return spans_connected(g.n_vertices(), t.edge_ids, g);
}

bool is_connected(const Subgraph& h, const MultiWeightedGraph& g) {
  check_ids(h.edge_ids, g, "is_connected");
  return spans_connected(h.n_vertices, h.edge_ids, g);
}

JointVector joint_vector(const SpanningTree& t, const MultiWeightedGraph& g) {
  JointVector y{};
  for (EdgeId id : t.edge_ids) {
    const EdgeWeights& w = g.edge(id).w;
    for (std::size_t j = 0; j < 4; ++j) y[j] += w[j];
  }
  return y;
}

TreeObjectives tree_objectives(const SpanningTree& t, const MultiWeightedGraph& g) {
  require(is_spanning_tree(t, g), "tree_objectives: not a spanning tree of the graph");
  const JointVector y = joint_vector(t, g);
  return {ObjectiveVector({y[0], y[1]}, Sense::Minimize), ObjectiveVector({y[2], y[3]}, Sense::Minimize), y};
}

SpanningTree one_edge_exchange(const SpanningTree& t, const MultiWeightedGraph& g, Rng& rng) {
  const int m = g.n_edges();
  const int non_tree = m - static_cast<int>(t.edge_ids.size());
  if (non_tree <= 0) return t;

  // The r-th edge id absent from the sorted tree list.
  auto r = static_cast<EdgeId>(rng.index(static_cast<std::size_t>(non_tree)));
  EdgeId added = 0;
  for (EdgeId id = 0, j = 0;; ++id) {
    if (j < static_cast<EdgeId>(t.edge_ids.size()) && t.edge_ids[j] == id) {
      ++j;
      continue;
    }
    if (r-- == 0) {
      added = id;
      break;
    }
  }

  // Tree path between the endpoints of the added edge.
  const auto adj = adjacency(g.n_vertices(), t.edge_ids, g);
  const Edge& e = g.edge(added);
  std::vector<EdgeId> via(static_cast<std::size_t>(g.n_vertices()), -1);
  std::vector<int> parent(static_cast<std::size_t>(g.n_vertices()), -1);
  std::vector<int> stack{e.u};
  parent[e.u] = e.u;
  while (!stack.empty()) {
    const int x = stack.back();
    stack.pop_back();
    if (x == e.v) break;
    for (const Neighbor& nb : adj[x]) {
      if (parent[nb.vertex] == -1) {
        parent[nb.vertex] = x;
        via[nb.vertex] = nb.edge;
        stack.push_back(nb.vertex);
      }
    }
  }
  std::vector<EdgeId> cycle;
  for (int x = e.v; x != e.u; x = parent[x]) cycle.push_back(via[x]);

  const EdgeId removed = cycle[rng.index(cycle.size())];
  std::vector<EdgeId> ids;
  ids.reserve(t.edge_ids.size());
  for (EdgeId id : t.edge_ids) {
    if (id != removed) ids.push_back(id);
  }
  ids.push_back(added);
  return SpanningTree(std::move(ids));
}

Subgraph edge_union(const SpanningTree& t_r, const SpanningTree& t_s, const MultiWeightedGraph& g) {
  ++g_edge_union_calls;
  Subgraph h{g.n_vertices(), {}};
  std::set_union(t_r.edge_ids.begin(), t_r.edge_ids.end(), t_s.edge_ids.begin(), t_s.edge_ids.end(),
                 std::back_inserter(h.edge_ids));
  return h;
}

std::uint64_t edge_union_calls() { return g_edge_union_calls; }

SpanningTree uniform_spanning_tree(const Subgraph& h, const MultiWeightedGraph& g, Rng& rng) {
  require(is_connected(h, g), "uniform_spanning_tree: subgraph is disconnected");
  const int n = h.n_vertices;
  const auto adj = adjacency(n, h.edge_ids, g);
  std::vector<char> in_tree(static_cast<std::size_t>(n), 0);
  std::vector<int> next(static_cast<std::size_t>(n), -1);
  std::vector<EdgeId> next_edge(static_cast<std::size_t>(n), -1);
  in_tree[0] = 1;
  std::vector<EdgeId> ids;
  ids.reserve(static_cast<std::size_t>(n > 0 ? n - 1 : 0));
  for (int start = 1; start < n; ++start) {
    for (int x = start; !in_tree[x]; x = next[x]) {
      const Neighbor& nb = adj[x][rng.index(adj[x].size())];
      next[x] = nb.vertex;
      next_edge[x] = nb.edge;
    }
    for (int x = start; !in_tree[x]; x = next[x]) {
      in_tree[x] = 1;
      ids.push_back(next_edge[x]);
    }
  }
  return SpanningTree(std::move(ids));
}

cpp_int count_spanning_trees(const Subgraph& h, const MultiWeightedGraph& g) {
  check_ids(h.edge_ids, g, "count_spanning_trees");
  const int n = h.n_vertices;
  if (n <= 1) return 1;
  // Laplacian with the last row and column removed.
  const auto dim = static_cast<std::size_t>(n - 1);
  std::vector<std::vector<cpp_int>> a(dim, std::vector<cpp_int>(dim, 0));
  for (EdgeId id : h.edge_ids) {
    const Edge& e = g.edge(id);
    const auto u = static_cast<std::size_t>(e.u);
    const auto v = static_cast<std::size_t>(e.v);
    if (u < dim) a[u][u] += 1;
    if (v < dim) a[v][v] += 1;
    if (u < dim && v < dim) {
      a[u][v] -= 1;
      a[v][u] -= 1;
    }
  }
  // Bareiss elimination.
  cpp_int previous = 1;
  int sign = 1;
  for (std::size_t k = 0; k < dim; ++k) {
    if (a[k][k] == 0) {
      std::size_t pivot = k + 1;
      while (pivot < dim && a[pivot][k] == 0) ++pivot;
      if (pivot == dim) return 0;
      std::swap(a[k], a[pivot]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < dim; ++i) {
      for (std::size_t j = k + 1; j < dim; ++j) {
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / previous;
      }
    }
    previous = a[k][k];
  }
  return sign * a[dim - 1][dim - 1];
}

std::vector<SpanningTree> enumerate_spanning_trees(const Subgraph& h, const MultiWeightedGraph& g,
                                                   std::size_t cap) {
  const cpp_int count = count_spanning_trees(h, g);
  if (count > cap) {
    throw RefusalError("enumerate_spanning_trees: " + count.str() + " spanning trees exceed the cap of " +
                       std::to_string(cap));
  }
  std::vector<SpanningTree> out;
  out.reserve(count.convert_to<std::size_t>());
  if (count == 0) return out;

  std::vector<EdgeId> edges = h.edge_ids;
  std::sort(edges.begin(), edges.end());
  const int n = h.n_vertices;
  const auto needed = static_cast<std::size_t>(n - 1);
  std::vector<EdgeId> chosen;

  // Include-first branching over edges in id order yields lexicographic output.
  auto recurse = [&](auto&& self, std::size_t pos) -> void {
    if (chosen.size() == needed) {
      out.emplace_back(chosen);
      return;
    }
    if (edges.size() - pos < needed - chosen.size()) return;
    std::vector<EdgeId> rest(chosen);
    rest.insert(rest.end(), edges.begin() + static_cast<std::ptrdiff_t>(pos), edges.end());
    if (!spans_connected(n, rest, g)) return;

    chosen.push_back(edges[pos]);
    if (is_forest(n, chosen, g)) self(self, pos + 1);
    chosen.pop_back();
    self(self, pos + 1);
  };
  recurse(recurse, 0);
  return out;
}

SpanningTree canonical_tree(std::span<const SpanningTree> candidates) {
  require(!candidates.empty(), "canonical_tree: empty candidate set");
  return *std::min_element(candidates.begin(), candidates.end(), canonical_less);
}

}  // namespace mpmo
