#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sdpprep/problem.hpp"

namespace sdpprep {

// Undirected graph on vertices 1..n, no self-loops.
struct SparsityGraph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;  // (j, k) with j < k, sorted, unique

  SparsityGraph() = default;
  explicit SparsityGraph(int n_) : n(n_) {}

  static SparsityGraph from_edges(int n, std::vector<std::pair<int, int>> raw) {
    for (auto& e : raw) {
      if (e.first == e.second) throw Error("SparsityGraph: self-loop");
      if (e.first > e.second) std::swap(e.first, e.second);
      if (e.first < 1 || e.second > n) throw Error("SparsityGraph: vertex out of range");
    }
    std::sort(raw.begin(), raw.end());
    raw.erase(std::unique(raw.begin(), raw.end()), raw.end());
    SparsityGraph g(n);
    g.edges = std::move(raw);
    return g;
  }

  std::vector<std::vector<bool>> adjacency_matrix() const {
    std::vector<std::vector<bool>> adj(n + 1, std::vector<bool>(n + 1, false));
    for (auto [j, k] : edges) adj[j][k] = adj[k][j] = true;
    return adj;
  }

  std::vector<std::vector<int>> adjacency_lists() const {
    std::vector<std::vector<int>> nbr(n + 1);
    for (auto [j, k] : edges) {
      nbr[j].push_back(k);
      nbr[k].push_back(j);
    }
    for (auto& v : nbr) std::sort(v.begin(), v.end());
    return nbr;
  }

  friend bool operator==(const SparsityGraph&, const SparsityGraph&) = default;
};

// Elimination order: position[v] is the step at which vertex v is eliminated
// (0-based); by_position lists vertices in elimination order.
struct Ordering {
  std::vector<int> by_position;  // by_position[k] = vertex eliminated at step k

  int n() const { return static_cast<int>(by_position.size()); }

  std::vector<int> positions() const {
    std::vector<int> pos(n() + 1, -1);
    for (int k = 0; k < n(); ++k) pos[by_position[k]] = k;
    return pos;
  }

  void validate() const {
    std::vector<bool> seen(n() + 1, false);
    for (int v : by_position) {
      if (v < 1 || v > n() || seen[v]) throw Error("Ordering: not a permutation");
      seen[v] = true;
    }
  }
};

inline Ordering identity_order(int n) {
  Ordering o;
  o.by_position.resize(n);
  std::iota(o.by_position.begin(), o.by_position.end(), 1);
  return o;
}

// Aggregate sparsity: an edge wherever the objective or any constraint has an
// off-diagonal nonzero. The objective participates so that the per-clique
// objective split covers every nonzero of C.
inline SparsityGraph aggregate_pattern(const SdpProblem& p) {
  std::vector<std::pair<int, int>> edges;
  auto scan = [&](const SymSparseMatrix& a) {
    for (const auto& e : a.entries)
      if (e.row != e.col) edges.emplace_back(e.row, e.col);
  };
  scan(p.objective);
  for (const auto& a : p.constraints) scan(a);
  return SparsityGraph::from_edges(p.n, std::move(edges));
}

// Exact minimum-degree elimination: repeatedly remove a vertex of minimum
// current degree (ties to the smallest index) and connect its neighbors.
inline Ordering min_degree_order(const SparsityGraph& g) {
  int n = g.n;
  auto adj = g.adjacency_matrix();
  std::vector<int> degree(n + 1, 0);
  for (auto [j, k] : g.edges) {
    ++degree[j];
    ++degree[k];
  }
  std::vector<bool> eliminated(n + 1, false);
  Ordering order;
  order.by_position.reserve(n);

  for (int step = 0; step < n; ++step) {
    int best = -1;
    for (int v = 1; v <= n; ++v)
      if (!eliminated[v] && (best == -1 || degree[v] < degree[best])) best = v;

    std::vector<int> nbrs;
    for (int w = 1; w <= n; ++w)
      if (!eliminated[w] && w != best && adj[best][w]) nbrs.push_back(w);
    for (std::size_t a = 0; a < nbrs.size(); ++a)
      for (std::size_t b = a + 1; b < nbrs.size(); ++b)
        if (!adj[nbrs[a]][nbrs[b]]) {
          adj[nbrs[a]][nbrs[b]] = adj[nbrs[b]][nbrs[a]] = true;
          ++degree[nbrs[a]];
          ++degree[nbrs[b]];
        }
    for (int w : nbrs) --degree[w];
    eliminated[best] = true;
    order.by_position.push_back(best);
  }
  return order;
}

// Symbolic elimination fill: processing vertices in `order`, connect each
// vertex's not-yet-eliminated neighbors pairwise. The result is chordal and
// `order` is a perfect elimination ordering for it.
inline SparsityGraph chordal_extension(const SparsityGraph& g, const Ordering& order) {
  if (order.n() != g.n) throw Error("chordal_extension: ordering size mismatch");
  order.validate();
  int n = g.n;
  auto adj = g.adjacency_matrix();
  auto pos = order.positions();
  std::vector<std::pair<int, int>> filled = g.edges;

  for (int step = 0; step < n; ++step) {
    int v = order.by_position[step];
    std::vector<int> later;
    for (int w = 1; w <= n; ++w)
      if (adj[v][w] && pos[w] > step) later.push_back(w);
    for (std::size_t a = 0; a < later.size(); ++a)
      for (std::size_t b = a + 1; b < later.size(); ++b)
        if (!adj[later[a]][later[b]]) {
          adj[later[a]][later[b]] = adj[later[b]][later[a]] = true;
          filled.emplace_back(std::min(later[a], later[b]),
                              std::max(later[a], later[b]));
        }
  }
  return SparsityGraph::from_edges(n, std::move(filled));
}

inline bool is_perfect_elimination_ordering(const SparsityGraph& g,
                                            const Ordering& order) {
  if (order.n() != g.n) return false;
  auto adj = g.adjacency_matrix();
  auto pos = order.positions();
  for (int step = 0; step < g.n; ++step) {
    int v = order.by_position[step];
    std::vector<int> later;
    for (int w = 1; w <= g.n; ++w)
      if (adj[v][w] && pos[w] > step) later.push_back(w);
    for (std::size_t a = 0; a < later.size(); ++a)
      for (std::size_t b = a + 1; b < later.size(); ++b)
        if (!adj[later[a]][later[b]]) return false;
  }
  return true;
}

// Maximum cardinality search. The reverse visit order is a perfect
// elimination ordering iff the graph is chordal; this is the independent
// chordality check used against the symbolic-elimination path.
inline std::optional<Ordering> mcs_perfect_elimination_order(const SparsityGraph& g) {
  int n = g.n;
  auto nbr = g.adjacency_lists();
  std::vector<int> weight(n + 1, 0);
  std::vector<bool> visited(n + 1, false);
  std::vector<int> visit_order;
  visit_order.reserve(n);
  for (int step = 0; step < n; ++step) {
    int best = -1;
    for (int v = 1; v <= n; ++v)
      if (!visited[v] && (best == -1 || weight[v] > weight[best])) best = v;
    visited[best] = true;
    visit_order.push_back(best);
    for (int w : nbr[best])
      if (!visited[w]) ++weight[w];
  }
  Ordering order;
  order.by_position.assign(visit_order.rbegin(), visit_order.rend());
  if (!is_perfect_elimination_ordering(g, order)) return std::nullopt;
  return order;
}

inline bool is_chordal(const SparsityGraph& g) {
  return mcs_perfect_elimination_order(g).has_value();
}

// Maximal cliques of a chordal graph from a perfect elimination ordering:
// K_v = {v} + later neighbors, kept iff contained in no other K_w.
inline std::vector<std::vector<int>> maximal_cliques(const SparsityGraph& filled,
                                                     const Ordering& order) {
  if (order.n() != filled.n) throw Error("maximal_cliques: ordering size mismatch");
  int n = filled.n;
  auto adj = filled.adjacency_matrix();
  auto pos = order.positions();

  std::vector<std::vector<int>> cand(n);
  for (int step = 0; step < n; ++step) {
    int v = order.by_position[step];
    std::vector<int>& K = cand[step];
    K.push_back(v);
    for (int w = 1; w <= n; ++w)
      if (adj[v][w] && pos[w] > step) K.push_back(w);
    for (std::size_t a = 0; a < K.size(); ++a)
      for (std::size_t b = a + 1; b < K.size(); ++b)
        if (!adj[K[a]][K[b]])
          throw Error("maximal_cliques: order is not a perfect elimination ordering");
    std::sort(K.begin(), K.end());
  }

  // bitmask subset tests
  int words = (n + 64) / 64;
  std::vector<std::vector<std::uint64_t>> mask(n, std::vector<std::uint64_t>(words, 0));
  for (int s = 0; s < n; ++s)
    for (int v : cand[s]) mask[s][v / 64] |= std::uint64_t(1) << (v % 64);
  auto subset = [&](int a, int b) {
    for (int w = 0; w < words; ++w)
      if (mask[a][w] & ~mask[b][w]) return false;
    return true;
  };

  // candidates are pairwise distinct (each K_v has v as its earliest vertex),
  // so non-maximality means a strictly larger candidate contains K_v
  std::vector<std::vector<int>> cliques;
  for (int s = 0; s < n; ++s) {
    bool maximal = true;
    for (int t = 0; t < n && maximal; ++t)
      if (t != s && cand[t].size() > cand[s].size() && subset(s, t)) maximal = false;
    if (maximal) cliques.push_back(cand[s]);
  }
  return cliques;
}

struct CliqueTreeEdge {
  int s = 0;
  int t = 0;
  std::vector<int> separator;  // sorted C_s intersect C_t; empty for the
                               // bookkeeping edges that join components
};

struct CliqueTree {
  std::vector<std::vector<int>> cliques;  // sorted vertex lists
  std::vector<CliqueTreeEdge> tree_edges;
  SparsityGraph filled;  // chordal extension the cliques cover
};

namespace detail {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[std::max(a, b)] = std::min(a, b);
    return true;
  }
};

inline std::vector<int> sorted_intersection(const std::vector<int>& a,
                                            const std::vector<int>& b) {
  std::vector<int> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return out;
}

}  // namespace detail

// Maximum-weight spanning tree of the clique intersection graph (weight =
// separator size). Disconnected inputs get empty-separator edges joining the
// component representatives so downstream code sees a single tree.
inline CliqueTree clique_tree(const std::vector<std::vector<int>>& cliques, int n) {
  int l = static_cast<int>(cliques.size());
  CliqueTree tree;
  tree.cliques = cliques;

  std::vector<std::pair<int, int>> filled_edges;
  for (const auto& K : cliques)
    for (std::size_t a = 0; a < K.size(); ++a)
      for (std::size_t b = a + 1; b < K.size(); ++b)
        filled_edges.emplace_back(K[a], K[b]);
  tree.filled = SparsityGraph::from_edges(n, std::move(filled_edges));

  struct Cand {
    int w, s, t;
  };
  std::vector<Cand> cands;
  for (int s = 0; s < l; ++s)
    for (int t = s + 1; t < l; ++t) {
      auto sep = detail::sorted_intersection(cliques[s], cliques[t]);
      if (!sep.empty()) cands.push_back({static_cast<int>(sep.size()), s, t});
    }
  std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
    return std::tuple(-a.w, a.s, a.t) < std::tuple(-b.w, b.s, b.t);
  });

  detail::UnionFind uf(l);
  for (const auto& c : cands)
    if (uf.unite(c.s, c.t))
      tree.tree_edges.push_back(
          {c.s, c.t, detail::sorted_intersection(cliques[c.s], cliques[c.t])});

  // join remaining components with empty separators
  for (int s = 1; s < l; ++s)
    if (uf.find(s) != uf.find(0)) {
      int root = uf.find(s);
      uf.unite(0, root);
      tree.tree_edges.push_back({0, root, {}});
    }
  return tree;
}

inline bool running_intersection_holds(const CliqueTree& tree, int n) {
  int l = static_cast<int>(tree.cliques.size());
  std::vector<std::vector<int>> nbr(l);
  for (const auto& e : tree.tree_edges) {
    nbr[e.s].push_back(e.t);
    nbr[e.t].push_back(e.s);
  }
  for (int v = 1; v <= n; ++v) {
    std::vector<char> contains(l, 0), seen(l, 0);
    int count = 0, start = -1;
    for (int s = 0; s < l; ++s)
      if (std::binary_search(tree.cliques[s].begin(), tree.cliques[s].end(), v)) {
        contains[s] = 1;
        ++count;
        start = s;
      }
    if (count <= 1) continue;
    // BFS within cliques containing v must reach all of them
    std::vector<int> queue{start};
    seen[start] = 1;
    int reached = 1;
    while (!queue.empty()) {
      int s = queue.back();
      queue.pop_back();
      for (int t : nbr[s])
        if (contains[t] && !seen[t]) {
          seen[t] = 1;
          ++reached;
          queue.push_back(t);
        }
    }
    if (reached != count) return false;
  }
  return true;
}

// Optional post-pass: greedily contract tree edges while the merged vertex
// set stays within `max_size`. The result is a junction tree whose nodes may
// no longer be maximal cliques of the filled graph.
inline CliqueTree merge_cliques(const CliqueTree& tree, int max_size) {
  std::vector<std::vector<int>> cliques = tree.cliques;
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : tree.tree_edges) edges.emplace_back(e.s, e.t);

  while (true) {
    int best = -1;
    std::size_t best_union = 0;
    for (std::size_t i = 0; i < edges.size(); ++i) {
      auto [s, t] = edges[i];
      std::vector<int> u;
      std::set_union(cliques[s].begin(), cliques[s].end(), cliques[t].begin(),
                     cliques[t].end(), std::back_inserter(u));
      if (static_cast<int>(u.size()) <= max_size &&
          (best == -1 || u.size() < best_union)) {
        best = static_cast<int>(i);
        best_union = u.size();
      }
    }
    if (best == -1) break;
    auto [s, t] = edges[best];
    if (s > t) std::swap(s, t);
    std::vector<int> u;
    std::set_union(cliques[s].begin(), cliques[s].end(), cliques[t].begin(),
                   cliques[t].end(), std::back_inserter(u));
    cliques[s] = u;
    cliques.erase(cliques.begin() + t);
    std::vector<std::pair<int, int>> next;
    for (std::size_t i = 0; i < edges.size(); ++i) {
      if (i == static_cast<std::size_t>(best)) continue;
      auto [a, b] = edges[i];
      if (a == t) a = s;
      if (b == t) b = s;
      if (a > t) --a;
      if (b > t) --b;
      if (a != b) next.emplace_back(std::min(a, b), std::max(a, b));
    }
    edges = std::move(next);
  }

  CliqueTree out;
  out.cliques = cliques;
  out.filled = tree.filled;
  for (auto [s, t] : edges)
    out.tree_edges.push_back({s, t, detail::sorted_intersection(cliques[s], cliques[t])});
  return out;
}

}  // namespace sdpprep
