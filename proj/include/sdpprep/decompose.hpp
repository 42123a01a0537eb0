#pragma once

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sdpprep/chordal.hpp"
#include "sdpprep/problem.hpp"

namespace sdpprep {

// Everything needed to map per-clique block solutions back onto the original
// filled pattern. Clique indices are 0-based, vertex indices 1-based.
struct DecompositionMap {
  struct Overlap {
    int s = 0, t = 0;  // clique-tree edge
    int i = 0, j = 0;  // shared position, i <= j, both vertices in the separator

    friend bool operator==(const Overlap&, const Overlap&) = default;
  };

  int original_n = 0;
  std::vector<std::vector<int>> cliques;  // sorted vertex lists (sigma_s is the rank)
  std::vector<int> block_sizes;
  // filled-pattern positions with their owning clique, sorted by (i, j)
  std::vector<std::pair<std::pair<int, int>, int>> owners;
  std::vector<Overlap> overlaps;  // ordered by (tree-edge index, i, j)

  // sigma_s: 0-based local index of an original vertex within clique s.
  int local_index(int s, int vertex) const {
    const auto& K = cliques[s];
    auto it = std::lower_bound(K.begin(), K.end(), vertex);
    if (it == K.end() || *it != vertex)
      throw Error("DecompositionMap: vertex " + std::to_string(vertex) +
                  " not in clique " + std::to_string(s));
    return static_cast<int>(it - K.begin());
  }

  // Owning clique of filled-pattern position (i, j), or -1.
  int owner_of(int i, int j) const {
    if (i > j) std::swap(i, j);
    auto it = std::lower_bound(owners.begin(), owners.end(),
                               std::pair(std::pair(i, j), -1));
    if (it == owners.end() || it->first != std::pair(i, j)) return -1;
    return it->second;
  }
};

struct DecomposedProblem {
  SdpProblem problem;  // clique blocks; m split constraints then overlaps
  DecompositionMap map;
};

// Clique-wise block reformulation: each constraint entry lands in its owner
// clique's block, and every separator position gets one equality tying the
// two adjacent blocks together. Total constraints:
//   m + sum over tree edges of |Q|(|Q|+1)/2.
inline DecomposedProblem decompose(const SdpProblem& p, const CliqueTree& tree) {
  p.validate();
  DecompositionMap map;
  map.original_n = p.n;
  map.cliques = tree.cliques;
  const int l = static_cast<int>(tree.cliques.size());

  map.block_sizes.resize(l);
  std::vector<int> local_offset(l + 1, 0);
  for (int s = 0; s < l; ++s) {
    map.block_sizes[s] = static_cast<int>(tree.cliques[s].size());
    local_offset[s + 1] = local_offset[s] + map.block_sizes[s];
  }

  // owner(i, j) = first clique containing both endpoints
  std::map<std::pair<int, int>, int> owner;
  for (int s = 0; s < l; ++s) {
    const auto& K = tree.cliques[s];
    for (std::size_t a = 0; a < K.size(); ++a)
      for (std::size_t b = a; b < K.size(); ++b)
        owner.try_emplace({K[a], K[b]}, s);
  }
  map.owners.assign(owner.begin(), owner.end());

  SdpProblem out;
  out.n = local_offset[l];
  out.blocks = map.block_sizes;
  out.provenance = p.provenance.empty() ? "clique-split" : p.provenance + " [clique-split]";
  out.sense = p.sense;

  auto place = [&](const SymSparseMatrix& a, const char* what) {
    std::vector<MatEntry> ents;
    ents.reserve(a.entries.size());
    for (const auto& e : a.entries) {
      auto it = owner.find({e.row, e.col});
      if (it == owner.end())
        throw Error(std::string(what) + " entry (" + std::to_string(e.row) + "," +
                    std::to_string(e.col) + ") lies outside every clique");
      int s = it->second;
      // vertices are sorted within a clique, so sigma preserves order
      int li = map.local_index(s, e.row), lj = map.local_index(s, e.col);
      ents.push_back({local_offset[s] + li + 1, local_offset[s] + lj + 1, e.value});
    }
    return SymSparseMatrix::from_entries(out.n, std::move(ents));
  };

  out.objective = place(p.objective, "objective");
  for (int i = 0; i < p.m; ++i) {
    out.constraints.push_back(place(p.constraints[i], "constraint"));
    out.rhs.push_back(p.rhs[i]);
  }

  // overlap equalities E_{s,ij}.X_s - E_{t,ij}.X_t = 0 for separator
  // positions, including the diagonal (i = j)
  for (const auto& edge : tree.tree_edges) {
    const auto& Q = edge.separator;
    for (std::size_t a = 0; a < Q.size(); ++a)
      for (std::size_t b = a; b < Q.size(); ++b) {
        int i = Q[a], j = Q[b];
        map.overlaps.push_back({edge.s, edge.t, i, j});
        double w = (i == j) ? 1.0 : 0.5;
        std::vector<MatEntry> ents;
        int si = map.local_index(edge.s, i), sj = map.local_index(edge.s, j);
        int ti = map.local_index(edge.t, i), tj = map.local_index(edge.t, j);
        ents.push_back({local_offset[edge.s] + si + 1, local_offset[edge.s] + sj + 1, w});
        ents.push_back({local_offset[edge.t] + ti + 1, local_offset[edge.t] + tj + 1, -w});
        out.constraints.push_back(SymSparseMatrix::from_entries(out.n, std::move(ents)));
        out.rhs.push_back(0.0);
      }
  }
  out.m = static_cast<int>(out.constraints.size());
  out.validate();
  return {std::move(out), std::move(map)};
}

// Assemble block solutions onto the original filled pattern. Blocks must
// agree on separator positions within `tol`; the worst offender is reported.
inline SymSparseMatrix recover_solution(const std::vector<Eigen::MatrixXd>& block_X,
                                        const DecompositionMap& map,
                                        double tol = 1e-6) {
  if (block_X.size() != map.cliques.size())
    throw Error("recover_solution: block count mismatch");
  for (std::size_t s = 0; s < block_X.size(); ++s)
    if (block_X[s].rows() != map.block_sizes[s] || block_X[s].cols() != map.block_sizes[s])
      throw Error("recover_solution: block " + std::to_string(s) + " has wrong size");

  double worst = 0;
  const DecompositionMap::Overlap* worst_at = nullptr;
  for (const auto& ov : map.overlaps) {
    double vs = block_X[ov.s](map.local_index(ov.s, ov.i), map.local_index(ov.s, ov.j));
    double vt = block_X[ov.t](map.local_index(ov.t, ov.i), map.local_index(ov.t, ov.j));
    double d = std::abs(vs - vt);
    if (d > worst) {
      worst = d;
      worst_at = &ov;
    }
  }
  if (worst > tol && worst_at)
    throw Error("recover_solution: blocks disagree on position (" +
                std::to_string(worst_at->i) + "," + std::to_string(worst_at->j) +
                ") by " + std::to_string(worst) + " (tolerance " +
                std::to_string(tol) + ")");

  SymSparseMatrix X(map.original_n);
  X.entries.reserve(map.owners.size());
  for (const auto& [pos, s] : map.owners) {
    auto [i, j] = pos;
    X.entries.push_back(
        {i, j, block_X[s](map.local_index(s, i), map.local_index(s, j))});
  }
  X.validate();
  return X;
}

inline int overlap_constraint_count(const CliqueTree& tree) {
  int c = 0;
  for (const auto& e : tree.tree_edges) {
    int q = static_cast<int>(e.separator.size());
    c += q * (q + 1) / 2;
  }
  return c;
}

// --- sidecar serialization (JSON) ---

inline void save_map(const DecompositionMap& map, std::ostream& out) {
  nlohmann::json j;
  j["format"] = "sdpprep-map";
  j["version"] = 1;
  j["n"] = map.original_n;
  j["cliques"] = map.cliques;
  auto& owners = j["owners"] = nlohmann::json::array();
  for (const auto& [pos, s] : map.owners)
    owners.push_back({{"i", pos.first}, {"j", pos.second}, {"s", s}});
  auto& ovl = j["overlaps"] = nlohmann::json::array();
  for (const auto& o : map.overlaps)
    ovl.push_back({{"s", o.s}, {"t", o.t}, {"i", o.i}, {"j", o.j}});
  out << j.dump(1) << "\n";
}

inline DecompositionMap load_map(std::istream& in) {
  try {
    nlohmann::json j;
    in >> j;
    if (j.value("format", "") != "sdpprep-map")
      throw Error("map sidecar: unrecognized format tag");
    DecompositionMap map;
    map.original_n = j.at("n").get<int>();
    map.cliques = j.at("cliques").get<std::vector<std::vector<int>>>();
    for (const auto& K : map.cliques)
      map.block_sizes.push_back(static_cast<int>(K.size()));
    for (const auto& o : j.at("owners"))
      map.owners.push_back({{o.at("i").get<int>(), o.at("j").get<int>()}, o.at("s").get<int>()});
    for (const auto& o : j.at("overlaps"))
      map.overlaps.push_back({o.at("s").get<int>(), o.at("t").get<int>(),
                              o.at("i").get<int>(), o.at("j").get<int>()});
    return map;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("map sidecar: ") + e.what());
  }
}

}  // namespace sdpprep
