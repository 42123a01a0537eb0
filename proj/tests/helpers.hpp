#pragma once

// Shared fixtures, random generators and independent oracles for the test
// suites. Oracles are written against dense data with explicit loops so they
// share no code path with the library implementations they check.

#include <Eigen/Dense>
#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include <sdpprep/sdpprep.hpp>

namespace testutil {

using namespace sdpprep;

// min X22 s.t. X33 = 0, X22 + 2 X13 = 1, X psd over S^3; optimum 1, dual
// optimum 0, Slater fails.
inline SdpProblem example_232() {
  SdpProblem p;
  p.n = 3;
  p.m = 2;
  p.blocks = {3};
  p.objective = SymSparseMatrix::from_entries(3, {{2, 2, 1.0}});
  p.constraints = {SymSparseMatrix::from_entries(3, {{3, 3, 1.0}}),
                   SymSparseMatrix::from_entries(3, {{2, 2, 1.0}, {1, 3, 1.0}})};
  p.rhs = {0.0, 1.0};
  p.provenance = "worked example";
  p.sense = DataSense::primal;
  return p;
}

// min x over x, y >= 0 with x - y = 0 and x + y = 0: feasible set {0}.
// The single-constraint encoding admits no reducing certificate (diag(1,-1)
// is never psd for y != 0); the two-constraint form exposes the {0} face.
inline SdpProblem intro_lp() {
  SdpProblem p;
  p.n = 2;
  p.m = 2;
  p.blocks = {-2};
  p.objective = SymSparseMatrix::from_entries(2, {{1, 1, 1.0}});
  p.constraints = {SymSparseMatrix::from_entries(2, {{1, 1, 1.0}, {2, 2, -1.0}}),
                   SymSparseMatrix::from_entries(2, {{1, 1, 1.0}, {2, 2, 1.0}})};
  p.rhs = {0.0, 0.0};
  p.sense = DataSense::primal;
  return p;
}

// LP as a diagonal block: min x1 s.t. x1 + x2 = 1, x >= 0; optimum 0.
inline SdpProblem lp_simple() {
  SdpProblem p;
  p.n = 2;
  p.m = 1;
  p.blocks = {-2};
  p.objective = SymSparseMatrix::from_entries(2, {{1, 1, 1.0}});
  p.constraints = {SymSparseMatrix::from_entries(2, {{1, 1, 1.0}, {2, 2, 1.0}})};
  p.rhs = {1.0};
  p.sense = DataSense::primal;
  return p;
}

// Goemans-Williamson relaxation of the unit triangle in minimization form:
// C = -L/4, diag X = 1. The optimum is -9/4.
inline SdpProblem maxcut_triangle() {
  SdpProblem p;
  p.n = 3;
  p.m = 3;
  p.blocks = {3};
  p.objective = SymSparseMatrix::from_entries(
      3, {{1, 1, -0.5}, {2, 2, -0.5}, {3, 3, -0.5},
          {1, 2, 0.25}, {1, 3, 0.25}, {2, 3, 0.25}});
  for (int i = 1; i <= 3; ++i)
    p.constraints.push_back(SymSparseMatrix::from_entries(3, {{i, i, 1.0}}));
  p.rhs = {1, 1, 1};
  p.sense = DataSense::primal;
  return p;
}

// By symmetry the optimal X of the triangle relaxation is circulant:
// X = (1-x) I + x J with eigenvalues 1+2x and 1-x (twice). Scan the
// parameter and minimize C.X = 1.5 x over the psd range.
inline double maxcut_triangle_scan(double step = 1e-4) {
  double best = 1e300;
  long count = static_cast<long>(2.0 / step);
  for (long k = 0; k <= count; ++k) {
    double x = -1.0 + k * step;
    if (1 + 2 * x < -1e-12 || 1 - x < -1e-12) continue;
    best = std::min(best, 1.5 * x);
  }
  return best;
}

// Strictly feasible banded instance: a dense PD point X0 defines consistent
// right-hand sides for random banded constraints; a trace row keeps the
// feasible set compact. Rows are normalized to O(1).
inline SdpProblem banded_strictly_feasible(int n, int bw, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  Eigen::MatrixXd R(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) R(i, j) = g(rng);
  Eigen::MatrixXd X0 = R * R.transpose() / n + Eigen::MatrixXd::Identity(n, n);

  SdpProblem p;
  p.n = n;
  p.blocks = {n};
  std::vector<MatEntry> c;
  for (int i = 1; i <= n; ++i)
    for (int j = i; j <= std::min(n, i + bw); ++j) c.push_back({i, j, g(rng)});
  p.objective = SymSparseMatrix::from_entries(n, std::move(c));

  std::uniform_int_distribution<int> pick_i(1, n);
  std::uniform_int_distribution<int> pick_w(0, bw);
  std::uniform_int_distribution<int> pick_m(3, 6);
  int m_extra = pick_m(rng);
  for (int k = 0; k < m_extra; ++k) {
    std::set<std::pair<int, int>> used;
    std::vector<MatEntry> ents;
    for (int tries = 0; tries < 3; ++tries) {
      int i = pick_i(rng);
      int j = std::min(n, i + pick_w(rng));
      if (used.insert({i, j}).second) ents.push_back({i, j, g(rng)});
    }
    auto A = SymSparseMatrix::from_entries(n, std::move(ents));
    p.rhs.push_back(A.inner_dense(X0));
    p.constraints.push_back(std::move(A));
  }
  std::vector<MatEntry> tr;
  for (int i = 1; i <= n; ++i) tr.push_back({i, i, 1.0});
  auto T = SymSparseMatrix::from_entries(n, std::move(tr));
  p.rhs.push_back(T.inner_dense(X0));
  p.constraints.push_back(std::move(T));
  p.m = static_cast<int>(p.constraints.size());
  for (int i = 0; i < p.m; ++i) {
    double s = std::max(1.0, std::abs(p.rhs[i]));
    for (auto& e : p.constraints[i].entries) e.value /= s;
    p.rhs[i] /= s;
  }
  p.sense = DataSense::primal;
  return p;
}

// Feasible but non-strictly-feasible instance: a rank-deficient psd point X0
// whose kernel is planted via zeroed coordinates (giving X_kk = 0 rows) and
// random directions (giving vv' exposing rows); generic rows are made
// consistent with X0.
inline SdpProblem planted_nonstrict(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  std::uniform_int_distribution<int> pick_k(1, 2);

  // The planted point has full rank on a face of dimension >= 3. Anything
  // less leaves the generic rows nearly parallel once the face is split off,
  // where their rounded right-hand sides can no longer be distinguished from
  // a genuinely empty face at solver precision.
  int zeroed = std::min(pick_k(rng), std::max(1, n - 4));
  int extra = std::min(pick_k(rng), std::max(0, n - zeroed - 3));
  int rank = n - zeroed - extra;
  Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(n, rank);
  for (int i = zeroed; i < n; ++i)
    for (int j = 0; j < rank; ++j) Z(i, j) = g(rng);
  Eigen::MatrixXd X0 = Z * Z.transpose() / n;

  SdpProblem p;
  p.n = n;
  p.blocks = {n};
  p.objective = SymSparseMatrix::from_entries(n, {{1, std::min(2, n), 1.0}});

  // planted diagonal faces X_kk = 0
  for (int k = 1; k <= zeroed; ++k) {
    p.constraints.push_back(SymSparseMatrix::from_entries(n, {{k, k, 1.0}}));
    p.rhs.push_back(0.0);
  }
  // planted exposing combinations <vv', X> = 0 with v in the kernel of X0
  Eigen::FullPivLU<Eigen::MatrixXd> lu(Z.transpose());
  Eigen::MatrixXd kernel = lu.kernel();  // columns span ker(Z') = ker(X0)
  for (int k = 0; k < extra + 1 && k < kernel.cols(); ++k) {
    Eigen::VectorXd v = kernel.col(k).normalized();
    Eigen::MatrixXd Vv = v * v.transpose();
    std::vector<MatEntry> ents;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        if (std::abs(Vv(i, j)) > 1e-12) ents.push_back({i + 1, j + 1, Vv(i, j)});
    p.constraints.push_back(SymSparseMatrix::from_entries(n, std::move(ents)));
    p.rhs.push_back(0.0);
  }
  // generic consistent rows; right-hand sides near zero would put the
  // instance on the certificate-tolerance boundary (an entry like
  // <A, X0> ~ 1e-5 is indistinguishable from a genuine face at solver
  // precision), so keep them well away from it
  std::uniform_int_distribution<int> pick_i(1, n);
  for (int k = 0; k < 2; ++k) {
    for (int attempt = 0; attempt < 50; ++attempt) {
      std::set<std::pair<int, int>> used;
      std::vector<MatEntry> ents;
      for (int tries = 0; tries < 3; ++tries) {
        int i = pick_i(rng), j = pick_i(rng);
        if (i > j) std::swap(i, j);
        if (used.insert({i, j}).second) ents.push_back({i, j, g(rng)});
      }
      auto A = SymSparseMatrix::from_entries(n, std::move(ents));
      double b = A.inner_dense(X0);
      if (std::abs(b) < 0.05) continue;
      p.rhs.push_back(b);
      p.constraints.push_back(std::move(A));
      break;
    }
  }
  p.m = static_cast<int>(p.constraints.size());
  for (int i = 0; i < p.m; ++i) {
    double s = std::max(1.0, std::abs(p.rhs[i]));
    for (auto& e : p.constraints[i].entries) e.value /= s;
    p.rhs[i] /= s;
  }
  p.sense = DataSense::primal;
  return p;
}

inline SdpProblem random_sparse_problem(int n, int m, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  std::uniform_int_distribution<int> pick(1, n);
  auto random_matrix = [&]() {
    std::set<std::pair<int, int>> used;
    std::vector<MatEntry> ents;
    int nnz = 1 + static_cast<int>(rng() % 4);
    for (int t = 0; t < nnz; ++t) {
      int i = pick(rng), j = pick(rng);
      if (i > j) std::swap(i, j);
      if (used.insert({i, j}).second) ents.push_back({i, j, g(rng)});
    }
    return SymSparseMatrix::from_entries(n, std::move(ents));
  };
  SdpProblem p;
  p.n = n;
  p.m = m;
  p.blocks = {n};
  p.objective = random_matrix();
  for (int i = 0; i < m; ++i) {
    p.constraints.push_back(random_matrix());
    p.rhs.push_back(g(rng));
  }
  p.sense = DataSense::primal;
  return p;
}

inline Eigen::MatrixXd random_orthonormal(int rows, int cols, std::mt19937& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd M(rows, rows);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < rows; ++j) M(i, j) = g(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(M);
  Eigen::MatrixXd Q = qr.householderQ();
  return Q.leftCols(cols);
}

inline Eigen::MatrixXd random_symmetric(int n, std::mt19937& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd M(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M(i, j) = g(rng);
  return 0.5 * (M + M.transpose());
}

// Dense reference for evaluate(): plain quadruple loop over full matrices.
inline std::pair<double, std::vector<double>> dense_eval_oracle(
    const SdpProblem& p, const Eigen::MatrixXd& X) {
  auto full_inner = [&](const Eigen::MatrixXd& A) {
    double s = 0;
    for (int i = 0; i < p.n; ++i)
      for (int j = 0; j < p.n; ++j) s += A(i, j) * X(i, j);
    return s;
  };
  double obj = full_inner(p.objective.to_dense());
  std::vector<double> res;
  for (int i = 0; i < p.m; ++i)
    res.push_back(full_inner(p.constraints[i].to_dense()) - p.rhs[i]);
  return {obj, res};
}

// Triple-loop oracle for the aggregate sparsity pattern.
inline std::set<std::pair<int, int>> aggregate_oracle(const SdpProblem& p) {
  std::set<std::pair<int, int>> edges;
  auto scan = [&](const Eigen::MatrixXd& A) {
    for (int j = 0; j < p.n; ++j)
      for (int k = 0; k < p.n; ++k)
        if (j != k && A(j, k) != 0.0)
          edges.insert({std::min(j, k) + 1, std::max(j, k) + 1});
  };
  scan(p.objective.to_dense());
  for (const auto& a : p.constraints) scan(a.to_dense());
  return edges;
}

// Exhaustive maximal-clique enumeration over vertex bitmasks (n <= 20).
inline std::set<std::vector<int>> brute_force_cliques(const SparsityGraph& g) {
  int n = g.n;
  std::vector<std::uint32_t> nbr(n + 1, 0);
  for (auto [a, b] : g.edges) {
    nbr[a] |= 1u << (b - 1);
    nbr[b] |= 1u << (a - 1);
  }
  auto is_clique = [&](std::uint32_t mask) {
    for (int v = 1; v <= n; ++v)
      if (mask & (1u << (v - 1)))
        if ((mask & ~(nbr[v] | (1u << (v - 1)))) != 0) return false;
    return true;
  };
  std::vector<std::uint32_t> cliques;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask)
    if (is_clique(mask)) cliques.push_back(mask);
  std::set<std::vector<int>> maximal;
  for (std::uint32_t a : cliques) {
    bool contained = false;
    for (std::uint32_t b : cliques)
      if (a != b && (a & ~b) == 0) {
        contained = true;
        break;
      }
    if (!contained) {
      std::vector<int> verts;
      for (int v = 1; v <= n; ++v)
        if (a & (1u << (v - 1))) verts.push_back(v);
      maximal.insert(verts);
    }
  }
  return maximal;
}

inline SparsityGraph random_graph(int n, double density, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<std::pair<int, int>> edges;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      if (u(rng) < density) edges.emplace_back(i, j);
  return SparsityGraph::from_edges(n, std::move(edges));
}

// Independent elimination-fill counter: set-based simulation, used to
// enumerate orderings for the minimum-fill oracle on tiny graphs.
inline int fill_count_of_order(const SparsityGraph& g, const std::vector<int>& order) {
  std::vector<std::set<int>> adj(g.n + 1);
  for (auto [a, b] : g.edges) {
    adj[a].insert(b);
    adj[b].insert(a);
  }
  std::set<int> done;
  int fill = 0;
  for (int v : order) {
    std::vector<int> active;
    for (int w : adj[v])
      if (!done.count(w)) active.push_back(w);
    for (std::size_t a = 0; a < active.size(); ++a)
      for (std::size_t b = a + 1; b < active.size(); ++b)
        if (!adj[active[a]].count(active[b])) {
          adj[active[a]].insert(active[b]);
          adj[active[b]].insert(active[a]);
          ++fill;
        }
    done.insert(v);
  }
  return fill;
}

}  // namespace testutil
