#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "sdpprep/ipm.hpp"
#include "sdpprep/problem.hpp"

namespace sdpprep {

enum class CertMode { DiagonalLP, FullSdp };

inline const char* to_string(CertMode m) {
  return m == CertMode::DiagonalLP ? "DiagonalLP" : "FullSdp";
}

struct FacialOptions {
  double eps_rank = 1e-8;       // eigenvalue cut relative to lambda_max(S)
  double eps_psd = 1e-9;        // PSD slack relative to ||S||
  double cert_feas_tol = 1e-7;  // residual threshold for "a certificate exists"
  IpmOptions ipm;               // options for the auxiliary solves
};

// A reducing certificate: S = sum_i y_i A_i is psd, b.y = 0, trace S = 1.
struct Certificate {
  std::vector<double> y;
  SymSparseMatrix S;
  CertMode mode = CertMode::DiagonalLP;
};

struct FaceStage {
  Eigen::MatrixXd V;  // n_prev x n_next, column-orthonormal, block-aligned
  std::vector<int> prev_blocks;
  std::vector<int> next_blocks;
  std::vector<int> dropped_constraints;  // 0-based indices into the stage input
};

struct FaceTransform {
  int original_n = 0;
  std::vector<int> original_blocks;
  std::vector<FaceStage> stages;

  Eigen::MatrixXd total() const {
    if (stages.empty())
      return Eigen::MatrixXd::Identity(original_n, original_n);
    Eigen::MatrixXd M = stages.front().V;
    for (std::size_t k = 1; k < stages.size(); ++k) M = (M * stages[k].V).eval();
    return M;
  }

  int final_dim() const {
    return stages.empty() ? original_n : static_cast<int>(stages.back().V.cols());
  }

  const std::vector<int>& final_blocks() const {
    return stages.empty() ? original_blocks : stages.back().next_blocks;
  }
};

namespace facial_detail {

// Coordinates for the within-block upper triangle, with the sqrt(2) scaling
// that makes the coefficient-space dot product equal the matrix inner product.
struct CoordSpace {
  std::vector<int> row, col;                 // 1-based global, row <= col
  std::map<std::pair<int, int>, int> index;  // position -> coordinate

  static CoordSpace build(const SdpProblem& p) {
    CoordSpace cs;
    auto offsets = p.block_offsets();
    for (std::size_t k = 0; k < p.blocks.size(); ++k) {
      int d = std::abs(p.blocks[k]);
      bool diag = p.blocks[k] < 0;
      for (int a = 1; a <= d; ++a)
        for (int b = a; b <= (diag ? a : d); ++b) {
          cs.index[{offsets[k] + a, offsets[k] + b}] =
              static_cast<int>(cs.row.size());
          cs.row.push_back(offsets[k] + a);
          cs.col.push_back(offsets[k] + b);
        }
    }
    return cs;
  }

  int dim() const { return static_cast<int>(row.size()); }

  Eigen::VectorXd vectorize(const SymSparseMatrix& a) const {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(dim());
    for (const auto& e : a.entries) {
      auto it = index.find({e.row, e.col});
      if (it == index.end()) throw Error("vectorize: entry outside block structure");
      v[it->second] = e.value * (e.row == e.col ? 1.0 : std::sqrt(2.0));
    }
    return v;
  }
};

struct AuxRow {
  Eigen::VectorXd coeffs;  // in scaled coordinates
  double rhs = 0;
};

}  // namespace facial_detail

// Searches for a reducing certificate by solving the feasibility program
//   S in span{A_1..A_m},  b.y(S) = 0,  trace S = 1,  S psd
// as a phase-1 SDP over S (DiagonalLP restricts S to the diagonal, turning
// the search into an LP). Returns nullopt when the program is infeasible:
// under FullSdp that certifies, up to solver tolerance, that no reducing
// direction exists and the instance is strictly feasible.
inline std::optional<Certificate> find_certificate(const SdpProblem& p, CertMode mode,
                                                   const FacialOptions& fopts = {}) {
  using Eigen::MatrixXd;
  using Eigen::VectorXd;
  p.validate();
  if (p.m == 0 || p.n == 0) return std::nullopt;

  auto cs = facial_detail::CoordSpace::build(p);
  const int T = cs.dim();
  const int m = p.m;

  MatrixXd Amat(m, T);
  for (int i = 0; i < m; ++i) Amat.row(i) = cs.vectorize(p.constraints[i]).transpose();

  // orthonormal basis of the complement of span{A_i} in coefficient space
  MatrixXd gramT = Amat.transpose() * Amat;
  Eigen::SelfAdjointEigenSolver<MatrixXd> esT(gramT);
  double lmaxT = std::max(esT.eigenvalues().maxCoeff(), 0.0);
  double null_cut = std::max(lmaxT, 1.0) * 1e-12;

  // pseudo-inverse pieces of the m x m Gram for recovering y from S
  MatrixXd gramM = Amat * Amat.transpose();
  Eigen::SelfAdjointEigenSolver<MatrixXd> esM(gramM);
  double lmaxM = std::max(esM.eigenvalues().maxCoeff(), 0.0);
  double cutM = std::max(lmaxM, 1.0) * 1e-12;

  VectorXd b = Eigen::Map<const VectorXd>(p.rhs.data(), m);
  VectorXd w = VectorXd::Zero(m);
  VectorXd null_dir = VectorXd::Zero(m);
  double best_null_b = 0;
  for (int k = 0; k < m; ++k) {
    double lam = esM.eigenvalues()[k];
    const auto& u = esM.eigenvectors().col(k);
    if (lam > cutM) {
      w += (u.dot(b) / lam) * u;
    } else if (std::abs(u.dot(b)) > best_null_b) {
      best_null_b = std::abs(u.dot(b));
      null_dir = u;
    }
  }
  bool b_in_range = (gramM * w - b).cwiseAbs().maxCoeff() <= 1e-8 * (1 + b.cwiseAbs().maxCoeff());

  std::vector<facial_detail::AuxRow> rows;
  for (int k = 0; k < T; ++k)
    if (esT.eigenvalues()[k] <= null_cut)
      rows.push_back({esT.eigenvectors().col(k), 0.0});
  if (b_in_range) {
    VectorXd wrow = Amat.transpose() * w;  // <sum_i w_i A_i, S> = b.y(S)
    if (wrow.norm() > 1e-12) rows.push_back({wrow, 0.0});
  }
  {
    VectorXd tr = VectorXd::Zero(T);
    for (int k = 0; k < T; ++k)
      if (cs.row[k] == cs.col[k]) tr[k] = 1.0;
    rows.push_back({tr, 1.0});
  }

  // assemble the phase-1 problem: same blocks (diagonalized in DiagonalLP
  // mode) plus a 2K artificial LP block, minimizing the artificial mass
  SdpProblem aux;
  aux.blocks = p.blocks;
  if (mode == CertMode::DiagonalLP)
    for (int& s : aux.blocks) s = -std::abs(s);
  const double sqrt2 = std::sqrt(2.0);

  std::vector<facial_detail::AuxRow> kept;
  for (auto& r : rows) {
    if (mode == CertMode::DiagonalLP)
      for (int k = 0; k < T; ++k)
        if (cs.row[k] != cs.col[k]) r.coeffs[k] = 0;
    double norm = r.coeffs.norm();
    if (norm <= 1e-13) {
      if (std::abs(r.rhs) > 1e-13) return std::nullopt;  // unsatisfiable row
      continue;
    }
    r.coeffs /= norm;
    r.rhs /= norm;
    kept.push_back(std::move(r));
  }
  const int K = static_cast<int>(kept.size());
  aux.blocks.push_back(-2 * K);
  aux.n = p.n + 2 * K;
  aux.m = K;
  aux.provenance = "certificate probe";

  {
    std::vector<MatEntry> obj;
    for (int k = 0; k < 2 * K; ++k) obj.push_back({p.n + k + 1, p.n + k + 1, 1.0});
    aux.objective = SymSparseMatrix::from_entries(aux.n, std::move(obj));
  }
  for (int k = 0; k < K; ++k) {
    std::vector<MatEntry> ents;
    for (int c = 0; c < T; ++c) {
      double coef = kept[k].coeffs[c];
      if (std::abs(coef) <= 1e-15) continue;
      bool diag = cs.row[c] == cs.col[c];
      ents.push_back({cs.row[c], cs.col[c], diag ? coef : coef / sqrt2});
    }
    ents.push_back({p.n + k + 1, p.n + k + 1, 1.0});
    ents.push_back({p.n + K + k + 1, p.n + K + k + 1, -1.0});
    aux.constraints.push_back(SymSparseMatrix::from_entries(aux.n, std::move(ents)));
    aux.rhs.push_back(kept[k].rhs);
  }

  SolverResult r = solve(aux, fopts.ipm);
  if (r.status != SolverStatus::Optimal)
    throw SolverFailure(std::string("certificate probe failed: ") + to_string(r.status));
  if (r.pobj > fopts.cert_feas_tol) return std::nullopt;

  // read S off the solution and project back onto span{A_i} through y
  VectorXd vecS = VectorXd::Zero(T);
  {
    auto offsets = p.block_offsets();
    for (std::size_t k = 0; k < p.blocks.size(); ++k) {
      int d = std::abs(p.blocks[k]);
      const MatrixXd& B = r.X.block(k);
      bool diag = r.X.is_diag(k);
      for (int a = 0; a < d; ++a)
        for (int bcol = a; bcol < (diag ? a + 1 : d); ++bcol) {
          int idx = cs.index.at({offsets[k] + a + 1, offsets[k] + bcol + 1});
          double v = diag ? (a == bcol ? B(a, 0) : 0.0) : B(a, bcol);
          vecS[idx] = v * (a == bcol ? 1.0 : sqrt2);
        }
    }
  }
  VectorXd a_of_S = Amat * vecS;
  VectorXd y = VectorXd::Zero(m);
  for (int k = 0; k < m; ++k) {
    double lam = esM.eigenvalues()[k];
    if (lam > cutM) y += (esM.eigenvectors().col(k).dot(a_of_S) / lam) *
                         esM.eigenvectors().col(k);
  }
  if (!b_in_range && best_null_b > 1e-12 * (1 + b.cwiseAbs().maxCoeff()))
    y -= (b.dot(y) / b.dot(null_dir)) * null_dir;

  Certificate cert;
  cert.mode = mode;
  cert.y.assign(y.data(), y.data() + m);
  {
    std::map<std::pair<int, int>, double> acc;
    for (int i = 0; i < m; ++i)
      if (y[i] != 0.0)
        for (const auto& e : p.constraints[i].entries)
          acc[{e.row, e.col}] += y[i] * e.value;
    double amax = 0;
    for (const auto& [pos, v] : acc) amax = std::max(amax, std::abs(v));
    SymSparseMatrix S(p.n);
    for (const auto& [pos, v] : acc)
      if (std::abs(v) > 1e-14 * amax) S.entries.push_back({pos.first, pos.second, v});
    cert.S = std::move(S);
  }

  // soundness: psd within tolerance, b.y ~ 0, normalized away from zero
  BlockMat Sb = to_blockmat(cert.S, p.blocks);
  double lmin = Sb.min_eigenvalue();
  double tr = cert.S.trace();
  double bdoty = b.dot(y);
  double scale = std::max(cert.S.max_abs(), 1e-12);
  if (lmin < -100 * fopts.eps_psd * scale || std::abs(bdoty) > 1e-6 * (1 + b.cwiseAbs().maxCoeff()) ||
      tr < 0.5 || tr > 1.5)
    throw SolverFailure("certificate probe returned an unsound certificate (lmin=" +
                        std::to_string(lmin) + ", b.y=" + std::to_string(bdoty) +
                        ", trace=" + std::to_string(tr) + ")");
  return cert;
}

// Kernel basis of a psd matrix: eigendecompose, split eigenvalues at
// eps_rank * lambda_max, return the eigenvectors of the n - r smallest.
inline std::pair<Eigen::MatrixXd, int> face_basis(const SymSparseMatrix& S,
                                                  double eps_rank,
                                                  double eps_psd = 1e-9) {
  Eigen::MatrixXd D = S.to_dense();
  if (D.rows() == 0) throw Error("face_basis: empty matrix");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(D);
  double lmax = es.eigenvalues().maxCoeff();
  double scale = es.eigenvalues().cwiseAbs().maxCoeff();
  if (scale <= 1e-300 || lmax <= 1e-14 * scale)
    throw Error("face_basis: exposing matrix is numerically zero");
  if (es.eigenvalues().minCoeff() < -eps_psd * scale)
    throw Error("face_basis: exposing matrix is numerically indefinite (lambda_min = " +
                std::to_string(es.eigenvalues().minCoeff()) + ")");
  int n = static_cast<int>(D.rows());
  int r = 0;
  for (int k = 0; k < n; ++k)
    if (es.eigenvalues()[k] > eps_rank * lmax) ++r;
  Eigen::MatrixXd V = es.eigenvectors().leftCols(n - r);
  return {V, r};
}

namespace facial_detail {

struct FaceSplit {
  Eigen::MatrixXd V;            // block-aligned kernel basis
  std::vector<int> next_blocks; // zero-width blocks removed
  int rank = 0;                 // eigenvalues above the cut, across all blocks
};

// Blockwise kernel of a block-diagonal psd matrix; thresholds are relative
// to the global largest eigenvalue so the split matches face_basis on a
// single block.
inline FaceSplit face_basis_blocked(const SymSparseMatrix& S,
                                    const std::vector<int>& blocks,
                                    double eps_rank, double eps_psd = 1e-9) {
  BlockMat Sb = to_blockmat(S, blocks);
  const std::size_t nb = blocks.size();
  std::vector<Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>> es(nb);
  double lmax = 0, lmin = 0;
  for (std::size_t k = 0; k < nb; ++k) {
    if (Sb.is_diag(k)) {
      lmax = std::max(lmax, Sb.block(k).maxCoeff());
      lmin = std::min(lmin, Sb.block(k).minCoeff());
    } else {
      es[k].compute(Sb.block(k));
      lmax = std::max(lmax, es[k].eigenvalues().maxCoeff());
      lmin = std::min(lmin, es[k].eigenvalues().minCoeff());
    }
  }
  double scale = std::max(lmax, -lmin);
  if (scale <= 1e-300 || lmax <= 1e-14 * scale)
    throw Error("face_basis: exposing matrix is numerically zero");
  if (lmin < -eps_psd * scale)
    throw Error("face_basis: exposing matrix is numerically indefinite");
  double cut = eps_rank * lmax;

  FaceSplit out;
  int n = Sb.total_dim();
  std::vector<Eigen::MatrixXd> Vb(nb);
  int n_next = 0;
  for (std::size_t k = 0; k < nb; ++k) {
    int d = Sb.block_dim(k);
    if (Sb.is_diag(k)) {
      std::vector<int> keep;
      for (int i = 0; i < d; ++i)
        if (Sb.block(k)(i, 0) <= cut) keep.push_back(i);
      out.rank += d - static_cast<int>(keep.size());
      Vb[k] = Eigen::MatrixXd::Zero(d, keep.size());
      for (std::size_t c = 0; c < keep.size(); ++c) Vb[k](keep[c], c) = 1.0;
      if (!keep.empty()) out.next_blocks.push_back(-static_cast<int>(keep.size()));
    } else {
      int kernel = 0;
      while (kernel < d && es[k].eigenvalues()[kernel] <= cut) ++kernel;
      out.rank += d - kernel;
      Vb[k] = es[k].eigenvectors().leftCols(kernel);
      if (kernel > 0) out.next_blocks.push_back(kernel);
    }
    n_next += static_cast<int>(Vb[k].cols());
  }
  out.V = Eigen::MatrixXd::Zero(n, n_next);
  int ro = 0, co = 0;
  for (std::size_t k = 0; k < nb; ++k) {
    out.V.block(ro, co, Vb[k].rows(), Vb[k].cols()) = Vb[k];
    ro += static_cast<int>(Vb[k].rows());
    co += static_cast<int>(Vb[k].cols());
  }
  return out;
}

}  // namespace facial_detail

struct ProjectionResult {
  SdpProblem problem;
  std::vector<int> dropped_constraints;  // 0-based input indices
  bool infeasible = false;               // some V'A_iV vanished with b_i != 0
  int infeasible_constraint = -1;
};

// Restrict the instance to the face spanned by V: objective and constraints
// become V'MV; constraints that vanish with zero right-hand side are dropped,
// and a vanished constraint with nonzero right-hand side certifies
// infeasibility (reported, not thrown).
inline ProjectionResult project(const SdpProblem& p, const Eigen::MatrixXd& V,
                                std::vector<int> next_blocks = {}) {
  using Eigen::MatrixXd;
  p.validate();
  if (V.rows() != p.n) throw Error("project: V row count does not match n");
  int n_next = static_cast<int>(V.cols());
  if (next_blocks.empty() && n_next > 0) next_blocks = {n_next};

  auto offsets = p.block_offsets();
  auto congruence = [&](const SymSparseMatrix& a) {
    MatrixXd acc = MatrixXd::Zero(n_next, n_next);
    for (const auto& e : a.entries) {
      auto vi = V.row(e.row - 1), vj = V.row(e.col - 1);
      acc.noalias() += e.value * (vi.transpose() * vj);
      if (e.row != e.col) acc.noalias() += e.value * (vj.transpose() * vi);
    }
    return acc;
  };

  std::vector<int> next_offsets(next_blocks.size() + 1, 0);
  for (std::size_t k = 0; k < next_blocks.size(); ++k)
    next_offsets[k + 1] = next_offsets[k] + std::abs(next_blocks[k]);
  if (next_offsets.back() != n_next)
    throw Error("project: next block sizes do not match V columns");

  auto sparsify = [&](const MatrixXd& D) {
    double scale = D.size() ? std::max(1.0, D.cwiseAbs().maxCoeff()) : 1.0;
    double floor = 1e-14 * scale;
    // nothing may land outside the requested block structure
    MatrixXd leak = D;
    for (std::size_t k = 0; k < next_blocks.size(); ++k) {
      int d = std::abs(next_blocks[k]);
      if (next_blocks[k] > 0)
        leak.block(next_offsets[k], next_offsets[k], d, d).setZero();
      else
        leak.block(next_offsets[k], next_offsets[k], d, d).diagonal().setZero();
    }
    if (leak.size() && leak.cwiseAbs().maxCoeff() > 1e-10 * scale)
      throw Error("project: basis does not respect the requested block structure");
    std::vector<MatEntry> ents;
    for (std::size_t k = 0; k < next_blocks.size(); ++k) {
      int d = std::abs(next_blocks[k]);
      bool diag = next_blocks[k] < 0;
      for (int a = 0; a < d; ++a)
        for (int b = a; b < (diag ? a + 1 : d); ++b) {
          double v = D(next_offsets[k] + a, next_offsets[k] + b);
          if (std::abs(v) > floor) ents.push_back({next_offsets[k] + a + 1,
                                                   next_offsets[k] + b + 1, v});
        }
    }
    return SymSparseMatrix::from_entries(n_next, std::move(ents));
  };

  ProjectionResult out;
  out.problem.n = n_next;
  out.problem.blocks = next_blocks;
  out.problem.provenance = p.provenance;
  out.problem.sense = p.sense;
  out.problem.objective = sparsify(congruence(p.objective));

  double bscale = 0;
  for (double b : p.rhs) bscale = std::max(bscale, std::abs(b));
  for (int i = 0; i < p.m; ++i) {
    MatrixXd R = congruence(p.constraints[i]);
    double mag = R.size() ? R.cwiseAbs().maxCoeff() : 0.0;
    double floor = 1e-10 * std::max(1.0, p.constraints[i].max_abs());
    if (mag <= floor) {
      if (std::abs(p.rhs[i]) <= 1e-10 * std::max(1.0, bscale)) {
        out.dropped_constraints.push_back(i);
        continue;
      }
      out.infeasible = true;
      out.infeasible_constraint = i;
      out.dropped_constraints.push_back(i);
      continue;
    }
    out.problem.constraints.push_back(sparsify(R));
    out.problem.rhs.push_back(p.rhs[i]);
  }
  out.problem.m = static_cast<int>(out.problem.constraints.size());
  out.problem.validate();
  return out;
}

struct ReduceResult {
  SdpProblem problem;
  FaceTransform transform;
  int iterations = 0;
  bool infeasible = false;
  int infeasible_constraint = -1;
};

// The facial reduction loop: find a certificate, split off the face it
// exposes, project, repeat until no certificate exists. Each round removes
// at least one dimension, so the loop runs at most n times; under FullSdp
// the output is strictly feasible up to solver tolerance.
inline ReduceResult reduce_loop(const SdpProblem& p, CertMode mode,
                                const FacialOptions& fopts = {}) {
  p.validate();
  ReduceResult out;
  out.problem = p;
  out.transform.original_n = p.n;
  out.transform.original_blocks = p.blocks;

  while (out.problem.n > 0) {
    auto cert = find_certificate(out.problem, mode, fopts);
    if (!cert) break;
    // psd slack widened to the same allowance the certificate gate grants
    auto split = facial_detail::face_basis_blocked(cert->S, out.problem.blocks,
                                                   fopts.eps_rank, 200 * fopts.eps_psd);
    if (split.rank < 1)
      throw SolverFailure("reduce_loop: certificate with zero rank");

    FaceStage stage;
    stage.V = split.V;
    stage.prev_blocks = out.problem.blocks;
    stage.next_blocks = split.next_blocks;

    ProjectionResult proj = project(out.problem, split.V, split.next_blocks);
    stage.dropped_constraints = proj.dropped_constraints;
    out.transform.stages.push_back(std::move(stage));
    out.problem = std::move(proj.problem);
    ++out.iterations;

    if (proj.infeasible) {
      out.infeasible = true;
      out.infeasible_constraint = proj.infeasible_constraint;
      return out;
    }
    if (out.iterations > out.transform.original_n)
      throw Error("reduce_loop: iteration count exceeded the dimension bound");
  }
  return out;
}

// X = V_total X_reduced V_total'; psd-ness and objective values carry over.
inline Eigen::MatrixXd lift_solution(const Eigen::MatrixXd& X_reduced,
                                     const FaceTransform& transform) {
  if (X_reduced.rows() != transform.final_dim() ||
      X_reduced.cols() != transform.final_dim())
    throw Error("lift_solution: dimension mismatch");
  Eigen::MatrixXd V = transform.total();
  return V * X_reduced * V.transpose();
}

// --- sidecar serialization (plain text, full precision) ---

inline void save_transform(const FaceTransform& t, std::ostream& out) {
  out << "sdpprep-transform 1\n";
  out << t.original_n << "\n";
  out << t.original_blocks.size();
  for (int s : t.original_blocks) out << " " << s;
  out << "\n" << t.stages.size() << "\n";
  char buf[64];
  for (const auto& st : t.stages) {
    out << st.prev_blocks.size();
    for (int s : st.prev_blocks) out << " " << s;
    out << "\n" << st.next_blocks.size();
    for (int s : st.next_blocks) out << " " << s;
    out << "\n" << st.dropped_constraints.size();
    for (int s : st.dropped_constraints) out << " " << s;
    out << "\n" << st.V.rows() << " " << st.V.cols() << "\n";
    for (Eigen::Index r = 0; r < st.V.rows(); ++r) {
      for (Eigen::Index c = 0; c < st.V.cols(); ++c) {
        std::snprintf(buf, sizeof(buf), "%.17g", st.V(r, c));
        out << (c ? " " : "") << buf;
      }
      out << "\n";
    }
  }
}

inline FaceTransform load_transform(std::istream& in) {
  std::string tag;
  int version = 0;
  if (!(in >> tag >> version) || tag != "sdpprep-transform" || version != 1)
    throw Error("transform sidecar: unrecognized format tag");
  FaceTransform t;
  std::size_t nstages = 0, count = 0;
  if (!(in >> t.original_n)) throw Error("transform sidecar: truncated");
  auto read_ints = [&](std::vector<int>& v) {
    if (!(in >> count)) throw Error("transform sidecar: truncated");
    v.resize(count);
    for (auto& x : v)
      if (!(in >> x)) throw Error("transform sidecar: truncated");
  };
  read_ints(t.original_blocks);
  if (!(in >> nstages)) throw Error("transform sidecar: truncated");
  for (std::size_t s = 0; s < nstages; ++s) {
    FaceStage st;
    read_ints(st.prev_blocks);
    read_ints(st.next_blocks);
    read_ints(st.dropped_constraints);
    Eigen::Index rows = 0, cols = 0;
    if (!(in >> rows >> cols)) throw Error("transform sidecar: truncated");
    st.V.resize(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
      for (Eigen::Index c = 0; c < cols; ++c)
        if (!(in >> st.V(r, c))) throw Error("transform sidecar: truncated");
    double ortho = cols ? (st.V.transpose() * st.V -
                           Eigen::MatrixXd::Identity(cols, cols))
                              .cwiseAbs()
                              .maxCoeff()
                        : 0.0;
    if (ortho > 1e-10)
      throw Error("transform sidecar: stage basis is not column-orthonormal");
    t.stages.push_back(std::move(st));
  }
  return t;
}

}  // namespace sdpprep
