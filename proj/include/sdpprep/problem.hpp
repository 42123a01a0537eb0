#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sdpprep/blockmat.hpp"

namespace sdpprep {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One stored coefficient of a symmetric matrix, 1-based, row <= col.
// Off-diagonal values are stored once and mirrored on access.
struct MatEntry {
  int row = 0;
  int col = 0;
  double value = 0.0;

  friend bool operator==(const MatEntry&, const MatEntry&) = default;
};

// Sparse symmetric matrix over the upper triangle.
struct SymSparseMatrix {
  int dim = 0;
  std::vector<MatEntry> entries;  // sorted by (row, col), unique, row <= col

  SymSparseMatrix() = default;
  explicit SymSparseMatrix(int d) : dim(d) {}

  // Normalizes row/col order, sorts, and rejects duplicate positions.
  static SymSparseMatrix from_entries(int dim, std::vector<MatEntry> raw) {
    for (auto& e : raw)
      if (e.row > e.col) std::swap(e.row, e.col);
    std::sort(raw.begin(), raw.end(), [](const MatEntry& a, const MatEntry& b) {
      return std::pair(a.row, a.col) < std::pair(b.row, b.col);
    });
    SymSparseMatrix m;
    m.dim = dim;
    m.entries = std::move(raw);
    m.validate();
    return m;
  }

  void validate() const {
    if (dim < 0) throw Error("SymSparseMatrix: negative dimension");
    const MatEntry* prev = nullptr;
    for (const auto& e : entries) {
      if (e.row < 1 || e.row > e.col || e.col > dim)
        throw Error("SymSparseMatrix: entry (" + std::to_string(e.row) + "," +
                    std::to_string(e.col) + ") outside 1 <= i <= j <= " +
                    std::to_string(dim));
      if (prev && prev->row == e.row && prev->col == e.col)
        throw Error("SymSparseMatrix: duplicate entry (" + std::to_string(e.row) +
                    "," + std::to_string(e.col) + ")");
      if (prev && std::pair(prev->row, prev->col) > std::pair(e.row, e.col))
        throw Error("SymSparseMatrix: entries not sorted");
      prev = &e;
    }
  }

  // tr(A^T B): off-diagonal positions count twice.
  double inner(const SymSparseMatrix& other) const {
    if (dim != other.dim) throw Error("inner: dimension mismatch");
    double sum = 0;
    std::size_t i = 0, j = 0;
    while (i < entries.size() && j < other.entries.size()) {
      auto ka = std::pair(entries[i].row, entries[i].col);
      auto kb = std::pair(other.entries[j].row, other.entries[j].col);
      if (ka < kb) {
        ++i;
      } else if (kb < ka) {
        ++j;
      } else {
        double w = (entries[i].row == entries[i].col) ? 1.0 : 2.0;
        sum += w * entries[i].value * other.entries[j].value;
        ++i;
        ++j;
      }
    }
    return sum;
  }

  // <A, X> against a dense symmetric matrix (0-based Eigen storage).
  double inner_dense(const Eigen::MatrixXd& X) const {
    if (X.rows() != dim || X.cols() != dim) throw Error("inner_dense: dimension mismatch");
    double sum = 0;
    for (const auto& e : entries) {
      double w = (e.row == e.col) ? 1.0 : 2.0;
      sum += w * e.value * X(e.row - 1, e.col - 1);
    }
    return sum;
  }

  Eigen::MatrixXd to_dense() const {
    Eigen::MatrixXd X = Eigen::MatrixXd::Zero(dim, dim);
    for (const auto& e : entries) {
      X(e.row - 1, e.col - 1) = e.value;
      X(e.col - 1, e.row - 1) = e.value;
    }
    return X;
  }

  // Sparsify a dense symmetric matrix, dropping entries below a relative floor.
  static SymSparseMatrix from_dense(const Eigen::MatrixXd& X, double rel_floor = 0.0) {
    if (X.rows() != X.cols()) throw Error("from_dense: matrix not square");
    double floor = rel_floor * std::max(1.0, X.size() > 0 ? X.cwiseAbs().maxCoeff() : 0.0);
    SymSparseMatrix m(static_cast<int>(X.rows()));
    for (int i = 0; i < X.rows(); ++i)
      for (int j = i; j < X.cols(); ++j) {
        double v = 0.5 * (X(i, j) + X(j, i));
        if (std::abs(v) > floor) m.entries.push_back({i + 1, j + 1, v});
      }
    return m;
  }

  double max_abs() const {
    double m = 0;
    for (const auto& e : entries) m = std::max(m, std::abs(e.value));
    return m;
  }

  double trace() const {
    double t = 0;
    for (const auto& e : entries)
      if (e.row == e.col) t += e.value;
    return t;
  }

  double frob_norm() const {
    double s = 0;
    for (const auto& e : entries) {
      double w = (e.row == e.col) ? 1.0 : 2.0;
      s += w * e.value * e.value;
    }
    return std::sqrt(s);
  }

  bool empty() const { return entries.empty(); }

  friend bool operator==(const SymSparseMatrix&, const SymSparseMatrix&) = default;
};

// How the raw (C, A_i, b) data of an SDPA file is to be interpreted.
// SDPLib files are dual-form: the file's objective vector is b and the
// canonical minimization is over -C. Problems we build in memory are primal.
enum class DataSense { primal, dual };

// Standard-form instance: min C.X  s.t.  A_i.X = b_i, X psd,
// over a block-diagonal cone (negative block size = diagonal/LP block).
struct SdpProblem {
  int n = 0;
  int m = 0;
  SymSparseMatrix objective;                // C
  std::vector<SymSparseMatrix> constraints; // A_1..A_m
  std::vector<double> rhs;                  // b
  std::vector<int> blocks;                  // signed sizes, sum of |.| = n
  std::string provenance;
  DataSense sense = DataSense::primal;

  // 0-based global offset of each block.
  std::vector<int> block_offsets() const {
    std::vector<int> off(blocks.size() + 1, 0);
    for (std::size_t k = 0; k < blocks.size(); ++k)
      off[k + 1] = off[k] + std::abs(blocks[k]);
    return off;
  }

  // Block containing 1-based index i, or -1.
  int block_of(int i) const {
    int off = 0;
    for (std::size_t k = 0; k < blocks.size(); ++k) {
      int d = std::abs(blocks[k]);
      if (i > off && i <= off + d) return static_cast<int>(k);
      off += d;
    }
    return -1;
  }

  void validate() const {
    if (n < 0) throw Error("SdpProblem: negative dimension");
    if (m != static_cast<int>(constraints.size()))
      throw Error("SdpProblem: constraint count mismatch");
    if (m != static_cast<int>(rhs.size()))
      throw Error("SdpProblem: rhs length mismatch");
    int sum = 0;
    for (int b : blocks) {
      if (b == 0) throw Error("SdpProblem: zero block size");
      sum += std::abs(b);
    }
    if (sum != n) throw Error("SdpProblem: block sizes do not sum to n");
    auto check_matrix = [&](const SymSparseMatrix& a, const std::string& what) {
      if (a.dim != n) throw Error("SdpProblem: " + what + " has wrong dimension");
      a.validate();
      for (const auto& e : a.entries) {
        int bi = block_of(e.row), bj = block_of(e.col);
        if (bi != bj)
          throw Error("SdpProblem: " + what + " entry (" + std::to_string(e.row) +
                      "," + std::to_string(e.col) + ") crosses blocks");
        if (blocks[bi] < 0 && e.row != e.col)
          throw Error("SdpProblem: " + what + " off-diagonal entry (" +
                      std::to_string(e.row) + "," + std::to_string(e.col) +
                      ") in diagonal block");
      }
    };
    check_matrix(objective, "objective");
    for (int i = 0; i < m; ++i)
      check_matrix(constraints[i], "constraint " + std::to_string(i + 1));
  }

  // Canonical primal form: dual-sense data minimizes -C.
  SdpProblem to_canonical() const {
    if (sense == DataSense::primal) return *this;
    SdpProblem p = *this;
    for (auto& e : p.objective.entries) e.value = -e.value;
    p.sense = DataSense::primal;
    return p;
  }
};

// Data-level equality ignoring provenance and sense metadata.
inline bool data_equal(const SdpProblem& a, const SdpProblem& b) {
  return a.n == b.n && a.m == b.m && a.blocks == b.blocks &&
         a.objective == b.objective && a.constraints == b.constraints &&
         a.rhs == b.rhs;
}

struct Evaluation {
  double objective = 0;
  std::vector<double> residuals;  // A_i.X - b_i

  double max_residual() const {
    double r = 0;
    for (double v : residuals) r = std::max(r, std::abs(v));
    return r;
  }
};

inline Evaluation evaluate(const SdpProblem& p, const Eigen::MatrixXd& X) {
  if (X.rows() != p.n || X.cols() != p.n)
    throw Error("evaluate: X has wrong dimension");
  Evaluation ev;
  ev.objective = p.objective.inner_dense(X);
  ev.residuals.resize(p.m);
  for (int i = 0; i < p.m; ++i)
    ev.residuals[i] = p.constraints[i].inner_dense(X) - p.rhs[i];
  return ev;
}

// Scatter a sparse symmetric matrix into block-diagonal dense storage.
inline BlockMat to_blockmat(const SymSparseMatrix& a, const std::vector<int>& blocks) {
  BlockMat out(blocks);
  std::vector<int> offsets(blocks.size() + 1, 0);
  for (std::size_t k = 0; k < blocks.size(); ++k)
    offsets[k + 1] = offsets[k] + std::abs(blocks[k]);
  if (offsets.back() != a.dim) throw Error("to_blockmat: block sizes do not match dim");
  for (const auto& e : a.entries) {
    std::size_t k = 0;
    while (k < blocks.size() && e.row > offsets[k + 1]) ++k;
    if (e.col > offsets[k + 1]) throw Error("to_blockmat: entry crosses blocks");
    int p = e.row - 1 - offsets[k], q = e.col - 1 - offsets[k];
    if (out.is_diag(k)) {
      if (p != q) throw Error("to_blockmat: off-diagonal entry in diagonal block");
      out.block(k)(p, 0) = e.value;
    } else {
      out.block(k)(p, q) = e.value;
      out.block(k)(q, p) = e.value;
    }
  }
  return out;
}

enum class SolverStatus {
  Optimal,
  PrimalInfeasible,
  DualInfeasible,
  MaxIterations,
  NumericalFailure,
};

inline const char* to_string(SolverStatus s) {
  switch (s) {
    case SolverStatus::Optimal: return "Optimal";
    case SolverStatus::PrimalInfeasible: return "PrimalInfeasible";
    case SolverStatus::DualInfeasible: return "DualInfeasible";
    case SolverStatus::MaxIterations: return "MaxIterations";
    case SolverStatus::NumericalFailure: return "NumericalFailure";
  }
  return "Unknown";
}

struct SolverResult {
  SolverStatus status = SolverStatus::NumericalFailure;
  BlockMat X;  // primal, block-diagonal per problem.blocks
  BlockMat S;  // dual slack
  std::vector<double> y;
  double pobj = 0;
  double dobj = 0;
  double primal_residual = 0;
  double dual_residual = 0;
  double gap = 0;  // |pobj - dobj| / (1 + |pobj|)
  int iterations = 0;
  bool deadline_hit = false;
};

}  // namespace sdpprep
