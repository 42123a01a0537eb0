#pragma once

#include <Eigen/Dense>
#include <cassert>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <vector>

namespace sdpprep {

// Symmetric block-diagonal matrix. Block sizes follow the SDPA sign
// convention: a positive size k is a dense symmetric k x k block, a
// negative size -k is a diagonal block of k entries (stored as a vector).
class BlockMat {
 public:
  BlockMat() = default;

  explicit BlockMat(std::vector<int> sizes) : sizes_(std::move(sizes)) {
    blocks_.reserve(sizes_.size());
    for (int s : sizes_) {
      if (s == 0) throw std::invalid_argument("BlockMat: zero block size");
      if (s > 0)
        blocks_.emplace_back(Eigen::MatrixXd::Zero(s, s));
      else
        blocks_.emplace_back(Eigen::MatrixXd::Zero(-s, 1));
    }
  }

  static BlockMat identity(const std::vector<int>& sizes, double scale = 1.0) {
    BlockMat m(sizes);
    for (std::size_t k = 0; k < m.blocks_.size(); ++k) {
      if (m.is_diag(k))
        m.blocks_[k].setConstant(scale);
      else
        m.blocks_[k] = Eigen::MatrixXd::Identity(m.sizes_[k], m.sizes_[k]) * scale;
    }
    return m;
  }

  const std::vector<int>& sizes() const { return sizes_; }
  std::size_t block_count() const { return blocks_.size(); }
  bool is_diag(std::size_t k) const { return sizes_[k] < 0; }
  int block_dim(std::size_t k) const { return std::abs(sizes_[k]); }

  // Dense blocks are k x k, diagonal blocks are k x 1.
  Eigen::MatrixXd& block(std::size_t k) { return blocks_[k]; }
  const Eigen::MatrixXd& block(std::size_t k) const { return blocks_[k]; }

  int total_dim() const {
    int n = 0;
    for (int s : sizes_) n += std::abs(s);
    return n;
  }

  double inner(const BlockMat& other) const {
    assert(sizes_ == other.sizes_);
    double sum = 0;
    for (std::size_t k = 0; k < blocks_.size(); ++k)
      sum += blocks_[k].cwiseProduct(other.blocks_[k]).sum();
    return sum;
  }

  void add_scaled(double alpha, const BlockMat& other) {
    assert(sizes_ == other.sizes_);
    for (std::size_t k = 0; k < blocks_.size(); ++k)
      blocks_[k] += alpha * other.blocks_[k];
  }

  void scale(double alpha) {
    for (auto& b : blocks_) b *= alpha;
  }

  double trace() const {
    double t = 0;
    for (std::size_t k = 0; k < blocks_.size(); ++k)
      t += is_diag(k) ? blocks_[k].sum() : blocks_[k].trace();
    return t;
  }

  double max_abs() const {
    double m = 0;
    for (const auto& b : blocks_)
      if (b.size() > 0) m = std::max(m, b.cwiseAbs().maxCoeff());
    return m;
  }

  void symmetrize() {
    for (std::size_t k = 0; k < blocks_.size(); ++k)
      if (!is_diag(k)) blocks_[k] = 0.5 * (blocks_[k] + blocks_[k].transpose()).eval();
  }

  bool all_finite() const {
    for (const auto& b : blocks_)
      if (!b.allFinite()) return false;
    return true;
  }

  double min_eigenvalue() const {
    double lo = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < blocks_.size(); ++k) {
      if (block_dim(k) == 0) continue;
      if (is_diag(k)) {
        lo = std::min(lo, blocks_[k].minCoeff());
      } else {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(blocks_[k],
                                                          Eigen::EigenvaluesOnly);
        lo = std::min(lo, es.eigenvalues().minCoeff());
      }
    }
    return std::isfinite(lo) ? lo : 0.0;
  }

  Eigen::MatrixXd to_dense() const {
    int n = total_dim();
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
    int off = 0;
    for (std::size_t k = 0; k < blocks_.size(); ++k) {
      int d = block_dim(k);
      if (is_diag(k))
        out.block(off, off, d, d) = blocks_[k].col(0).asDiagonal();
      else
        out.block(off, off, d, d) = blocks_[k];
      off += d;
    }
    return out;
  }

 private:
  std::vector<int> sizes_;
  std::vector<Eigen::MatrixXd> blocks_;
};

}  // namespace sdpprep
