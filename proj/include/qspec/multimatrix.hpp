#pragma once

// Finite-dimensional C*-algebras as direct sums of full matrix blocks.
//
// An element of ⊕_j M_{n_j} is stored as its coefficient vector over the
// matrix-unit basis (block-major, then row-major inside the block).  The
// concrete realization is the block-diagonal operator on C^{Σ n_j}.  Tensor
// products of such algebras use Kronecker ordering of coefficients (first factor
// slowest) and act on the Kronecker product of the concrete spaces.

#include "qspec/linalg.hpp"

#include <numeric>
#include <vector>

namespace qspec {

class MultiMatrixAlgebra {
public:
  MultiMatrixAlgebra() : MultiMatrixAlgebra(std::vector<int>{1}) {}

  explicit MultiMatrixAlgebra(std::vector<int> blocks) : blocks_(std::move(blocks)) {
    if (blocks_.empty()) throw ContractViolation("MultiMatrixAlgebra: needs at least one block");
    int off = 0;
    for (int n : blocks_) {
      if (n <= 0) throw ContractViolation("MultiMatrixAlgebra: block sizes must be positive");
      block_offset_.push_back(off);
      coeff_offset_.push_back(static_cast<int>(unit_row_.size()));
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
          unit_row_.push_back(off + r);
          unit_col_.push_back(off + c);
          unit_block_.push_back(static_cast<int>(block_offset_.size()) - 1);
        }
      off += n;
    }
    rep_dim_ = off;
  }

  const std::vector<int>& blocks() const { return blocks_; }
  int num_blocks() const { return static_cast<int>(blocks_.size()); }
  int dim() const { return static_cast<int>(unit_row_.size()); }
  int rep_dim() const { return rep_dim_; }
  int block_offset(int j) const { return block_offset_[j]; }
  int coeff_offset(int j) const { return coeff_offset_[j]; }
  int unit_row(int k) const { return unit_row_[k]; }
  int unit_col(int k) const { return unit_col_[k]; }
  int unit_block(int k) const { return unit_block_[k]; }

  /// Coefficient index of the matrix unit E_{rc} in block j.
  int unit_index(int j, int r, int c) const { return coeff_offset_[j] + r * blocks_[j] + c; }

  CMatrix to_operator(const CVector& x) const {
    CMatrix m = CMatrix::Zero(rep_dim_, rep_dim_);
    for (int k = 0; k < dim(); ++k) m(unit_row_[k], unit_col_[k]) = x(k);
    return m;
  }

  CVector from_operator(const CMatrix& m) const {
    CVector x(dim());
    for (int k = 0; k < dim(); ++k) x(k) = m(unit_row_[k], unit_col_[k]);
    return x;
  }

  /// Size of the part of `m` lying outside the block-diagonal pattern.
  double off_pattern(const CMatrix& m) const {
    return max_abs(m - to_operator(from_operator(m)));
  }

  CVector basis(int k) const {
    CVector e = CVector::Zero(dim());
    e(k) = 1.0;
    return e;
  }

  CVector unit() const {
    CVector e = CVector::Zero(dim());
    for (int j = 0; j < num_blocks(); ++j)
      for (int r = 0; r < blocks_[j]; ++r) e(unit_index(j, r, r)) = 1.0;
    return e;
  }

  CVector multiply(const CVector& x, const CVector& y) const {
    return from_operator(to_operator(x) * to_operator(y));
  }

  CVector adjoint(const CVector& x) const { return from_operator(to_operator(x).adjoint()); }

  /// Matrix of b ↦ a·b on coefficients.
  CMatrix left_multiplication(const CVector& a) const {
    CMatrix m(dim(), dim());
    const CMatrix op = to_operator(a);
    for (int k = 0; k < dim(); ++k) m.col(k) = from_operator(op * to_operator(basis(k)));
    return m;
  }

  /// Matrix of b ↦ b·a on coefficients.
  CMatrix right_multiplication(const CVector& a) const {
    CMatrix m(dim(), dim());
    const CMatrix op = to_operator(a);
    for (int k = 0; k < dim(); ++k) m.col(k) = from_operator(to_operator(basis(k)) * op);
    return m;
  }

  /// Matrix of the (conjugate-linear) adjoint in the sense x* = conj(K x):
  /// K permutes E_{rc} ↔ E_{cr}.
  CMatrix adjoint_permutation() const {
    CMatrix p = CMatrix::Zero(dim(), dim());
    for (int k = 0; k < dim(); ++k) {
      const int j = unit_block_[k];
      const int r = unit_row_[k] - block_offset_[j];
      const int c = unit_col_[k] - block_offset_[j];
      p(unit_index(j, c, r), k) = 1.0;
    }
    return p;
  }

  bool operator==(const MultiMatrixAlgebra& o) const { return blocks_ == o.blocks_; }

private:
  std::vector<int> blocks_;
  std::vector<int> block_offset_;
  std::vector<int> coeff_offset_;
  std::vector<int> unit_row_, unit_col_, unit_block_;
  int rep_dim_ = 0;
};

/// M_d as a one-block algebra.
inline MultiMatrixAlgebra full_matrix_algebra(int d) { return MultiMatrixAlgebra({d}); }

/// B ⊗ M_d realized as ⊕_j M_{n_j d}.  Its concrete operator coincides with
/// the Kronecker product of the concrete operators of B and M_d.
inline MultiMatrixAlgebra amplify(const MultiMatrixAlgebra& b, int d) {
  std::vector<int> blocks;
  for (int n : b.blocks()) blocks.push_back(n * d);
  return MultiMatrixAlgebra(blocks);
}

// ---------------------------------------------------------------------------

/// Tensor product of multi-matrix algebras with Kronecker-ordered coefficients.
class TensorShape {
public:
  explicit TensorShape(std::vector<MultiMatrixAlgebra> factors) : factors_(std::move(factors)) {
    dim_ = 1;
    rep_ = 1;
    for (const auto& f : factors_) {
      dim_ *= f.dim();
      rep_ *= f.rep_dim();
    }
    row_.resize(dim_);
    col_.resize(dim_);
    for (int k = 0; k < dim_; ++k) {
      int rem = k, r = 0, c = 0, stride_k = dim_, stride_n = rep_;
      for (const auto& f : factors_) {
        stride_k /= f.dim();
        stride_n /= f.rep_dim();
        const int u = rem / stride_k;
        rem %= stride_k;
        r += f.unit_row(u) * stride_n;
        c += f.unit_col(u) * stride_n;
      }
      row_[k] = r;
      col_[k] = c;
    }
  }

  int dim() const { return dim_; }
  int rep_dim() const { return rep_; }
  const std::vector<MultiMatrixAlgebra>& factors() const { return factors_; }

  CMatrix to_operator(const CVector& x) const {
    CMatrix m = CMatrix::Zero(rep_, rep_);
    for (int k = 0; k < dim_; ++k) m(row_[k], col_[k]) = x(k);
    return m;
  }

  CVector from_operator(const CMatrix& m) const {
    CVector x(dim_);
    for (int k = 0; k < dim_; ++k) x(k) = m(row_[k], col_[k]);
    return x;
  }

  double off_pattern(const CMatrix& m) const { return max_abs(m - to_operator(from_operator(m))); }

  CVector multiply(const CVector& x, const CVector& y) const {
    return from_operator(to_operator(x) * to_operator(y));
  }

private:
  std::vector<MultiMatrixAlgebra> factors_;
  int dim_ = 1, rep_ = 1;
  std::vector<int> row_, col_;
};

inline CVector tensor_coeffs(const CVector& x, const CVector& y) {
  CVector out(x.size() * y.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) out.segment(i * y.size(), y.size()) = x(i) * y;
  return out;
}

// ---------------------------------------------------------------------------

/// An element of a multi-matrix algebra, viewed block by block.
struct AlgElem {
  std::vector<CMatrix> block_matrices;

  static AlgElem from_coeffs(const MultiMatrixAlgebra& a, const CVector& x) {
    AlgElem e;
    const CMatrix op = a.to_operator(x);
    for (int j = 0; j < a.num_blocks(); ++j) {
      const int o = a.block_offset(j), n = a.blocks()[j];
      e.block_matrices.push_back(op.block(o, o, n, n));
    }
    return e;
  }

  CVector coeffs(const MultiMatrixAlgebra& a) const {
    const int n = a.rep_dim();
    CMatrix op = CMatrix::Zero(n, n);
    for (int j = 0; j < a.num_blocks(); ++j) {
      const int o = a.block_offset(j), s = a.blocks()[j];
      op.block(o, o, s, s) = block_matrices[j];
    }
    return a.from_operator(op);
  }

  bool is_self_adjoint(double tol = numerics().tol) const {
    for (const auto& b : block_matrices)
      if (max_abs(b - b.adjoint()) > tol) return false;
    return true;
  }

  bool is_positive(double tol = numerics().tol) const {
    if (!is_self_adjoint(tol)) return false;
    for (const auto& b : block_matrices) {
      Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (b + b.adjoint()));
      if (es.eigenvalues().minCoeff() < -tol) return false;
    }
    return true;
  }

  bool is_projection(double tol = numerics().tol) const {
    for (const auto& b : block_matrices)
      if (max_abs(b - b.adjoint()) > tol || max_abs(b * b - b) > tol) return false;
    return true;
  }
};

// ---------------------------------------------------------------------------

/// Two-sided ideal of ⊕_j M_{n_j}: the sum of the blocks in `block_subset`.
struct IdealDescriptor {
  std::vector<bool> block_subset;

  bool empty() const { return std::none_of(block_subset.begin(), block_subset.end(), [](bool b) { return b; }); }
  bool full() const { return std::all_of(block_subset.begin(), block_subset.end(), [](bool b) { return b; }); }
  bool operator==(const IdealDescriptor&) const = default;

  /// Coefficient basis (columns) of the ideal inside the parent algebra.
  CMatrix basis(const MultiMatrixAlgebra& a) const {
    std::vector<int> idx;
    for (int k = 0; k < a.dim(); ++k)
      if (block_subset[a.unit_block(k)]) idx.push_back(k);
    CMatrix m = CMatrix::Zero(a.dim(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i) m(idx[i], static_cast<Eigen::Index>(i)) = 1.0;
    return m;
  }

  /// Central projection onto the ideal.
  CVector support(const MultiMatrixAlgebra& a) const {
    CVector e = CVector::Zero(a.dim());
    for (int j = 0; j < a.num_blocks(); ++j)
      if (block_subset[j])
        for (int r = 0; r < a.blocks()[j]; ++r) e(a.unit_index(j, r, r)) = 1.0;
    return e;
  }
};

/// All 2^k block-subset ideals, in binary counting order (0 first, full last).
inline std::vector<IdealDescriptor> all_ideals(int num_blocks) {
  std::vector<IdealDescriptor> out;
  for (unsigned mask = 0; mask < (1u << num_blocks); ++mask) {
    IdealDescriptor d;
    for (int j = 0; j < num_blocks; ++j) d.block_subset.push_back(((mask >> j) & 1u) != 0);
    out.push_back(d);
  }
  return out;
}

}  // namespace qspec
