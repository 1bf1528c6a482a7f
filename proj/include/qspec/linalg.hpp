#pragma once

// Dense complex linear algebra shared by every module: tolerances, rank-revealing
// orthonormalization, null spaces, Kronecker products and principal angles.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace qspec {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// ---------------------------------------------------------------------------
// errors

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Input data violates an algebraic axiom (Hopf, coaction, *-structure ...).
class ValidationError : public Error {
public:
  using Error::Error;
};

/// A precondition of an operation was not met by the caller.
class ContractViolation : public Error {
public:
  using Error::Error;
};

/// Two independent computations disagree; indicates a bug or a convention clash.
class InternalInconsistency : public Error {
public:
  using Error::Error;
};

/// Operator space would exceed the configured dimension cap.
class CapExceeded : public Error {
public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// numerics policy

struct Numerics {
  double tol = 1e-9;           // rank decisions and identity residuals
  double angle_tol = 1e-8;     // subspace equality via principal angles
  std::size_t dim_cap = 4096;  // max ambient_dim^2 for operator spaces
  std::uint64_t seed = 20240601;
};

inline Numerics& numerics() {
  static Numerics n;
  return n;
}

/// Restores the previous numerics on scope exit.
class ScopedNumerics {
public:
  explicit ScopedNumerics(const Numerics& n) : saved_(numerics()) { numerics() = n; }
  ~ScopedNumerics() { numerics() = saved_; }
  ScopedNumerics(const ScopedNumerics&) = delete;
  ScopedNumerics& operator=(const ScopedNumerics&) = delete;

private:
  Numerics saved_;
};

/// Deterministic generator; every random choice in the engine draws from here.
inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(numerics().seed);
  return gen;
}

inline void reseed(std::uint64_t seed) { rng().seed(seed); }

inline double uniform(double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  return d(rng());
}

inline CMatrix random_matrix(Eigen::Index rows, Eigen::Index cols) {
  CMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = cplx(uniform(), uniform());
  return m;
}

// ---------------------------------------------------------------------------
// basic helpers

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline CMatrix identity(Eigen::Index n) { return CMatrix::Identity(n, n); }

inline double max_abs(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline bool all_finite(const CMatrix& m) { return m.allFinite(); }

inline CVector vec(const CMatrix& m) {
  return Eigen::Map<const CVector>(m.data(), m.size());
}

inline CMatrix unvec(const CVector& v, Eigen::Index rows, Eigen::Index cols) {
  return Eigen::Map<const CMatrix>(v.data(), rows, cols);
}

inline double rank_threshold(double largest) {
  return numerics().tol * std::max(largest, 1.0);
}

/// Orthonormal basis (columns) of the span of the given columns, via
/// column-pivoted QR. (Eigen's BDCSVD misreports small singular values on some
/// complex inputs, so it is not used anywhere.)
inline CMatrix orthonormal_columns(const CMatrix& cols) {
  if (cols.cols() == 0 || cols.rows() == 0) return CMatrix(cols.rows(), 0);
  Eigen::ColPivHouseholderQR<CMatrix> qr(cols);
  const auto& rr = qr.matrixQR();
  const Eigen::Index k = std::min(rr.rows(), rr.cols());
  const double thr = rank_threshold(k ? std::abs(rr(0, 0)) : 0.0);
  Eigen::Index r = 0;
  while (r < k && std::abs(rr(r, r)) > thr) ++r;
  CMatrix q = CMatrix::Identity(cols.rows(), r);
  q.applyOnTheLeft(qr.householderQ());
  return q;
}

inline Eigen::Index numerical_rank(const CMatrix& m) {
  return orthonormal_columns(m).cols();
}

/// Orthonormal basis (columns) of { x : m x = 0 }.
inline CMatrix null_space(const CMatrix& m) {
  const Eigen::Index n = m.cols();
  if (n == 0) return CMatrix(0, 0);
  if (m.rows() == 0) return identity(n);
  // Tall systems are reduced to their n x n triangular factor first; R has the
  // same right singular vectors and singular values as m.
  CMatrix work;
  if (m.rows() > n) {
    Eigen::HouseholderQR<CMatrix> qr(m);
    work = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
  } else {
    work = m;
  }
  Eigen::JacobiSVD<CMatrix> svd(work, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double thr = rank_threshold(s.size() ? s(0) : 0.0);
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > thr) ++r;
  return svd.matrixV().rightCols(n - r);
}

/// Principal-angle distance between two column spans: the sine of the largest
/// principal angle, or 1 if the dimensions differ.
inline double subspace_distance(const CMatrix& a, const CMatrix& b) {
  const CMatrix qa = orthonormal_columns(a);
  const CMatrix qb = orthonormal_columns(b);
  if (qa.cols() != qb.cols()) return 1.0;
  if (qa.cols() == 0) return 0.0;
  // sin θ_max = ‖(I − Qa Qa*) Qb‖₂; avoids the √ε floor of 1 − cos²
  const CMatrix r = qb - qa * (qa.adjoint() * qb);
  Eigen::JacobiSVD<CMatrix> svd(r);
  return std::min(1.0, svd.singularValues()(0));
}

/// Hermitian part eigen-decomposition with eigenvalues grouped within `gap`.
struct EigenCluster {
  double value;
  CMatrix projector;  // orthogonal projection onto the eigenspace
  Eigen::Index multiplicity;
};

inline std::vector<EigenCluster> hermitian_clusters(const CMatrix& h, double gap = 1e-6) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (h + h.adjoint()));
  const auto& w = es.eigenvalues();
  const CMatrix& v = es.eigenvectors();
  std::vector<EigenCluster> out;
  Eigen::Index i = 0;
  while (i < w.size()) {
    Eigen::Index j = i + 1;
    while (j < w.size() && std::abs(w(j) - w(i)) < gap * std::max(1.0, std::abs(w(i)))) ++j;
    const CMatrix cols = v.middleCols(i, j - i);
    out.push_back({w.segment(i, j - i).mean(), cols * cols.adjoint(), j - i});
    i = j;
  }
  return out;
}

/// Positive square root and inverse square root of a positive definite matrix.
inline std::pair<CMatrix, CMatrix> sqrt_and_inv_sqrt(const CMatrix& p) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (p + p.adjoint()));
  const auto& w = es.eigenvalues();
  if (w.minCoeff() <= numerics().tol)
    throw ContractViolation("sqrt_and_inv_sqrt: matrix is not positive definite");
  const CMatrix& v = es.eigenvectors();
  CMatrix r = v * w.cwiseSqrt().cast<cplx>().asDiagonal() * v.adjoint();
  CMatrix ri = v * w.cwiseSqrt().cwiseInverse().cast<cplx>().asDiagonal() * v.adjoint();
  return {r, ri};
}

/// exp(i h) for Hermitian h.
inline CMatrix unitary_exp(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (h + h.adjoint()));
  CVector ph(es.eigenvalues().size());
  for (Eigen::Index k = 0; k < ph.size(); ++k) ph(k) = std::polar(1.0, es.eigenvalues()(k));
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

// ---------------------------------------------------------------------------
// incremental orthonormal span (classical Gram-Schmidt with re-orthogonalization)

/// Growing orthonormal set of vectors; used by closure loops where candidates
/// arrive one at a time and most of them are already in the span.
class OrthonormalSpan {
public:
  explicit OrthonormalSpan(Eigen::Index length) : length_(length), q_(length, 0) {}

  Eigen::Index length() const { return length_; }
  Eigen::Index size() const { return size_; }
  auto basis() const { return q_.leftCols(size_); }

  /// Returns true if `v` enlarged the span.
  bool add(const CVector& v) {
    const double nv = v.norm();
    if (nv <= rank_threshold(0.0)) return false;
    CVector r = v;
    for (int pass = 0; pass < 2; ++pass) {
      if (size_ == 0) break;
      r -= basis() * (basis().adjoint() * r);
    }
    const double nr = r.norm();
    if (nr <= numerics().tol * std::max(nv, 1.0) * 10.0) return false;
    if (size_ == q_.cols()) q_.conservativeResize(Eigen::NoChange, std::max<Eigen::Index>(8, 2 * size_));
    q_.col(size_++) = r / nr;
    return true;
  }

  /// Distance of `v` from the span, relative to max(|v|, 1).
  double residual(const CVector& v) const {
    if (size_ == 0) return v.norm() / std::max(1.0, v.norm());
    CVector r = v - basis() * (basis().adjoint() * v);
    r -= basis() * (basis().adjoint() * r);
    return r.norm() / std::max(1.0, v.norm());
  }

  CMatrix matrix() const { return basis(); }

private:
  Eigen::Index length_;
  Eigen::Index size_ = 0;
  CMatrix q_;
};

}  // namespace qspec
