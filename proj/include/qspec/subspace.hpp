#pragma once

// Linear spaces of operators on C^n, generated *-algebras and their Wedderburn
// structure (center, minimal central projections, matrix units).

#include "qspec/multimatrix.hpp"

#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace qspec {

/// A linear subspace of M_n with a Hilbert-Schmidt orthonormal basis.
class OperatorSubspace {
public:
  OperatorSubspace() = default;

  /// Orthonormalizes the span of `ops`.
  OperatorSubspace(int ambient_dim, const std::vector<CMatrix>& ops) : n_(ambient_dim) {
    check_cap(ambient_dim);
    CMatrix cols(static_cast<Eigen::Index>(n_) * n_, static_cast<Eigen::Index>(ops.size()));
    for (std::size_t i = 0; i < ops.size(); ++i) cols.col(static_cast<Eigen::Index>(i)) = vec(ops[i]);
    q_ = orthonormal_columns(cols);
  }

  static OperatorSubspace from_orthonormal_columns(int ambient_dim, CMatrix q) {
    OperatorSubspace s;
    s.n_ = ambient_dim;
    s.q_ = std::move(q);
    return s;
  }

  static void check_cap(int ambient_dim) {
    const auto sq = static_cast<std::size_t>(ambient_dim) * static_cast<std::size_t>(ambient_dim);
    if (sq > numerics().dim_cap)
      throw CapExceeded("operator space of dimension " + std::to_string(sq) + " exceeds cap " +
                        std::to_string(numerics().dim_cap));
  }

  int ambient_dim() const { return n_; }
  int dim() const { return static_cast<int>(q_.cols()); }
  bool is_zero() const { return q_.cols() == 0; }

  CMatrix element(int i) const { return unvec(q_.col(i), n_, n_); }
  std::vector<CMatrix> basis() const {
    std::vector<CMatrix> b;
    for (int i = 0; i < dim(); ++i) b.push_back(element(i));
    return b;
  }
  const CMatrix& columns() const { return q_; }

  /// Relative distance of `op` from the subspace.
  double residual(const CMatrix& op) const {
    const CVector v = vec(op);
    const double nv = std::max(1.0, v.norm());
    if (dim() == 0) return v.norm() / nv;
    return (v - q_ * (q_.adjoint() * v)).norm() / nv;
  }

  bool contains(const CMatrix& op, double tol = numerics().tol * 100) const { return residual(op) <= tol; }

  CMatrix project(const CMatrix& op) const {
    if (dim() == 0) return CMatrix::Zero(n_, n_);
    return unvec(q_ * (q_.adjoint() * vec(op)), n_, n_);
  }

  /// Random element (complex Gaussian-free uniform combination of the basis).
  CMatrix random_element() const {
    CMatrix x = CMatrix::Zero(n_, n_);
    for (int i = 0; i < dim(); ++i) x += cplx(uniform(), uniform()) * element(i);
    return x;
  }

  CMatrix random_hermitian() const {
    const CMatrix x = random_element();
    return 0.5 * (x + x.adjoint());
  }

  bool contains_subspace(const OperatorSubspace& o) const {
    for (int i = 0; i < o.dim(); ++i)
      if (!contains(o.element(i))) return false;
    return true;
  }

private:
  int n_ = 0;
  CMatrix q_;
};

inline bool same_subspace(const OperatorSubspace& a, const OperatorSubspace& b,
                          double tol = numerics().angle_tol) {
  return a.ambient_dim() == b.ambient_dim() && subspace_distance(a.columns(), b.columns()) <= tol;
}

/// The concrete block-diagonal realization of a multi-matrix algebra.
inline OperatorSubspace as_subspace(const MultiMatrixAlgebra& a) {
  std::vector<CMatrix> ops;
  for (int k = 0; k < a.dim(); ++k) ops.push_back(a.to_operator(a.basis(k)));
  return OperatorSubspace(a.rep_dim(), ops);
}

/// Span of all products x·y with x in `a`, y in `b`.
inline OperatorSubspace span_products(const OperatorSubspace& a, const OperatorSubspace& b) {
  OrthonormalSpan span(static_cast<Eigen::Index>(a.ambient_dim()) * a.ambient_dim());
  const auto ba = a.basis();
  const auto bb = b.basis();
  for (const auto& x : ba)
    for (const auto& y : bb) span.add(vec(x * y));
  return OperatorSubspace::from_orthonormal_columns(a.ambient_dim(), span.matrix());
}

/// Sum of subspaces.
inline OperatorSubspace span_union(const std::vector<OperatorSubspace>& parts, int n) {
  OrthonormalSpan span(static_cast<Eigen::Index>(n) * n);
  for (const auto& p : parts)
    for (int i = 0; i < p.dim(); ++i) span.add(p.columns().col(i));
  return OperatorSubspace::from_orthonormal_columns(n, span.matrix());
}

inline int intersection_dim(const OperatorSubspace& a, const OperatorSubspace& b) {
  CMatrix both(a.columns().rows(), a.dim() + b.dim());
  both << a.columns(), b.columns();
  return a.dim() + b.dim() - static_cast<int>(numerical_rank(both));
}

// ---------------------------------------------------------------------------
// closure

/// Smallest subspace containing `seeds` and closed under left multiplication by
/// every element of `multipliers` and their adjoints.  When the multipliers
/// generate a *-algebra containing the seeds, this is that *-algebra.
inline OperatorSubspace closure_under_left_multiplication(int n, const std::vector<CMatrix>& seeds,
                                                          const std::vector<CMatrix>& multipliers) {
  OperatorSubspace::check_cap(n);
  std::vector<CMatrix> mult_ops;
  {
    std::vector<CMatrix> both = multipliers;
    for (const auto& m : multipliers) both.push_back(m.adjoint());
    mult_ops = OperatorSubspace(n, both).basis();
  }
  OrthonormalSpan span(static_cast<Eigen::Index>(n) * n);
  for (const auto& s : seeds) {
    span.add(vec(s));
    span.add(vec(CMatrix(s.adjoint())));
  }
  Eigen::Index done = 0;
  while (done < span.size()) {
    const CMatrix b = unvec(span.basis().col(done), n, n);
    ++done;
    for (const auto& m : mult_ops) span.add(vec(m * b));
  }
  return OperatorSubspace::from_orthonormal_columns(n, span.matrix());
}

/// The *-subalgebra generated by `generators`.
inline OperatorSubspace subspace_closure(int ambient_dim, const std::vector<CMatrix>& generators) {
  for (const auto& g : generators)
    if (g.rows() != ambient_dim || g.cols() != ambient_dim)
      throw ContractViolation("subspace_closure: generator is not square of size ambient_dim");
  if (generators.empty()) {
    OperatorSubspace::check_cap(ambient_dim);
    return OperatorSubspace(ambient_dim, {});
  }
  return closure_under_left_multiplication(ambient_dim, generators, generators);
}

// ---------------------------------------------------------------------------
// Wedderburn decomposition

struct WedderburnBlock {
  int size = 0;          // d: the block is M_d
  int multiplicity = 0;  // how many times M_d acts on the ambient space
  CMatrix central_projection;
  std::vector<std::vector<CMatrix>> units;  // units[i][j] = e_ij
};

/// Explicit isomorphism between a unital *-subalgebra of M_n and ⊕_j M_{d_j}.
struct Wedderburn {
  MultiMatrixAlgebra algebra;
  std::vector<WedderburnBlock> blocks;
  CMatrix unit;

  /// Coefficients of an element of the subalgebra in the abstract algebra.
  CVector to_abstract(const CMatrix& op) const {
    CVector x = CVector::Zero(algebra.dim());
    for (int b = 0; b < static_cast<int>(blocks.size()); ++b) {
      const auto& e = blocks[b].units;
      const cplx t11 = e[0][0].trace();
      for (int i = 0; i < blocks[b].size; ++i)
        for (int j = 0; j < blocks[b].size; ++j)
          x(algebra.unit_index(b, i, j)) = (e[0][i] * op * e[j][0]).trace() / t11;
    }
    return x;
  }

  CMatrix from_abstract(const CVector& x) const {
    CMatrix op = CMatrix::Zero(unit.rows(), unit.cols());
    for (int b = 0; b < static_cast<int>(blocks.size()); ++b)
      for (int i = 0; i < blocks[b].size; ++i)
        for (int j = 0; j < blocks[b].size; ++j) op += x(algebra.unit_index(b, i, j)) * blocks[b].units[i][j];
    return op;
  }

  std::vector<int> block_sizes() const {
    std::vector<int> s;
    for (const auto& b : blocks) s.push_back(b.size);
    return s;
  }
};

namespace detail {

inline CMatrix range_projection(const CMatrix& pos) {
  const double scale = std::max(1.0, max_abs(pos));
  CMatrix p = CMatrix::Zero(pos.rows(), pos.cols());
  for (const auto& c : hermitian_clusters(pos, 1e-12))
    if (c.value > 1e3 * numerics().tol * scale) p += c.projector;
  return p;
}

/// Spectral projections of a generic Hermitian element h with supp(h) = e,
/// after shifting its spectrum into [2,4] on the range of e.
inline std::vector<EigenCluster> shifted_clusters(const CMatrix& h, const CMatrix& e) {
  const double nrm = std::max(max_abs(h) * h.rows(), 1e-300);
  const CMatrix c = h / nrm + 3.0 * e;
  std::vector<EigenCluster> out;
  for (auto& cl : hermitian_clusters(c, 1e-7))
    if (cl.value > 1.0) out.push_back(std::move(cl));
  return out;
}

inline int first_support_index(const CMatrix& p) {
  for (Eigen::Index i = 0; i < p.rows(); ++i)
    if (std::abs(p(i, i)) > 1e-6) return static_cast<int>(i);
  return static_cast<int>(p.rows());
}

}  // namespace detail

/// Center of a *-subalgebra, as a subspace of it.
inline OperatorSubspace center(const OperatorSubspace& s) {
  const int n = s.ambient_dim();
  if (s.dim() == 0) return s;
  // Three generic elements generate a finite-dimensional C*-algebra, so commuting
  // with them is commuting with everything; the result is re-checked below.
  std::vector<CMatrix> probes;
  for (int k = 0; k < 3; ++k) probes.push_back(s.random_element());
  CMatrix sys(static_cast<Eigen::Index>(probes.size()) * n * n, s.dim());
  for (int i = 0; i < s.dim(); ++i) {
    const CMatrix x = s.element(i);
    for (std::size_t p = 0; p < probes.size(); ++p)
      sys.col(i).segment(static_cast<Eigen::Index>(p) * n * n, n * n) = vec(CMatrix(x * probes[p] - probes[p] * x));
  }
  const CMatrix ker = null_space(sys);
  CMatrix z = s.columns() * ker;
  auto out = OperatorSubspace::from_orthonormal_columns(n, orthonormal_columns(z));
  for (int i = 0; i < out.dim(); ++i) {
    const CMatrix c = out.element(i);
    for (int j = 0; j < s.dim(); ++j) {
      const CMatrix b = s.element(j);
      if (max_abs(c * b - b * c) > 1e3 * numerics().tol)
        throw InternalInconsistency("center: probe elements did not generate the algebra");
    }
  }
  return out;
}

/// Wedderburn decomposition with explicit matrix units.  Throws ValidationError if
/// `s` is not a unital *-algebra.
inline Wedderburn wedderburn(const OperatorSubspace& s) {
  const int n = s.ambient_dim();
  Wedderburn w;
  w.unit = CMatrix::Zero(n, n);
  if (s.dim() == 0) {
    w.algebra = MultiMatrixAlgebra({1});  // placeholder; blocks is empty
    return w;
  }
  const double tol = 1e3 * numerics().tol;
  const auto basis = s.basis();
  for (const auto& b : basis)
    if (!s.contains(b.adjoint(), tol)) throw ValidationError("wedderburn: subspace is not *-closed");
  {
    const CMatrix x = s.random_element(), y = s.random_element();
    if (!s.contains(x * y, tol)) throw ValidationError("wedderburn: subspace is not closed under products");
  }
  CMatrix pos = CMatrix::Zero(n, n);
  for (const auto& b : basis) pos += b * b.adjoint();
  w.unit = detail::range_projection(pos);
  if (!s.contains(w.unit, tol)) throw ValidationError("wedderburn: subspace is not unital");
  for (const auto& b : basis)
    if (max_abs(w.unit * b - b) > tol || max_abs(b * w.unit - b) > tol)
      throw ValidationError("wedderburn: subspace is not unital");

  const OperatorSubspace z = center(s);
  std::vector<CMatrix> central;
  for (int attempt = 0; attempt < 5 && central.empty(); ++attempt) {
    const auto clusters = detail::shifted_clusters(z.random_hermitian(), w.unit);
    CMatrix sum = CMatrix::Zero(n, n);
    std::vector<CMatrix> cand;
    for (const auto& c : clusters) {
      cand.push_back(c.projector);
      sum += c.projector;
    }
    if (static_cast<int>(cand.size()) == z.dim() && max_abs(sum - w.unit) < tol) central = cand;
  }
  if (central.empty()) throw InternalInconsistency("wedderburn: could not separate central projections");

  for (const auto& zp : central) {
    std::vector<CMatrix> tb;
    for (const auto& b : basis) tb.push_back(b * zp);
    const OperatorSubspace t(n, tb);
    const int d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(t.dim()))));
    if (d * d != t.dim()) throw InternalInconsistency("wedderburn: block dimension is not a square");
    WedderburnBlock blk;
    blk.size = d;
    blk.central_projection = zp;
    const int rank = static_cast<int>(std::lround(zp.trace().real()));
    blk.multiplicity = rank / d;
    std::vector<EigenCluster> diag;
    for (int attempt = 0; attempt < 8; ++attempt) {
      diag = detail::shifted_clusters(t.random_hermitian(), zp);
      if (static_cast<int>(diag.size()) == d) break;
    }
    if (static_cast<int>(diag.size()) != d) throw InternalInconsistency("wedderburn: no generic element found");
    blk.units.assign(d, std::vector<CMatrix>(d));
    blk.units[0][0] = diag[0].projector;
    for (int j = 1; j < d; ++j) {
      CMatrix best;
      double bn = -1;
      for (int i = 0; i < t.dim(); ++i) {
        const CMatrix y = diag[0].projector * t.element(i) * diag[j].projector;
        const double yn = y.norm();
        if (yn > bn) {
          bn = yn;
          best = y;
        }
      }
      const double c = (best * best.adjoint()).trace().real() / diag[0].projector.trace().real();
      blk.units[0][j] = best / std::sqrt(c);
      blk.units[j][0] = blk.units[0][j].adjoint();
    }
    for (int i = 1; i < d; ++i)
      for (int j = 1; j < d; ++j) blk.units[i][j] = blk.units[i][0] * blk.units[0][j];
    w.blocks.push_back(std::move(blk));
  }
  std::stable_sort(w.blocks.begin(), w.blocks.end(), [](const WedderburnBlock& a, const WedderburnBlock& b) {
    if (a.size != b.size) return a.size < b.size;
    return detail::first_support_index(a.central_projection) < detail::first_support_index(b.central_projection);
  });
  w.algebra = MultiMatrixAlgebra(w.block_sizes());
  if (w.algebra.dim() != s.dim()) throw InternalInconsistency("wedderburn: block dimensions do not add up");
  return w;
}

// ---------------------------------------------------------------------------
// primeness, simplicity, essential ideals

inline bool is_simple(const Wedderburn& w) { return w.blocks.size() == 1; }
inline bool is_simple(const OperatorSubspace& s) { return s.dim() > 0 && is_simple(wedderburn(s)); }

/// Prime: every pair of non-zero two-sided ideals has non-zero product.  The
/// ideals are S·z_I for block subsets I; the product S z_I · S z_J vanishes iff
/// z_I z_J does.
inline bool is_prime(const Wedderburn& w) {
  const int k = static_cast<int>(w.blocks.size());
  if (k == 0) return false;
  const auto ideals = all_ideals(k);
  auto support = [&](const IdealDescriptor& d) {
    CMatrix z = CMatrix::Zero(w.unit.rows(), w.unit.cols());
    for (int j = 0; j < k; ++j)
      if (d.block_subset[j]) z += w.blocks[j].central_projection;
    return z;
  };
  for (const auto& a : ideals) {
    if (a.empty()) continue;
    const CMatrix za = support(a);
    for (const auto& b : ideals) {
      if (b.empty()) continue;
      if (max_abs(za * support(b)) <= numerics().tol * 1e3) return false;
    }
  }
  return true;
}
inline bool is_prime(const OperatorSubspace& s) { return s.dim() > 0 && is_prime(wedderburn(s)); }

/// Throws ContractViolation unless D·E·D ⊆ E.
inline void require_ideal(const OperatorSubspace& e, const OperatorSubspace& d) {
  const double tol = 1e3 * numerics().tol;
  std::vector<CMatrix> probes;
  if (static_cast<long>(d.dim()) * e.dim() <= 4096) {
    probes = d.basis();
  } else {
    probes = {d.random_element(), d.random_element()};
  }
  for (int i = 0; i < e.dim(); ++i) {
    const CMatrix x = e.element(i);
    if (!d.contains(x, tol)) throw ContractViolation("is_essential_ideal: E is not contained in D");
    for (const auto& p : probes)
      if (!e.contains(p * x, tol) || !e.contains(x * p, tol))
        throw ContractViolation("is_essential_ideal: E is not an ideal of D");
  }
}

/// Blocks of D met by the ideal E.
inline IdealDescriptor ideal_descriptor(const OperatorSubspace& e, const Wedderburn& dw) {
  IdealDescriptor out;
  for (const auto& b : dw.blocks) {
    double m = 0;
    for (int i = 0; i < e.dim(); ++i) m = std::max(m, max_abs(b.central_projection * e.element(i)));
    out.block_subset.push_back(m > 1e3 * numerics().tol);
  }
  return out;
}

inline bool is_essential_ideal(const IdealDescriptor& e) { return !e.block_subset.empty() && e.full(); }

/// E essential in D iff its block subset covers every block of D.
inline bool is_essential_ideal(const OperatorSubspace& e, const OperatorSubspace& d) {
  require_ideal(e, d);
  if (d.dim() == 0) return true;
  return is_essential_ideal(ideal_descriptor(e, wedderburn(d)));
}

/// Definitional check: E meets every non-zero ideal of D non-trivially.
inline bool is_essential_ideal_definitional(const OperatorSubspace& e, const OperatorSubspace& d) {
  require_ideal(e, d);
  const Wedderburn dw = wedderburn(d);
  const int k = static_cast<int>(dw.blocks.size());
  for (const auto& j : all_ideals(k)) {
    if (j.empty()) continue;
    CMatrix z = CMatrix::Zero(d.ambient_dim(), d.ambient_dim());
    for (int b = 0; b < k; ++b)
      if (j.block_subset[b]) z += dw.blocks[b].central_projection;
    std::vector<CMatrix> jb;
    for (int i = 0; i < d.dim(); ++i) jb.push_back(d.element(i) * z);
    if (intersection_dim(e, OperatorSubspace(d.ambient_dim(), jb)) == 0) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// corners

inline bool is_projection(const CMatrix& q, double tol = 1e3 * numerics().tol) {
  return max_abs(q - q.adjoint()) <= tol && max_abs(q * q - q) <= tol;
}

/// The hereditary subalgebra qSq.
inline OperatorSubspace corner(const OperatorSubspace& s, const CMatrix& q) {
  if (!is_projection(q)) throw ContractViolation("corner: q is not a projection");
  std::vector<CMatrix> ops;
  for (int i = 0; i < s.dim(); ++i) ops.push_back(q * s.element(i) * q);
  return OperatorSubspace(s.ambient_dim(), ops);
}

inline OperatorSubspace corner(const MultiMatrixAlgebra& b, const CVector& q) {
  return corner(as_subspace(b), b.to_operator(q));
}

}  // namespace qspec
