#pragma once

// Coactions δ: B → B⊗A of a finite quantum group on a multi-matrix algebra:
// validation, spectral projections and spectral subspaces, the fixed-point
// algebra, amplified coactions, invariant ideals and invariant corners.

#include "qspec/quantum_group.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace qspec {

struct CoactionValidation {
  double homomorphism = 0, star = 0, unital = 0, coassociativity = 0;
  int density_rank = 0, density_expected = 0;

  bool ok(double tol = 1e3 * numerics().tol) const {
    return homomorphism <= tol && star <= tol && unital <= tol && coassociativity <= tol &&
           density_rank == density_expected;
  }
  /// First failing condition, or empty.
  std::string failure(double tol = 1e3 * numerics().tol) const {
    if (homomorphism > tol) return "coaction is not multiplicative";
    if (star > tol) return "coaction does not preserve adjoints";
    if (unital > tol) return "coaction is not unital";
    if (coassociativity > tol) return "coaction identity (δ⊗id)δ = (id⊗Δ)δ fails";
    if (density_rank != density_expected)
      return "density condition fails: span δ(B)(1⊗A) has dimension " + std::to_string(density_rank) + " < " +
             std::to_string(density_expected);
    return {};
  }
};

inline CoactionValidation validate_coaction(const MultiMatrixAlgebra& b, const FiniteQuantumGroup& g,
                                            const CMatrix& delta) {
  const int nb = b.dim(), na = g.dim();
  if (delta.rows() != nb * na || delta.cols() != nb) throw ContractViolation("validate_coaction: shape mismatch");
  if (!delta.allFinite()) throw ValidationError("validate_coaction: non-finite entries");
  const TensorShape ba({b, g.algebra()});
  CoactionValidation v;
  std::vector<CMatrix> ops;
  for (int k = 0; k < nb; ++k) ops.push_back(ba.to_operator(delta.col(k)));
  for (int k = 0; k < nb; ++k) {
    for (int l = 0; l < nb; ++l) {
      // e_k e_l is a matrix unit or zero
      const CVector prod = b.multiply(b.basis(k), b.basis(l));
      v.homomorphism = std::max(v.homomorphism, max_abs(ops[k] * ops[l] - ba.to_operator(delta * prod)));
    }
    v.star = std::max(v.star, max_abs(ops[k].adjoint() - ba.to_operator(delta * b.adjoint(b.basis(k)))));
  }
  v.unital = (delta * b.unit() - tensor_coeffs(b.unit(), g.algebra().unit())).norm();
  v.coassociativity = max_abs(kron(delta, identity(na)) * delta - kron(identity(nb), g.comult()) * delta);
  // span{δ(e_k)(1⊗e_l)} = B⊗A
  OrthonormalSpan span(static_cast<Eigen::Index>(nb) * na);
  for (int l = 0; l < na; ++l) {
    const CMatrix right = ba.to_operator(tensor_coeffs(b.unit(), g.algebra().basis(l)));
    for (int k = 0; k < nb; ++k) span.add(ba.from_operator(ops[k] * right));
  }
  v.density_rank = static_cast<int>(span.size());
  v.density_expected = nb * na;
  return v;
}

class Coaction {
public:
  /// Validates and throws ValidationError naming the first failing condition.
  Coaction(MultiMatrixAlgebra b, QuantumGroupPtr g, CMatrix delta, std::string name = {})
      : b_(std::move(b)), g_(std::move(g)), delta_(std::move(delta)), name_(std::move(name)),
        ba_({b_, g_->algebra()}) {
    validation_ = validate_coaction(b_, *g_, delta_);
    if (const auto f = validation_.failure(); !f.empty())
      throw ValidationError((name_.empty() ? std::string("coaction") : "coaction '" + name_ + "'") + ": " + f);
  }

  const MultiMatrixAlgebra& algebra() const { return b_; }
  const FiniteQuantumGroup& group() const { return *g_; }
  const QuantumGroupPtr& group_ptr() const { return g_; }
  const CMatrix& delta() const { return delta_; }
  const std::string& name() const { return name_; }
  const TensorShape& shape() const { return ba_; }
  const CoactionValidation& validation() const { return validation_; }
  int dim_b() const { return b_.dim(); }
  int dim_a() const { return g_->dim(); }

  CVector apply(const CVector& x) const { return delta_ * x; }
  CMatrix apply_operator(const CVector& x) const { return ba_.to_operator(delta_ * x); }

private:
  MultiMatrixAlgebra b_;
  QuantumGroupPtr g_;
  CMatrix delta_;
  std::string name_;
  TensorShape ba_;
  CoactionValidation validation_;
};

using CoactionPtr = std::shared_ptr<const Coaction>;

inline CoactionPtr trivial_coaction(const MultiMatrixAlgebra& b, const QuantumGroupPtr& g, std::string name = {}) {
  CMatrix d = kron(identity(b.dim()), CMatrix(g->algebra().unit()));
  return std::make_shared<const Coaction>(b, g, d, std::move(name));
}

inline CoactionPtr regular_coaction(const QuantumGroupPtr& g, std::string name = {}) {
  return std::make_shared<const Coaction>(g->algebra(), g, g->comult(), std::move(name));
}

/// Contracts the A leg of an element of B⊗A against a functional on A.
inline CMatrix slice_map(const Coaction& c, const CVector& functional) {
  return kron(identity(c.dim_b()), CMatrix(functional.transpose())) * c.delta();
}

// ---------------------------------------------------------------------------
// spectral projections

/// P^α_ij = (id ⊗ h(· c_ji))δ with c_ji = M f_j u_ji*.
inline CMatrix matrix_projection(const Coaction& c, const Corep& u, int i, int j) {
  const auto& g = c.group();
  const CVector cji = u.M * u.f(j) * g.adjoint(u(j, i));
  CVector phi(g.dim());
  for (int m = 0; m < g.dim(); ++m) phi(m) = g.h(g.multiply(g.algebra().basis(m), cji));
  return slice_map(c, phi);
}

/// P_α = Σ_i P^α_ii, i.e. (id⊗h_α)δ with h_α = M Σ_i f_i h(· u_ii*).
inline CMatrix spectral_projection(const Coaction& c, const Corep& u) {
  CMatrix p = CMatrix::Zero(c.dim_b(), c.dim_b());
  for (int i = 0; i < u.d; ++i) p += matrix_projection(c, u, i, i);
  return p;
}

/// Orthonormal coefficient basis (columns) of B_α = range P_α.
inline CMatrix spectral_subspace(const Coaction& c, const Corep& u) {
  return orthonormal_columns(spectral_projection(c, u));
}

// ---------------------------------------------------------------------------
// spectral matrices B₂(w) ⊂ B⊗M_d

/// X = Σ X_ij ⊗ m_ij with X_ij ∈ B; entry (i,j) is entries[i*d+j].
struct SpectralMatrix {
  int d = 0;
  std::vector<CVector> entries;

  const CVector& operator()(int i, int j) const { return entries[static_cast<std::size_t>(i * d + j)]; }
  CVector& operator()(int i, int j) { return entries[static_cast<std::size_t>(i * d + j)]; }

  static SpectralMatrix zero(int d, int dim_b) {
    return SpectralMatrix{d, std::vector<CVector>(static_cast<std::size_t>(d) * d, CVector::Zero(dim_b))};
  }

  /// Concrete operator on H_B ⊗ C^d.
  CMatrix to_operator(const MultiMatrixAlgebra& b) const {
    CMatrix op = CMatrix::Zero(b.rep_dim() * d, b.rep_dim() * d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        CMatrix m = CMatrix::Zero(d, d);
        m(i, j) = 1.0;
        op += kron(b.to_operator((*this)(i, j)), m);
      }
    return op;
  }

  /// Coefficients in amplify(b, d).
  CVector coeffs(const MultiMatrixAlgebra& b) const { return amplify(b, d).from_operator(to_operator(b)); }

  double norm() const {
    double s = 0;
    for (const auto& e : entries) s += e.squaredNorm();
    return std::sqrt(s);
  }
};

inline SpectralMatrix spectral_matrix_from_coeffs(const MultiMatrixAlgebra& b, int d, const CVector& x) {
  const CMatrix op = amplify(b, d).to_operator(x);
  SpectralMatrix s = SpectralMatrix::zero(d, b.dim());
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      CMatrix blk(b.rep_dim(), b.rep_dim());
      for (int r = 0; r < b.rep_dim(); ++r)
        for (int cc = 0; cc < b.rep_dim(); ++cc) blk(r, cc) = op(r * d + i, cc * d + j);
      s(i, j) = b.from_operator(blk);
    }
  return s;
}

/// max_ij |δ(X_ij) − Σ_k X_ik ⊗ w_kj|, the entrywise form of δ₁₃(X) = (X⊗1)(1⊗w).
inline double spectral_identity_residual(const Coaction& c, const SpectralMatrix& x, const Corep& w) {
  if (x.d != w.d) throw ContractViolation("spectral_identity_residual: dimension mismatch");
  double r = 0;
  for (int i = 0; i < x.d; ++i)
    for (int j = 0; j < x.d; ++j) {
      CVector rhs = CVector::Zero(static_cast<Eigen::Index>(c.dim_b()) * c.dim_a());
      for (int k = 0; k < x.d; ++k) rhs += tensor_coeffs(x(i, k), w(k, j));
      r = std::max(r, (c.apply(x(i, j)) - rhs).norm());
    }
  return r;
}

/// Basis of the single-row solutions: each column is a row [X_0, ..., X_{d-1}]
/// (segment j holds X_j ∈ B) with δ(X_j) = Σ_k X_k ⊗ w_kj.  The condition
/// decouples over rows, so B₂(w) is d copies of this space.
inline CMatrix spectral_row_space(const Coaction& c, const Corep& w) {
  const int d = w.d, nb = c.dim_b(), na = c.dim_a();
  const Eigen::Index rows = static_cast<Eigen::Index>(d) * nb * na;
  CMatrix sys = CMatrix::Zero(rows, static_cast<Eigen::Index>(d) * nb);
  for (int j = 0; j < d; ++j) {
    sys.block(static_cast<Eigen::Index>(j) * nb * na, static_cast<Eigen::Index>(j) * nb, nb * na, nb) += c.delta();
    for (int k = 0; k < d; ++k) {
      // x ↦ x ⊗ w_kj
      const CMatrix t = kron(identity(nb), CMatrix(w(k, j)));
      sys.block(static_cast<Eigen::Index>(j) * nb * na, static_cast<Eigen::Index>(k) * nb, nb * na, nb) -= t;
    }
  }
  return null_space(sys);
}

/// Spreads a row-space basis into a basis of B₂ (one copy per row position).
inline std::vector<SpectralMatrix> spread_rows(const CMatrix& rowspace, int d, int nb) {
  std::vector<SpectralMatrix> out;
  for (int i0 = 0; i0 < d; ++i0)
    for (Eigen::Index col = 0; col < rowspace.cols(); ++col) {
      SpectralMatrix x = SpectralMatrix::zero(d, nb);
      for (int j = 0; j < d; ++j) x(i0, j) = rowspace.col(col).segment(static_cast<Eigen::Index>(j) * nb, nb);
      out.push_back(std::move(x));
    }
  return out;
}

/// B₂(w) for an arbitrary (possibly reducible or non-unitary) corep, by solving
/// the characterizing identity.
inline std::vector<SpectralMatrix> solve_spectral_matrix_space(const Coaction& c, const Corep& w) {
  return spread_rows(spectral_row_space(c, w), w.d, c.dim_b());
}

/// B₂(u^α) for an irrep: rows [P^α_{i0,j}(x)]_j over a basis of B, orthonormalized,
/// placed in every row position.  Each element is checked against the
/// characterizing identity.
inline std::vector<SpectralMatrix> spectral_matrix_space(const Coaction& c, const Corep& u) {
  const int d = u.d, nb = c.dim_b();
  std::vector<CMatrix> p;
  for (int j = 0; j < d; ++j) p.push_back(matrix_projection(c, u, 0, j));
  CMatrix rows(static_cast<Eigen::Index>(d) * nb, nb);
  for (int j = 0; j < d; ++j) rows.middleRows(static_cast<Eigen::Index>(j) * nb, nb) = p[j];
  const auto out = spread_rows(orthonormal_columns(rows), d, nb);
  for (const auto& x : out)
    if (spectral_identity_residual(c, x, u) > 1e3 * numerics().tol)
      throw InternalInconsistency("spectral_matrix_space: characterizing identity fails");
  return out;
}

/// Similarity variant for (S⁻¹⊗1)u(S⊗1): X ↦ (1⊗S⁻¹) X (1⊗S).
inline std::vector<SpectralMatrix> spectral_matrix_space(const Coaction& c, const SimilarCorep& s) {
  const Corep& u = c.group().irrep(s.label);
  const CMatrix sinv = s.similarity.inverse();
  std::vector<SpectralMatrix> out;
  for (const auto& x : spectral_matrix_space(c, u)) {
    SpectralMatrix y = SpectralMatrix::zero(u.d, c.dim_b());
    for (int i = 0; i < u.d; ++i)
      for (int j = 0; j < u.d; ++j)
        for (int a = 0; a < u.d; ++a)
          for (int b = 0; b < u.d; ++b) y(i, j) += sinv(i, a) * s.similarity(b, j) * x(a, b);
    out.push_back(std::move(y));
  }
  return out;
}

/// X⊙Y with entry ((l,i),(k,j)) = X_lk Y_ij, flattened as l·d_Y + i.
inline SpectralMatrix odot(const MultiMatrixAlgebra& b, const SpectralMatrix& x, const SpectralMatrix& y) {
  SpectralMatrix out = SpectralMatrix::zero(x.d * y.d, b.dim());
  for (int l = 0; l < x.d; ++l)
    for (int k = 0; k < x.d; ++k)
      for (int i = 0; i < y.d; ++i)
        for (int j = 0; j < y.d; ++j) out(l * y.d + i, k * y.d + j) = b.multiply(x(l, k), y(i, j));
  return out;
}

// ---------------------------------------------------------------------------
// fixed points

struct FixedAlgebra {
  CMatrix coeffs;  // orthonormal coefficient basis (columns) in B
  OperatorSubspace ops;
  Wedderburn structure;
};

inline CMatrix fixed_coefficients(const Coaction& c) {
  const CMatrix one_a = CMatrix(c.group().algebra().unit());
  return null_space(c.delta() - kron(identity(c.dim_b()), one_a));
}

inline FixedAlgebra fixed_algebra(const Coaction& c) {
  const CMatrix k = fixed_coefficients(c);
  std::vector<CMatrix> ops;
  for (Eigen::Index i = 0; i < k.cols(); ++i) ops.push_back(c.algebra().to_operator(k.col(i)));
  OperatorSubspace s(c.algebra().rep_dim(), ops);
  Wedderburn w = wedderburn(s);
  return FixedAlgebra{k, std::move(s), std::move(w)};
}

inline bool is_fixed(const Coaction& c, const CVector& x, double tol = 1e3 * numerics().tol) {
  return (c.apply(x) - tensor_coeffs(x, c.group().algebra().unit())).norm() <= tol * std::max(1.0, x.norm());
}

// ---------------------------------------------------------------------------
// amplified coaction δ_u on B⊗M_d

/// δ_u(b⊗k) = u₂₃ δ(b)₁₃ (1⊗k⊗1) u₂₃*, as a coaction on amplify(B, d).
inline CoactionPtr amplified_coaction(const Coaction& c, const Corep& u) {
  const auto& g = c.group();
  if (unitarity_residual(g, u) > 1e3 * numerics().tol)
    throw ContractViolation("amplified_coaction: corepresentation must be unitary");
  const MultiMatrixAlgebra& b = c.algebra();
  const int d = u.d, na = g.dim();
  const MultiMatrixAlgebra md = full_matrix_algebra(d);
  const MultiMatrixAlgebra bd = amplify(b, d);
  const TensorShape three({b, md, g.algebra()});
  const TensorShape two({bd, g.algebra()});

  // u₂₃ = Σ 1 ⊗ m_ij ⊗ u_ij
  CVector u23 = CVector::Zero(three.dim());
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) u23 += tensor_coeffs(tensor_coeffs(b.unit(), md.basis(md.unit_index(0, i, j))), u(i, j));
  const CMatrix uop = three.to_operator(u23);
  const CMatrix uadj = uop.adjoint();

  CMatrix delta(static_cast<Eigen::Index>(bd.dim()) * na, bd.dim());
  for (int k = 0; k < bd.dim(); ++k) {
    const int row = bd.unit_row(k), col = bd.unit_col(k);
    CMatrix single = CMatrix::Zero(b.rep_dim(), b.rep_dim());
    single(row / d, col / d) = 1.0;
    const CVector eb = b.from_operator(single);
    // δ(e_b)₁₃ (1⊗m_ij⊗1)
    const CVector db = c.apply(eb);
    CVector leg13 = CVector::Zero(three.dim());
    for (int bb = 0; bb < b.dim(); ++bb)
      for (int a = 0; a < na; ++a) {
        const cplx v = db(static_cast<Eigen::Index>(bb) * na + a);
        if (v == cplx(0)) continue;
        const Eigen::Index m = md.unit_index(0, row % d, col % d);
        leg13((static_cast<Eigen::Index>(bb) * md.dim() + m) * na + a) += v;
      }
    delta.col(k) = two.from_operator(uop * three.to_operator(leg13) * uadj);
  }
  return std::make_shared<const Coaction>(bd, c.group_ptr(), delta,
                                          c.name().empty() ? std::string() : c.name() + "⊗M" + std::to_string(d));
}

// ---------------------------------------------------------------------------
// invariant ideals

/// δ(J) ⊆ J⊗A and span δ(J)(1⊗A) = J⊗A.
inline bool is_invariant_ideal(const Coaction& c, const IdealDescriptor& j) {
  const auto& b = c.algebra();
  const int na = c.dim_a();
  const CMatrix basis = j.basis(b);
  for (Eigen::Index col = 0; col < basis.cols(); ++col) {
    const CVector dx = c.apply(basis.col(col));
    for (int k = 0; k < b.dim(); ++k)
      if (!j.block_subset[b.unit_block(k)] && dx.segment(static_cast<Eigen::Index>(k) * na, na).norm() > 1e3 * numerics().tol)
        return false;
  }
  OrthonormalSpan span(static_cast<Eigen::Index>(b.dim()) * na);
  for (int l = 0; l < na; ++l) {
    const CMatrix right = c.shape().to_operator(tensor_coeffs(b.unit(), c.group().algebra().basis(l)));
    for (Eigen::Index col = 0; col < basis.cols(); ++col)
      span.add(c.shape().from_operator(c.apply_operator(basis.col(col)) * right));
  }
  return span.size() == basis.cols() * na;
}

inline std::vector<IdealDescriptor> invariant_ideals(const Coaction& c) {
  std::vector<IdealDescriptor> out;
  for (const auto& j : all_ideals(c.algebra().num_blocks()))
    if (is_invariant_ideal(c, j)) out.push_back(j);
  return out;
}

/// Product of two nonzero invariant ideals is nonzero (block subsets intersect).
inline bool is_G_prime(const Coaction& c) {
  const auto ideals = invariant_ideals(c);
  for (const auto& i : ideals)
    for (const auto& j : ideals) {
      if (i.empty() || j.empty()) continue;
      bool meet = false;
      for (std::size_t k = 0; k < i.block_subset.size(); ++k) meet = meet || (i.block_subset[k] && j.block_subset[k]);
      if (!meet) return false;
    }
  return true;
}

inline bool is_G_simple(const Coaction& c) {
  for (const auto& i : invariant_ideals(c))
    if (!i.empty() && !i.full()) return false;
  return true;
}

// ---------------------------------------------------------------------------
// invariant corners qBq, q ∈ B^δ

struct InvariantCorner {
  std::vector<int> rank_tuple;  // per block of B^δ
  CVector q;                    // coefficients in B
  bool valid = false;
  std::string diagnostic;
  std::shared_ptr<const Coaction> restricted;  // coaction on the abstract corner algebra
  std::optional<Wedderburn> structure;         // qBq ≅ restricted->algebra()
};

/// The restriction of δ to qBq for a projection q with δ(q) = q⊗1.
inline InvariantCorner make_corner(const Coaction& c, const CVector& q, std::vector<int> rank_tuple = {}) {
  InvariantCorner out;
  out.rank_tuple = std::move(rank_tuple);
  out.q = q;
  const auto& b = c.algebra();
  if (!is_projection(b.to_operator(q))) throw ContractViolation("make_corner: q is not a projection");
  if (!is_fixed(c, q)) {
    out.diagnostic = "δ(q) ≠ q⊗1";
    return out;
  }
  const OperatorSubspace s = corner(b, q);
  Wedderburn w = wedderburn(s);
  const MultiMatrixAlgebra& cab = w.algebra;
  const int na = c.dim_a();
  CMatrix delta(static_cast<Eigen::Index>(cab.dim()) * na, cab.dim());
  for (int k = 0; k < cab.dim(); ++k) {
    const CVector x = b.from_operator(w.from_abstract(cab.basis(k)));
    const CVector dx = c.apply(x);
    for (int a = 0; a < na; ++a) {
      CVector slice(b.dim());
      for (int bb = 0; bb < b.dim(); ++bb) slice(bb) = dx(static_cast<Eigen::Index>(bb) * na + a);
      const CMatrix op = b.to_operator(slice);
      if (s.residual(op) > 1e3 * numerics().tol * std::max(1.0, op.norm())) {
        out.diagnostic = "δ(qBq) ⊄ qBq⊗A";
        return out;
      }
      const CVector pa = w.to_abstract(op);
      for (int r = 0; r < cab.dim(); ++r) delta(static_cast<Eigen::Index>(r) * na + a, k) = pa(r);
    }
  }
  try {
    out.restricted = std::make_shared<const Coaction>(cab, c.group_ptr(), delta);
    out.valid = true;
  } catch (const ValidationError& e) {
    out.diagnostic = e.what();
  }
  out.structure = std::move(w);
  return out;
}

/// One corner per nonzero rank tuple of projections across the blocks of B^δ.
inline std::vector<InvariantCorner> invariant_corners(const Coaction& c, const FixedAlgebra& fa) {
  const auto& blocks = fa.structure.blocks;
  std::vector<int> t(blocks.size(), 0);
  std::vector<InvariantCorner> out;
  while (true) {
    std::size_t pos = 0;
    while (pos < t.size() && t[pos] == blocks[pos].size) t[pos++] = 0;
    if (pos == t.size()) break;
    ++t[pos];
    CMatrix q = CMatrix::Zero(c.algebra().rep_dim(), c.algebra().rep_dim());
    for (std::size_t a = 0; a < blocks.size(); ++a)
      for (int i = 0; i < t[a]; ++i) q += blocks[a].units[i][i];
    out.push_back(make_corner(c, c.algebra().from_operator(q), t));
  }
  return out;
}

inline std::vector<InvariantCorner> invariant_corners(const Coaction& c) { return invariant_corners(c, fixed_algebra(c)); }

}  // namespace qspec
