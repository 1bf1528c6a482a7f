#pragma once

// Finite quantum groups: Hopf *-algebra data on a multi-matrix algebra, the Haar
// state, irreducible unitary corepresentations and their fusion.

#include "qspec/subspace.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace qspec {

/// φ(x) for a functional given by its values on the matrix-unit basis.
inline cplx fapply(const CVector& f, const CVector& x) { return (f.transpose() * x)(0); }

/// A d×d matrix with entries in A.  Entry (i,j) is entries[i*d+j].
struct Corep {
  int label = -1;  // index into FiniteQuantumGroup::irreps(), -1 if not an irrep
  int d = 0;
  std::vector<CVector> entries;
  CMatrix F;       // positive diagonal intertwiner with the double contragredient
  double M = 0.0;  // tr F

  const CVector& operator()(int i, int j) const { return entries[static_cast<std::size_t>(i * d + j)]; }
  CVector& operator()(int i, int j) { return entries[static_cast<std::size_t>(i * d + j)]; }
  double f(int i) const { return F(i, i).real(); }
};

/// A possibly non-unitary representative (S⁻¹⊗1)u(S⊗1) of an irreducible class.
struct SimilarCorep {
  int label = 0;
  CMatrix similarity;
};

struct HopfValidation {
  double homomorphism = 0, star = 0, unital = 0, coassociativity = 0, counit = 0, antipode = 0;
  double max() const { return std::max({homomorphism, star, unital, coassociativity, counit, antipode}); }
};

struct FusionReport {
  int left = -1, right = -1;
  std::vector<std::pair<int, int>> components;  // (irrep label, multiplicity)
  std::vector<int> character_multiplicities;   // per irrep, from h(χ_ρ* χ_α χ_β)
  CMatrix intertwiner;                          // unitary, columns grouped by component
  double residual = 0;                          // |W*(u⊙w)W - ⊕u^ρ|
};

class FiniteQuantumGroup {
public:
  /// Validates the Hopf data, then computes the Haar state, the irreducible
  /// corepresentations and their F-matrices.
  static std::shared_ptr<const FiniteQuantumGroup> create(std::string name, MultiMatrixAlgebra a, CMatrix comult,
                                                          CVector counit, CMatrix antipode);

  const std::string& name() const { return name_; }
  const MultiMatrixAlgebra& algebra() const { return a_; }
  const TensorShape& square() const { return aa_; }
  int dim() const { return a_.dim(); }
  const CMatrix& comult() const { return comult_; }
  const CVector& counit() const { return counit_; }
  const CMatrix& antipode() const { return antipode_; }
  const CVector& haar() const { return haar_; }
  const std::vector<Corep>& irreps() const { return irreps_; }
  const Corep& irrep(int label) const { return irreps_.at(static_cast<std::size_t>(label)); }
  int num_irreps() const { return static_cast<int>(irreps_.size()); }
  int trivial_label() const { return 0; }
  const HopfValidation& validation() const { return validation_; }
  /// label of the conjugate class ᾱ
  int conjugate_label(int label) const { return conj_.at(static_cast<std::size_t>(label)); }

  CVector comultiply(const CVector& x) const { return comult_ * x; }
  CVector multiply(const CVector& x, const CVector& y) const { return a_.multiply(x, y); }
  CVector adjoint(const CVector& x) const { return a_.adjoint(x); }
  cplx h(const CVector& x) const { return fapply(haar_, x); }
  /// Gram matrix of the Haar inner product ⟨x,y⟩ = h(x*y) on coefficients.
  const CMatrix& haar_gram() const { return gram_; }

  /// m: A⊗A → A as a dim × dim² matrix.
  const CMatrix& multiplication_map() const { return mult_; }

private:
  FiniteQuantumGroup() = default;

  std::string name_;
  MultiMatrixAlgebra a_;
  TensorShape aa_{{MultiMatrixAlgebra()}};
  CMatrix comult_, antipode_, mult_, gram_;
  CVector counit_, haar_;
  std::vector<Corep> irreps_;
  std::vector<int> conj_;
  HopfValidation validation_;
};

using QuantumGroupPtr = std::shared_ptr<const FiniteQuantumGroup>;

// ---------------------------------------------------------------------------
// Hopf axioms

inline CMatrix multiplication_map(const MultiMatrixAlgebra& a) {
  CMatrix m = CMatrix::Zero(a.dim(), static_cast<Eigen::Index>(a.dim()) * a.dim());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) m.col(i * a.dim() + j) = a.multiply(a.basis(i), a.basis(j));
  return m;
}

inline HopfValidation validate_hopf(const MultiMatrixAlgebra& a, const CMatrix& comult, const CVector& counit,
                                    const CMatrix& antipode) {
  const int n = a.dim();
  if (comult.rows() != n * n || comult.cols() != n || counit.size() != n || antipode.rows() != n ||
      antipode.cols() != n)
    throw ContractViolation("validate_hopf: inconsistent shapes");
  if (!comult.allFinite() || !counit.allFinite() || !antipode.allFinite())
    throw ValidationError("validate_hopf: non-finite entries");
  HopfValidation v;
  const TensorShape aa({a, a});
  std::vector<CMatrix> dops;
  for (int k = 0; k < n; ++k) dops.push_back(aa.to_operator(comult.col(k)));
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l) {
      const CVector prod = a.multiply(a.basis(k), a.basis(l));
      v.homomorphism = std::max(v.homomorphism, (aa.from_operator(dops[k] * dops[l]) - comult * prod).norm());
      v.counit = std::max(v.counit, std::abs(fapply(counit, prod) - counit(k) * counit(l)));
    }
    v.star = std::max(v.star, (aa.from_operator(dops[k].adjoint()) - comult * a.adjoint(a.basis(k))).norm());
    v.counit = std::max(v.counit, std::abs(fapply(counit, a.adjoint(a.basis(k))) - std::conj(counit(k))));
  }
  v.unital = (comult * a.unit() - tensor_coeffs(a.unit(), a.unit())).norm();
  const CMatrix id = identity(n);
  const CMatrix left = kron(comult, id) * comult;
  const CMatrix right = kron(id, comult) * comult;
  v.coassociativity = max_abs(left - right);
  const CMatrix eps_row = counit.transpose();
  v.counit = std::max(v.counit, max_abs(kron(eps_row, id) * comult - id));
  v.counit = std::max(v.counit, max_abs(kron(id, eps_row) * comult - id));
  const CMatrix m = multiplication_map(a);
  const CMatrix unit_eps = a.unit() * eps_row;
  v.antipode = std::max(max_abs(m * kron(antipode, id) * comult - unit_eps),
                        max_abs(m * kron(id, antipode) * comult - unit_eps));
  return v;
}

/// The unique S with m(S⊗id)Δ = 1ε, by solving the linear system.
inline CMatrix solve_antipode(const MultiMatrixAlgebra& a, const CMatrix& comult, const CVector& counit) {
  const int n = a.dim();
  // unknown S(e_i) = s_i, stacked; equation per k: Σ_ij c^k_ij s_i e_j = ε_k 1
  std::vector<CMatrix> right_mult;
  for (int j = 0; j < n; ++j) right_mult.push_back(a.right_multiplication(a.basis(j)));
  CMatrix sys = CMatrix::Zero(static_cast<Eigen::Index>(n) * n, static_cast<Eigen::Index>(n) * n);
  CVector rhs(static_cast<Eigen::Index>(n) * n);
  for (int k = 0; k < n; ++k) {
    rhs.segment(k * n, n) = counit(k) * a.unit();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const cplx c = comult(i * n + j, k);
        if (c != cplx(0)) sys.block(k * n, i * n, n, n) += c * right_mult[j];
      }
  }
  const CVector s = sys.colPivHouseholderQr().solve(rhs);
  if ((sys * s - rhs).norm() > 1e3 * numerics().tol) throw ValidationError("solve_antipode: no antipode exists");
  CMatrix out(n, n);
  for (int i = 0; i < n; ++i) out.col(i) = s.segment(i * n, n);
  return out;
}

// ---------------------------------------------------------------------------
// Haar state

/// The unique h with (id⊗h)Δ = h(·)1 = (h⊗id)Δ and h(1) = 1.
inline CVector compute_haar(const MultiMatrixAlgebra& a, const CMatrix& comult) {
  const int n = a.dim();
  const CVector one = a.unit();
  CMatrix sys = CMatrix::Zero(2 * static_cast<Eigen::Index>(n) * n, n);
  for (int k = 0; k < n; ++k) {
    const CMatrix dk = unvec(comult.col(k), n, n).transpose();  // dk(i,j) = coeff of e_i⊗e_j
    for (int i = 0; i < n; ++i) {
      const Eigen::Index row = static_cast<Eigen::Index>(k) * n + i;
      sys.row(row) = dk.row(i);
      sys(row, k) -= one(i);
      const Eigen::Index row2 = static_cast<Eigen::Index>(n) * n + row;
      sys.row(row2) = dk.col(i).transpose();
      sys(row2, k) -= one(i);
    }
  }
  const CMatrix ker = null_space(sys);
  if (ker.cols() != 1)
    throw ValidationError("compute_haar: invariant functional is not unique (kernel dimension " +
                          std::to_string(ker.cols()) + ")");
  CVector h = ker.col(0);
  const cplx h1 = fapply(h, one);
  if (std::abs(h1) < numerics().tol) throw ValidationError("compute_haar: invariant functional vanishes at 1");
  h /= h1;
  // positivity: Gram matrix h(e_k* e_l) is positive semidefinite
  CMatrix gram(n, n);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) gram(k, l) = fapply(h, a.multiply(a.adjoint(a.basis(k)), a.basis(l)));
  if (max_abs(gram - gram.adjoint()) > 1e3 * numerics().tol)
    throw ValidationError("compute_haar: invariant functional is not self-adjoint");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (gram + gram.adjoint()));
  if (es.eigenvalues().minCoeff() < -1e3 * numerics().tol)
    throw ValidationError("compute_haar: invariant functional is not positive");
  return h;
}

// ---------------------------------------------------------------------------
// corepresentation utilities (free functions over a group)

inline double corep_residual(const FiniteQuantumGroup& g, const Corep& u) {
  double r = 0;
  for (int i = 0; i < u.d; ++i)
    for (int j = 0; j < u.d; ++j) {
      CVector rhs = CVector::Zero(static_cast<Eigen::Index>(g.dim()) * g.dim());
      for (int k = 0; k < u.d; ++k) rhs += tensor_coeffs(u(i, k), u(k, j));
      r = std::max(r, (g.comultiply(u(i, j)) - rhs).norm());
    }
  return r;
}

/// max over i,j of |Σ_k u_ki* u_kj − δ_ij| and |Σ_k u_ik u_jk* − δ_ij|.
inline double unitarity_residual(const FiniteQuantumGroup& g, const Corep& u) {
  double r = 0;
  const CVector one = g.algebra().unit();
  for (int i = 0; i < u.d; ++i)
    for (int j = 0; j < u.d; ++j) {
      CVector a = CVector::Zero(g.dim()), b = CVector::Zero(g.dim());
      for (int k = 0; k < u.d; ++k) {
        a += g.multiply(g.adjoint(u(k, i)), u(k, j));
        b += g.multiply(u(i, k), g.adjoint(u(j, k)));
      }
      const CVector e = (i == j) ? one : CVector::Zero(g.dim());
      r = std::max({r, (a - e).norm(), (b - e).norm()});
    }
  return r;
}

inline CVector character(const Corep& u) {
  CVector chi = CVector::Zero(u.entries.front().size());
  for (int i = 0; i < u.d; ++i) chi += u(i, i);
  return chi;
}

/// (R⊗1) u (R⁻¹⊗1).
inline Corep conjugate_by(const Corep& u, const CMatrix& r, const CMatrix& rinv) {
  Corep out = u;
  out.label = u.label;
  for (int i = 0; i < u.d; ++i)
    for (int j = 0; j < u.d; ++j) {
      CVector e = CVector::Zero(u(0, 0).size());
      for (int a = 0; a < u.d; ++a)
        for (int b = 0; b < u.d; ++b) e += r(i, a) * rinv(b, j) * u(a, b);
      out(i, j) = e;
    }
  return out;
}

/// Basis of { T (n×m) : (T⊗1) y = x (T⊗1) } for coreps x (n-dim) and y (m-dim).
inline std::vector<CMatrix> intertwiner_space(const FiniteQuantumGroup& g, const Corep& x, const Corep& y) {
  const int n = x.d, m = y.d, dim = g.dim();
  CMatrix sys = CMatrix::Zero(static_cast<Eigen::Index>(n) * m * dim, static_cast<Eigen::Index>(n) * m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) {
      const Eigen::Index row = (static_cast<Eigen::Index>(i) * m + j) * dim;
      for (int k = 0; k < m; ++k) sys.block(row, i * m + k, dim, 1) += y(k, j);
      for (int k = 0; k < n; ++k) sys.block(row, k * m + j, dim, 1) -= x(i, k);
    }
  const CMatrix ker = null_space(sys);
  std::vector<CMatrix> out;
  for (Eigen::Index c = 0; c < ker.cols(); ++c) {
    CMatrix t(n, m);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < m; ++k) t(i, k) = ker(i * m + k, c);
    out.push_back(t);
  }
  return out;
}

/// Label of the irrep equivalent to the irreducible corep w, or -1.
inline int identify_class(const FiniteQuantumGroup& g, const Corep& w) {
  for (const auto& rho : g.irreps()) {
    if (rho.d != w.d) continue;
    for (const auto& t : intertwiner_space(g, w, rho)) {
      Eigen::JacobiSVD<CMatrix> svd(t);
      const auto& s = svd.singularValues();
      if (s.minCoeff() > 1e3 * numerics().tol * std::max(1.0, s.maxCoeff())) return rho.label;
    }
  }
  return -1;
}

/// Solves F u = u^{cc} F for F > 0 with tr F = tr F⁻¹, where u^{cc}_{ij} = S²(u_ij).
/// Returns F diagonalized together with the unitary V such that V* u V has
/// diagonal F; V = I when F is already diagonal.
struct FMatrixResult {
  CMatrix F;
  double M = 0;
  CMatrix rotation;
};

inline FMatrixResult f_matrix(const FiniteQuantumGroup& g, const Corep& u) {
  Corep ucc = u;
  const CMatrix s2 = g.antipode() * g.antipode();
  for (auto& e : ucc.entries) e = s2 * e;
  const auto space = intertwiner_space(g, ucc, u);  // ucc (F⊗1) = (F⊗1) u
  if (space.size() != 1)
    throw ContractViolation("f_matrix: intertwiner space has dimension " + std::to_string(space.size()) +
                            "; corepresentation is not irreducible");
  CMatrix f = space.front();
  const cplx tr = f.trace();
  const cplx phase = std::abs(tr) > 1e-12 ? std::conj(tr) / std::abs(tr) : cplx(1.0);
  f *= phase;
  const CMatrix herm = 0.5 * (f + f.adjoint());
  if (max_abs(herm - f) > 1e3 * numerics().tol * std::max(1.0, max_abs(f)))
    throw ValidationError("f_matrix: intertwiner cannot be made self-adjoint");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(herm);
  CVector w = es.eigenvalues().cast<cplx>();
  if (es.eigenvalues().maxCoeff() < 0) w = -w;
  for (Eigen::Index i = 0; i < w.size(); ++i)
    if (w(i).real() <= 0) throw ValidationError("f_matrix: intertwiner is not definite");
  double trf = 0, trinv = 0;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    trf += w(i).real();
    trinv += 1.0 / w(i).real();
  }
  const double scale = std::sqrt(trinv / trf);
  w *= scale;
  FMatrixResult r;
  const CMatrix full = es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
  const bool diagonal = max_abs(full - CMatrix(full.diagonal().asDiagonal())) <= 1e3 * numerics().tol;
  if (diagonal) {
    r.F = CMatrix(full.diagonal().real().cast<cplx>().asDiagonal());
    r.rotation = identity(u.d);
  } else {
    r.F = CMatrix(w.real().cast<cplx>().asDiagonal());
    r.rotation = es.eigenvectors();
  }
  r.M = r.F.trace().real();
  return r;
}

/// max deviation of the Haar orthogonality relations
///   h(u_ij* u_mn) = δ_im δ_jn / (M f_i),  h(u_mk u_nl*) = f_l δ_mn δ_lk / M
/// and cross-class orthogonality.
inline double verify_orthogonality(const FiniteQuantumGroup& g) {
  double dev = 0;
  for (const auto& a : g.irreps()) {
    for (int i = 0; i < a.d; ++i)
      for (int j = 0; j < a.d; ++j)
        for (int m = 0; m < a.d; ++m)
          for (int n = 0; n < a.d; ++n) {
            const cplx lhs1 = g.h(g.multiply(g.adjoint(a(i, j)), a(m, n)));
            const double rhs1 = (i == m && j == n) ? 1.0 / (a.M * a.f(i)) : 0.0;
            dev = std::max(dev, std::abs(lhs1 - rhs1));
            // second relation with (m,k,n,l) = (i,j,m,n)
            const cplx lhs2 = g.h(g.multiply(a(i, j), g.adjoint(a(m, n))));
            const double rhs2 = (i == m && n == j) ? a.f(n) / a.M : 0.0;
            dev = std::max(dev, std::abs(lhs2 - rhs2));
          }
    for (const auto& b : g.irreps()) {
      if (b.label == a.label) continue;
      for (const auto& x : a.entries)
        for (const auto& y : b.entries) dev = std::max(dev, std::abs(g.h(g.multiply(g.adjoint(x), y))));
    }
  }
  return dev;
}

/// ū with entries u_ij*; label set to its class.
inline Corep conjugate(const FiniteQuantumGroup& g, const Corep& u) {
  Corep out;
  out.d = u.d;
  for (const auto& e : u.entries) out.entries.push_back(g.adjoint(e));
  out.label = identify_class(g, out);
  return out;
}

/// u ⊙ w with entries u_pq w_rs at ((p,r),(q,s)), flattened as p·d_w + r.
inline Corep kronecker(const FiniteQuantumGroup& g, const Corep& u, const Corep& w) {
  Corep out;
  out.d = u.d * w.d;
  out.entries.assign(static_cast<std::size_t>(out.d) * out.d, CVector());
  for (int p = 0; p < u.d; ++p)
    for (int q = 0; q < u.d; ++q)
      for (int r = 0; r < w.d; ++r)
        for (int s = 0; s < w.d; ++s) out(p * w.d + r, q * w.d + s) = g.multiply(u(p, q), w(r, s));
  out.F = identity(out.d);
  out.M = out.d;
  return out;
}

/// The corep (S⁻¹⊗1) u^α (S⊗1).
inline Corep materialize(const FiniteQuantumGroup& g, const SimilarCorep& s) {
  const Corep& u = g.irrep(s.label);
  Corep out = conjugate_by(u, s.similarity.inverse(), s.similarity);
  out.label = s.label;
  return out;
}

inline FusionReport fuse(const FiniteQuantumGroup& g, const Corep& u, const Corep& w) {
  FusionReport rep;
  rep.left = u.label;
  rep.right = w.label;
  const Corep x = kronecker(g, u, w);
  if (unitarity_residual(g, u) > 1e3 * numerics().tol || unitarity_residual(g, w) > 1e3 * numerics().tol)
    throw ContractViolation("fuse: inputs must be unitary");
  std::vector<CMatrix> cols;
  std::vector<int> block_labels;
  const CVector chi_uw = g.multiply(character(u), character(w));
  for (const auto& rho : g.irreps()) {
    auto ts = intertwiner_space(g, x, rho);  // x T = T u^ρ
    const int mult = static_cast<int>(ts.size());
    const int by_char =
        static_cast<int>(std::lround(g.h(g.multiply(g.adjoint(character(rho)), chi_uw)).real()));
    rep.character_multiplicities.push_back(by_char);
    if (mult != by_char)
      throw InternalInconsistency("fuse: intertwiner multiplicity " + std::to_string(mult) +
                                  " differs from character multiplicity " + std::to_string(by_char));
    if (mult == 0) continue;
    rep.components.emplace_back(rho.label, mult);
    CMatrix gram(mult, mult);
    for (int a = 0; a < mult; ++a)
      for (int b = 0; b < mult; ++b) gram(a, b) = (ts[a].adjoint() * ts[b]).trace() / static_cast<double>(rho.d);
    const CMatrix gi = sqrt_and_inv_sqrt(gram).second;
    for (int a = 0; a < mult; ++a) {
      CMatrix t = CMatrix::Zero(x.d, rho.d);
      for (int b = 0; b < mult; ++b) t += ts[b] * gi(b, a);
      cols.push_back(t);
      block_labels.push_back(rho.label);
    }
  }
  int total = 0;
  for (const auto& c : cols) total += static_cast<int>(c.cols());
  if (total != x.d) throw InternalInconsistency("fuse: components do not fill u⊙w");
  rep.intertwiner = CMatrix(x.d, total);
  int off = 0;
  for (const auto& c : cols) {
    rep.intertwiner.middleCols(off, c.cols()) = c;
    off += static_cast<int>(c.cols());
  }
  const CMatrix& wm = rep.intertwiner;
  double res = max_abs(wm.adjoint() * wm - identity(total));
  // W* x W should be ⊕ u^ρ: check entrywise in A
  off = 0;
  std::vector<int> offsets;
  for (const auto& c : cols) {
    offsets.push_back(off);
    off += static_cast<int>(c.cols());
  }
  for (int i = 0; i < total; ++i)
    for (int j = 0; j < total; ++j) {
      CVector e = CVector::Zero(g.dim());
      for (int a = 0; a < x.d; ++a)
        for (int b = 0; b < x.d; ++b) {
          const cplx c = std::conj(wm(a, i)) * wm(b, j);
          if (c != cplx(0)) e += c * x(a, b);
        }
      CVector target = CVector::Zero(g.dim());
      for (std::size_t blk = 0; blk < cols.size(); ++blk) {
        const int o = offsets[blk], dd = static_cast<int>(cols[blk].cols());
        if (i >= o && i < o + dd && j >= o && j < o + dd) target = g.irrep(block_labels[blk])(i - o, j - o);
      }
      res = std::max(res, (e - target).norm());
    }
  rep.residual = res;
  return rep;
}

// ---------------------------------------------------------------------------
// Peter–Weyl

namespace detail {

/// Irreducible corepresentations from the Wedderburn decomposition of the dual
/// algebra A* acting on L²(A, h) by φ ↦ (id⊗φ)Δ.
inline std::vector<Corep> decompose_regular(const MultiMatrixAlgebra& a, const CMatrix& comult, const CMatrix& gram) {
  const int n = a.dim();
  const auto [gs, gsi] = sqrt_and_inv_sqrt(gram);
  std::vector<CMatrix> ops;
  for (int m = 0; m < n; ++m) {
    CMatrix r(n, n);
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i) r(i, k) = comult(i * n + m, k);
    ops.push_back(gs * r * gsi);
  }
  const OperatorSubspace dual(n, ops);
  if (dual.dim() != n) throw ValidationError("peter_weyl: dual representation is not faithful");
  const Wedderburn w = wedderburn(dual);
  std::vector<Corep> out;
  for (int b = 0; b < static_cast<int>(w.blocks.size()); ++b) {
    Corep u;
    u.d = w.blocks[b].size;
    u.entries.assign(static_cast<std::size_t>(u.d) * u.d, CVector::Zero(n));
    for (int m = 0; m < n; ++m) {
      const CVector pi = w.to_abstract(ops[m]);
      for (int i = 0; i < u.d; ++i)
        for (int j = 0; j < u.d; ++j) u(i, j)(m) = pi(w.algebra.unit_index(b, i, j));
    }
    out.push_back(std::move(u));
  }
  return out;
}

inline bool fingerprint_less(const CVector& x, const CVector& y) {
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    const double xr = std::round(x(k).real() * 1e6), yr = std::round(y(k).real() * 1e6);
    if (xr != yr) return xr > yr;
    const double xi = std::round(x(k).imag() * 1e6), yi = std::round(y(k).imag() * 1e6);
    if (xi != yi) return xi > yi;
  }
  return false;
}

}  // namespace detail

inline std::shared_ptr<const FiniteQuantumGroup> FiniteQuantumGroup::create(std::string name, MultiMatrixAlgebra a,
                                                                            CMatrix comult, CVector counit,
                                                                            CMatrix antipode) {
  auto g = std::shared_ptr<FiniteQuantumGroup>(new FiniteQuantumGroup());
  g->name_ = std::move(name);
  g->validation_ = validate_hopf(a, comult, counit, antipode);
  const double tol = 1e3 * numerics().tol;
  if (g->validation_.homomorphism > tol || g->validation_.star > tol || g->validation_.unital > tol)
    throw ValidationError("quantum group '" + g->name_ + "': comultiplication is not a unital *-homomorphism");
  if (g->validation_.coassociativity > tol)
    throw ValidationError("quantum group '" + g->name_ + "': comultiplication is not coassociative");
  if (g->validation_.counit > tol) throw ValidationError("quantum group '" + g->name_ + "': counit axioms fail");
  if (g->validation_.antipode > tol) throw ValidationError("quantum group '" + g->name_ + "': antipode axioms fail");
  g->a_ = a;
  g->aa_ = TensorShape({a, a});
  g->comult_ = std::move(comult);
  g->counit_ = std::move(counit);
  g->antipode_ = std::move(antipode);
  g->mult_ = qspec::multiplication_map(a);
  g->haar_ = compute_haar(a, g->comult_);
  const int n = a.dim();
  g->gram_ = CMatrix(n, n);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) g->gram_(k, l) = fapply(g->haar_, a.multiply(a.adjoint(a.basis(k)), a.basis(l)));

  auto reps = detail::decompose_regular(a, g->comult_, g->gram_);
  int sum = 0;
  for (const auto& u : reps) sum += u.d * u.d;
  if (sum != n) throw InternalInconsistency("peter_weyl: Σ d_α² = " + std::to_string(sum) + " ≠ dim A");

  // Unitarize with T = (id⊗h)(u*u), which satisfies u*(T⊗1)u = T⊗1.
  for (auto& u : reps) {
    CMatrix t(u.d, u.d);
    for (int i = 0; i < u.d; ++i)
      for (int j = 0; j < u.d; ++j) {
        cplx s = 0;
        for (int k = 0; k < u.d; ++k) s += g->h(a.multiply(a.adjoint(u(k, i)), u(k, j)));
        t(i, j) = s;
      }
    const auto [r, ri] = sqrt_and_inv_sqrt(t);
    u = conjugate_by(u, r, ri);
  }

  // canonical order: trivial first, then by (dimension, character fingerprint)
  const CVector one = a.unit();
  std::stable_sort(reps.begin(), reps.end(), [&](const Corep& x, const Corep& y) {
    const bool xt = x.d == 1 && (x(0, 0) - one).norm() < 1e-6;
    const bool yt = y.d == 1 && (y(0, 0) - one).norm() < 1e-6;
    if (xt != yt) return xt;
    if (x.d != y.d) return x.d < y.d;
    return detail::fingerprint_less(character(x), character(y));
  });
  for (int l = 0; l < static_cast<int>(reps.size()); ++l) reps[l].label = l;
  g->irreps_ = std::move(reps);

  for (auto& u : g->irreps_) {
    if (corep_residual(*g, u) > tol) throw InternalInconsistency("peter_weyl: corepresentation identity fails");
    if (unitarity_residual(*g, u) > tol) throw InternalInconsistency("peter_weyl: corepresentation is not unitary");
    const FMatrixResult fr = f_matrix(*g, u);
    if (max_abs(fr.rotation - identity(u.d)) > 0) {
      u = conjugate_by(u, fr.rotation.adjoint(), fr.rotation);
    }
    u.F = fr.F;
    u.M = fr.M;
  }
  // the coefficients must form a basis of A
  CMatrix coeffs(n, n);
  int c = 0;
  for (const auto& u : g->irreps_)
    for (const auto& e : u.entries) coeffs.col(c++) = e;
  if (numerical_rank(coeffs) != n) throw InternalInconsistency("peter_weyl: matrix coefficients are not a basis");

  for (const auto& u : g->irreps_) {
    const int cl = conjugate(*g, u).label;
    if (cl < 0) throw InternalInconsistency("peter_weyl: conjugate class not found");
    g->conj_.push_back(cl);
  }
  return g;
}

inline std::vector<Corep> peter_weyl(const FiniteQuantumGroup& g) { return g.irreps(); }

}  // namespace qspec
