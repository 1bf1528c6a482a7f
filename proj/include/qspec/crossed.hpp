#pragma once

// The crossed product B⋊G as an operator algebra on H_B ⊗ L²(A, h), together
// with the block projections p_α of the dual algebra, the compressions
// S_{α,β}, the coaction ad(v), the expectation Q and the map Ψ.
//
// Ambient index of H_B ⊗ H_h is u·n + k with u indexing H_B and k the
// orthonormal Peter–Weyl basis of H_h (block α, then (l, j) as l·d_α + j).

#include "qspec/coaction.hpp"

#include <memory>
#include <string>
#include <vector>

namespace qspec {

/// Which Peter–Weyl block carries p_α: the span of the conjugate coefficients
/// u^α_ij* (the default), or the span of the u^α_ij themselves.
enum class Labeling { Conjugate, Direct };

inline const char* to_string(Labeling l) { return l == Labeling::Conjugate ? "conjugate" : "direct"; }

/// L²(A, h) with the orthonormal basis ε^α_lj ∝ u^α_lj* (or u^α_lj).
struct GnsSpace {
  int n = 0;
  Labeling labeling = Labeling::Conjugate;
  CMatrix basis;  // columns: coefficient vectors of ε^α_lj
  CMatrix coords; // basis⁻¹ = basis* G, maps coefficients to basis coordinates
  std::vector<int> offset, dims;

  int index(int alpha, int l, int j) const { return offset[alpha] + l * dims[alpha] + j; }
  /// Matrix of a coefficient-space operator T in the orthonormal basis.
  CMatrix represent(const CMatrix& t) const { return coords * t * basis; }
};

inline GnsSpace build_gns(const FiniteQuantumGroup& g, Labeling labeling = Labeling::Conjugate) {
  GnsSpace s;
  s.n = g.dim();
  s.labeling = labeling;
  s.basis = CMatrix(s.n, s.n);
  int off = 0;
  for (const auto& u : g.irreps()) {
    s.offset.push_back(off);
    s.dims.push_back(u.d);
    for (int l = 0; l < u.d; ++l)
      for (int j = 0; j < u.d; ++j) {
        // ‖u_lj*‖² = h(u_lj u_lj*) = f_j/M and ‖u_lj‖² = h(u_lj* u_lj) = 1/(M f_l)
        s.basis.col(off + l * u.d + j) = labeling == Labeling::Conjugate
                                             ? CVector(std::sqrt(u.M / u.f(j)) * g.adjoint(u(l, j)))
                                             : CVector(std::sqrt(u.M * u.f(l)) * u(l, j));
      }
    off += u.d * u.d;
  }
  s.coords = s.basis.adjoint() * g.haar_gram();
  if (max_abs(s.coords * s.basis - identity(s.n)) > 1e3 * numerics().tol)
    throw InternalInconsistency("build_gns: normalized Peter–Weyl basis is not orthonormal");
  return s;
}

struct DualAlgebra {
  std::vector<CMatrix> lambda;  // λ(f_m) for the dual basis f_m, in GNS coordinates
  std::vector<CMatrix> p;       // block projections p_α
  OperatorSubspace span;
};

inline DualAlgebra build_dual(const FiniteQuantumGroup& g, const GnsSpace& s) {
  DualAlgebra d;
  const int n = g.dim();
  for (int m = 0; m < n; ++m) {
    CMatrix r(n, n);
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i) r(i, k) = g.comult()(i * n + m, k);
    d.lambda.push_back(s.represent(r));
  }
  d.span = OperatorSubspace(n, d.lambda);
  if (d.span.dim() != n) throw InternalInconsistency("build_dual: dual algebra has the wrong dimension");
  for (std::size_t a = 0; a < s.dims.size(); ++a) {
    CMatrix p = CMatrix::Zero(n, n);
    for (int k = 0; k < s.dims[a] * s.dims[a]; ++k) p(s.offset[a] + k, s.offset[a] + k) = 1.0;
    if (!d.span.contains(p)) throw InternalInconsistency("build_dual: p_α is not in the dual algebra");
    d.p.push_back(p);
  }
  return d;
}

/// v = Σ_k V_k ⊗ e_k with v(p_α⊗1) = I_{d_α} ⊗ u^α on each block.
inline std::vector<CMatrix> build_v(const FiniteQuantumGroup& g, const GnsSpace& s) {
  const int n = g.dim();
  std::vector<CMatrix> v(n, CMatrix::Zero(n, n));
  for (const auto& u : g.irreps())
    for (int l = 0; l < u.d; ++l)
      for (int p = 0; p < u.d; ++p)
        for (int j = 0; j < u.d; ++j)
          for (int k = 0; k < n; ++k) {
            const cplx c = u(p, j)(k);
            if (c != cplx(0)) v[k](s.index(u.label, l, p), s.index(u.label, l, j)) += c;
          }
  return v;
}

struct RegularCorepCheck {
  double unitarity = 0, corep = 0, in_dual = 0;
};

inline RegularCorepCheck check_v(const FiniteQuantumGroup& g, const std::vector<CMatrix>& v, const DualAlgebra& d) {
  RegularCorepCheck r;
  const int n = g.dim();
  const auto& a = g.algebra();
  CMatrix op = CMatrix::Zero(static_cast<Eigen::Index>(n) * a.rep_dim(), static_cast<Eigen::Index>(n) * a.rep_dim());
  for (int k = 0; k < n; ++k) op += kron(v[k], a.to_operator(a.basis(k)));
  r.unitarity = max_abs(op.adjoint() * op - identity(op.rows()));
  // v₁₂ v₁₃ = (id⊗Δ)v:  V_k V_l = Σ_m Δ(e_m)_{kl} V_m
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      CMatrix rhs = CMatrix::Zero(n, n);
      for (int m = 0; m < n; ++m) rhs += g.comult()(k * n + l, m) * v[m];
      r.corep = std::max(r.corep, max_abs(v[k] * v[l] - rhs));
    }
  for (const auto& vk : v) r.in_dual = std::max(r.in_dual, d.span.residual(vk));
  return r;
}

// ---------------------------------------------------------------------------

class CrossedProduct {
public:
  CrossedProduct(CoactionPtr delta, Labeling labeling) : delta_(std::move(delta)) {
    const auto& g = delta_->group();
    const auto& b = delta_->algebra();
    gns_ = build_gns(g, labeling);
    dual_ = build_dual(g, gns_);
    v_ = build_v(g, gns_);
    nb_ = b.rep_dim();
    nh_ = g.dim();
    // π_h(e_a) in GNS coordinates
    std::vector<CMatrix> pih;
    for (int a = 0; a < g.dim(); ++a) pih.push_back(gns_.represent(g.algebra().left_multiplication(g.algebra().basis(a))));
    for (int k = 0; k < b.dim(); ++k) {
      const CVector dk = delta_->apply(b.basis(k));
      CMatrix op = CMatrix::Zero(dim(), dim());
      for (int bb = 0; bb < b.dim(); ++bb)
        for (int a = 0; a < g.dim(); ++a) {
          const cplx c = dk(static_cast<Eigen::Index>(bb) * g.dim() + a);
          if (c != cplx(0)) op += c * kron(b.to_operator(b.basis(bb)), pih[a]);
        }
      delta_ops_.push_back(op);
    }
    std::vector<CMatrix> seeds, mult;
    for (const auto& l : dual_.lambda) mult.push_back(kron(identity(nb_), l));
    for (const auto& d : delta_ops_)
      for (const auto& l : mult) seeds.push_back(d * l);
    for (const auto& d : delta_ops_) mult.push_back(d);
    std::vector<CMatrix> all = mult;
    for (const auto& m : mult) all.push_back(m.adjoint());
    algebra_ = closure_under_left_multiplication(dim(), seeds, all);
    for (const auto& p : dual_.p) one_p_.push_back(kron(identity(nb_), p));
    // Q weights h(e_k e_l*)
    const int n = g.dim();
    qw_ = CMatrix(n, n);
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l)
        qw_(k, l) = g.h(g.multiply(g.algebra().basis(k), g.adjoint(g.algebra().basis(l))));
    for (const auto& vk : v_) v_amp_.push_back(kron(identity(nb_), vk));
  }

  const Coaction& coaction() const { return *delta_; }
  const CoactionPtr& coaction_ptr() const { return delta_; }
  const GnsSpace& gns() const { return gns_; }
  const DualAlgebra& dual() const { return dual_; }
  const std::vector<CMatrix>& v() const { return v_; }
  Labeling labeling() const { return gns_.labeling; }
  int dim() const { return nb_ * nh_; }
  int hilbert_b() const { return nb_; }
  const OperatorSubspace& algebra() const { return algebra_; }
  /// (π⊗π_h)δ(e_k)
  const std::vector<CMatrix>& delta_operators() const { return delta_ops_; }
  const CMatrix& one_p(int alpha) const { return one_p_.at(static_cast<std::size_t>(alpha)); }

  /// S_{α,β} = (1⊗p_α)(B⋊G)(1⊗p_β).
  OperatorSubspace compression(int alpha, int beta) const {
    std::vector<CMatrix> ops;
    for (const auto& x : algebra_.basis()) ops.push_back(one_p(alpha) * x * one_p(beta));
    return OperatorSubspace(dim(), ops);
  }

  /// ad(v)(z) = Σ_m Z_m ⊗ e_m, returned as the list of Z_m.
  std::vector<CMatrix> ad_v(const CMatrix& z) const {
    const auto& g = delta_->group();
    const int n = g.dim();
    std::vector<CMatrix> out(n, CMatrix::Zero(dim(), dim()));
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) {
        const CVector ekl = g.multiply(g.algebra().basis(k), g.adjoint(g.algebra().basis(l)));
        if (ekl.norm() == 0) continue;
        const CMatrix t = v_amp_[k] * z * v_amp_[l].adjoint();
        for (int m = 0; m < n; ++m)
          if (ekl(m) != cplx(0)) out[m] += ekl(m) * t;
      }
    return out;
  }

  /// Q(z) = (id⊗h)(ad(v)(z)).
  CMatrix q(const CMatrix& z) const {
    CMatrix out = CMatrix::Zero(dim(), dim());
    const int n = static_cast<int>(v_.size());
    for (int k = 0; k < n; ++k) {
      CMatrix left = CMatrix::Zero(dim(), dim());
      bool any = false;
      for (int l = 0; l < n; ++l)
        if (std::abs(qw_(k, l)) > 0) {
          left += std::conj(qw_(k, l)) * v_amp_[l];
          any = true;
        }
      if (any) out += v_amp_[k] * z * left.adjoint();
    }
    return out;
  }

  /// Ψ(Λ) = [λ_ij ⊗ I_{d_α}] on H_B ⊗ p_α H_h, for Λ given by coefficients in amplify(B, d_α).
  CMatrix psi(int alpha, const CVector& lambda) const {
    const int d = gns_.dims[alpha];
    const CMatrix lop = amplify(delta_->algebra(), d).to_operator(lambda);  // on H_B ⊗ C^d
    CMatrix out = CMatrix::Zero(dim(), dim());
    for (int r = 0; r < nb_; ++r)
      for (int l = 0; l < d; ++l)
        for (int c = 0; c < nb_; ++c)
          for (int m = 0; m < d; ++m) {
            const cplx x = lop(r * d + l, c * d + m);
            if (x == cplx(0)) continue;
            for (int j = 0; j < d; ++j) out(r * nh_ + gns_.index(alpha, l, j), c * nh_ + gns_.index(alpha, m, j)) = x;
          }
    return out;
  }

  /// y_{k,j0} ∈ B from an element s of S_{α,ι}: s = Σ y_kj ⊗ |ε_kj⟩⟨ξ_h|.
  CVector column_entry(const CMatrix& s, int alpha, int k, int j0) const {
    CMatrix y(nb_, nb_);
    const int row = gns_.index(alpha, k, j0), col = gns_.index(delta_->group().trivial_label(), 0, 0);
    for (int r = 0; r < nb_; ++r)
      for (int c = 0; c < nb_; ++c) y(r, c) = s(r * nh_ + row, c * nh_ + col);
    return delta_->algebra().from_operator(y);
  }

private:
  CoactionPtr delta_;
  GnsSpace gns_;
  DualAlgebra dual_;
  std::vector<CMatrix> v_, v_amp_, delta_ops_, one_p_;
  int nb_ = 0, nh_ = 0;
  OperatorSubspace algebra_;
  CMatrix qw_;
};

using CrossedProductPtr = std::shared_ptr<const CrossedProduct>;

// ---------------------------------------------------------------------------
// identities

struct ExpectationIdentityReport {
  int alpha = 0;
  int lhs_dim = 0, rhs_dim = 0;
  double distance = 0;       // principal-angle distance between the two spans
  double psi_membership = 0; // max residual of Ψ(Λ) in the crossed product / Q-fixedness
  bool holds = false;
};

/// Q(span S_{α,ι}S_{ι,α}) versus Ψ(span B₂(u^α)* B₂(u^α)).
inline ExpectationIdentityReport verify_expectation_identity(const CrossedProduct& x, int alpha) {
  const auto& c = x.coaction();
  const auto& g = c.group();
  const int iota = g.trivial_label();
  ExpectationIdentityReport r;
  r.alpha = alpha;
  const OperatorSubspace s = x.compression(alpha, iota);
  std::vector<CMatrix> lhs;
  for (const auto& a : s.basis())
    for (const auto& b : s.basis()) lhs.push_back(x.q(a * b.adjoint()));
  const OperatorSubspace l(x.dim(), lhs);
  const Corep& u = g.irrep(alpha);
  const auto b2 = spectral_matrix_space(c, u);
  const MultiMatrixAlgebra bd = amplify(c.algebra(), u.d);
  std::vector<CMatrix> rhs;
  for (const auto& p : b2)
    for (const auto& q : b2) {
      const CVector lam = bd.multiply(bd.adjoint(p.coeffs(c.algebra())), q.coeffs(c.algebra()));
      const CMatrix y = x.psi(alpha, lam);
      r.psi_membership = std::max({r.psi_membership, x.algebra().residual(y), max_abs(x.q(y) - y)});
      rhs.push_back(y);
    }
  const OperatorSubspace rr(x.dim(), rhs);
  r.lhs_dim = l.dim();
  r.rhs_dim = rr.dim();
  r.distance = r.lhs_dim == r.rhs_dim ? subspace_distance(l.columns(), rr.columns()) : 1.0;
  r.holds = r.lhs_dim == r.rhs_dim && r.distance < numerics().angle_tol && r.psi_membership < 1e3 * numerics().tol;
  return r;
}

/// The column form of S_{α,ι}: for each j0, (y_{k,j0})_k is a row of B₂(w),
/// with w = ū^α for the conjugate labeling and w = u^α for the direct one.
inline double column_form_residual(const CrossedProduct& x, int alpha) {
  const auto& c = x.coaction();
  const auto& g = c.group();
  const Corep& u = g.irrep(alpha);
  const Corep w = x.labeling() == Labeling::Conjugate ? conjugate(g, u) : u;
  const OperatorSubspace s = x.compression(alpha, g.trivial_label());
  double res = 0;
  for (const auto& e : s.basis())
    for (int j0 = 0; j0 < u.d; ++j0) {
      SpectralMatrix row = SpectralMatrix::zero(u.d, c.dim_b());
      for (int k = 0; k < u.d; ++k) row(0, k) = x.column_entry(e, alpha, k, j0);
      res = std::max(res, spectral_identity_residual(c, row, w));
    }
  return res;
}

struct CrossedStructureReport {
  Labeling labeling = Labeling::Conjugate;
  bool fallback_used = false;
  int dim = 0;
  std::vector<int> block_sizes;
  RegularCorepCheck v_check;
  double p_sum = 0;
  std::vector<double> column_form;
  std::vector<ExpectationIdentityReport> expectation_identity;
  std::vector<std::vector<int>> compression_dims;  // dim S_{α,β}
  bool ok = false;
};

namespace detail {

inline CrossedStructureReport check_crossed(const CrossedProduct& x) {
  CrossedStructureReport r;
  const auto& g = x.coaction().group();
  r.labeling = x.labeling();
  r.dim = x.algebra().dim();
  r.v_check = check_v(g, x.v(), x.dual());
  CMatrix psum = CMatrix::Zero(g.dim(), g.dim());
  for (const auto& p : x.dual().p) psum += p;
  r.p_sum = max_abs(psum - identity(g.dim()));
  bool ok = r.v_check.unitarity < 1e3 * numerics().tol && r.v_check.corep < 1e3 * numerics().tol &&
            r.v_check.in_dual < 1e3 * numerics().tol && r.p_sum < 1e3 * numerics().tol &&
            r.dim == x.coaction().dim_b() * g.dim();
  for (int a = 0; a < g.num_irreps(); ++a) {
    r.column_form.push_back(column_form_residual(x, a));
    r.expectation_identity.push_back(verify_expectation_identity(x, a));
    ok = ok && r.column_form.back() < 1e3 * numerics().tol && r.expectation_identity.back().holds;
  }
  r.ok = ok;
  return r;
}

}  // namespace detail

/// Builds B⋊G with the conjugate labeling of p_α, verifying the column form of
/// S_{α,ι}, the regular corepresentation and the expectation identity; if any of these fails
/// the direct labeling is tried and the choice is recorded.
inline std::pair<CrossedProductPtr, CrossedStructureReport> build_crossed(const CoactionPtr& delta) {
  auto x = std::make_shared<const CrossedProduct>(delta, Labeling::Conjugate);
  auto r = detail::check_crossed(*x);
  if (!r.ok) {
    auto y = std::make_shared<const CrossedProduct>(delta, Labeling::Direct);
    auto ry = detail::check_crossed(*y);
    if (ry.ok) {
      ry.fallback_used = true;
      x = y;
      r = ry;
    }
  }
  const auto& g = delta->group();
  r.block_sizes = wedderburn(x->algebra()).block_sizes();
  for (int a = 0; a < g.num_irreps(); ++a) {
    r.compression_dims.emplace_back();
    for (int b = 0; b < g.num_irreps(); ++b) r.compression_dims.back().push_back(x->compression(a, b).dim());
  }
  return {x, r};
}

/// ad(v) as a coaction on the abstract algebra of B⋊G.
inline CoactionPtr ad_v_coaction(const CrossedProduct& x, const Wedderburn& w) {
  const auto& g = x.coaction().group();
  const int n = g.dim(), m = w.algebra.dim();
  CMatrix delta(static_cast<Eigen::Index>(m) * n, m);
  for (int k = 0; k < m; ++k) {
    const auto parts = x.ad_v(w.from_abstract(w.algebra.basis(k)));
    for (int a = 0; a < n; ++a) {
      const CVector c = w.to_abstract(parts[a]);
      for (int r = 0; r < m; ++r) delta(static_cast<Eigen::Index>(r) * n + a, k) = c(r);
    }
  }
  return std::make_shared<const Coaction>(w.algebra, x.coaction().group_ptr(), delta, "ad(v)");
}

}  // namespace qspec
