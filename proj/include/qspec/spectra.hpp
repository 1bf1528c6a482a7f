#pragma once

// Arveson and Connes spectra of a coaction, their strong variants, and the
// primeness / simplicity / tensor-closure checks built on top of them.

#include "qspec/crossed.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace qspec {

using LabelSet = std::set<int>;

/// Both criteria for a single label α.
struct SpectralCriteria {
  int alpha = 0, conj = 0;
  // via S_{ᾱ,ι}S_{ι,ᾱ} ⊆ S_ᾱ
  int s_product_dim = 0, s_alpha_dim = 0;
  bool essential_s = false, equal_s = false;
  // via B₂(u^α)*B₂(u^α) ⊆ (B⊗M_d)^{δ_u}
  int b2_dim = 0, b2_product_dim = 0, fixed_dim = 0;
  bool essential_b2 = false, equal_b2 = false;

  bool agree() const { return essential_s == essential_b2 && equal_s == equal_b2; }
};

inline SpectralCriteria spectral_criteria(const CrossedProduct& x, int alpha) {
  const auto& c = x.coaction();
  const auto& g = c.group();
  const int iota = g.trivial_label();
  SpectralCriteria r;
  r.alpha = alpha;
  r.conj = g.conjugate_label(alpha);

  const OperatorSubspace s_alpha = x.compression(r.conj, r.conj);
  const OperatorSubspace e = span_products(x.compression(r.conj, iota), x.compression(iota, r.conj));
  r.s_product_dim = e.dim();
  r.s_alpha_dim = s_alpha.dim();
  r.essential_s = e.dim() > 0 && is_essential_ideal(e, s_alpha);
  r.equal_s = e.dim() == s_alpha.dim();

  const Corep& u = g.irrep(alpha);
  const auto b2 = spectral_matrix_space(c, u);
  const MultiMatrixAlgebra bd = amplify(c.algebra(), u.d);
  const FixedAlgebra fa = fixed_algebra(*amplified_coaction(c, u));
  std::vector<CMatrix> prods;
  for (const auto& p : b2)
    for (const auto& q : b2) prods.push_back(bd.to_operator(bd.multiply(bd.adjoint(p.coeffs(c.algebra())), q.coeffs(c.algebra()))));
  const OperatorSubspace eb(bd.rep_dim(), prods);
  r.b2_dim = static_cast<int>(b2.size());
  r.b2_product_dim = eb.dim();
  r.fixed_dim = fa.ops.dim();
  r.essential_b2 = eb.dim() > 0 && is_essential_ideal(eb, fa.ops);
  r.equal_b2 = eb.dim() == fa.ops.dim();
  return r;
}

struct ArvesonResult {
  LabelSet sp, sp_strong;
  std::vector<SpectralCriteria> criteria;
};

/// Sp(δ) and S̃p(δ); throws InternalInconsistency if the two criteria disagree.
inline ArvesonResult arveson(const CrossedProduct& x) {
  ArvesonResult r;
  const auto& g = x.coaction().group();
  for (int a = 0; a < g.num_irreps(); ++a) {
    const SpectralCriteria s = spectral_criteria(x, a);
    if (!s.agree()) {
      std::ostringstream os;
      os << "spectral criteria disagree for label " << a << " on '" << x.coaction().name()
         << "': S-products essential=" << s.essential_s << " equal=" << s.equal_s
         << ", B2-products essential=" << s.essential_b2 << " equal=" << s.equal_b2;
      throw InternalInconsistency(os.str());
    }
    if (s.essential_s) r.sp.insert(a);
    if (s.equal_s) r.sp_strong.insert(a);
    r.criteria.push_back(s);
  }
  return r;
}

// ---------------------------------------------------------------------------

struct CornerSpectrum {
  std::vector<int> rank_tuple;
  int dim = 0;  // dim qBq
  bool valid = false;
  std::string diagnostic;
  LabelSet sp, sp_strong;
  Labeling labeling = Labeling::Conjugate;
};

struct Verdicts {
  bool g_prime = false, g_simple = false;
  bool crossed_prime = false, crossed_simple = false;
  bool fixed_prime = false, fixed_simple = false;
};

struct TheoremFlags {
  bool iota_in_sp = false;
  bool gamma_subset_sp = false;
  bool strong_subsets = false;        // Γ̃ ⊆ S̃p ⊆ Sp
  bool monotone = false;              // Γ ⊆ Sp(δ|_C) for every corner
  bool sp_collapse = false;           // Sp = S̃p
  bool gamma_collapse = false;        // Γ = Γ̃
  bool primeness = false;             // crossed prime ⇔ (G-prime ∧ Γ = Ĝ)
  bool simplicity = false;            // crossed simple ⇔ (G-simple ∧ Γ̃ = Ĝ)
  bool fixed_prime = false;           // (G-prime ∧ Γ = Ĝ) ⇒ B^δ prime
  bool fixed_simple = false;          // (G-simple ∧ Γ̃ = Ĝ) ⇒ B^δ simple
  bool corner_choice = false;         // spot-check: Sp(δ|_{wqBqw*}) = Sp(δ|_{qBq}), w ∈ B^δ unitary

  bool all() const {
    return iota_in_sp && gamma_subset_sp && strong_subsets && monotone && sp_collapse && gamma_collapse && primeness &&
           simplicity && fixed_prime && fixed_simple && corner_choice;
  }
};

struct ClosureFlags {
  bool corners = true;       // Sp(δ|_C) and S̃p(δ|_C) closed for every corner
  bool gamma = true;
  bool gamma_strong = true;
  bool bookkeeping = true;   // dim B₂(u^α⊙u^β) = D Σ m_i dim B₂(ρ_i)/d_i
  std::vector<std::string> violations;

  bool all() const { return corners && gamma && gamma_strong && bookkeeping; }
};

struct SpectrumReport {
  std::string system;
  std::string group;
  int num_irreps = 0;
  std::vector<int> conjugates;
  LabelSet sp, sp_strong, gamma, gamma_strong;
  std::vector<SpectralCriteria> criteria;
  std::vector<CornerSpectrum> corners;
  Verdicts verdicts;
  TheoremFlags theorem_flags;
  ClosureFlags closure_flags;
  CrossedStructureReport crossed;
  std::vector<int> fixed_blocks;

  bool full(const LabelSet& s) const { return static_cast<int>(s.size()) == num_irreps; }
  bool ok() const { return theorem_flags.all() && closure_flags.all(); }
};

// ---------------------------------------------------------------------------
// tensor closure

/// Labels of the irreducible components of u^α ⊙ u^β.
inline std::vector<int> fusion_labels(const FiniteQuantumGroup& g, int a, int b) {
  std::vector<int> out;
  for (const auto& [label, mult] : fuse(g, g.irrep(a), g.irrep(b)).components) out.push_back(label);
  return out;
}

inline bool tensor_closed(const FiniteQuantumGroup& g, const LabelSet& s, const std::string& what,
                          std::vector<std::string>& violations) {
  bool ok = true;
  for (int a : s)
    for (int b : s)
      for (int r : fusion_labels(g, a, b))
        if (!s.count(r)) {
          ok = false;
          violations.push_back(what + ": component " + std::to_string(r) + " of " + std::to_string(a) + "⊙" +
                               std::to_string(b) + " is missing");
        }
  return ok;
}

/// B₂(w) for reducible w ≅ ⊕ m_i ρ_i splits into rows: dim B₂(w) = D·Σ m_i dim B₂(ρ_i)/d_i.
inline bool tensor_bookkeeping(const Coaction& c, int a, int b, std::string& detail) {
  const auto& g = c.group();
  const Corep w = kronecker(g, g.irrep(a), g.irrep(b));
  const int lhs = static_cast<int>(solve_spectral_matrix_space(c, w).size());
  int rhs_rows = 0;
  for (const auto& [label, mult] : fuse(g, g.irrep(a), g.irrep(b)).components) {
    const int dr = static_cast<int>(spectral_matrix_space(c, g.irrep(label)).size());
    const int d = g.irrep(label).d;
    if (dr % d != 0) {
      detail = "dim B2 of label " + std::to_string(label) + " is not a multiple of its dimension";
      return false;
    }
    rhs_rows += mult * (dr / d);
  }
  if (lhs != w.d * rhs_rows) {
    detail = "dim B2(" + std::to_string(a) + "⊙" + std::to_string(b) + ") = " + std::to_string(lhs) + ", expected " +
             std::to_string(w.d * rhs_rows);
    return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

namespace detail {

inline LabelSet intersect(const LabelSet& a, const LabelSet& b) {
  LabelSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

inline bool subset(const LabelSet& a, const LabelSet& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }

inline CornerSpectrum corner_spectrum(const InvariantCorner& corner) {
  CornerSpectrum cs;
  cs.rank_tuple = corner.rank_tuple;
  cs.valid = corner.valid;
  cs.diagnostic = corner.diagnostic;
  if (!corner.valid) return cs;
  cs.dim = corner.restricted->dim_b();
  const auto built = build_crossed(corner.restricted);
  const ArvesonResult a = arveson(*built.first);
  cs.sp = a.sp;
  cs.sp_strong = a.sp_strong;
  cs.labeling = built.first->labeling();
  return cs;
}

/// A unitary exp(iH) with H a random self-adjoint element of B^δ.
inline CMatrix random_fixed_unitary(const FixedAlgebra& fa) {
  const CMatrix h = fa.ops.random_hermitian();
  return unitary_exp(h / std::max(1.0, h.norm()) * 3.0);
}

}  // namespace detail

/// Full spectral analysis of a coaction.
inline SpectrumReport analyze_spectra(const CoactionPtr& c) {
  SpectrumReport r;
  const auto& g = c->group();
  r.system = c->name();
  r.group = g.name();
  r.num_irreps = g.num_irreps();
  for (int a = 0; a < g.num_irreps(); ++a) r.conjugates.push_back(g.conjugate_label(a));

  const auto [x, structure] = build_crossed(c);
  r.crossed = structure;
  const ArvesonResult ar = arveson(*x);
  r.sp = ar.sp;
  r.sp_strong = ar.sp_strong;
  r.criteria = ar.criteria;

  const FixedAlgebra fa = fixed_algebra(*c);
  r.fixed_blocks = fa.structure.block_sizes();
  const auto corners = invariant_corners(*c, fa);
  LabelSet all;
  for (int a = 0; a < g.num_irreps(); ++a) all.insert(a);
  r.gamma = all;
  r.gamma_strong = all;
  for (const auto& corner : corners) {
    if (!corner.valid) {
      std::string tuple;
      for (int k : corner.rank_tuple) tuple += (tuple.empty() ? "" : ",") + std::to_string(k);
      throw InternalInconsistency("invariant corner (" + tuple + ") failed validation: " + corner.diagnostic);
    }
    const bool whole = corner.restricted->dim_b() == c->dim_b();
    CornerSpectrum cs;
    if (whole) {
      cs.rank_tuple = corner.rank_tuple;
      cs.valid = true;
      cs.dim = c->dim_b();
      cs.sp = r.sp;
      cs.sp_strong = r.sp_strong;
      cs.labeling = x->labeling();
    } else {
      cs = detail::corner_spectrum(corner);
    }
    r.gamma = detail::intersect(r.gamma, cs.sp);
    r.gamma_strong = detail::intersect(r.gamma_strong, cs.sp_strong);
    r.corners.push_back(std::move(cs));
  }

  // verdicts
  const Wedderburn cw = wedderburn(x->algebra());
  r.verdicts.g_prime = is_G_prime(*c);
  r.verdicts.g_simple = is_G_simple(*c);
  r.verdicts.crossed_prime = is_prime(cw);
  r.verdicts.crossed_simple = is_simple(cw);
  r.verdicts.fixed_prime = is_prime(fa.structure);
  r.verdicts.fixed_simple = is_simple(fa.structure);

  auto& t = r.theorem_flags;
  t.iota_in_sp = r.sp.count(g.trivial_label()) > 0;
  t.gamma_subset_sp = detail::subset(r.gamma, r.sp);
  t.strong_subsets = detail::subset(r.gamma_strong, r.sp_strong) && detail::subset(r.sp_strong, r.sp);
  t.monotone = true;
  for (const auto& cs : r.corners) t.monotone = t.monotone && detail::subset(r.gamma, cs.sp);
  t.sp_collapse = r.sp == r.sp_strong;
  t.gamma_collapse = r.gamma == r.gamma_strong;
  const bool prime_rhs = r.verdicts.g_prime && r.full(r.gamma);
  const bool simple_rhs = r.verdicts.g_simple && r.full(r.gamma_strong);
  t.primeness = r.verdicts.crossed_prime == prime_rhs;
  t.simplicity = r.verdicts.crossed_simple == simple_rhs;
  t.fixed_prime = !prime_rhs || r.verdicts.fixed_prime;
  t.fixed_simple = !simple_rhs || r.verdicts.fixed_simple;

  // Spot-check that a corner's spectrum depends only on its rank tuple.
  t.corner_choice = true;
  for (std::size_t k = 0; k < corners.size(); ++k) {
    if (corners[k].restricted->dim_b() == c->dim_b()) continue;
    const CMatrix w = detail::random_fixed_unitary(fa);
    const auto& b = c->algebra();
    const CMatrix q = b.to_operator(corners[k].q);
    const InvariantCorner moved = make_corner(*c, b.from_operator(w * q * w.adjoint()), corners[k].rank_tuple);
    const CornerSpectrum ms = detail::corner_spectrum(moved);
    t.corner_choice = ms.valid && ms.sp == r.corners[k].sp && ms.sp_strong == r.corners[k].sp_strong;
    break;
  }

  // tensor closure
  auto& cl = r.closure_flags;
  for (const auto& cs : r.corners) {
    const std::string tag = "corner " + std::to_string(cs.dim);
    cl.corners = tensor_closed(g, cs.sp, "Sp on " + tag, cl.violations) && cl.corners;
    cl.corners = tensor_closed(g, cs.sp_strong, "strong Sp on " + tag, cl.violations) && cl.corners;
  }
  cl.gamma = tensor_closed(g, r.gamma, "Connes spectrum", cl.violations);
  cl.gamma_strong = tensor_closed(g, r.gamma_strong, "strong Connes spectrum", cl.violations);
  for (int a = 0; a < g.num_irreps(); ++a)
    for (int b = 0; b < g.num_irreps(); ++b) {
      std::string why;
      if (!tensor_bookkeeping(*c, a, b, why)) {
        cl.bookkeeping = false;
        cl.violations.push_back(why);
      }
    }
  return r;
}

inline std::string format_labels(const LabelSet& s) {
  std::string out = "{";
  for (int a : s) out += (out.size() > 1 ? "," : "") + std::to_string(a);
  return out + "}";
}

}  // namespace qspec
