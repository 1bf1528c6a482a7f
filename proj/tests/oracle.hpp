#pragma once

// Brute-force spectra for a finite group G acting on a concrete algebra D by
// Ad U_g.  It never touches coactions: spectral matrices and fixed points are
// solved directly from the group equations, with the group's own irreducible
// representations.

#include "qspec/catalog.hpp"
#include "qspec/spectra.hpp"

#include <map>

namespace qspec::oracle {

// Linear map x ↦ op(x) for x the coordinates in an orthonormal basis of D ⊗ M_d.
inline std::vector<CMatrix> amplified_basis(const OperatorSubspace& d, int k) {
  std::vector<CMatrix> out;
  for (const auto& e : d.basis())
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) {
        CMatrix m = CMatrix::Zero(k, k);
        m(i, j) = 1.0;
        out.push_back(kron(e, m));
      }
  return out;
}

// Solutions of L_g(X) = 0 for all g, where L_g is linear in X.
template <class F>
inline std::vector<CMatrix> solve(const std::vector<CMatrix>& basis, int groups, F residual) {
  const Eigen::Index n = basis.front().size();
  CMatrix sys(n * groups, static_cast<Eigen::Index>(basis.size()));
  for (std::size_t k = 0; k < basis.size(); ++k)
    for (int g = 0; g < groups; ++g) sys.block(g * n, static_cast<Eigen::Index>(k), n, 1) = vec(residual(g, basis[k]));
  const CMatrix ns = null_space(sys);
  std::vector<CMatrix> out;
  for (Eigen::Index c = 0; c < ns.cols(); ++c) {
    CMatrix x = CMatrix::Zero(basis.front().rows(), basis.front().cols());
    for (std::size_t k = 0; k < basis.size(); ++k) x += ns(static_cast<Eigen::Index>(k), c) * basis[k];
    out.push_back(x);
  }
  return out;
}

inline bool oracle_in_spectrum(const OperatorSubspace& d, const std::vector<CMatrix>& u, const std::vector<CMatrix>& rho) {
  const int k = static_cast<int>(rho.front().rows());
  const int n = static_cast<int>(u.size());
  const CMatrix ik = identity(k);
  const auto basis = amplified_basis(d, k);
  // σ_g(X) = X ρ(g)
  const auto b2 = solve(basis, n, [&](int g, const CMatrix& x) {
    const CMatrix ug = kron(u[g], ik);
    return CMatrix(ug * x * ug.adjoint() - x * kron(identity(u[g].rows()), rho[g]));
  });
  // (σ_g ⊗ Ad ρ(g))(Y) = Y
  const auto fixed = solve(basis, n, [&](int g, const CMatrix& y) {
    const CMatrix w = kron(u[g], rho[g]);
    return CMatrix(w * y * w.adjoint() - y);
  });
  const int amb = static_cast<int>(basis.front().rows());
  std::vector<CMatrix> prods;
  for (const auto& x : b2)
    for (const auto& y : b2) prods.push_back(x.adjoint() * y);
  const OperatorSubspace e(amb, prods);
  const OperatorSubspace f(amb, fixed);
  return e.dim() > 0 && is_essential_ideal_definitional(e, f);
}

struct Oracle {
  LabelSet sp, gamma;
  bool matched = false;  // every quantum label found a group irrep
};

// Group irreps matched to the quantum labels of C(G) by character values.
inline std::map<int, std::vector<CMatrix>> matched_irreps(const FiniteQuantumGroup& g, const GroupIrreps& irr) {
  std::map<int, std::vector<CMatrix>> out;
  for (const auto& u : g.irreps()) {
    const CVector chi = character(u);  // a function on G: coefficient at basis e_g is χ(g)
    for (const auto& rep : irr) {
      double dev = 0;
      for (int x = 0; x < g.dim(); ++x) dev = std::max(dev, std::abs(chi(x) - rep[x].trace()));
      if (dev < 1e-9) out[u.label] = rep;
    }
  }
  return out;
}

inline Oracle classical_oracle(const CatalogEntry& e, const Coaction& c) {
  const ClassicalAction& act = *e.classical;
  const GroupIrreps irr = act.group.order() == 6 ? s3_irreps() : cyclic_irreps(act.group.order());
  const auto reps = matched_irreps(c.group(), irr);
  Oracle o;
  o.matched = static_cast<int>(reps.size()) == c.group().num_irreps();
  const OperatorSubspace whole = as_subspace(act.algebra);
  for (const auto& [label, rho] : reps)
    if (oracle_in_spectrum(whole, act.unitaries, rho)) o.sp.insert(label);
  for (int a = 0; a < c.group().num_irreps(); ++a) o.gamma.insert(a);
  for (const auto& corner : invariant_corners(c)) {
    const OperatorSubspace qbq = qspec::corner(act.algebra, corner.q);
    LabelSet s;
    for (const auto& [label, rho] : reps)
      if (oracle_in_spectrum(qbq, act.unitaries, rho)) s.insert(label);
    LabelSet keep;
    for (int a : o.gamma)
      if (s.count(a)) keep.insert(a);
    o.gamma = keep;
  }
  return o;
}

}  // namespace qspec::oracle
