#pragma once

// Classical finite-group actions compiled to coactions of C(G), and the
// built-in catalog of (quantum group, coaction) pairs.

#include "qspec/coaction.hpp"
#include "qspec/groups.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace qspec {

/// G acting on B by σ_g(b) = U_g b U_g*, with U_g unitary on the concrete space of B.
struct ClassicalAction {
  FiniteGroup group;
  MultiMatrixAlgebra algebra;
  std::vector<CMatrix> unitaries;  // indexed by group element

  CVector sigma(int g, const CVector& x) const {
    return algebra.from_operator(unitaries[g] * algebra.to_operator(x) * unitaries[g].adjoint());
  }

  void validate() const {
    group.validate();
    const int n = group.order();
    if (static_cast<int>(unitaries.size()) != n) throw ValidationError("classical action: one unitary per element");
    const double tol = 1e3 * numerics().tol;
    for (int g = 0; g < n; ++g) {
      const CMatrix& u = unitaries[g];
      if (u.rows() != algebra.rep_dim() || u.cols() != algebra.rep_dim())
        throw ValidationError("classical action: unitary has wrong size");
      if (max_abs(u.adjoint() * u - identity(u.rows())) > tol) throw ValidationError("classical action: not unitary");
      for (int k = 0; k < algebra.dim(); ++k)
        if (algebra.off_pattern(u * algebra.to_operator(algebra.basis(k)) * u.adjoint()) > tol)
          throw ValidationError("classical action: Ad U_g does not preserve the algebra");
    }
    for (int g = 0; g < n; ++g)
      for (int h = 0; h < n; ++h)
        for (int k = 0; k < algebra.dim(); ++k) {
          const CVector e = algebra.basis(k);
          if ((sigma(g, sigma(h, e)) - sigma(group.mul(g, h), e)).norm() > tol)
            throw ValidationError("classical action: σ_g σ_h ≠ σ_gh");
        }
  }
};

/// δ(b) = Σ_g σ_g(b) ⊗ δ_g ∈ B ⊗ C(G).
inline CMatrix compile_classical_delta(const ClassicalAction& act) {
  act.validate();
  const int n = act.group.order(), nb = act.algebra.dim();
  CMatrix delta = CMatrix::Zero(static_cast<Eigen::Index>(nb) * n, nb);
  for (int k = 0; k < nb; ++k)
    for (int g = 0; g < n; ++g) {
      const CVector s = act.sigma(g, act.algebra.basis(k));
      for (int b = 0; b < nb; ++b) delta(static_cast<Eigen::Index>(b) * n + g, k) = s(b);
    }
  return delta;
}

inline CoactionPtr compile_classical(const ClassicalAction& act, const QuantumGroupPtr& g, std::string name = {}) {
  if (g->dim() != act.group.order() || g->algebra().num_blocks() != g->dim())
    throw ContractViolation("compile_classical: quantum group must be C(G) for the acting group");
  return std::make_shared<const Coaction>(act.algebra, g, compile_classical_delta(act), std::move(name));
}

/// Permutation matrix e_x ↦ e_{p[x]}.
inline CMatrix permutation_matrix(const std::vector<int>& p) {
  const int n = static_cast<int>(p.size());
  CMatrix m = CMatrix::Zero(n, n);
  for (int x = 0; x < n; ++x) m(p[x], x) = 1.0;
  return m;
}

/// G acting on C^n by permuting points; perm[g][x] is the image of x.
inline ClassicalAction permutation_action(const FiniteGroup& g, const std::vector<std::vector<int>>& perm) {
  ClassicalAction a{g, MultiMatrixAlgebra(std::vector<int>(perm.front().size(), 1)), {}};
  for (const auto& p : perm) a.unitaries.push_back(permutation_matrix(p));
  return a;
}

// ---------------------------------------------------------------------------

struct CatalogEntry {
  std::string name;
  std::string group;  // builtin quantum group name
  std::string description;
  std::function<CoactionPtr()> build;
  std::optional<ClassicalAction> classical;  // set for compiled finite-group actions
};

namespace detail {

inline CatalogEntry classical_entry(std::string name, std::string group, std::string description,
                                    ClassicalAction act) {
  CatalogEntry e{name, group, std::move(description), {}, act};
  e.build = [name, group, act] { return compile_classical(act, builtin_quantum_group(group), name); };
  return e;
}

inline CatalogEntry corner_entry(std::string name, std::string description, std::function<CoactionPtr()> parent,
                                 std::function<CVector(const Coaction&)> q, std::string group) {
  CatalogEntry e{name, std::move(group), std::move(description), {}, std::nullopt};
  e.build = [name, parent, q] {
    const CoactionPtr p = parent();
    const InvariantCorner c = make_corner(*p, q(*p));
    if (!c.valid) throw ValidationError("corner '" + name + "': " + c.diagnostic);
    return std::make_shared<const Coaction>(c.restricted->algebra(), p->group_ptr(), c.restricted->delta(), name);
  };
  return e;
}

}  // namespace detail

inline const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = [] {
    std::vector<CatalogEntry> v;
    const FiniteGroup z2 = cyclic_group(2), z3 = cyclic_group(3), s3 = symmetric_group_3();

    v.push_back({"trivial-c-z2", "C(Z2)", "trivial coaction of C(Z2) on C",
                 [] { return trivial_coaction(MultiMatrixAlgebra({1}), builtin_quantum_group("C(Z2)"), "trivial-c-z2"); },
                 std::nullopt});
    v.push_back(detail::classical_entry("trivial-c2-z2", "C(Z2)", "Z2 acting trivially on C^2",
                                        permutation_action(z2, {{0, 1}, {0, 1}})));
    v.push_back(detail::classical_entry("z2-flip", "C(Z2)", "Z2 acting on C^2 by swapping the points",
                                        permutation_action(z2, {{0, 1}, {1, 0}})));
    v.push_back(detail::classical_entry("z2-double-flip", "C(Z2)", "Z2 acting on C^4 by (0 1)(2 3)",
                                        permutation_action(z2, {{0, 1, 2, 3}, {1, 0, 3, 2}})));
    v.push_back(detail::classical_entry("z3-rotation", "C(Z3)", "Z3 acting on C^3 by cyclic shift",
                                        permutation_action(z3, {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}})));
    {
      std::vector<std::vector<int>> perms;
      for (const auto& p : s3_elements()) perms.push_back({p[0], p[1], p[2]});
      v.push_back(detail::classical_entry("s3-perm", "C(S3)", "S3 permuting the three points of C^3",
                                          permutation_action(s3, perms)));
      v.push_back(detail::classical_entry("s3-trivial-c3", "C(S3)", "S3 acting trivially on C^3",
                                          permutation_action(s3, std::vector<std::vector<int>>(6, {0, 1, 2}))));
    }
    {
      CMatrix z = identity(2);
      z(1, 1) = -1.0;
      v.push_back(detail::classical_entry("z2-conj-m2", "C(Z2)", "Z2 acting on M2 by conjugation with diag(1,-1)",
                                          ClassicalAction{z2, full_matrix_algebra(2), {identity(2), z}}));
    }
    for (const auto& [name, group] : std::vector<std::pair<std::string, std::string>>{
             {"z2-regular", "C(Z2)"},
             {"z3-regular", "C(Z3)"},
             {"s3-regular", "C(S3)"},
             {"dual-z2-regular", "C[Z2]"},
             {"dual-s3-regular", "C[S3]"},
             {"kac-paljutkin-regular", "KP"}}) {
      v.push_back({name, group, "regular coaction δ = Δ of " + group,
                   [name, group] { return regular_coaction(builtin_quantum_group(group), name); }, std::nullopt});
    }
    {
      const auto parent = [] {
        for (const auto& e : catalog())
          if (e.name == "z2-double-flip") return e.build();
        throw InternalInconsistency("catalog: missing parent");
      };
      v.push_back(detail::corner_entry(
          "z2-double-flip-corner", "corner of z2-double-flip at the invariant projection e0+e1", parent,
          [](const Coaction& c) {
            CVector q = CVector::Zero(c.dim_b());
            q(0) = q(1) = 1.0;
            return q;
          },
          "C(Z2)"));
    }
    {
      const auto parent = [] {
        for (const auto& e : catalog())
          if (e.name == "z2-conj-m2") return e.build();
        throw InternalInconsistency("catalog: missing parent");
      };
      v.push_back(detail::corner_entry(
          "z2-conj-m2-corner", "corner of z2-conj-m2 at the invariant projection E11", parent,
          [](const Coaction& c) { return c.algebra().basis(c.algebra().unit_index(0, 0, 0)); }, "C(Z2)"));
    }
    return v;
  }();
  return entries;
}

inline const CatalogEntry& catalog_entry(const std::string& name) {
  for (const auto& e : catalog())
    if (e.name == name) return e;
  std::string names;
  for (const auto& e : catalog()) names += (names.empty() ? "" : ", ") + e.name;
  throw ContractViolation("unknown catalog entry '" + name + "'; available: " + names);
}

}  // namespace qspec
