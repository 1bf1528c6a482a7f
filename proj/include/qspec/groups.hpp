#pragma once

// Built-in finite quantum groups: function algebras C(G), group algebras C[G]
// and the eight-dimensional Kac–Paljutkin algebra.

#include "qspec/quantum_group.hpp"

#include <array>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace qspec {

/// A finite group by its multiplication table; element 0 is the identity.
struct FiniteGroup {
  std::string name;
  std::vector<std::vector<int>> table;  // table[g][h] = gh

  int order() const { return static_cast<int>(table.size()); }
  int mul(int g, int h) const { return table[g][h]; }
  int inverse(int g) const {
    for (int h = 0; h < order(); ++h)
      if (table[g][h] == 0) return h;
    throw ContractViolation("FiniteGroup: element without inverse");
  }

  void validate() const {
    const int n = order();
    if (n == 0) throw ValidationError("FiniteGroup: empty");
    for (const auto& row : table)
      if (static_cast<int>(row.size()) != n) throw ValidationError("FiniteGroup: table is not square");
    for (int g = 0; g < n; ++g) {
      if (table[0][g] != g || table[g][0] != g) throw ValidationError("FiniteGroup: element 0 is not the identity");
      std::vector<bool> seen(n, false);
      for (int h = 0; h < n; ++h) {
        const int p = table[g][h];
        if (p < 0 || p >= n || seen[p]) throw ValidationError("FiniteGroup: row is not a permutation");
        seen[p] = true;
      }
      for (int h = 0; h < n; ++h)
        for (int k = 0; k < n; ++k)
          if (table[table[g][h]][k] != table[g][table[h][k]]) throw ValidationError("FiniteGroup: not associative");
    }
  }
};

inline FiniteGroup cyclic_group(int n) {
  FiniteGroup g{"Z" + std::to_string(n), {}};
  g.table.assign(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) g.table[a][b] = (a + b) % n;
  return g;
}

/// Permutations of {0,1,2} in lexicographic order; (στ)(x) = σ(τ(x)).
inline const std::vector<std::array<int, 3>>& s3_elements() {
  static const std::vector<std::array<int, 3>> e = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  return e;
}

inline FiniteGroup symmetric_group_3() {
  const auto& e = s3_elements();
  FiniteGroup g{"S3", {}};
  g.table.assign(6, std::vector<int>(6));
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) {
      std::array<int, 3> p{};
      for (int x = 0; x < 3; ++x) p[x] = e[a][e[b][x]];
      for (int c = 0; c < 6; ++c)
        if (e[c] == p) g.table[a][b] = c;
    }
  return g;
}

/// Permutation matrix P_σ e_x = e_{σ(x)}.
inline CMatrix s3_permutation_matrix(int g) {
  CMatrix p = CMatrix::Zero(3, 3);
  for (int x = 0; x < 3; ++x) p(s3_elements()[g][x], x) = 1.0;
  return p;
}

/// Unitary irreducible representations ρ(g), one vector per irrep.
using GroupIrreps = std::vector<std::vector<CMatrix>>;

inline GroupIrreps cyclic_irreps(int n) {
  const double pi = std::acos(-1.0);
  GroupIrreps out;
  for (int k = 0; k < n; ++k) {
    std::vector<CMatrix> rho;
    for (int g = 0; g < n; ++g) rho.push_back(CMatrix::Constant(1, 1, std::polar(1.0, 2 * pi * k * g / n)));
    out.push_back(rho);
  }
  return out;
}

inline GroupIrreps s3_irreps() {
  CMatrix b(3, 2);
  b << 1 / std::sqrt(2.0), 1 / std::sqrt(6.0), -1 / std::sqrt(2.0), 1 / std::sqrt(6.0), 0, -2 / std::sqrt(6.0);
  GroupIrreps out(3);
  for (int g = 0; g < 6; ++g) {
    const CMatrix p = s3_permutation_matrix(g);
    out[0].push_back(CMatrix::Ones(1, 1));
    out[1].push_back(CMatrix::Constant(1, 1, p.determinant()));
    out[2].push_back(b.adjoint() * p * b);
  }
  return out;
}

/// C(G): functions on G with Δf(g,h) = f(gh).
inline QuantumGroupPtr function_algebra(const FiniteGroup& grp) {
  grp.validate();
  const int n = grp.order();
  const MultiMatrixAlgebra a(std::vector<int>(n, 1));
  CMatrix comult = CMatrix::Zero(n * n, n);
  CVector counit = CVector::Zero(n);
  CMatrix antipode = CMatrix::Zero(n, n);
  for (int h = 0; h < n; ++h)
    for (int k = 0; k < n; ++k) comult(h * n + k, grp.mul(h, k)) = 1.0;
  counit(0) = 1.0;
  for (int g = 0; g < n; ++g) antipode(grp.inverse(g), g) = 1.0;
  return FiniteQuantumGroup::create("C(" + grp.name + ")", a, comult, counit, antipode);
}

/// C[G] ≅ ⊕_ρ M_{d_ρ} via λ_g ↦ ⊕ρ(g), with Δλ_g = λ_g⊗λ_g.
inline QuantumGroupPtr group_algebra(const FiniteGroup& grp, const GroupIrreps& irreps) {
  grp.validate();
  const int n = grp.order();
  std::vector<int> blocks;
  for (const auto& rho : irreps) {
    if (static_cast<int>(rho.size()) != n) throw ValidationError("group_algebra: irrep has wrong length");
    blocks.push_back(static_cast<int>(rho.front().rows()));
  }
  const MultiMatrixAlgebra a(blocks);
  if (a.dim() != n) throw ValidationError("group_algebra: Σ d² differs from the group order");
  CMatrix l(n, n);
  for (int g = 0; g < n; ++g) {
    AlgElem e;
    for (const auto& rho : irreps) e.block_matrices.push_back(rho[g]);
    l.col(g) = e.coeffs(a);
  }
  Eigen::FullPivLU<CMatrix> lu(l);
  if (!lu.isInvertible()) throw ValidationError("group_algebra: Fourier map is singular");
  const CMatrix linv = lu.inverse();
  CMatrix comult = CMatrix::Zero(n * n, n);
  CVector counit = CVector::Zero(n);
  CMatrix perm = CMatrix::Zero(n, n);
  for (int g = 0; g < n; ++g) perm(grp.inverse(g), g) = 1.0;
  for (int k = 0; k < n; ++k)
    for (int g = 0; g < n; ++g) {
      comult.col(k) += linv(g, k) * tensor_coeffs(l.col(g), l.col(g));
      counit(k) += linv(g, k);
    }
  const CMatrix antipode = l * perm * linv;
  return FiniteQuantumGroup::create("C[" + grp.name + "]", a, comult, counit, antipode);
}

/// The Kac–Paljutkin algebra C⁴ ⊕ M₂ (neither commutative nor cocommutative).
/// Basis order: e1..e4, then E11, E12, E21, E22.
inline QuantumGroupPtr kac_paljutkin() {
  const MultiMatrixAlgebra a({1, 1, 1, 1, 2});
  const int n = 8;
  enum { E1, E2, E3, E4, M11, M12, M21, M22 };
  const cplx i(0, 1);
  CMatrix comult = CMatrix::Zero(n * n, n);
  auto add = [&](int target, int x, int y, cplx c) { comult(x * n + y, target) += c; };
  auto sym = [&](int target, int x, int y, cplx c) {
    add(target, x, y, c);
    if (x != y) add(target, y, x, c);
  };
  sym(E1, E1, E1, 1); sym(E1, E2, E2, 1); sym(E1, E3, E3, 1); sym(E1, E4, E4, 1);
  add(E1, M11, M11, 0.5); add(E1, M12, M12, 0.5); add(E1, M21, M21, 0.5); add(E1, M22, M22, 0.5);

  sym(E2, E1, E2, 1); sym(E2, E3, E4, 1);
  add(E2, M11, M22, 0.5); add(E2, M22, M11, 0.5); add(E2, M21, M12, 0.5 * i); add(E2, M12, M21, -0.5 * i);

  sym(E3, E1, E3, 1); sym(E3, E2, E4, 1);
  add(E3, M11, M22, 0.5); add(E3, M22, M11, 0.5); add(E3, M21, M12, -0.5 * i); add(E3, M12, M21, 0.5 * i);

  sym(E4, E1, E4, 1); sym(E4, E2, E3, 1);
  add(E4, M11, M11, 0.5); add(E4, M22, M22, 0.5); add(E4, M12, M12, -0.5); add(E4, M21, M21, -0.5);

  sym(M11, E1, M11, 1); sym(M11, E2, M22, 1); sym(M11, E3, M22, 1); sym(M11, E4, M11, 1);
  sym(M22, E1, M22, 1); sym(M22, E2, M11, 1); sym(M22, E3, M11, 1); sym(M22, E4, M22, 1);

  add(M12, E1, M12, 1); add(M12, M12, E1, 1);
  add(M12, E2, M21, i); add(M12, M21, E2, -i);
  add(M12, E3, M21, -i); add(M12, M21, E3, i);
  add(M12, E4, M12, -1); add(M12, M12, E4, -1);

  add(M21, E1, M21, 1); add(M21, M21, E1, 1);
  add(M21, E2, M12, -i); add(M21, M12, E2, i);
  add(M21, E3, M12, i); add(M21, M12, E3, -i);
  add(M21, E4, M21, -1); add(M21, M21, E4, -1);

  CVector counit = CVector::Zero(n);
  counit(E1) = 1.0;
  return FiniteQuantumGroup::create("KP", a, comult, counit, solve_antipode(a, comult, counit));
}

/// The trivial quantum group C.
inline QuantumGroupPtr trivial_quantum_group() {
  return function_algebra(FiniteGroup{"1", {{0}}});
}

/// Built-ins by name, each constructed once.
inline QuantumGroupPtr builtin_quantum_group(const std::string& name) {
  static std::map<std::string, QuantumGroupPtr> cache;
  if (auto it = cache.find(name); it != cache.end()) return it->second;
  static const std::map<std::string, std::function<QuantumGroupPtr()>> makers = {
      {"C(1)", [] { return trivial_quantum_group(); }},
      {"C(Z2)", [] { return function_algebra(cyclic_group(2)); }},
      {"C(Z3)", [] { return function_algebra(cyclic_group(3)); }},
      {"C(S3)", [] { return function_algebra(symmetric_group_3()); }},
      {"C[Z2]", [] { return group_algebra(cyclic_group(2), cyclic_irreps(2)); }},
      {"C[Z3]", [] { return group_algebra(cyclic_group(3), cyclic_irreps(3)); }},
      {"C[S3]", [] { return group_algebra(symmetric_group_3(), s3_irreps()); }},
      {"KP", [] { return kac_paljutkin(); }},
  };
  auto m = makers.find(name);
  if (m == makers.end()) throw ContractViolation("unknown quantum group '" + name + "'");
  return cache[name] = m->second();
}

inline std::vector<std::string> builtin_quantum_group_names() {
  return {"C(1)", "C(Z2)", "C(Z3)", "C(S3)", "C[Z2]", "C[Z3]", "C[S3]", "KP"};
}

}  // namespace qspec
