#include "qspec/groups.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace qspec;

namespace {

std::multiset<int> dims(const FiniteQuantumGroup& g) {
  std::multiset<int> s;
  for (const auto& u : g.irreps()) s.insert(u.d);
  return s;
}

// u(g) for C(G): value of the coefficient functions at the point g.
CMatrix evaluate(const Corep& u, int g) {
  CMatrix m(u.d, u.d);
  for (int i = 0; i < u.d; ++i)
    for (int j = 0; j < u.d; ++j) m(i, j) = u(i, j)(g);
  return m;
}

// Character table of S3 on the lexicographic element order, computed from the
// permutation action: trivial, sign, and (fixed points - 1).
std::vector<std::vector<double>> s3_character_table() {
  std::vector<std::vector<double>> t(3, std::vector<double>(6));
  for (int g = 0; g < 6; ++g) {
    const auto& p = s3_elements()[g];
    int fixed = 0, inversions = 0;
    for (int x = 0; x < 3; ++x) {
      fixed += p[x] == x;
      for (int y = x + 1; y < 3; ++y) inversions += p[x] > p[y];
    }
    t[0][g] = 1;
    t[1][g] = inversions % 2 ? -1 : 1;
    t[2][g] = fixed - 1;
  }
  return t;
}

int label_with_dim(const FiniteQuantumGroup& g, int d) {
  for (const auto& u : g.irreps())
    if (u.d == d) return u.label;
  return -1;
}

}  // namespace

TEST(Haar, FunctionsOnZ2IsUniform) {
  const auto g = builtin_quantum_group("C(Z2)");
  EXPECT_NEAR(std::abs(g->haar()(0) - 0.5), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(g->haar()(1) - 0.5), 0.0, 1e-12);
}

TEST(Haar, GroupAlgebraOfZ2IsEvaluationAtIdentity) {
  const auto g = builtin_quantum_group("C[Z2]");
  // λ_e = 1 = (1,1), λ_g = (1,-1) in the trivial ⊕ sign blocks
  CVector le(2), lg(2);
  le << 1, 1;
  lg << 1, -1;
  EXPECT_NEAR(std::abs(g->h(le) - 1.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(g->h(lg)), 0.0, 1e-12);
}

TEST(Haar, TrivialGroup) {
  const auto g = builtin_quantum_group("C(1)");
  EXPECT_NEAR(std::abs(g->haar()(0) - 1.0), 0.0, 1e-12);
}

TEST(Haar, IdempotentUnderConvolution) {
  for (const auto& name : builtin_quantum_group_names()) {
    const auto g = builtin_quantum_group(name);
    const CVector hh = tensor_coeffs(g->haar(), g->haar());
    for (int k = 0; k < g->dim(); ++k)
      EXPECT_NEAR(std::abs(fapply(hh, g->comultiply(g->algebra().basis(k))) - g->haar()(k)), 0.0, 1e-10) << name;
  }
}

TEST(HopfData, KacPaljutkinIsNeitherCommutativeNorCocommutative) {
  const auto g = builtin_quantum_group("KP");
  EXPECT_LT(g->validation().max(), 1e-10);
  EXPECT_EQ(g->algebra().blocks(), std::vector<int>({1, 1, 1, 1, 2}));
  // flip of Δ(E12) differs from Δ(E12)
  const CVector d = g->comultiply(g->algebra().basis(5));
  CVector flipped(d.size());
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) flipped(j * 8 + i) = d(i * 8 + j);
  EXPECT_GT((d - flipped).norm(), 0.1);
}

TEST(HopfData, RejectsNonCoassociativeComultiplication) {
  // Δ(δ_g) = Σ_{hk=g} δ_h⊗δ_k for a non-associative table: (1·2)·2 ≠ 1·(2·2)
  const MultiMatrixAlgebra a({1, 1, 1});
  CMatrix comult = CMatrix::Zero(9, 3);
  const int broken[3][3] = {{0, 1, 2}, {1, 0, 2}, {2, 2, 0}};
  for (int h = 0; h < 3; ++h)
    for (int k = 0; k < 3; ++k) comult(h * 3 + k, broken[h][k]) = 1.0;
  CVector eps = CVector::Zero(3);
  eps(0) = 1;
  EXPECT_THROW(FiniteQuantumGroup::create("bad", a, comult, eps, identity(3)), ValidationError);
}

TEST(HopfData, AntipodeSolverRecoversInversion) {
  const auto g = builtin_quantum_group("C(S3)");
  const CMatrix s = solve_antipode(g->algebra(), g->comult(), g->counit());
  EXPECT_LT(max_abs(s - g->antipode()), 1e-10);
}

TEST(PeterWeyl, DimensionsMatchRepresentationTheory) {
  EXPECT_EQ(dims(*builtin_quantum_group("C(Z2)")), std::multiset<int>({1, 1}));
  EXPECT_EQ(dims(*builtin_quantum_group("C(S3)")), std::multiset<int>({1, 1, 2}));
  EXPECT_EQ(dims(*builtin_quantum_group("KP")), std::multiset<int>({1, 1, 1, 1, 2}));
  // corepresentations of a group algebra are gradings: one per group element
  EXPECT_EQ(dims(*builtin_quantum_group("C[S3]")), std::multiset<int>({1, 1, 1, 1, 1, 1}));
}

TEST(PeterWeyl, CoefficientsFormBasisAndSatisfyCorepIdentity) {
  for (const auto& name : builtin_quantum_group_names()) {
    const auto g = builtin_quantum_group(name);
    int sum = 0;
    std::vector<CVector> cols;
    for (const auto& u : g->irreps()) {
      sum += u.d * u.d;
      EXPECT_LT(corep_residual(*g, u), 1e-9) << name;
      EXPECT_LT(unitarity_residual(*g, u), 1e-9) << name;
      for (const auto& e : u.entries) cols.push_back(e);
    }
    EXPECT_EQ(sum, g->dim()) << name;
    CMatrix m(g->dim(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t i = 0; i < cols.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = cols[i];
    EXPECT_EQ(Eigen::FullPivLU<CMatrix>(m).rank(), g->dim()) << name;
    EXPECT_LT((g->irrep(0)(0, 0) - g->algebra().unit()).norm(), 1e-9) << name;
  }
}

TEST(PeterWeyl, FunctionsOnS3MatchCharacterTable) {
  const auto g = builtin_quantum_group("C(S3)");
  const auto table = s3_character_table();
  // each computed irrep is a unitary representation g ↦ u(g) of S3
  const FiniteGroup grp = symmetric_group_3();
  std::multiset<int> matched;
  for (const auto& u : g->irreps()) {
    for (int a = 0; a < 6; ++a)
      for (int b = 0; b < 6; ++b)
        EXPECT_LT(max_abs(evaluate(u, grp.mul(a, b)) - evaluate(u, a) * evaluate(u, b)), 1e-9);
    for (int c = 0; c < 3; ++c) {
      bool same = true;
      for (int x = 0; x < 6; ++x) same = same && std::abs(evaluate(u, x).trace() - table[c][x]) < 1e-9;
      if (same) matched.insert(c);
    }
  }
  EXPECT_EQ(matched, std::multiset<int>({0, 1, 2}));
}

TEST(FMatrix, KacTypeGivesIdentity) {
  for (const auto& name : builtin_quantum_group_names()) {
    const auto g = builtin_quantum_group(name);
    for (const auto& u : g->irreps()) {
      const auto r = f_matrix(*g, u);
      EXPECT_LT(max_abs(r.F - identity(u.d)), 1e-9) << name;
      EXPECT_NEAR(r.M, u.d, 1e-9) << name;
      EXPECT_NEAR(u.M, u.d, 1e-9) << name;
    }
  }
}

TEST(FMatrix, ReducibleInputIsRejected) {
  const auto g = builtin_quantum_group("C(S3)");
  const Corep& two = g->irrep(label_with_dim(*g, 2));
  EXPECT_THROW(f_matrix(*g, kronecker(*g, two, two)), ContractViolation);
}

TEST(Orthogonality, AllBuiltinsWithinTolerance) {
  for (const auto& name : builtin_quantum_group_names())
    EXPECT_LT(verify_orthogonality(*builtin_quantum_group(name)), 1e-9) << name;
}

TEST(Orthogonality, SpecificValues) {
  const auto z2 = builtin_quantum_group("C(Z2)");
  const CVector& sign = z2->irrep(1)(0, 0);
  EXPECT_NEAR(std::abs(z2->h(z2->multiply(z2->adjoint(sign), sign)) - 1.0), 0.0, 1e-12);

  const auto z3 = builtin_quantum_group("C(Z3)");
  EXPECT_NEAR(std::abs(z3->h(z3->multiply(z3->adjoint(z3->irrep(1)(0, 0)), z3->irrep(2)(0, 0)))), 0.0, 1e-12);

  const auto s3 = builtin_quantum_group("C(S3)");
  const Corep& u = s3->irrep(label_with_dim(*s3, 2));
  EXPECT_NEAR(std::abs(s3->h(s3->multiply(u(0, 0), s3->adjoint(u(1, 1))))), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(s3->h(s3->multiply(u(0, 0), s3->adjoint(u(0, 0)))) - 0.5), 0.0, 1e-12);
}

TEST(Conjugate, Examples) {
  const auto z3 = builtin_quantum_group("C(Z3)");
  EXPECT_EQ(conjugate(*z3, z3->irrep(0)).label, 0);
  // ω and ω² are exchanged; check against point values
  for (int l = 1; l < 3; ++l) {
    const int c = conjugate(*z3, z3->irrep(l)).label;
    EXPECT_NE(c, l);
    for (int x = 0; x < 3; ++x)
      EXPECT_LT(std::abs(z3->irrep(c)(0, 0)(x) - std::conj(z3->irrep(l)(0, 0)(x))), 1e-12);
    EXPECT_EQ(z3->conjugate_label(l), c);
  }
  const auto z2 = builtin_quantum_group("C(Z2)");
  EXPECT_EQ(conjugate(*z2, z2->irrep(1)).label, 1);
}

TEST(Conjugate, DoubleConjugateIsEquivalent) {
  for (const auto& name : builtin_quantum_group_names()) {
    const auto g = builtin_quantum_group(name);
    for (const auto& u : g->irreps()) {
      const Corep cc = conjugate(*g, conjugate(*g, u));
      EXPECT_EQ(cc.label, u.label) << name;
    }
  }
}

TEST(Kronecker, TrivialAndSign) {
  const auto z2 = builtin_quantum_group("C(Z2)");
  const Corep k = kronecker(*z2, z2->irrep(1), z2->irrep(0));
  EXPECT_LT((k(0, 0) - z2->irrep(1)(0, 0)).norm(), 1e-12);
  const Corep ss = kronecker(*z2, z2->irrep(1), z2->irrep(1));
  EXPECT_LT((ss(0, 0) - z2->algebra().unit()).norm(), 1e-12);
  EXPECT_LT(corep_residual(*z2, ss), 1e-12);
}

TEST(Fusion, TrivialTimesTrivial) {
  const auto g = builtin_quantum_group("KP");
  const auto f = fuse(*g, g->irrep(0), g->irrep(0));
  EXPECT_EQ(f.components, (std::vector<std::pair<int, int>>{{0, 1}}));
}

TEST(Fusion, TwoByTwoOnS3) {
  const auto g = builtin_quantum_group("C(S3)");
  const int two = label_with_dim(*g, 2);
  const auto f = fuse(*g, g->irrep(two), g->irrep(two));
  // oracle: multiplicities from the character table, ⟨χ_ρ, χ_2²⟩
  const auto t = s3_character_table();
  std::vector<std::pair<int, int>> expected;
  for (const auto& rho : g->irreps()) {
    int cls = -1;
    for (int c = 0; c < 3; ++c) {
      bool same = true;
      for (int x = 0; x < 6; ++x) same = same && std::abs(evaluate(rho, x).trace() - t[c][x]) < 1e-9;
      if (same) cls = c;
    }
    double m = 0;
    for (int x = 0; x < 6; ++x) m += t[cls][x] * t[2][x] * t[2][x] / 6.0;
    if (std::lround(m) > 0) expected.emplace_back(rho.label, static_cast<int>(std::lround(m)));
  }
  EXPECT_EQ(f.components, expected);
  EXPECT_EQ(f.components.size(), 3u);
  EXPECT_LT(max_abs(f.intertwiner.adjoint() * f.intertwiner - identity(4)), 1e-9);
  EXPECT_LT(f.residual, 1e-9);
}

TEST(Fusion, KacPaljutkinTwoByTwoIsFourCharacters) {
  const auto g = builtin_quantum_group("KP");
  const int two = label_with_dim(*g, 2);
  const auto f = fuse(*g, g->irrep(two), g->irrep(two));
  ASSERT_EQ(f.components.size(), 4u);
  for (const auto& [label, mult] : f.components) {
    EXPECT_EQ(g->irrep(label).d, 1);
    EXPECT_EQ(mult, 1);
  }
  EXPECT_LT(f.residual, 1e-9);
}

TEST(Fusion, MultiplicitiesAgreeWithCharactersForAllPairs) {
  for (const auto& name : builtin_quantum_group_names()) {
    const auto g = builtin_quantum_group(name);
    for (const auto& a : g->irreps())
      for (const auto& b : g->irreps()) {
        const auto f = fuse(*g, a, b);
        int total = 0;
        for (const auto& [label, mult] : f.components) {
          EXPECT_EQ(f.character_multiplicities[static_cast<std::size_t>(label)], mult);
          total += mult * g->irrep(label).d;
        }
        EXPECT_EQ(total, a.d * b.d);
        EXPECT_LT(f.residual, 1e-9) << name;
      }
  }
}

TEST(SimilarCorep, MaterializedRepresentativeIsEquivalent) {
  reseed(17);
  const auto g = builtin_quantum_group("KP");
  const int two = label_with_dim(*g, 2);
  const SimilarCorep s{two, random_matrix(2, 2) + 2.0 * identity(2)};
  const Corep w = materialize(*g, s);
  EXPECT_LT(corep_residual(*g, w), 1e-9);
  EXPECT_EQ(identify_class(*g, w), two);
}
