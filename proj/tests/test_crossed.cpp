#include "qspec/catalog.hpp"
#include "qspec/crossed.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace qspec;

namespace {

CoactionPtr build(const std::string& name) { return catalog_entry(name).build(); }

CrossedProductPtr crossed(const std::string& name) { return build_crossed(build(name)).first; }

constexpr double kTol = 1e-9;

}  // namespace

TEST(Gns, TrivialGroupGivesOneDimensionalSpace) {
  const auto g = builtin_quantum_group("C(1)");
  const GnsSpace s = build_gns(*g);
  EXPECT_EQ(s.n, 1);
  const auto x = build_crossed(trivial_coaction(MultiMatrixAlgebra({1}), g)).first;
  EXPECT_EQ(x->algebra().dim(), 1);
}

TEST(Gns, BlockProjectionRanksAreSquaresOfIrrepDimensions) {
  for (const auto& name : builtin_quantum_group_names()) {
    const auto g = builtin_quantum_group(name);
    const GnsSpace s = build_gns(*g);
    const DualAlgebra d = build_dual(*g, s);
    CMatrix sum = CMatrix::Zero(g->dim(), g->dim());
    for (int a = 0; a < g->num_irreps(); ++a) {
      const CMatrix& p = d.p[a];
      EXPECT_TRUE(is_projection(p)) << name;
      EXPECT_EQ(numerical_rank(p), g->irrep(a).d * g->irrep(a).d) << name << " label " << a;
      sum += p;
    }
    EXPECT_LT(max_abs(sum - identity(g->dim())), kTol) << name;
  }
}

TEST(Gns, ZTwoBlocksHaveRankOne) {
  const auto g = builtin_quantum_group("C(Z2)");
  const DualAlgebra d = build_dual(*g, build_gns(*g));
  ASSERT_EQ(d.p.size(), 2u);
  EXPECT_EQ(numerical_rank(d.p[0]), 1);
  EXPECT_EQ(numerical_rank(d.p[1]), 1);
}

// p_α = (id⊗h_α)(v*) with h_α = d_α h(· χ_α), the slice formula for Kac type.
TEST(Gns, BlockProjectionsAreSlicesOfRegularCorep) {
  for (const auto& name : builtin_quantum_group_names()) {
    const auto g = builtin_quantum_group(name);
    const GnsSpace s = build_gns(*g);
    const DualAlgebra d = build_dual(*g, s);
    const auto v = build_v(*g, s);
    for (int a = 0; a < g->num_irreps(); ++a) {
      const CVector chi = character(g->irrep(a));
      CMatrix slice = CMatrix::Zero(g->dim(), g->dim());
      for (int k = 0; k < g->dim(); ++k) {
        const cplx w = static_cast<double>(g->irrep(a).d) * g->h(g->multiply(g->adjoint(g->algebra().basis(k)), chi));
        slice += w * v[k].adjoint();
      }
      EXPECT_LT(max_abs(slice - d.p[a]), 1e-9) << name << " label " << a;
    }
  }
}

TEST(Gns, BlockRangeIsSpannedByConjugateCoefficients) {
  const auto g = builtin_quantum_group("C(Z3)");
  const GnsSpace s = build_gns(*g);
  for (int a = 0; a < g->num_irreps(); ++a) {
    // ε^α ∝ u^α*, which for a character of Z3 is the character of the conjugate class
    const CVector e = s.basis.col(s.index(a, 0, 0));
    const CVector conj = g->irrep(g->conjugate_label(a))(0, 0);
    EXPECT_NEAR(std::abs(e.normalized().dot(conj.normalized())), 1.0, 1e-12);
  }
}

TEST(RegularCorep, UnitaryCorepresentationInsideDual) {
  for (const auto& name : builtin_quantum_group_names()) {
    const auto g = builtin_quantum_group(name);
    const GnsSpace s = build_gns(*g);
    const auto r = check_v(*g, build_v(*g, s), build_dual(*g, s));
    EXPECT_LT(r.unitarity, kTol) << name;
    EXPECT_LT(r.corep, kTol) << name;
    EXPECT_LT(r.in_dual, kTol) << name;
  }
}

TEST(Crossed, DimensionIsProductOfDimensions) {
  for (const auto& e : catalog()) {
    const auto c = e.build();
    const auto [x, r] = build_crossed(c);
    EXPECT_EQ(x->algebra().dim(), c->dim_b() * c->dim_a()) << e.name;
    EXPECT_TRUE(r.ok) << e.name;
    EXPECT_EQ(r.labeling, Labeling::Conjugate) << e.name;
    EXPECT_FALSE(r.fallback_used) << e.name;
  }
}

TEST(Crossed, TrivialCoactionOnScalarsGivesDualAlgebra) {
  const auto g = builtin_quantum_group("C(S3)");
  const auto x = build_crossed(trivial_coaction(MultiMatrixAlgebra({1}), g)).first;
  EXPECT_EQ(wedderburn(x->algebra()).block_sizes(), (std::vector<int>{1, 1, 2}));
  EXPECT_LT(subspace_distance(x->algebra().columns(), x->dual().span.columns()), 1e-9);
}

TEST(Crossed, FlipGivesTwoByTwoMatrices) {
  EXPECT_EQ(wedderburn(crossed("z2-flip")->algebra()).block_sizes(), (std::vector<int>{2}));
}

TEST(Crossed, RegularCoactionGivesFullOperatorAlgebra) {
  for (const std::string name : {"z2-regular", "z3-regular", "s3-regular", "dual-s3-regular", "kac-paljutkin-regular"}) {
    const auto x = crossed(name);
    const int n = x->coaction().dim_a();
    EXPECT_EQ(x->algebra().dim(), n * n) << name;
    EXPECT_EQ(wedderburn(x->algebra()).block_sizes(), (std::vector<int>{n})) << name;
  }
}

TEST(Crossed, TrivialCompressionIsFixedAlgebra) {
  for (const auto& e : catalog()) {
    const auto x = crossed(e.name);
    const auto& c = x->coaction();
    const int iota = c.group().trivial_label();
    const FixedAlgebra fa = fixed_algebra(c);
    std::vector<CMatrix> ops;
    for (const auto& f : fa.ops.basis()) ops.push_back(kron(f, x->dual().p[iota]));
    const OperatorSubspace expected(x->dim(), ops);
    EXPECT_LT(subspace_distance(x->compression(iota, iota).columns(), expected.columns()), 1e-8) << e.name;
  }
}

TEST(Crossed, FlipOffDiagonalCompressionIsOneDimensional) {
  EXPECT_EQ(crossed("z2-flip")->compression(1, 0).dim(), 1);
}

TEST(Crossed, CompressionsFactorThroughAllLabels) {
  for (const std::string name : {"z2-flip", "s3-perm", "z2-conj-m2", "z3-rotation", "dual-s3-regular"}) {
    const auto x = crossed(name);
    const int k = x->coaction().group().num_irreps();
    for (int a = 0; a < k; ++a) {
      std::vector<OperatorSubspace> parts;
      for (int b = 0; b < k; ++b) parts.push_back(span_products(x->compression(a, b), x->compression(b, a)));
      const OperatorSubspace sum = span_union(parts, x->dim());
      EXPECT_LT(subspace_distance(sum.columns(), x->compression(a, a).columns()), 1e-8) << name << " " << a;
    }
  }
}

TEST(Expectation, IdempotentOntoFixedPoints) {
  reseed(7);
  for (const std::string name : {"z2-flip", "s3-perm", "z2-conj-m2", "dual-z2-regular"}) {
    const auto x = crossed(name);
    const auto& g = x->coaction().group();
    for (int trial = 0; trial < 3; ++trial) {
      const CMatrix z = x->algebra().random_element();
      const CMatrix qz = x->q(z);
      EXPECT_LT(x->algebra().residual(qz), kTol) << name;
      EXPECT_LT(max_abs(x->q(qz) - qz), kTol) << name;
      // Q(z) is ad(v)-invariant: ad(v)(Q z) = Q z ⊗ 1
      const auto parts = x->ad_v(qz);
      const CVector one = g.algebra().unit();
      for (int m = 0; m < g.dim(); ++m) EXPECT_LT(max_abs(parts[m] - one(m) * qz), kTol) << name;
      // faithful
      EXPECT_GT(x->q(z.adjoint() * z).norm(), 1e-6) << name;
    }
  }
}

TEST(Expectation, FixesInvariantElements) {
  const auto x = crossed("z2-conj-m2");
  // δ(B^δ) ⊗ 1 elements are ad(v)-invariant, hence fixed by Q
  const FixedAlgebra fa = fixed_algebra(x->coaction());
  for (const auto& f : fa.ops.basis()) {
    const CMatrix z = kron(f, identity(x->coaction().dim_a()));
    EXPECT_LT(max_abs(x->q(z) - z), kTol);
  }
}

TEST(AdV, IsACoactionOnTheCrossedProduct) {
  for (const std::string name : {"z2-flip", "s3-perm", "z2-conj-m2", "z3-rotation"}) {
    const auto x = crossed(name);
    const Wedderburn w = wedderburn(x->algebra());
    const auto ad = ad_v_coaction(*x, w);
    EXPECT_TRUE(ad->validation().ok()) << name;
  }
}

TEST(Psi, UnitalAndMultiplicative) {
  reseed(11);
  for (const std::string name : {"s3-perm", "kac-paljutkin-regular", "z3-rotation"}) {
    const auto x = crossed(name);
    const auto& c = x->coaction();
    for (int a = 0; a < c.group().num_irreps(); ++a) {
      const int d = c.group().irrep(a).d;
      const MultiMatrixAlgebra bd = amplify(c.algebra(), d);
      EXPECT_LT(max_abs(x->psi(a, bd.unit()) - x->one_p(a)), kTol) << name;
      const CVector l1 = CVector::Random(bd.dim()), l2 = CVector::Random(bd.dim());
      EXPECT_LT(max_abs(x->psi(a, bd.multiply(l1, l2)) - x->psi(a, l1) * x->psi(a, l2)), 1e-9) << name;
      EXPECT_LT(max_abs(x->psi(a, bd.adjoint(l1)) - x->psi(a, l1).adjoint()), 1e-12) << name;
    }
  }
}

TEST(Psi, FixedAlgebraOfAmplificationLandsInCrossedProduct) {
  for (const std::string name : {"s3-perm", "z2-conj-m2", "kac-paljutkin-regular"}) {
    const auto x = crossed(name);
    const auto& c = x->coaction();
    for (int a = 0; a < c.group().num_irreps(); ++a) {
      const FixedAlgebra fa = fixed_algebra(*amplified_coaction(c, c.group().irrep(a)));
      for (Eigen::Index k = 0; k < fa.coeffs.cols(); ++k) {
        const CMatrix y = x->psi(a, fa.coeffs.col(k));
        EXPECT_LT(x->algebra().residual(y), 1e-9) << name;
        EXPECT_LT(max_abs(x->q(y) - y), 1e-9) << name;
      }
    }
  }
}

TEST(ExpectationIdentity, HoldsOnEveryInstanceAndLabel) {
  for (const auto& e : catalog()) {
    const auto x = crossed(e.name);
    for (int a = 0; a < x->coaction().group().num_irreps(); ++a) {
      const ExpectationIdentityReport r = verify_expectation_identity(*x, a);
      EXPECT_TRUE(r.holds) << e.name << " label " << a << " distance " << r.distance;
      EXPECT_LT(r.distance, 1e-8) << e.name;
    }
  }
}

TEST(ColumnForm, EntriesAreRowsOfConjugateSpectralMatrices) {
  for (const auto& e : catalog()) {
    const auto x = crossed(e.name);
    for (int a = 0; a < x->coaction().group().num_irreps(); ++a)
      EXPECT_LT(column_form_residual(*x, a), 1e-9) << e.name << " label " << a;
  }
}

// (a₀⊗1) S_{α,ι} (a₁⊗1) = 0  ⇔  a₁ B_α a₀ = 0, for projections a₀, a₁ ∈ B^δ.
TEST(Bridge, VanishingCompressionMatchesSpectralSubspace) {
  for (const std::string name : {"z2-double-flip", "z2-conj-m2", "s3-trivial-c3", "trivial-c2-z2"}) {
    const auto x = crossed(name);
    const auto& c = x->coaction();
    const auto& b = c.algebra();
    const FixedAlgebra fa = fixed_algebra(c);
    std::vector<CMatrix> projs;
    for (const auto& blk : fa.structure.blocks)
      for (int i = 0; i < blk.size; ++i) projs.push_back(blk.units[i][i]);
    const int iota = c.group().trivial_label();
    for (int a = 0; a < c.group().num_irreps(); ++a) {
      const CMatrix ba = spectral_subspace(c, c.group().irrep(a));
      const OperatorSubspace s = x->compression(a, iota);
      for (const auto& a0 : projs)
        for (const auto& a1 : projs) {
          const CMatrix l0 = kron(a0, identity(c.dim_a())), l1 = kron(a1, identity(c.dim_a()));
          double lhs = 0;
          for (const auto& e : s.basis()) lhs = std::max(lhs, max_abs(l0 * e * l1));
          double rhs = 0;
          for (Eigen::Index k = 0; k < ba.cols(); ++k) rhs = std::max(rhs, max_abs(a1 * b.to_operator(ba.col(k)) * a0));
          EXPECT_EQ(lhs < 1e-9, rhs < 1e-9) << name << " label " << a;
        }
    }
  }
}

// C = span B J B for a block ideal J of B^δ:  C^δ ⊗ 1 = span_β S_{ι,β}(J⊗1)S_{β,ι}.
TEST(GeneratedIdeals, FixedPartOfGeneratedIdeal) {
  for (const std::string name : {"z2-double-flip", "z2-conj-m2", "s3-trivial-c3"}) {
    const auto x = crossed(name);
    const auto& c = x->coaction();
    const auto& b = c.algebra();
    const FixedAlgebra fa = fixed_algebra(c);
    const int iota = c.group().trivial_label();
    const int k = c.group().num_irreps();
    for (const auto& blk : fa.structure.blocks) {
      std::vector<CMatrix> j;
      for (const auto& f : fa.ops.basis()) j.push_back(f * blk.central_projection);
      // C^δ computed inside B
      std::vector<CMatrix> bjb;
      for (int p = 0; p < b.dim(); ++p)
        for (const auto& jj : j)
          for (int q = 0; q < b.dim(); ++q)
            bjb.push_back(b.to_operator(b.basis(p)) * jj * b.to_operator(b.basis(q)));
      const OperatorSubspace cs(b.rep_dim(), bjb);
      const int inter = intersection_dim(fa.ops, cs);
      std::vector<CMatrix> rhs;
      for (int beta = 0; beta < k; ++beta) {
        const auto left = x->compression(iota, beta).basis();
        const auto right = x->compression(beta, iota).basis();
        for (const auto& l : left)
          for (const auto& jj : j)
            for (const auto& r : right) rhs.push_back(l * kron(jj, identity(c.dim_a())) * r);
      }
      const OperatorSubspace rs(x->dim(), rhs);
      EXPECT_EQ(rs.dim(), inter) << name;
      // C^δ⊗1 lies in the span; equal dimensions give equality
      std::vector<CMatrix> cdelta;
      {
        CMatrix both(fa.ops.columns().rows(), fa.ops.dim() + cs.dim());
        both << fa.ops.columns(), -cs.columns();
        const CMatrix ns = null_space(both);
        for (Eigen::Index t = 0; t < ns.cols(); ++t) {
          const CVector vv = fa.ops.columns() * ns.col(t).head(fa.ops.dim());
          cdelta.push_back(kron(unvec(vv, b.rep_dim(), b.rep_dim()), x->dual().p[iota]));
        }
      }
      for (const auto& y : cdelta) EXPECT_LT(rs.residual(y), 1e-8) << name;
    }
  }
}

// (q⊗1)(B⋊G)(q⊗1) is a hereditary subalgebra with the dimension of the corner's crossed product.
TEST(Hereditary, CornerCrossedProductDimension) {
  for (const std::string name : {"z2-double-flip", "z2-conj-m2", "s3-trivial-c3"}) {
    const auto c = build(name);
    const auto x = build_crossed(c).first;
    for (const auto& corner : invariant_corners(*c)) {
      ASSERT_TRUE(corner.valid);
      const CMatrix q = kron(c->algebra().to_operator(corner.q), identity(c->dim_a()));
      const OperatorSubspace h = qspec::corner(x->algebra(), q);
      EXPECT_EQ(h.dim(), corner.restricted->dim_b() * c->dim_a()) << name;
      const auto y = build_crossed(corner.restricted).first;
      EXPECT_EQ(y->algebra().dim(), h.dim()) << name;
      auto s1 = wedderburn(y->algebra()).block_sizes(), s2 = wedderburn(h).block_sizes();
      std::sort(s1.begin(), s1.end());
      std::sort(s2.begin(), s2.end());
      EXPECT_EQ(s1, s2) << name;
    }
  }
}
