/*
 * (C) Copyright 2026 spbe developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include <gtest/gtest.h>

#include "spbe/problems.hpp"
#include "test_util.hpp"

namespace spbe {
namespace {

using C = std::complex<double>;

TEST(Fixtures, ExampleOneShape) {
  const Fixture f = load_fixture(FixtureId::example1());
  EXPECT_EQ(f.system.n(), 5);
  EXPECT_EQ(f.system.m(), 4);
  EXPECT_EQ(f.system.structure(), StructureCase::CaseI);
  EXPECT_TRUE(f.system.E().is_hermitian());
  EXPECT_TRUE(f.system.H() == f.system.F());
  EXPECT_FALSE(f.system.G().is_hermitian());  // stored verbatim, unconstrained in case i
  ASSERT_TRUE(f.candidate.has_value());
  EXPECT_EQ(f.candidate->u().to_complex()(0), C(0.9249, 1.6011));
}

TEST(Fixtures, ExampleThreeBlocks) {
  const Fixture f = load_fixture(FixtureId::example3());
  EXPECT_EQ(f.system.n(), 4);
  EXPECT_EQ(f.system.m(), 3);
  EXPECT_EQ(f.system.structure(), StructureCase::CaseII);
  CMatrix g(3, 3);
  g << 1e5, 0.0, C(100, 0.01), 0.0, 1e-6, 0.0, C(100, -0.01), 0.0, -1.0;
  EXPECT_EQ(f.system.G().to_complex(), g);
  EXPECT_TRUE(f.system.G().is_hermitian());
  EXPECT_TRUE(f.candidate.has_value());
}

TEST(Fixtures, ExampleFourSizeAndExactSolution) {
  for (int t : {2, 4, 6}) {
    const Fixture f = load_fixture(FixtureId::example4(t));
    EXPECT_EQ(f.system.n() + f.system.m(), 3 * t * t);
    ASSERT_TRUE(f.exact_solution.has_value());
    EXPECT_EQ(*f.exact_solution, CVector::Ones(3 * t * t));
    EXPECT_FALSE(f.candidate.has_value());
    EXPECT_EQ(f.system.apply(*f.exact_solution), f.system.rhs());
  }
  EXPECT_THROW(load_fixture(FixtureId::example4(1)), Error);
}

TEST(StokesLike, SmallestGrid) {
  const GsppSystem s = gen_stokes_like(2);
  EXPECT_EQ(s.E().rows(), 8);
  EXPECT_EQ(s.F().rows(), 4);
  EXPECT_EQ(s.F().cols(), 8);
  EXPECT_EQ(s.H().rows(), 4);
  EXPECT_EQ(s.structure(), StructureCase::CaseIII);
  RealMatrix j(2, 2);
  j << 2, -1, -1, 2;
  j /= 9.0;
  // E's leading block is I⊗J + J⊗I; its (0,0) 2x2 corner is J + 2J_{00}·I.
  RealMatrix corner = j + j(0, 0) * RealMatrix::Identity(2, 2);
  EXPECT_LT((s.E().re().topLeftCorner(2, 2) - corner).norm(), 1e-16);
  EXPECT_EQ(s.G().frobenius_norm(), 0.0);
}

TEST(StokesLike, StructureForAnyGrid) {
  for (int t = 2; t <= 7; ++t) {
    const GsppSystem s = gen_stokes_like(t);
    EXPECT_EQ(s.E().re(), s.E().re().transpose());
    EXPECT_TRUE(s.is_real());
    EXPECT_FALSE(s.H() == s.F());
  }
}

TEST(StokesLike, KroneckerDefinition) {
  const int t = 3;
  const Index tt = t * t;
  RealMatrix J = RealMatrix::Zero(t, t), X = RealMatrix::Zero(t, t), Y = RealMatrix::Zero(t, t);
  for (int i = 0; i < t; ++i) {
    J(i, i) = 2.0;
    if (i + 1 < t) J(i, i + 1) = J(i + 1, i) = -1.0;
    X(i, i) = 1.0;
    if (i + 1 < t) X(i, i + 1) = -1.0;
    Y(i, i) = 1.0 + i * t;
  }
  J /= (t + 1.0) * (t + 1.0);
  X /= t + 1.0;
  const RealMatrix I = RealMatrix::Identity(t, t);
  const RealMatrix L = kron(I, J) + kron(J, I);
  const GsppSystem s = gen_stokes_like(t);
  EXPECT_LT((s.E().re().topLeftCorner(tt, tt) - L).norm(), 1e-15);
  EXPECT_LT((s.E().re().bottomRightCorner(tt, tt) - L).norm(), 1e-15);
  EXPECT_EQ(s.E().re().topRightCorner(tt, tt).norm(), 0.0);
  RealMatrix F(tt, 2 * tt), H(tt, 2 * tt);
  F << kron(I, X), kron(X, I);
  H << kron(Y, X), kron(X, Y);
  EXPECT_LT((s.F().re() - F).norm(), 1e-15);
  EXPECT_LT((s.H().re() - H).norm(), 1e-15);
}

TEST(RandomSparse, DeterministicAndCaseInvariants) {
  for (StructureCase c : {StructureCase::CaseI, StructureCase::CaseII, StructureCase::CaseIII}) {
    const GsppSystem a = gen_random_sparse(42, 5, 3, 0.5, c);
    const GsppSystem b = gen_random_sparse(42, 5, 3, 0.5, c);
    EXPECT_TRUE(a.E() == b.E() && a.F() == b.F() && a.H() == b.H() && a.G() == b.G());
    EXPECT_TRUE(a.q() == b.q() && a.r() == b.r());
    if (hermitian_e(c)) {
      EXPECT_TRUE(a.E().is_hermitian());
    }
    if (hermitian_g(c)) {
      EXPECT_TRUE(a.G().is_hermitian());
    }
    if (shares_f(c)) {
      EXPECT_TRUE(a.H() == a.F());
    }
    const GsppSystem other = gen_random_sparse(43, 5, 3, 0.5, c);
    EXPECT_FALSE(other.F() == a.F());
  }
}

TEST(RandomSparse, FullDensityGivesOnesMasks) {
  const GsppSystem s = gen_random_sparse(7, 4, 3, 1.0, StructureCase::CaseIII);
  const SparsityPattern p = derive_pattern(s);
  EXPECT_EQ(p.theta_e, RealMatrix::Ones(4, 4));
  EXPECT_EQ(p.theta_f, RealMatrix::Ones(3, 4));
  EXPECT_EQ(p.theta_h, RealMatrix::Ones(3, 4));
  EXPECT_EQ(p.theta_g, RealMatrix::Ones(3, 3));
}

TEST(RandomSparse, RealFlag) {
  EXPECT_TRUE(gen_random_sparse(8, 3, 2, 0.6, StructureCase::CaseII, true).is_real());
  EXPECT_FALSE(gen_random_sparse(8, 3, 2, 0.6, StructureCase::CaseII).is_real());
  EXPECT_TRUE(gen_random_candidate(8, 3, 2, true).is_real());
}

TEST(CounterRng, DocumentedAlgorithm) {
  auto splitmix = [](std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  };
  CounterRng rng(123);
  for (std::uint64_t k = 1; k <= 5; ++k) {
    EXPECT_EQ(rng.next_u64(), splitmix(123 + k * 0x9E3779B97F4A7C15ULL));
  }
  CounterRng a(9);
  for (int k = 0; k < 1000; ++k) {
    const double u = a.next_uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    const double s = a.next_signed();
    EXPECT_GT(s, -1.0);
    EXPECT_LT(s, 1.0);
    EXPECT_NE(s, 0.0);
  }
}

TEST(FixtureId, Parsing) {
  EXPECT_EQ(FixtureId::parse("example1").kind, FixtureKind::Example1);
  const FixtureId e4 = FixtureId::parse("example4:t=5");
  EXPECT_EQ(e4.kind, FixtureKind::Example4);
  EXPECT_EQ(e4.t, 5);
  const FixtureId r = FixtureId::parse("random:seed=7,n=3,m=2,density=0.6,case=ii,real");
  EXPECT_EQ(r.seed, 7u);
  EXPECT_EQ(r.n, 3);
  EXPECT_EQ(r.m, 2);
  EXPECT_DOUBLE_EQ(r.density, 0.6);
  EXPECT_EQ(r.structure, StructureCase::CaseII);
  EXPECT_TRUE(r.real);
  EXPECT_EQ(FixtureId::parse(r.name()).seed, 7u);
  EXPECT_THROW(FixtureId::parse("example2"), Error);
  EXPECT_THROW(FixtureId::parse("random:seed=1,n=3,m=2,density=0,case=i"), Error);
}

}  // namespace
}  // namespace spbe
