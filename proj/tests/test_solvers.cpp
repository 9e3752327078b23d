/*
 * (C) Copyright 2026 spbe developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include <gtest/gtest.h>

#include <cmath>

#include "spbe/problems.hpp"
#include "spbe/solvers.hpp"
#include "spbe/unstructured_be.hpp"
#include "test_util.hpp"

namespace spbe {
namespace {

using C = std::complex<double>;

GsppSystem identity_system() {
  CVector q(2), r(1);
  q << C(1, 2), C(-3, 0.5);
  r << C(0, -1);
  return GsppSystem(ComplexMatrix::from_real(RealMatrix::Identity(2, 2)), ComplexMatrix(1, 2),
                    ComplexMatrix(1, 2), ComplexMatrix::from_real(RealMatrix::Identity(1, 1)),
                    ComplexVector::from_complex(q), ComplexVector::from_complex(r),
                    StructureCase::CaseIII);
}

TEST(Gmres, IdentityConvergesInOneStep) {
  const GsppSystem s = identity_system();
  const SolveTrace t = gmres(s, 1e-12, 10);
  EXPECT_TRUE(t.converged);
  EXPECT_EQ(t.iterations, 1u);
  EXPECT_LT((t.solution.stacked() - s.rhs()).norm(), 1e-15);
  EXPECT_EQ(t.method, SolveMethod::Gmres);
}

TEST(Gmres, StokesLikeReachesTolerance) {
  const GsppSystem s = gen_stokes_like(4);
  const SolveTrace t = gmres(s, 1e-11, 48);
  EXPECT_TRUE(t.converged);
  EXPECT_LT(t.final_relative_residual, 1e-11);
  const CVector r = s.rhs() - s.apply(t.solution.stacked());
  EXPECT_NEAR(t.final_relative_residual, r.norm() / s.rhs().norm(), 1e-14);
}

TEST(Gmres, LooseToleranceReturnsZeroIterate) {
  const GsppSystem s = gen_random_sparse(3, 4, 2, 0.8, StructureCase::CaseII);
  const SolveTrace t = gmres(s, 2.0, 10);
  EXPECT_EQ(t.iterations, 0u);
  EXPECT_TRUE(t.converged);
  EXPECT_EQ(t.solution.stacked().norm(), 0.0);
  EXPECT_EQ(t.final_relative_residual, 1.0);
  // tol = 1 is not met by the zero iterate (1 < 1 is false).
  const SolveTrace u = gmres(s, 1.0, 10);
  EXPECT_GT(u.iterations, 0u);
}

TEST(Gmres, HistoryIsNonincreasing) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const GsppSystem s = gen_random_sparse(seed, 8, 5, 0.5, StructureCase::CaseI);
    const SolveTrace t = gmres(s, 1e-12, 13);
    ASSERT_FALSE(t.relative_residual_history.empty());
    EXPECT_EQ(t.relative_residual_history.front(), 1.0);
    for (std::size_t k = 1; k < t.relative_residual_history.size(); ++k) {
      EXPECT_LE(t.relative_residual_history[k], t.relative_residual_history[k - 1] + 1e-13);
    }
  }
}

TEST(Gmres, NonConvergenceIsReported) {
  const GsppSystem s = gen_stokes_like(4);
  const SolveTrace t = gmres(s, 1e-14, 3);
  EXPECT_FALSE(t.converged);
  EXPECT_EQ(t.iterations, 3u);
  EXPECT_GT(t.final_relative_residual, 1e-14);
}

TEST(Gepp, IdentityAndDecoupledScalars) {
  const GsppSystem s = identity_system();
  EXPECT_LT((gepp_solve(s).stacked() - s.rhs()).norm(), 1e-15);

  const GsppSystem d(ComplexMatrix::from_real(RealMatrix::Constant(1, 1, 2.0)), ComplexMatrix(1, 1),
                     ComplexMatrix(1, 1), ComplexMatrix::from_real(RealMatrix::Constant(1, 1, 1.0)),
                     ComplexVector::from_real(RealVector::Constant(1, 4.0)),
                     ComplexVector::from_real(RealVector::Constant(1, 3.0)), StructureCase::CaseIII);
  const CandidateSolution x = gepp_solve(d);
  EXPECT_EQ(x.u().to_complex()(0), C(2, 0));
  EXPECT_EQ(x.p().to_complex()(0), C(3, 0));
}

TEST(Gepp, SingularIsReported) {
  const GsppSystem z(ComplexMatrix(1, 1), ComplexMatrix(1, 1), ComplexMatrix(1, 1), ComplexMatrix(1, 1),
                     ComplexVector::from_real(RealVector::Ones(1)),
                     ComplexVector::from_real(RealVector::Ones(1)), StructureCase::CaseIII);
  try {
    gepp_solve(z);
    FAIL() << "expected Singular";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Singular);
  }
}

TEST(Gepp, AgreesWithTightGmres) {
  for (std::uint64_t seed = 10; seed < 14; ++seed) {
    const GsppSystem s = gen_random_sparse(seed, 6, 4, 0.7, StructureCase::CaseIII);
    const CVector a = gepp_solve(s).stacked();
    const CVector b = gmres(s, 1e-14, 10).solution.stacked();
    EXPECT_LT((a - b).norm(), 1e-10 * a.norm());
  }
  const GsppSystem st = gen_stokes_like(3);
  EXPECT_LT((gepp_solve(st).stacked() - CVector::Ones(27)).norm(), 1e-10 * std::sqrt(27.0));
}

TEST(Stability, DefaultThreshold) {
  EXPECT_DOUBLE_EQ(default_stability_threshold(), 1e4 * std::ldexp(1.0, -52));
  EXPECT_DOUBLE_EQ(default_stability_threshold(1.0), std::ldexp(1.0, -52));
}

TEST(Stability, ExactSolutionIsStronglyStable) {
  const GsppSystem s = gen_stokes_like(2);
  const CandidateSolution ones = CandidateSolution::from_stacked(CVector::Ones(12), 8);
  const StabilityReport r = stability_report(s, ones, default_relative_weights(s), 1e-12);
  EXPECT_TRUE(r.backward_stable);
  EXPECT_TRUE(r.strongly_backward_stable);
  EXPECT_TRUE(r.structured_sparse.real_path);
}

// Labels follow the thresholds independently: here the unstructured value
// passes while the sparse structured value does not.
TEST(Stability, LabelsAreIndependent) {
  const GsppSystem s = gen_stokes_like(4);
  const SolveTrace t = gmres(s, 1e-11, 48);
  const Weights w = default_relative_weights(s);
  const StabilityReport r = stability_report(s, t.solution, w, 1e-12);
  EXPECT_EQ(r.backward_stable, r.unstructured_be <= 1e-12);
  EXPECT_EQ(r.strongly_backward_stable, r.structured_sparse.xi <= 1e-12);
  EXPECT_TRUE(r.structured_sparse.sparsity_preserved);
  EXPECT_FALSE(r.structured_full.sparsity_preserved);
  const StabilityReport loose = stability_report(s, t.solution, w, 1.0);
  EXPECT_TRUE(loose.backward_stable && loose.strongly_backward_stable);
  const StabilityReport tight = stability_report(s, t.solution, w, 1e-30);
  EXPECT_FALSE(tight.backward_stable || tight.strongly_backward_stable);
}

}  // namespace
}  // namespace spbe
