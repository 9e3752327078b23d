/*
 * (C) Copyright 2026 spbe developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "spbe/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "spbe/unstructured_be.hpp"

namespace spbe {

using cd = std::complex<double>;

namespace {

struct Rotation {
  double c = 1.0;
  cd s = 0.0;

  void apply(cd& a, cd& b) const {
    const cd top = c * a + s * b;
    b = -std::conj(s) * a + c * b;
    a = top;
  }
};

Rotation make_rotation(cd a, cd b) {
  if (b == cd(0.0)) return {1.0, 0.0};
  if (a == cd(0.0)) return {0.0, 1.0};
  const double r = std::hypot(std::abs(a), std::abs(b));
  return {std::abs(a) / r, (a / std::abs(a)) * std::conj(b) / r};
}

}  // namespace

SolveTrace gmres(const GsppSystem& system, const CVector& f, double tol, std::size_t maxit) {
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "GMRES tolerance must be positive");
  const Index dim = system.n() + system.m();
  if (f.size() != dim) throw Error(ErrorCode::DimensionMismatch, "right-hand side length != n+m");

  SolveTrace trace;
  trace.method = SolveMethod::Gmres;
  const double beta = f.norm();
  CVector x = CVector::Zero(dim);
  auto finish = [&](bool converged) {
    trace.solution = CandidateSolution::from_stacked(x, system.n());
    trace.final_relative_residual = beta == 0.0 ? 0.0 : (f - system.apply(x)).norm() / beta;
    trace.converged = converged;
    return trace;
  };
  if (beta == 0.0) {
    trace.relative_residual_history.push_back(0.0);
    return finish(true);
  }
  trace.relative_residual_history.push_back(1.0);
  if (1.0 < tol) return finish(true);

  const Index limit = static_cast<Index>(std::min<std::size_t>(maxit, static_cast<std::size_t>(dim)));
  CMatrix V = CMatrix::Zero(dim, limit + 1);
  CMatrix H = CMatrix::Zero(limit + 1, limit);
  CVector g = CVector::Zero(limit + 1);
  std::vector<Rotation> rot;
  V.col(0) = f / beta;
  g(0) = beta;

  for (Index k = 0; k < limit; ++k) {
    CVector w = system.apply(V.col(k));
    for (Index i = 0; i <= k; ++i) {
      H(i, k) = V.col(i).dot(w);
      w -= H(i, k) * V.col(i);
    }
    const double h_next = w.norm();
    H(k + 1, k) = h_next;
    for (Index i = 0; i < k; ++i) rot[i].apply(H(i, k), H(i + 1, k));
    rot.push_back(make_rotation(H(k, k), H(k + 1, k)));
    rot[k].apply(H(k, k), H(k + 1, k));
    rot[k].apply(g(k), g(k + 1));
    trace.iterations = static_cast<std::size_t>(k + 1);
    const double estimate = std::abs(g(k + 1)) / beta;
    trace.relative_residual_history.push_back(estimate);

    const bool breakdown = h_next == 0.0;
    const bool last = k + 1 == limit;
    if (estimate < tol || breakdown || last) {
      CVector y = H.topLeftCorner(k + 1, k + 1).triangularView<Eigen::Upper>().solve(g.head(k + 1));
      x = V.leftCols(k + 1) * y;
      const double true_rel = (f - system.apply(x)).norm() / beta;
      if (true_rel < tol) return finish(true);
      if (breakdown || last) return finish(false);
    }
    V.col(k + 1) = w / h_next;
  }
  return finish(false);
}

SolveTrace gmres(const GsppSystem& system, double tol, std::size_t maxit) {
  return gmres(system, system.rhs(), tol, maxit);
}

CandidateSolution gepp_solve(const GsppSystem& system, const CVector& f) {
  CMatrix a = system.dense();
  const Index dim = a.rows();
  if (f.size() != dim) throw Error(ErrorCode::DimensionMismatch, "right-hand side length != n+m");
  CVector b = f;
  for (Index k = 0; k < dim; ++k) {
    Index piv = k;
    for (Index i = k + 1; i < dim; ++i)
      if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
    if (std::abs(a(piv, k)) < 1e-300) {
      throw Error(ErrorCode::Singular, "matrix is numerically singular (pivot below 1e-300)");
    }
    if (piv != k) {
      a.row(k).swap(a.row(piv));
      std::swap(b(k), b(piv));
    }
    for (Index i = k + 1; i < dim; ++i) {
      const cd l = a(i, k) / a(k, k);
      if (l == cd(0.0)) continue;
      a.row(i).tail(dim - k) -= l * a.row(k).tail(dim - k);
      b(i) -= l * b(k);
    }
  }
  for (Index k = dim - 1; k >= 0; --k) {
    cd s = b(k);
    for (Index j = k + 1; j < dim; ++j) s -= a(k, j) * b(j);
    b(k) = s / a(k, k);
  }
  return CandidateSolution::from_stacked(b, system.n());
}

CandidateSolution gepp_solve(const GsppSystem& system) { return gepp_solve(system, system.rhs()); }

double default_stability_threshold(double factor) {
  if (!(factor > 0.0)) throw Error(ErrorCode::InvalidArgument, "threshold factor must be positive");
  return factor * std::ldexp(1.0, -52);
}

StabilityReport stability_report(const GsppSystem& system, const CandidateSolution& sol,
                                 const Weights& w, double threshold,
                                 const StructuredOptions& options) {
  if (!(threshold > 0.0)) throw Error(ErrorCode::InvalidArgument, "threshold must be positive");
  StabilityReport rep;
  rep.threshold = threshold;
  rep.unstructured_be = rigal_gaches(system, sol);
  const bool real = system.is_real() && sol.is_real();
  auto run = [&](bool sparse) {
    return real ? reduce_real(system, sol, w, sparse, options)
                : compute_structured_be(system, sol, w, sparse, options);
  };
  rep.structured_sparse = run(true);
  rep.structured_full = run(false);
  rep.backward_stable = rep.unstructured_be <= threshold;
  rep.strongly_backward_stable = rep.structured_sparse.xi <= threshold;
  return rep;
}

}  // namespace spbe
