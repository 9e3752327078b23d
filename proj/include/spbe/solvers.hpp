/*
 * (C) Copyright 2026 spbe developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <cstddef>
#include <vector>

#include "spbe/core.hpp"
#include "spbe/structured_be.hpp"

namespace spbe {

enum class SolveMethod { Gmres, Gepp };

struct SolveTrace {
  CandidateSolution solution;
  std::size_t iterations = 0;
  /// Relative residual estimate per iteration; entry 0 is the zero iterate.
  std::vector<double> relative_residual_history;
  /// ‖f − B x‖ / ‖f‖ recomputed for the returned iterate.
  double final_relative_residual = 0.0;
  bool converged = false;
  SolveMethod method = SolveMethod::Gmres;
};

/// Unrestarted GMRES with modified Gram–Schmidt, zero initial guess. Stops
/// once the true relative residual drops below tol, or after maxit steps.
SolveTrace gmres(const GsppSystem& system, const CVector& f, double tol, std::size_t maxit);
SolveTrace gmres(const GsppSystem& system, double tol, std::size_t maxit);

/// Gaussian elimination with row partial pivoting on the dense block matrix.
CandidateSolution gepp_solve(const GsppSystem& system, const CVector& f);
CandidateSolution gepp_solve(const GsppSystem& system);

/// 2⁻⁵² times `factor`.
double default_stability_threshold(double factor = 1e4);

struct StabilityReport {
  double unstructured_be = 0.0;
  BackwardErrorReport structured_sparse;
  BackwardErrorReport structured_full;
  double threshold = 0.0;
  bool backward_stable = false;
  bool strongly_backward_stable = false;
};

/// Real systems with real candidates use the real reduction.
StabilityReport stability_report(const GsppSystem& system, const CandidateSolution& sol,
                                 const Weights& w, double threshold,
                                 const StructuredOptions& options = {});

}  // namespace spbe
