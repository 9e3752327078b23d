/*
 * (C) Copyright 2026 spbe developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "spbe/unstructured_be.hpp"

#include <cmath>

namespace spbe {

double ResidualPair::norm() const { return std::hypot(Q.norm(), R.norm()); }

ResidualPair residuals(const GsppSystem& system, const CandidateSolution& sol) {
  sol.check_against(system);
  const CVector u = sol.u().to_complex();
  const CVector p = sol.p().to_complex();
  const CVector q = system.q().to_complex() - system.E().to_complex() * u -
                    system.F().to_complex().adjoint() * p;
  const CVector r =
      system.r().to_complex() - system.H().to_complex() * u - system.G().to_complex() * p;
  return {ComplexVector::from_complex(q), ComplexVector::from_complex(r)};
}

double rigal_gaches(const GsppSystem& system, const CandidateSolution& sol) {
  const ResidualPair res = residuals(system, sol);
  const double bx = system.frobenius_norm() * std::hypot(sol.u().norm(), sol.p().norm());
  const double nf = std::hypot(system.q().norm(), system.r().norm());
  const double denom = std::hypot(bx, nf);
  if (denom == 0.0) {
    throw Error(ErrorCode::InvalidArgument, "backward error undefined: ‖B‖‖x̂‖ and ‖f‖ both zero");
  }
  return res.norm() / denom;
}

}  // namespace spbe
