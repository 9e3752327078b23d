/*
 * (C) Copyright 2026 spbe developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include "spbe/core.hpp"

namespace spbe {

/// Q = q − E û − F* p̂ and R = r − H û − G p̂.
struct ResidualPair {
  ComplexVector Q;
  ComplexVector R;

  double norm() const;
};

ResidualPair residuals(const GsppSystem& system, const CandidateSolution& sol);

/// Normwise backward error ‖f − B x̂‖ / sqrt(‖B‖_F² ‖x̂‖² + ‖f‖²).
double rigal_gaches(const GsppSystem& system, const CandidateSolution& sol);

}  // namespace spbe
