/*
 * (C) Copyright 2026 spbe developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <vector>

#include "spbe/core.hpp"
#include "spbe/vecops.hpp"

namespace spbe {

/// Complex: unknowns and rows are split into real and imaginary parts.
/// Real: real data only; imaginary unknowns and rows are dropped.
enum class Field { Complex, Real };
enum class Part { Real, Imag };

/// One run of unknowns in the weighted perturbation vector z.
struct ColumnSegment {
  Block block;
  Part part;
  GeneratorKind kind;
  Index rows;              // shape of the perturbed block (vectors: length x 1)
  Index cols;
  Index nominal_offset;    // position among all structural unknowns
  Index nominal_length;    // generator length before masking
  Weight weight;
  bool deleted = false;    // block Excluded
  std::vector<Index> active;  // generator coordinates kept after masking
  Index offset = 0;        // position of the first active coordinate in z

  Index length() const { return deleted ? 0 : static_cast<Index>(active.size()); }
  /// Factor turning a z coordinate into a generator value.
  double unscale(Index coordinate) const;
};

struct ColumnLayout {
  StructureCase structure = StructureCase::CaseI;
  Field field = Field::Complex;
  bool sparsity_preserved = false;
  Index n = 0;
  Index m = 0;
  std::vector<ColumnSegment> segments;
  Index columns = 0;            // active columns of A
  Index nominal_columns = 0;    // all structural columns, Excluded blocks included
  std::vector<Index> nominal_index;  // nominal position of each active column

  /// Structural unknowns for the matrix blocks only (s, t or k).
  Index nominal_matrix_columns() const;
  Index rows() const { return field == Field::Complex ? 2 * (n + m) : n + m; }
};

struct AssembledSystem {
  SparseMatrix A;
  RealVector rhs;
  ColumnLayout layout;

  RealMatrix dense() const { return RealMatrix(A); }
};

/// Builds A z = rhs, whose minimum-norm solution gives the structured
/// backward error. Excluded blocks contribute no columns; masked-out
/// generator coordinates are dropped.
AssembledSystem assemble(const GsppSystem& system, const CandidateSolution& sol,
                         const SparsityPattern& pattern, const Weights& w,
                         Field field = Field::Complex);

struct MinNormOptions {
  /// Dense factorization up to this many entries of A; sparse QR above.
  Index dense_threshold = 4'000'000;
  /// Rank test: smallest |R_kk| must exceed this times the largest.
  double rank_tolerance = 1e-12;
};

/// Minimum-2-norm solution of a consistent full-row-rank system, through an
/// orthogonal factorization of Aᵀ. Rows of A that are identically zero are
/// dropped when their right-hand side is zero, otherwise Infeasible.
RealVector min_norm_solve(const SparseMatrix& A, const RealVector& rhs,
                          const MinNormOptions& options = {});
RealVector min_norm_solve(const RealMatrix& A, const RealVector& rhs,
                          const MinNormOptions& options = {});
RealVector min_norm_solve(const AssembledSystem& sys, const MinNormOptions& options = {});

PerturbationSet reconstruct_perturbations(const RealVector& z, const ColumnLayout& layout);

/// Residual of the perturbed system plus structure, mask and Excluded checks.
/// Mask and weight checks are skipped when the pointer is null.
PerturbationDiagnostics verify_perturbation(const GsppSystem& system,
                                            const CandidateSolution& sol,
                                            const PerturbationSet& p,
                                            const SparsityPattern* pattern = nullptr,
                                            const Weights* w = nullptr);

struct StructuredOptions {
  MinNormOptions solve;
};

BackwardErrorReport compute_structured_be(const GsppSystem& system,
                                          const CandidateSolution& sol, const Weights& w,
                                          bool preserve_sparsity,
                                          const StructuredOptions& options = {});

/// Same quantity for real data, solved on the half-size real system.
BackwardErrorReport reduce_real(const GsppSystem& system, const CandidateSolution& sol,
                                const Weights& w, bool preserve_sparsity,
                                const StructuredOptions& options = {});

}  // namespace spbe
