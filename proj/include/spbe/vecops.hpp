/*
 * (C) Copyright 2026 spbe developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <Eigen/Sparse>

#include "spbe/core.hpp"

namespace spbe {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Coordinate layouts of a matrix. SymLower lists lower-triangular column
/// segments including the diagonal; SkewStrictLower lists the strictly lower
/// segments. Both are column-major.
enum class GeneratorKind { Full, SymLower, SkewStrictLower };

struct GeneratorVector {
  RealVector data;
  GeneratorKind kind = GeneratorKind::Full;
  Index rows = 0;
  Index cols = 0;
};

struct MatrixEntry {
  Index row;
  Index col;
};

/// Number of generator coordinates for a rows x cols matrix of the given kind.
Index generator_length(GeneratorKind kind, Index rows, Index cols);
/// Matrix position addressed by generator coordinate k.
MatrixEntry generator_entry(GeneratorKind kind, Index rows, Index k);
/// Generator coordinate of position (i, j); requires i >= j (i > j for skew).
Index generator_index(GeneratorKind kind, Index rows, Index i, Index j);

GeneratorVector vec(const RealMatrix& m);
GeneratorVector vec_sym(const RealMatrix& m);
GeneratorVector vec_skew(const RealMatrix& m);
/// Inverse of vec / vec_sym / vec_skew.
RealMatrix unvec(const GeneratorVector& g);

/// Sparse matrix behind apply / apply_transpose.
class Selector {
 public:
  Selector() = default;
  explicit Selector(SparseMatrix s) : s_(std::move(s)) {}
  Index rows() const { return s_.rows(); }
  Index cols() const { return s_.cols(); }
  RealVector apply(const RealVector& x) const;
  RealVector apply_transpose(const RealVector& y) const;
  const SparseMatrix& sparse() const { return s_; }
  RealMatrix dense() const { return RealMatrix(s_); }

 private:
  SparseMatrix s_;
};

/// J_S: m² x m(m+1)/2 with J_S vec_sym(M) = vec(M).
Selector build_sym_basis(Index m);
/// J_SK: m² x m(m−1)/2 with J_SK vec_skew(M) = vec(M).
Selector build_skew_basis(Index m);

struct GeneratorScalings {
  RealVector d_s;   // 1 on diagonal positions, √2 elsewhere
  RealVector d_sk;  // all √2
};
GeneratorScalings build_scalings(Index m);

/// Diagonal (as a vector) of the mask in the coordinates of `kind`.
RealVector build_mask_diagonals(const RealMatrix& theta, GeneratorKind kind);

RealMatrix kron(const RealMatrix& a, const RealMatrix& b);

/// Bases, scalings and masks for one square block with pattern theta.
struct SelectorBundle {
  Selector j_s, j_sk;
  RealVector d_s, d_sk;
  RealVector phi, psi, sigma;

  /// J_S Φ D_S⁻¹ and J_SK Ψ D_SK⁻¹.
  SparseMatrix n_sym() const;
  SparseMatrix n_skew() const;
};
SelectorBundle make_selector_bundle(const RealMatrix& theta);

}  // namespace spbe
