/*
 * (C) Copyright 2026 spbe developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "spbe/vecops.hpp"

#include <cmath>
#include <vector>

namespace spbe {

namespace {

void require_square(const RealMatrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + " needs a square matrix");
  }
}

Index sym_offset(Index m, Index j) { return j * m - j * (j - 1) / 2; }
Index skew_offset(Index m, Index j) { return j * (m - 1) - j * (j - 1) / 2; }

}  // namespace

Index generator_length(GeneratorKind kind, Index rows, Index cols) {
  switch (kind) {
    case GeneratorKind::Full: return rows * cols;
    case GeneratorKind::SymLower: return rows * (rows + 1) / 2;
    case GeneratorKind::SkewStrictLower: return rows * (rows - 1) / 2;
  }
  return 0;
}

Index generator_index(GeneratorKind kind, Index rows, Index i, Index j) {
  switch (kind) {
    case GeneratorKind::Full: return j * rows + i;
    case GeneratorKind::SymLower: return sym_offset(rows, j) + (i - j);
    case GeneratorKind::SkewStrictLower: return skew_offset(rows, j) + (i - j - 1);
  }
  return -1;
}

MatrixEntry generator_entry(GeneratorKind kind, Index rows, Index k) {
  if (k < 0) throw Error(ErrorCode::InvalidArgument, "generator coordinate out of range");
  if (kind == GeneratorKind::Full) return {k % rows, k / rows};
  const Index below = kind == GeneratorKind::SymLower ? 0 : 1;
  for (Index j = 0; j < rows; ++j) {
    const Index len = rows - j - below;
    if (k < len) return {j + below + k, j};
    k -= len;
  }
  throw Error(ErrorCode::InvalidArgument, "generator coordinate out of range");
}

GeneratorVector vec(const RealMatrix& m) {
  GeneratorVector g;
  g.kind = GeneratorKind::Full;
  g.rows = m.rows();
  g.cols = m.cols();
  g.data = m.reshaped();
  return g;
}

GeneratorVector vec_sym(const RealMatrix& m) {
  require_square(m, "vec_sym");
  if (m != m.transpose()) throw Error(ErrorCode::StructureViolation, "matrix is not symmetric");
  const Index n = m.rows();
  GeneratorVector g{RealVector(generator_length(GeneratorKind::SymLower, n, n)),
                    GeneratorKind::SymLower, n, n};
  Index k = 0;
  for (Index j = 0; j < n; ++j)
    for (Index i = j; i < n; ++i) g.data(k++) = m(i, j);
  return g;
}

GeneratorVector vec_skew(const RealMatrix& m) {
  require_square(m, "vec_skew");
  if (m != -m.transpose()) {
    throw Error(ErrorCode::StructureViolation, "matrix is not skew-symmetric");
  }
  const Index n = m.rows();
  GeneratorVector g{RealVector(generator_length(GeneratorKind::SkewStrictLower, n, n)),
                    GeneratorKind::SkewStrictLower, n, n};
  Index k = 0;
  for (Index j = 0; j < n; ++j)
    for (Index i = j + 1; i < n; ++i) g.data(k++) = m(i, j);
  return g;
}

RealMatrix unvec(const GeneratorVector& g) {
  if (g.data.size() != generator_length(g.kind, g.rows, g.cols)) {
    throw Error(ErrorCode::DimensionMismatch, "generator length does not match its shape");
  }
  if (g.kind == GeneratorKind::Full) return g.data.reshaped(g.rows, g.cols);
  const Index n = g.rows;
  RealMatrix m = RealMatrix::Zero(n, n);
  Index k = 0;
  if (g.kind == GeneratorKind::SymLower) {
    for (Index j = 0; j < n; ++j)
      for (Index i = j; i < n; ++i) {
        m(i, j) = g.data(k);
        m(j, i) = g.data(k);
        ++k;
      }
  } else {
    for (Index j = 0; j < n; ++j)
      for (Index i = j + 1; i < n; ++i) {
        m(i, j) = g.data(k);
        m(j, i) = -g.data(k);
        ++k;
      }
  }
  return m;
}

RealVector Selector::apply(const RealVector& x) const {
  if (x.size() != s_.cols()) throw Error(ErrorCode::DimensionMismatch, "selector input length");
  return s_ * x;
}

RealVector Selector::apply_transpose(const RealVector& y) const {
  if (y.size() != s_.rows()) throw Error(ErrorCode::DimensionMismatch, "selector input length");
  return s_.transpose() * y;
}

Selector build_sym_basis(Index m) {
  if (m < 1) throw Error(ErrorCode::InvalidArgument, "order must be positive");
  std::vector<Eigen::Triplet<double>> t;
  Index k = 0;
  for (Index j = 0; j < m; ++j)
    for (Index i = j; i < m; ++i, ++k) {
      t.emplace_back(j * m + i, k, 1.0);
      if (i != j) t.emplace_back(i * m + j, k, 1.0);
    }
  SparseMatrix s(m * m, k);
  s.setFromTriplets(t.begin(), t.end());
  return Selector(std::move(s));
}

Selector build_skew_basis(Index m) {
  if (m < 1) throw Error(ErrorCode::InvalidArgument, "order must be positive");
  std::vector<Eigen::Triplet<double>> t;
  Index k = 0;
  for (Index j = 0; j < m; ++j)
    for (Index i = j + 1; i < m; ++i, ++k) {
      t.emplace_back(j * m + i, k, 1.0);
      t.emplace_back(i * m + j, k, -1.0);
    }
  SparseMatrix s(m * m, k);
  s.setFromTriplets(t.begin(), t.end());
  return Selector(std::move(s));
}

GeneratorScalings build_scalings(Index m) {
  if (m < 1) throw Error(ErrorCode::InvalidArgument, "order must be positive");
  GeneratorScalings d;
  d.d_s = RealVector::Constant(m * (m + 1) / 2, std::sqrt(2.0));
  for (Index j = 0; j < m; ++j) d.d_s(sym_offset(m, j)) = 1.0;
  d.d_sk = RealVector::Constant(m * (m - 1) / 2, std::sqrt(2.0));
  return d;
}

RealVector build_mask_diagonals(const RealMatrix& theta, GeneratorKind kind) {
  if (!(theta.array() == 0.0 || theta.array() == 1.0).all()) {
    throw Error(ErrorCode::InvalidArgument, "mask entries must be 0 or 1");
  }
  switch (kind) {
    case GeneratorKind::Full: return vec(theta).data;
    case GeneratorKind::SymLower: return vec_sym(theta).data;
    case GeneratorKind::SkewStrictLower: {
      require_square(theta, "skew mask");
      if (theta != theta.transpose()) {
        throw Error(ErrorCode::StructureViolation, "mask must be symmetric");
      }
      const Index n = theta.rows();
      RealVector d(generator_length(kind, n, n));
      Index k = 0;
      for (Index j = 0; j < n; ++j)
        for (Index i = j + 1; i < n; ++i) d(k++) = theta(i, j);
      return d;
    }
  }
  return {};
}

RealMatrix kron(const RealMatrix& a, const RealMatrix& b) {
  RealMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

SparseMatrix SelectorBundle::n_sym() const {
  RealVector diag = phi.cwiseQuotient(d_s);
  return j_s.sparse() * SparseMatrix(RealMatrix(diag.asDiagonal()).sparseView());
}

SparseMatrix SelectorBundle::n_skew() const {
  RealVector diag = psi.cwiseQuotient(d_sk);
  return j_sk.sparse() * SparseMatrix(RealMatrix(diag.asDiagonal()).sparseView());
}

SelectorBundle make_selector_bundle(const RealMatrix& theta) {
  require_square(theta, "selector bundle");
  const Index m = theta.rows();
  GeneratorScalings d = build_scalings(m);
  return {build_sym_basis(m),
          build_skew_basis(m),
          d.d_s,
          d.d_sk,
          build_mask_diagonals(theta, GeneratorKind::SymLower),
          build_mask_diagonals(theta, GeneratorKind::SkewStrictLower),
          build_mask_diagonals(theta, GeneratorKind::Full)};
}

}  // namespace spbe
