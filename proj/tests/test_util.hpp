/*
 * (C) Copyright 2026 spbe developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <unistd.h>

#include "spbe/core.hpp"
#include "spbe/structured_be.hpp"
#include "spbe/vecops.hpp"

namespace spbe::testing {

inline double rel_diff(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

inline RealMatrix random_real(std::mt19937_64& g, Index r, Index c) {
  std::normal_distribution<double> d;
  RealMatrix m(r, c);
  for (Index j = 0; j < c; ++j)
    for (Index i = 0; i < r; ++i) m(i, j) = d(g);
  return m;
}

inline RealMatrix random_symmetric(std::mt19937_64& g, Index n) {
  const RealMatrix a = random_real(g, n, n);
  return a + a.transpose();
}

inline RealMatrix random_skew(std::mt19937_64& g, Index n) {
  const RealMatrix a = random_real(g, n, n);
  return a - a.transpose();
}

inline RealMatrix random_mask(std::mt19937_64& g, Index r, Index c, double density) {
  std::bernoulli_distribution keep(density);
  RealMatrix m(r, c);
  for (Index j = 0; j < c; ++j)
    for (Index i = 0; i < r; ++i) m(i, j) = keep(g) ? 1.0 : 0.0;
  return m;
}

/// Minimum-norm solution by a full SVD pseudo-inverse.
inline RealVector pinv_solve(const RealMatrix& A, const RealVector& b) {
  Eigen::JacobiSVD<RealMatrix> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RealVector& s = svd.singularValues();
  const double cut = s.size() ? s(0) * 1e-13 * std::max(A.rows(), A.cols()) : 0.0;
  RealVector utb = svd.matrixU().transpose() * b;
  RealVector y = RealVector::Zero(A.cols());
  for (Index k = 0; k < s.size(); ++k)
    if (s(k) > cut) y(k) = utb(k) / s(k);
  return svd.matrixV() * y;
}

/// Orthonormal basis of the null space of A (full row rank assumed).
inline RealMatrix null_space(const RealMatrix& A) {
  Eigen::HouseholderQR<RealMatrix> qr(A.transpose());
  const RealMatrix Q = qr.householderQ() * RealMatrix::Identity(A.cols(), A.cols());
  return Q.rightCols(A.cols() - A.rows());
}

/// Commutation matrix: P vec(X) = vec(Xᵀ) for X of shape r x c.
inline RealMatrix commutation(Index r, Index c) {
  RealMatrix P = RealMatrix::Zero(r * c, r * c);
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < c; ++j) P(i * c + j, j * r + i) = 1.0;
  return P;
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() /
                   ("spbe-test-" + std::to_string(::getpid()) + "-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline bool exactly_hermitian(const ComplexMatrix& x) {
  return x.re() == x.re().transpose() && x.im() == RealMatrix(-x.im().transpose());
}

}  // namespace spbe::testing
