/*
 * (C) Copyright 2026 spbe developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <filesystem>
#include <string>

#include "spbe/core.hpp"

namespace spbe {

/// Reads coordinate or array files with real, integer or complex fields and
/// general, symmetric, skew-symmetric or hermitian symmetry.
/// Parse failures name the file and line.
ComplexMatrix read_matrix_market(const std::filesystem::path& path);
/// Reads an n x 1 matrix as a vector.
ComplexVector read_matrix_market_vector(const std::filesystem::path& path);

enum class MmSymmetry { Auto, General, Hermitian };

/// Coordinate complex format. Auto stores exactly Hermitian matrices as
/// `hermitian` with the lower triangle only. Zeros are not written.
void write_matrix_market(const std::filesystem::path& path, const ComplexMatrix& m,
                         MmSymmetry symmetry = MmSymmetry::Auto);
/// Array complex general format.
void write_matrix_market_vector(const std::filesystem::path& path, const ComplexVector& v);

/// Shortest round-trip decimal form.
std::string format_double(double x);

/// Writes to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace spbe
