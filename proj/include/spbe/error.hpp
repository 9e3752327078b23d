/*
 * (C) Copyright 2026 spbe developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace spbe {

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  StructureViolation,
  Parse,
  Io,
  RankDeficient,
  Infeasible,
  Singular,
};

/// Every failure raised by the library carries one of these codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace spbe
