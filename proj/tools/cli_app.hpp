/*
 * (C) Copyright 2026 spbe developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <ostream>

namespace spbe_cli {

enum ExitCode { kSuccess = 0, kUsage = 1, kParse = 2, kNumerical = 3 };

/// Entire command-line front end; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace spbe_cli
