/*
 * (C) Copyright 2026 spbe developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include <iostream>

#include "cli_app.hpp"

int main(int argc, char** argv) { return spbe_cli::run(argc, argv, std::cout, std::cerr); }
