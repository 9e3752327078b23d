/*
 * (C) Copyright 2026 spbe developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "spbe/core.hpp"

namespace spbe {

enum class FixtureKind { Example1, Example3, Example4, RandomSparse };

struct FixtureId {
  FixtureKind kind = FixtureKind::Example1;
  int t = 4;                 // Example4 grid parameter
  std::uint64_t seed = 0;    // RandomSparse parameters
  Index n = 0;
  Index m = 0;
  double density = 1.0;
  StructureCase structure = StructureCase::CaseI;
  bool real = false;

  static FixtureId example1();
  static FixtureId example3();
  static FixtureId example4(int t);
  static FixtureId random_sparse(std::uint64_t seed, Index n, Index m, double density,
                                 StructureCase structure, bool real = false);
  /// "example1", "example3", "example4:t=5",
  /// "random:seed=7,n=3,m=2,density=0.6,case=ii[,real]".
  static FixtureId parse(std::string_view text);
  std::string name() const;
  void validate() const;
};

struct Fixture {
  std::string name;
  GsppSystem system;
  std::optional<CandidateSolution> candidate;  // printed approximate solution
  std::optional<CVector> exact_solution;
};

Fixture load_fixture(const FixtureId& id);

/// Two-dimensional Stokes-like block system of order 3t², case iii.
GsppSystem gen_stokes_like(int t);

/// Seeded counter-based generator: draw k of seed s is splitmix64(s + k·γ)
/// with γ = 0x9E3779B97F4A7C15.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}
  std::uint64_t next_u64();
  /// Uniform in [0, 1) from the top 53 bits.
  double next_uniform();
  /// (k + 0.5)/2⁵² − 1 for the top 53 bits k: in (−1, 1), never zero.
  double next_signed();

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

/// Random system satisfying the case invariants. Each stored entry is kept
/// with probability `density`; Hermitian blocks are S + S* for a random
/// lower-triangular S. q and r are dense.
GsppSystem gen_random_sparse(std::uint64_t seed, Index n, Index m, double density,
                             StructureCase structure, bool real = false);

/// Dense random candidate (û, p̂).
CandidateSolution gen_random_candidate(std::uint64_t seed, Index n, Index m, bool real = false);

}  // namespace spbe
