// Copyright 2026 The sround Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sround/fixed_point.hpp"
#include "sround/rounding.hpp"

namespace sround {

/// Double-precision harmonic sum at i = 5e6, to the three decimals it is
/// usually quoted with.
inline constexpr double kBinary64Reference = 16.002;

/// floor(2^frac_bits / i) as an unsigned u0.frac_bits value.
/// Throws std::invalid_argument if i < 2 or frac_bits is not 16 or 32.
std::uint64_t reciprocal_fixed(std::uint64_t i, int frac_bits);

/// Exact decimal rendering of raw * 2^-frac_bits, trailing zeros trimmed.
std::string fixed_to_decimal(std::int64_t raw, int frac_bits);

/// Recursive double-precision sum of 1/i for i = 1..n.
double binary64_harmonic(std::uint64_t n);

struct HarmonicConfig {
  FixedFormat sum_format{true, 16, 15};
  int div_fraction_bits = 32;  // u0.32 or u0.16
  RoundMode mode = RoundMode::kSrAddition;
  std::uint64_t seed = 1;
  int random_width = 32;
  std::uint64_t max_iterations = 5'000'000;
  std::vector<std::uint64_t> checkpoints{5'000'000};
  /// Record (i, sum) at roughly geometric spacing for plotting.
  std::size_t trajectory_points = 0;

  /// The format pairing is s16.15 with u0.32 and s8.7 with u0.16; more
  /// generally the sum word must match the divider width and keep fewer
  /// fraction bits. Throws std::invalid_argument.
  void validate() const;

  /// Spec used to round each addend into the sum format.
  RoundSpec addend_spec() const;
};

struct Checkpoint {
  std::uint64_t iteration = 0;
  std::int64_t raw_sum = 0;
  std::string decimal;
  double value = 0.0;
};

struct ExperimentReport {
  FixedFormat sum_format{true, 16, 15};
  RoundMode mode = RoundMode::kSrAddition;
  std::uint64_t seed = 0;
  std::vector<Checkpoint> checkpoints;
  /// First i from which the rounded addend is zero for every draw and every
  /// later i. Empty if that did not happen within max_iterations.
  std::optional<std::uint64_t> convergence_iteration;
  std::uint64_t iterations_run = 0;
  std::int64_t final_raw_sum = 0;
  bool saturated = false;
  std::vector<std::pair<std::uint64_t, std::int64_t>> trajectory;
};

/// Sum starts at 1; for i = 2..max_iterations the truncated reciprocal is
/// rounded to the sum format and added with saturation. Once converged the
/// sum can no longer change, so the loop stops and later checkpoints reuse
/// the final sum.
ExperimentReport run_harmonic(const HarmonicConfig& cfg);

struct EnsembleStats {
  std::vector<std::uint64_t> seeds;
  std::vector<double> final_sums;  // value at the last checkpoint
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation
  double error = 0.0;   // kBinary64Reference - mean
};

/// Runs an SR configuration with seeds cfg.seed, cfg.seed + 1, ... on up to
/// `threads` workers (0 picks the hardware concurrency). Throws
/// std::invalid_argument if runs < 2 or the mode is not stochastic.
EnsembleStats run_harmonic_ensemble(const HarmonicConfig& cfg, int runs,
                                    unsigned threads = 0);
/// Same, with an explicit seed per run.
EnsembleStats run_harmonic_ensemble(const HarmonicConfig& cfg,
                                    std::span<const std::uint64_t> seeds,
                                    unsigned threads = 0);

}  // namespace sround
