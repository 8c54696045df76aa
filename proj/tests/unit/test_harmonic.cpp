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

#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "sround/harmonic.hpp"

using sround::FixedFormat;
using sround::HarmonicConfig;
using sround::RoundMode;

namespace {

HarmonicConfig config(const char* format, RoundMode mode) {
  HarmonicConfig cfg;
  cfg.sum_format = FixedFormat::parse(format);
  cfg.div_fraction_bits = cfg.sum_format.word_bits();
  cfg.mode = mode;
  return cfg;
}

}  // namespace

TEST_CASE("truncated reciprocals") {
  CHECK(sround::reciprocal_fixed(2, 32) == 0x80000000u);
  CHECK(sround::reciprocal_fixed(3, 32) == 0x55555555u);
  CHECK(sround::reciprocal_fixed(std::uint64_t{1} << 32, 32) == 1);
  CHECK(sround::reciprocal_fixed((std::uint64_t{1} << 32) + 1, 32) == 0);
  CHECK(sround::reciprocal_fixed(129, 16) == 508);
  CHECK((508 >> 9) == 0);
  CHECK_THROWS_AS(sround::reciprocal_fixed(1, 32), std::invalid_argument);
  CHECK_THROWS_AS(sround::reciprocal_fixed(2, 24), std::invalid_argument);
}

TEST_CASE("exact decimal rendering") {
  CHECK(sround::fixed_to_decimal(1 << 15, 15) == "1");
  CHECK(sround::fixed_to_decimal(3 << 14, 15) == "1.5");
  CHECK(sround::fixed_to_decimal(1, 15) == "0.000030517578125");
  CHECK(sround::fixed_to_decimal(-1, 7) == "-0.0078125");
  CHECK(sround::fixed_to_decimal(645, 7) == "5.0390625");
  CHECK(sround::fixed_to_decimal(0, 7) == "0");
  CHECK(sround::fixed_to_decimal(1, 32) == "0.00000000023283064365386962890625");
}

TEST_CASE("binary64 reference") {
  CHECK(sround::binary64_harmonic(1) == 1.0);
  CHECK(sround::binary64_harmonic(4) == doctest::Approx(25.0 / 12.0));
  CHECK(std::abs(sround::binary64_harmonic(5'000'000) - sround::kBinary64Reference) < 0.0005);
}

TEST_CASE("deterministic rows") {
  struct Row {
    const char* format;
    RoundMode mode;
    std::uint64_t converged;
    double sum;
  };
  for (const Row& row : {Row{"s16.15", RoundMode::kRnTiesUp, 65537, 11.938},
                         Row{"s16.15", RoundMode::kRdTruncate, 32769, 10.553},
                         Row{"s8.7", RoundMode::kRnTiesUp, 257, 6.414},
                         Row{"s8.7", RoundMode::kRdTruncate, 129, 5.039063}}) {
    CAPTURE(row.format);
    const auto rep = sround::run_harmonic(config(row.format, row.mode));
    REQUIRE(rep.convergence_iteration.has_value());
    CHECK(*rep.convergence_iteration == row.converged);
    REQUIRE(rep.checkpoints.size() == 1);
    CHECK(rep.checkpoints[0].iteration == 5'000'000);
    CHECK(std::abs(rep.checkpoints[0].value - row.sum) < 0.0005);
    CHECK_FALSE(rep.saturated);
  }
}

TEST_CASE("sum is constant after convergence in deterministic modes") {
  auto cfg = config("s8.7", RoundMode::kRnTiesUp);
  cfg.max_iterations = 1000;
  cfg.checkpoints = {200, 256, 257, 258, 1000};
  const auto rep = sround::run_harmonic(cfg);
  REQUIRE(rep.checkpoints.size() == 5);
  CHECK(rep.checkpoints[1].raw_sum == rep.checkpoints[2].raw_sum);
  CHECK(rep.checkpoints[2].raw_sum == rep.checkpoints[4].raw_sum);
  CHECK(rep.checkpoints[0].raw_sum < rep.checkpoints[1].raw_sum);
  CHECK(rep.checkpoints[4].decimal == "6.4140625");
  CHECK(rep.iterations_run == 257);

  // Step past convergence by hand: no further addend rounds to non-zero.
  const sround::RoundSpec spec = cfg.addend_spec();
  for (std::uint64_t i = *rep.convergence_iteration; i < 5000; ++i) {
    const auto x = sround::RawWord::from_unsigned(sround::reciprocal_fixed(i, 16), 16);
    REQUIRE_FALSE(sround::can_round_to_nonzero(x, spec));
  }
}

TEST_CASE("s8.7 SR converges at 2^16 + 1") {
  auto cfg = config("s8.7", RoundMode::kSrAddition);
  cfg.max_iterations = 100'000;
  cfg.checkpoints = {};
  const auto rep = sround::run_harmonic(cfg);
  REQUIRE(rep.convergence_iteration.has_value());
  CHECK(*rep.convergence_iteration == 65537);
}

TEST_CASE("seeds change SR runs, equal seeds repeat them") {
  auto cfg = config("s8.7", RoundMode::kSrAddition);
  cfg.max_iterations = 20'000;
  cfg.checkpoints = {20'000};
  cfg.seed = 1;
  const auto a = sround::run_harmonic(cfg);
  const auto a2 = sround::run_harmonic(cfg);
  cfg.seed = 2;
  const auto b = sround::run_harmonic(cfg);
  CHECK(a.final_raw_sum == a2.final_raw_sum);
  CHECK(a.final_raw_sum != b.final_raw_sum);
}

TEST_CASE("ensembles") {
  auto cfg = config("s8.7", RoundMode::kSrAddition);
  cfg.max_iterations = 50'000;
  cfg.checkpoints = {50'000};
  const std::uint64_t same[] = {7, 7};
  const auto twin = sround::run_harmonic_ensemble(cfg, same);
  CHECK(twin.stddev == 0.0);
  CHECK(twin.final_sums[0] == twin.final_sums[1]);

  const auto stats = sround::run_harmonic_ensemble(cfg, 8, 3);
  REQUIRE(stats.final_sums.size() == 8);
  CHECK(stats.seeds.front() == cfg.seed);
  CHECK(stats.seeds.back() == cfg.seed + 7);
  CHECK(stats.stddev > 0.0);
  CHECK(stats.error == doctest::Approx(sround::kBinary64Reference - stats.mean));

  // Thread count does not change the results.
  const auto serial = sround::run_harmonic_ensemble(cfg, 8, 1);
  CHECK(serial.final_sums == stats.final_sums);

  CHECK_THROWS_AS(sround::run_harmonic_ensemble(cfg, 1), std::invalid_argument);
  cfg.mode = RoundMode::kRnTiesUp;
  CHECK_THROWS_AS(sround::run_harmonic_ensemble(cfg, 4), std::invalid_argument);
}

TEST_CASE("trajectory") {
  auto cfg = config("s8.7", RoundMode::kRnTiesUp);
  cfg.max_iterations = 10'000;
  cfg.checkpoints = {};
  cfg.trajectory_points = 20;
  const auto rep = sround::run_harmonic(cfg);
  REQUIRE(rep.trajectory.size() >= 2);
  CHECK(rep.trajectory.back().first == 10'000);
  for (std::size_t k = 1; k < rep.trajectory.size(); ++k) {
    CHECK(rep.trajectory[k].first > rep.trajectory[k - 1].first);
    CHECK(rep.trajectory[k].second >= rep.trajectory[k - 1].second);
  }
}

TEST_CASE("configuration is validated") {
  auto cfg = config("s16.15", RoundMode::kRnTiesUp);
  cfg.div_fraction_bits = 16;
  CHECK_THROWS_AS(sround::run_harmonic(cfg), std::invalid_argument);
  cfg = config("s16.15", RoundMode::kRnTiesUp);
  cfg.checkpoints = {6'000'000};
  CHECK_THROWS_AS(sround::run_harmonic(cfg), std::invalid_argument);
  cfg.checkpoints = {0};
  CHECK_THROWS_AS(sround::run_harmonic(cfg), std::invalid_argument);
  cfg = config("s16.15", RoundMode::kRnTiesUp);
  cfg.max_iterations = 1;
  cfg.checkpoints = {};
  CHECK_THROWS_AS(sround::run_harmonic(cfg), std::invalid_argument);
  cfg = config("s0.31", RoundMode::kRnTiesUp);
  cfg.div_fraction_bits = 32;
  CHECK(cfg.addend_spec().drop_bits == 1);
  cfg = config("u0.32", RoundMode::kRnTiesUp);
  CHECK_THROWS_AS(sround::run_harmonic(cfg), std::invalid_argument);
}
