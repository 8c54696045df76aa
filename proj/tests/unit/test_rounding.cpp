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

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "reference.hpp"
#include "sround/rounding.hpp"

using sround::ConstantStream;
using sround::ExhaustiveStream;
using sround::RawWord;
using sround::RoundMode;
using sround::RoundSpec;

namespace {

RoundSpec spec64(RoundMode mode, int n) {
  return RoundSpec{mode, n, 32, true, true, 64, 32};
}

std::int64_t value_of(const sround::RoundOutcome& r) {
  return static_cast<std::int64_t>(r.value.value());
}

// Counts stream draws without changing what is drawn.
class CountingStream final : public sround::PrngStream {
 public:
  std::uint32_t next_u32() override {
    ++draws;
    return inner.next_u32();
  }
  void reseed(std::uint64_t seed) override { inner.reseed(seed); }
  sround::Jkiss32 inner{1};
  int draws = 0;
};

}  // namespace

TEST_CASE("SR by comparison") {
  const RoundSpec spec = spec64(RoundMode::kSrComparison, 16);
  const RawWord x = RawWord::from_signed(0x18000, 64);
  ConstantStream below(0x7fff);
  ConstantStream at(0x8000);
  CHECK(value_of(sround::sr_by_comparison(x, spec, below)) == 2);
  CHECK(value_of(sround::sr_by_comparison(x, spec, at)) == 1);

  const RoundSpec n4 = spec64(RoundMode::kSrComparison, 4);
  ConstantStream any(0);
  const auto exact = sround::sr_by_comparison(RawWord::from_signed(0x40, 64), n4, any);
  CHECK(value_of(exact) == 4);
  CHECK_FALSE(exact.rounded_up);
}

TEST_CASE("SR by addition") {
  const RoundSpec spec = spec64(RoundMode::kSrAddition, 16);
  ConstantStream half(0x8000);
  CHECK(value_of(sround::sr_by_addition(RawWord::from_signed(0x18000, 64), spec, half)) == 2);

  // x = 3, n = 2: outcomes over P = 0..3 are {0, 1, 1, 1}; mean 3/4.
  const RoundSpec n2 = spec64(RoundMode::kSrAddition, 2);
  ExhaustiveStream all(2);
  std::array<std::int64_t, 4> got{};
  for (auto& g : got) g = value_of(sround::sr_by_addition(RawWord::from_signed(3, 64), n2, all));
  CHECK(got == std::array<std::int64_t, 4>{0, 1, 1, 1});

  ConstantStream carry(0xffff);
  const auto sat = sround::sr_by_addition(
      RawWord::from_signed(0x7fffffffffffffffll, 64), spec, carry);
  CHECK(sat.value.pattern() == 0x7fffffffu);
  CHECK(sat.saturated);
  CHECK(sat.rounded_up);
}

TEST_CASE("SR with the top unsigned 64-bit value does not wrap") {
  RoundSpec spec{RoundMode::kSrAddition, 1, 32, false, false, 64, 32};
  ConstantStream one(1);
  const auto r = sround::sr_by_addition(RawWord::from_unsigned(~0ull, 64), spec, one);
  CHECK(r.value.pattern() == 0xffffffffu);
  CHECK(r.saturated);
  CHECK(r.rounded_up);
}

TEST_CASE("RN ties up") {
  const RoundSpec spec = spec64(RoundMode::kRnTiesUp, 16);
  CHECK(value_of(sround::rn_ties_up(RawWord::from_signed(0x18000, 64), spec)) == 2);
  CHECK(value_of(sround::rn_ties_up(RawWord::from_signed(0x17fff, 64), spec)) == 1);
  CHECK(value_of(sround::rn_ties_up(RawWord::from_signed(-0x18000, 64), spec)) == -1);
  CHECK(value_of(sround::rn_ties_up(RawWord::from_signed(-0x18001, 64), spec)) == -2);
}

TEST_CASE("RD truncates toward -inf") {
  const RoundSpec spec = spec64(RoundMode::kRdTruncate, 16);
  CHECK(value_of(sround::rd_truncate(RawWord::from_signed(0x1ffff, 64), spec)) == 1);
  CHECK(value_of(sround::rd_truncate(RawWord::from_signed(-0x18000, 64), spec)) == -2);

  const RoundSpec narrow{RoundMode::kRdTruncate, 16, 32, false, false, 32, 16};
  const auto r = sround::rd_truncate(RawWord::from_unsigned(0xffffffffu, 32), narrow);
  CHECK(r.value.pattern() == 0xffff);
  CHECK_FALSE(r.saturated);
  CHECK_FALSE(r.rounded_up);
}

TEST_CASE("dispatcher draws only for stochastic modes") {
  CountingStream stream;
  const RawWord x = RawWord::from_signed(0x18000, 64);
  CHECK(value_of(sround::round(x, spec64(RoundMode::kRnTiesUp, 16), stream)) == 2);
  CHECK(value_of(sround::round(RawWord::from_signed(0x30000, 64),
                               spec64(RoundMode::kRdTruncate, 16), stream)) == 3);
  CHECK(stream.draws == 0);
  sround::round(x, spec64(RoundMode::kSrAddition, 16), stream);
  sround::round(x, spec64(RoundMode::kSrComparison, 16), stream);
  CHECK(stream.draws == 2);
}

TEST_CASE("spec validation") {
  ConstantStream s;
  const RawWord x = RawWord::from_signed(1, 64);
  RoundSpec bad = spec64(RoundMode::kSrAddition, 0);
  CHECK_THROWS_AS(sround::round(x, bad, s), std::invalid_argument);
  bad.drop_bits = 33;
  CHECK_THROWS_AS(sround::round(x, bad, s), std::invalid_argument);
  bad = spec64(RoundMode::kSrAddition, 4);
  bad.random_width = 0;
  CHECK_THROWS_AS(sround::round(x, bad, s), std::invalid_argument);
  bad = RoundSpec{RoundMode::kRnTiesUp, 4, 32, true, true, 16, 32};
  CHECK_THROWS_AS(sround::round(RawWord::from_signed(1, 16), bad, s), std::invalid_argument);
  // Input word must match the spec.
  CHECK_THROWS_AS(sround::round(RawWord::from_signed(1, 32), spec64(RoundMode::kRnTiesUp, 4), s),
                  std::invalid_argument);
  // Mode-specific entry points refuse other modes.
  CHECK_THROWS_AS(sround::rn_ties_up(x, spec64(RoundMode::kRdTruncate, 4)),
                  std::invalid_argument);
  CHECK(sround::parse_round_mode("SR") == RoundMode::kSrAddition);
  CHECK(sround::parse_round_mode("sr-cmp") == RoundMode::kSrComparison);
  CHECK_THROWS_AS(sround::parse_round_mode("rz"), std::invalid_argument);
}

TEST_CASE("every mode lands on floor or floor + 1 before saturation") {
  std::mt19937_64 gen(11);
  sround::Jkiss32 stream(11);
  for (int k = 0; k < 200000; ++k) {
    const auto x = static_cast<std::int64_t>(gen()) >> (gen() % 40);
    const int n = 1 + static_cast<int>(gen() % 32);
    const auto mode = static_cast<RoundMode>(gen() % 4);
    RoundSpec spec = spec64(mode, n);
    const auto r = sround::round(RawWord::from_signed(x, 64), spec, stream);
    const std::int64_t floor = x >> n;  // arithmetic shift, independently checked in fixed_point
    const std::int64_t unclamped = floor + (r.rounded_up ? 1 : 0);
    REQUIRE((mode == RoundMode::kRdTruncate ? !r.rounded_up : true));
    REQUIRE(value_of(r) == sround::testing::clamp_to(unclamped, true, 32));
    REQUIRE(r.saturated == (value_of(r) != unclamped));
  }
}

TEST_CASE("zero residual is exact in every mode") {
  sround::Jkiss32 stream(5);
  for (int n = 1; n <= 32; ++n) {
    for (std::int64_t q : {-5ll, 0ll, 1ll, 12345ll}) {
      const RawWord x = RawWord::from_signed(q * (std::int64_t{1} << n), 64);
      for (auto mode : {RoundMode::kSrComparison, RoundMode::kSrAddition, RoundMode::kRnTiesUp,
                        RoundMode::kRdTruncate}) {
        const auto r = sround::round(x, spec64(mode, n), stream);
        REQUIRE(value_of(r) == q);
        REQUIRE_FALSE(r.rounded_up);
      }
    }
  }
}

TEST_CASE("RN matches exact nearest-ties-up for small words") {
  for (int n = 1; n <= 8; ++n) {
    const RoundSpec spec{RoundMode::kRnTiesUp, n, 32, true, true, 16, 16};
    for (std::int64_t x = -32768; x <= 32767; ++x) {
      REQUIRE(value_of(sround::rn_ties_up(RawWord::from_signed(x, 16), spec)) ==
              sround::testing::nearest_ties_up(x, n));
    }
  }
}

TEST_CASE("RN and RD are monotone") {
  std::mt19937_64 gen(17);
  for (int k = 0; k < 100000; ++k) {
    auto a = static_cast<std::int64_t>(gen()) >> (gen() % 48);
    auto b = static_cast<std::int64_t>(gen()) >> (gen() % 48);
    if (a > b) std::swap(a, b);
    const int n = 1 + static_cast<int>(gen() % 32);
    for (auto mode : {RoundMode::kRnTiesUp, RoundMode::kRdTruncate}) {
      const RoundSpec spec = spec64(mode, n);
      ConstantStream unused;
      REQUIRE(value_of(sround::round(RawWord::from_signed(a, 64), spec, unused)) <=
              value_of(sround::round(RawWord::from_signed(b, 64), spec, unused)));
    }
  }
}

TEST_CASE("SR mean over all draws is exact (small exhaustive window)") {
  for (auto mode : {RoundMode::kSrComparison, RoundMode::kSrAddition}) {
    for (int n = 1; n <= 8; ++n) {
      const RoundSpec spec{mode, n, 32, true, true, 16, 16};
      ExhaustiveStream all(n);
      for (std::int64_t x = -2048; x < 2048; ++x) {
        std::int64_t total = 0;
        for (int p = 0; p < (1 << n); ++p) {
          total += value_of(sround::round(RawWord::from_signed(x, 16), spec, all));
        }
        REQUIRE(total == x);
      }
    }
  }
}

TEST_CASE("comparison and addition are not pointwise equal, only in count") {
  const RoundSpec cmp{RoundMode::kSrComparison, 4, 32, false, false, 32, 32};
  RoundSpec add = cmp;
  add.mode = RoundMode::kSrAddition;
  const RawWord x = RawWord::from_unsigned(3, 32);  // r = 3 of 16
  ConstantStream zero(0);
  CHECK(sround::round(x, cmp, zero).rounded_up);       // 0 < 3
  CHECK_FALSE(sround::round(x, add, zero).rounded_up); // 3 + 0 < 16
}

TEST_CASE("limited random width uses the top residual bits") {
  // n = 8, w = 4: random nibble lands on residual bits 7..4.
  RoundSpec spec{RoundMode::kSrAddition, 8, 4, false, false, 32, 32};
  ConstantStream p(0x8);  // adds 0x80
  CHECK(sround::round(RawWord::from_unsigned(0x80, 32), spec, p).rounded_up);
  CHECK_FALSE(sround::round(RawWord::from_unsigned(0x7f, 32), spec, p).rounded_up);
  // Residual bits below the random word still join the carry sum.
  ConstantStream q(0xf);  // adds 0xf0
  CHECK(sround::round(RawWord::from_unsigned(0x10, 32), spec, q).rounded_up);
  CHECK_FALSE(sround::round(RawWord::from_unsigned(0x0f, 32), spec, q).rounded_up);

  for (int w : {4, 8}) {
    for (int n = 1; n <= 12; ++n) {
      RoundSpec s{RoundMode::kSrAddition, n, w, false, false, 32, 32};
      const int k = std::min(n, w);
      ExhaustiveStream all(k);
      for (std::uint32_t r = 0; r < (1u << n); ++r) {
        int up = 0;
        for (int d = 0; d < (1 << k); ++d) {
          up += sround::round(RawWord::from_unsigned(r, 32), s, all).rounded_up ? 1 : 0;
        }
        const double prob = static_cast<double>(up) / (1 << k);
        const double exact = static_cast<double>(r) / (1 << n);
        REQUIRE(std::abs(prob - exact) < 1.0 / (1 << w));
      }
    }
  }
}

TEST_CASE("stagnation detection") {
  RoundSpec rn{RoundMode::kRnTiesUp, 17, 32, false, true, 32, 32};
  CHECK(sround::can_round_to_nonzero(RawWord::from_unsigned(0x10000, 32), rn));
  CHECK_FALSE(sround::can_round_to_nonzero(RawWord::from_unsigned(0xffff, 32), rn));

  RoundSpec sr = rn;
  sr.mode = RoundMode::kSrAddition;
  CHECK(sround::can_round_to_nonzero(RawWord::from_unsigned(1, 32), sr));
  CHECK_FALSE(sround::can_round_to_nonzero(RawWord::from_unsigned(0, 32), sr));
  sr.random_width = 8;  // carry impossible once the residual is below 2^(17-8)
  CHECK_FALSE(sround::can_round_to_nonzero(RawWord::from_unsigned(0x1ff, 32), sr));
  CHECK(sround::can_round_to_nonzero(RawWord::from_unsigned(0x200, 32), sr));
}
