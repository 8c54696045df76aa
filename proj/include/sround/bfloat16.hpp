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

#include "sround/prng.hpp"

namespace sround {

enum class FloatRoundMode {
  kNearestTiesUp,  // add 0x8000 to the magnitude pattern, truncate
  kStochastic,     // add a random 16-bit value, truncate
};

constexpr bool is_nan_b32(std::uint32_t bits) {
  return (bits & 0x7f800000u) == 0x7f800000u && (bits & 0x007fffffu) != 0;
}

constexpr bool is_inf_b32(std::uint32_t bits) {
  return (bits & 0x7fffffffu) == 0x7f800000u;
}

/// Rounds a binary32 pattern to bfloat16 by sign-magnitude pattern
/// arithmetic on the 16 discarded bits. A carry out of the significand bumps
/// the exponent; from the largest finite binade it produces infinity.
/// Infinities pass through. NaNs keep their top half and stay NaN: the quiet
/// bit is set only when the kept significand bits would otherwise be zero.
///
/// Stochastic mode draws exactly one word from `stream` for every input,
/// NaN or not; `random_width` < 16 aligns the random bits with the top of
/// the discarded half. Throws std::invalid_argument if stochastic mode gets
/// a null stream or the width is outside [1, 32].
std::uint16_t b32_to_bf16(std::uint32_t bits, FloatRoundMode mode,
                          PrngStream* stream, int random_width = 32);

/// Exact widening: zero-fills the low 16 bits.
constexpr std::uint32_t bf16_to_b32(std::uint16_t bits) {
  return std::uint32_t{bits} << 16;
}

}  // namespace sround
