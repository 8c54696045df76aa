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
#include <string>
#include <string_view>

#include "sround/fixed_point.hpp"
#include "sround/prng.hpp"

namespace sround {

enum class RoundMode {
  kSrComparison,  // round up iff P < residual
  kSrAddition,    // round up on carry out of residual + P
  kRnTiesUp,      // add half an ulp, truncate
  kRdTruncate,    // floor
};

/// Accepts "sr", "sr-add", "sr-cmp", "rn", "rd" (case-insensitive).
RoundMode parse_round_mode(std::string_view text);
std::string_view to_string(RoundMode mode);

inline bool is_stochastic(RoundMode mode) {
  return mode == RoundMode::kSrComparison || mode == RoundMode::kSrAddition;
}

/// What to round and how. `drop_bits` is n, the count of low bits removed
/// (1..32). `random_width` is the number of random bits added to the
/// residual (1..32); when it is below n the random bits line up with the
/// most significant residual bits.
struct RoundSpec {
  RoundMode mode = RoundMode::kSrAddition;
  int drop_bits = 1;
  int random_width = 32;
  bool in_signed = true;
  bool out_signed = true;
  int in_bits = 64;
  int out_bits = 32;

  /// Throws std::invalid_argument.
  void validate() const;

  /// Builds the input word for this spec from a raw bit pattern.
  RawWord input(std::uint64_t pattern) const {
    return RawWord::from_bits(pattern, in_bits, in_signed);
  }

  friend bool operator==(const RoundSpec&, const RoundSpec&) = default;
};

struct RoundOutcome {
  RawWord value;  // out_bits wide
  bool rounded_up = false;
  bool saturated = false;
};

/// Carry out of residual + random, with the `random_width` low bits of
/// `random` aligned to the top of the n-bit residual when width < n.
inline bool stochastic_carry(std::uint64_t residual, int n,
                             std::uint32_t random, int random_width) {
  if (random_width >= n) {
    const std::uint64_t p = random & ((std::uint64_t{1} << n) - 1);
    return residual + p >= (std::uint64_t{1} << n);
  }
  const std::uint64_t p = random & ((std::uint64_t{1} << random_width) - 1);
  return residual + (p << (n - random_width)) >= (std::uint64_t{1} << n);
}

/// Comparison form: round up iff the aligned random value is below the
/// residual.
inline bool stochastic_compare(std::uint64_t residual, int n,
                               std::uint32_t random, int random_width) {
  if (random_width >= n) {
    const std::uint64_t p = random & ((std::uint64_t{1} << n) - 1);
    return p < residual;
  }
  const std::uint64_t p = random & ((std::uint64_t{1} << random_width) - 1);
  return (p << (n - random_width)) < residual;
}

RoundOutcome sr_by_comparison(const RawWord& x, const RoundSpec& spec,
                              PrngStream& stream);
RoundOutcome sr_by_addition(const RawWord& x, const RoundSpec& spec,
                            PrngStream& stream);
RoundOutcome rn_ties_up(const RawWord& x, const RoundSpec& spec);
RoundOutcome rd_truncate(const RawWord& x, const RoundSpec& spec);

/// Dispatches on spec.mode. Stochastic modes draw exactly one word from
/// `stream`; RN and RD leave it untouched.
RoundOutcome round(const RawWord& x, const RoundSpec& spec, PrngStream& stream);

/// True when some random draw can still make the rounded value non-zero.
/// Used to detect stagnation.
bool can_round_to_nonzero(const RawWord& x, const RoundSpec& spec);

}  // namespace sround
