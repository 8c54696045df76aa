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

#include "sround/rounding.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace sround {
namespace {

void check_input(const RawWord& x, const RoundSpec& spec) {
  spec.validate();
  if (x.width() != spec.in_bits || x.is_signed() != spec.in_signed) {
    throw std::invalid_argument("input word does not match the round spec");
  }
}

void check_mode(const RoundSpec& spec, RoundMode expected) {
  if (spec.mode != expected) {
    throw std::invalid_argument("round spec mode is " +
                                std::string(to_string(spec.mode)) +
                                ", expected " +
                                std::string(to_string(expected)));
  }
}

// The shifted value plus an optional unit, clamped to the output range.
RoundOutcome finish(const RawWord& x, const RoundSpec& spec, bool round_up) {
  const Wide unclamped = (x.value() >> spec.drop_bits) + (round_up ? 1 : 0);
  const Saturated s = saturate(unclamped, spec.out_signed, spec.out_bits);
  return RoundOutcome{s.value, round_up, s.saturated};
}

}  // namespace

RoundMode parse_round_mode(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "sr" || lower == "sr-add" || lower == "sr_addition") {
    return RoundMode::kSrAddition;
  }
  if (lower == "sr-cmp" || lower == "sr_comparison") {
    return RoundMode::kSrComparison;
  }
  if (lower == "rn") return RoundMode::kRnTiesUp;
  if (lower == "rd") return RoundMode::kRdTruncate;
  throw std::invalid_argument("unknown rounding mode '" + std::string(text) +
                              "'");
}

std::string_view to_string(RoundMode mode) {
  switch (mode) {
    case RoundMode::kSrComparison: return "sr-cmp";
    case RoundMode::kSrAddition: return "sr";
    case RoundMode::kRnTiesUp: return "rn";
    case RoundMode::kRdTruncate: return "rd";
  }
  return "?";
}

void RoundSpec::validate() const {
  if (drop_bits < 1 || drop_bits > 32) {
    throw std::invalid_argument("drop count must be in [1, 32], got " +
                                std::to_string(drop_bits));
  }
  if (random_width < 1 || random_width > 32) {
    throw std::invalid_argument("random width must be in [1, 32], got " +
                                std::to_string(random_width));
  }
  if (in_bits != 16 && in_bits != 32 && in_bits != 64) {
    throw std::invalid_argument("input width must be 16, 32 or 64");
  }
  if (out_bits != 16 && out_bits != 32) {
    throw std::invalid_argument("output width must be 16 or 32");
  }
  if (out_bits > in_bits) {
    throw std::invalid_argument("output width exceeds input width");
  }
}

RoundOutcome sr_by_comparison(const RawWord& x, const RoundSpec& spec,
                              PrngStream& stream) {
  check_input(x, spec);
  check_mode(spec, RoundMode::kSrComparison);
  const Residual r = residual_of(x, spec.drop_bits);
  const bool up = stochastic_compare(r.value, spec.drop_bits, stream.next_u32(),
                                     spec.random_width);
  return finish(x, spec, up);
}

RoundOutcome sr_by_addition(const RawWord& x, const RoundSpec& spec,
                            PrngStream& stream) {
  check_input(x, spec);
  check_mode(spec, RoundMode::kSrAddition);
  // (x + P) >> n on the widened carrier is floor(x / 2^n) plus the carry out
  // of residual + P, so only the carry is computed.
  const Residual r = residual_of(x, spec.drop_bits);
  const bool up = stochastic_carry(r.value, spec.drop_bits, stream.next_u32(),
                                   spec.random_width);
  return finish(x, spec, up);
}

RoundOutcome rn_ties_up(const RawWord& x, const RoundSpec& spec) {
  check_input(x, spec);
  check_mode(spec, RoundMode::kRnTiesUp);
  // Top residual bit: same as adding 2^(n-1) before the shift.
  const bool up = ((x.bits() >> (spec.drop_bits - 1)) & 1) != 0;
  return finish(x, spec, up);
}

RoundOutcome rd_truncate(const RawWord& x, const RoundSpec& spec) {
  check_input(x, spec);
  check_mode(spec, RoundMode::kRdTruncate);
  return finish(x, spec, false);
}

RoundOutcome round(const RawWord& x, const RoundSpec& spec, PrngStream& stream) {
  switch (spec.mode) {
    case RoundMode::kSrComparison: return sr_by_comparison(x, spec, stream);
    case RoundMode::kSrAddition: return sr_by_addition(x, spec, stream);
    case RoundMode::kRnTiesUp: return rn_ties_up(x, spec);
    case RoundMode::kRdTruncate: return rd_truncate(x, spec);
  }
  throw std::invalid_argument("unknown rounding mode");
}

bool can_round_to_nonzero(const RawWord& x, const RoundSpec& spec) {
  check_input(x, spec);
  const auto nonzero = [&](bool up) {
    return finish(x, spec, up).value.value() != 0;
  };
  const Residual r = residual_of(x, spec.drop_bits);
  switch (spec.mode) {
    case RoundMode::kSrComparison:
      return nonzero(false) ||
             (stochastic_compare(r.value, spec.drop_bits, 0, spec.random_width) &&
              nonzero(true));
    case RoundMode::kSrAddition:
      return nonzero(false) ||
             (stochastic_carry(r.value, spec.drop_bits, 0xffffffffu,
                               spec.random_width) &&
              nonzero(true));
    case RoundMode::kRnTiesUp:
      return nonzero(((x.bits() >> (spec.drop_bits - 1)) & 1) != 0);
    case RoundMode::kRdTruncate:
      return nonzero(false);
  }
  return false;
}

}  // namespace sround
