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

#include "sround/fixed_point.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace sround {
namespace {

void check_drop(int n) {
  if (n < 1 || n > 32) {
    throw std::invalid_argument("drop count must be in [1, 32], got " +
                                std::to_string(n));
  }
}

void check_width(int width) {
  if (width != 16 && width != 32 && width != 64) {
    throw std::invalid_argument("word width must be 16, 32 or 64, got " +
                                std::to_string(width));
  }
}

std::uint64_t low_mask(int width) {
  return width >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width) - 1;
}

int parse_count(std::string_view text, std::string_view whole) {
  int out = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (text.empty() || ec != std::errc{} || ptr != last) {
    throw std::invalid_argument("malformed fixed-point format '" +
                                std::string(whole) + "'");
  }
  return out;
}

}  // namespace

FixedFormat::FixedFormat(bool is_signed, int integer_bits, int fraction_bits)
    : signed_(is_signed),
      integer_bits_(integer_bits),
      fraction_bits_(fraction_bits),
      word_bits_((is_signed ? 1 : 0) + integer_bits + fraction_bits) {
  if (integer_bits < 0 || fraction_bits < 0) {
    throw std::invalid_argument("fixed-point bit counts must be non-negative");
  }
  check_width(word_bits_);
}

FixedFormat FixedFormat::parse(std::string_view text) {
  if (text.size() < 4 || (text[0] != 's' && text[0] != 'u')) {
    throw std::invalid_argument("malformed fixed-point format '" +
                                std::string(text) + "'");
  }
  const auto dot = text.find('.');
  if (dot == std::string_view::npos) {
    throw std::invalid_argument("malformed fixed-point format '" +
                                std::string(text) + "'");
  }
  const int integer_bits = parse_count(text.substr(1, dot - 1), text);
  const int fraction_bits = parse_count(text.substr(dot + 1), text);
  return FixedFormat(text[0] == 's', integer_bits, fraction_bits);
}

double FixedFormat::epsilon() const { return std::ldexp(1.0, -fraction_bits_); }

Wide FixedFormat::min_raw() const {
  return signed_ ? -(Wide{1} << (word_bits_ - 1)) : Wide{0};
}

Wide FixedFormat::max_raw() const {
  return signed_ ? (Wide{1} << (word_bits_ - 1)) - 1
                 : (Wide{1} << word_bits_) - 1;
}

std::string FixedFormat::to_string() const {
  return (signed_ ? "s" : "u") + std::to_string(integer_bits_) + "." +
         std::to_string(fraction_bits_);
}

RawWord RawWord::from_signed(std::int64_t value, int width) {
  check_width(width);
  if (width < 64) {
    const std::int64_t lo = -(std::int64_t{1} << (width - 1));
    const std::int64_t hi = (std::int64_t{1} << (width - 1)) - 1;
    if (value < lo || value > hi) {
      throw std::invalid_argument("value " + std::to_string(value) +
                                  " does not fit a signed " +
                                  std::to_string(width) + "-bit word");
    }
  }
  return RawWord(static_cast<std::uint64_t>(value), width, true);
}

RawWord RawWord::from_unsigned(std::uint64_t value, int width) {
  check_width(width);
  if ((value & ~low_mask(width)) != 0) {
    throw std::invalid_argument("value " + std::to_string(value) +
                                " does not fit an unsigned " +
                                std::to_string(width) + "-bit word");
  }
  return RawWord(value, width, false);
}

RawWord RawWord::from_bits(std::uint64_t pattern, int width, bool is_signed) {
  check_width(width);
  std::uint64_t bits = pattern & low_mask(width);
  if (is_signed && width < 64 && ((bits >> (width - 1)) & 1) != 0) {
    bits |= ~low_mask(width);
  }
  return RawWord(bits, width, is_signed);
}

std::uint64_t RawWord::pattern() const { return bits_ & low_mask(width_); }

Wide RawWord::value() const {
  return signed_ ? Wide{static_cast<std::int64_t>(bits_)} : Wide{bits_};
}

RawWord floor_drop(const RawWord& x, int n) {
  check_drop(n);
  // Arithmetic shift on the signed carrier rounds toward -inf.
  const Wide shifted = x.value() >> n;
  return x.is_signed()
             ? RawWord::from_signed(static_cast<std::int64_t>(shifted), 64)
             : RawWord::from_unsigned(static_cast<std::uint64_t>(shifted), 64);
}

Residual residual_of(const RawWord& x, int n) {
  check_drop(n);
  return Residual{x.bits() & low_mask(n), n};
}

Saturated saturate(Wide x, bool out_signed, int out_bits) {
  if (out_bits != 16 && out_bits != 32) {
    throw std::invalid_argument("saturation width must be 16 or 32");
  }
  const Wide lo = out_signed ? -(Wide{1} << (out_bits - 1)) : Wide{0};
  const Wide hi = out_signed ? (Wide{1} << (out_bits - 1)) - 1
                             : (Wide{1} << out_bits) - 1;
  const Wide clamped = x < lo ? lo : (x > hi ? hi : x);
  const RawWord word =
      out_signed
          ? RawWord::from_signed(static_cast<std::int64_t>(clamped), out_bits)
          : RawWord::from_unsigned(static_cast<std::uint64_t>(clamped),
                                   out_bits);
  return Saturated{word, clamped != x};
}

}  // namespace sround
