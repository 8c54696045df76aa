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

namespace sround {

// Carrier for intermediate results. Inputs are at most 64 bits wide, so 128
// bits leave room for the left extension used in overflow detection.
using Wide = __int128;

/// A fixed-point format <s, i, p>: signedness, integer bits and fraction bits.
/// The word width is derived and must be 16, 32 or 64.
class FixedFormat {
 public:
  FixedFormat(bool is_signed, int integer_bits, int fraction_bits);

  /// Parses "s16.15", "u0.32" and friends. Throws std::invalid_argument.
  static FixedFormat parse(std::string_view text);

  bool is_signed() const { return signed_; }
  int integer_bits() const { return integer_bits_; }
  int fraction_bits() const { return fraction_bits_; }
  int word_bits() const { return word_bits_; }

  /// Weight of the least significant bit, 2^-p.
  double epsilon() const;

  Wide min_raw() const;
  Wide max_raw() const;

  std::string to_string() const;

  friend bool operator==(const FixedFormat&, const FixedFormat&) = default;

 private:
  bool signed_;
  int integer_bits_;
  int fraction_bits_;
  int word_bits_;
};

/// A 2's-complement or unsigned integer held in a 64-bit carrier. Bits above
/// `width` are a sign extension (signed) or zero (unsigned).
class RawWord {
 public:
  RawWord() = default;

  /// Throws std::invalid_argument if `value` does not fit in `width` bits.
  static RawWord from_signed(std::int64_t value, int width);
  static RawWord from_unsigned(std::uint64_t value, int width);
  /// Keeps the low `width` bits of `pattern` and extends them.
  static RawWord from_bits(std::uint64_t pattern, int width, bool is_signed);

  std::uint64_t bits() const { return bits_; }
  int width() const { return width_; }
  bool is_signed() const { return signed_; }

  /// The low `width` bits only.
  std::uint64_t pattern() const;
  /// Exact integer value under the word's signedness.
  Wide value() const;

  friend bool operator==(const RawWord&, const RawWord&) = default;

 private:
  RawWord(std::uint64_t bits, int width, bool is_signed)
      : bits_(bits), width_(width), signed_(is_signed) {}

  std::uint64_t bits_ = 0;
  int width_ = 64;
  bool signed_ = true;
};

/// Low n bits of a word, always non-negative. 1 <= n <= 32.
struct Residual {
  std::uint64_t value = 0;
  int n = 1;
};

struct Saturated {
  RawWord value;
  bool saturated = false;
};

/// floor(x / 2^n): an arithmetic shift for signed words, logical otherwise.
/// Throws std::invalid_argument unless 1 <= n <= 32.
RawWord floor_drop(const RawWord& x, int n);

/// x AND (2^n - 1). Throws std::invalid_argument unless 1 <= n <= 32.
Residual residual_of(const RawWord& x, int n);

/// Clamps to the range of (out_signed, out_bits), out_bits in {16, 32}.
Saturated saturate(Wide x, bool out_signed, int out_bits);

}  // namespace sround
