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

namespace sround {

/// Source of uniform 32-bit words for stochastic rounding. A stream is
/// single-owner mutable state.
class PrngStream {
 public:
  virtual ~PrngStream() = default;

  virtual std::uint32_t next_u32() = 0;
  /// Resets the stream; equal seeds reproduce equal sequences.
  virtual void reseed(std::uint64_t seed) = 0;
};

/// Marsaglia-style KISS generator without multiplications (David Jones,
/// "JKISS32"): xorshift word, add-with-carry pair and a Weyl sequence.
///
///   y ^= y << 5; y ^= y >> 7; y ^= y << 22;
///   t = z + w + c; z = w; c = t >> 31; w = t & 0x7fffffff;
///   x += 1411392427;
///   return x + y + w;
///
/// Seeds go through expand_seed(); the default constructor uses the
/// reference state from the original publication.
class Jkiss32 final : public PrngStream {
 public:
  struct State {
    std::uint32_t x = 123456789;  // Weyl sequence
    std::uint32_t y = 234567891;  // xorshift, never zero
    std::uint32_t z = 345678912;  // add-with-carry
    std::uint32_t w = 456789123;  // add-with-carry
    std::uint32_t c = 0;          // carry bit

    friend bool operator==(const State&, const State&) = default;
  };

  Jkiss32() = default;
  explicit Jkiss32(std::uint64_t seed) : state_(expand_seed(seed)) {}
  /// Throws std::invalid_argument if the state would stall the generator.
  explicit Jkiss32(const State& state);

  std::uint32_t next_u32() override {
    auto& s = state_;
    s.y ^= s.y << 5;
    s.y ^= s.y >> 7;
    s.y ^= s.y << 22;
    const std::uint32_t t = s.z + s.w + s.c;
    s.z = s.w;
    s.c = t >> 31;
    s.w = t & 0x7fffffffu;
    s.x += 1411392427u;
    return s.x + s.y + s.w;
  }

  void reseed(std::uint64_t seed) override { state_ = expand_seed(seed); }

  const State& state() const { return state_; }

  /// SplitMix64 expansion of a 64-bit seed into a valid generator state:
  /// x = lo(a), y = hi(a) (replaced by the reference y if zero),
  /// z = lo(b) & 0x7fffffff, w = hi(b) & 0x7fffffff (w = 1 if both are
  /// zero), c = 0; where a and b are the first two SplitMix64 outputs.
  static State expand_seed(std::uint64_t seed);

 private:
  State state_;
};

/// Emits a fixed value forever.
class ConstantStream final : public PrngStream {
 public:
  explicit ConstantStream(std::uint32_t value = 0) : value_(value) {}

  std::uint32_t next_u32() override { return value_; }
  /// Low 32 bits of the seed become the constant.
  void reseed(std::uint64_t seed) override {
    value_ = static_cast<std::uint32_t>(seed);
  }

 private:
  std::uint32_t value_;
};

/// Counts 0, 1, ..., 2^k - 1 and wraps, so masking to k bits visits every
/// k-bit value exactly once per period.
class ExhaustiveStream final : public PrngStream {
 public:
  /// Throws std::invalid_argument unless 1 <= k <= 32.
  explicit ExhaustiveStream(int k);

  std::uint32_t next_u32() override {
    const auto out = static_cast<std::uint32_t>(counter_);
    counter_ = (counter_ + 1) & mask_;
    return out;
  }
  /// The seed (reduced modulo 2^k) becomes the next value emitted.
  void reseed(std::uint64_t seed) override { counter_ = seed & mask_; }

  int bits() const { return bits_; }

 private:
  int bits_;
  std::uint64_t mask_;
  std::uint64_t counter_ = 0;
};

/// p AND (2^k - 1). Throws std::invalid_argument unless 1 <= k <= 32.
std::uint32_t mask_low(std::uint32_t p, int k);

}  // namespace sround
