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

#include "sround/prng.hpp"

#include <stdexcept>
#include <string>

namespace sround {
namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace

Jkiss32::Jkiss32(const State& state) : state_(state) {
  if (state.y == 0) {
    throw std::invalid_argument("JKISS32 xorshift word must be non-zero");
  }
  if (state.c > 1) {
    throw std::invalid_argument("JKISS32 carry must be 0 or 1");
  }
}

Jkiss32::State Jkiss32::expand_seed(std::uint64_t seed) {
  std::uint64_t sm = seed;
  const std::uint64_t a = splitmix64(sm);
  const std::uint64_t b = splitmix64(sm);
  State s;
  s.x = static_cast<std::uint32_t>(a);
  s.y = static_cast<std::uint32_t>(a >> 32);
  if (s.y == 0) s.y = State{}.y;
  s.z = static_cast<std::uint32_t>(b) & 0x7fffffffu;
  s.w = static_cast<std::uint32_t>(b >> 32) & 0x7fffffffu;
  if (s.z == 0 && s.w == 0) s.w = 1;
  s.c = 0;
  return s;
}

ExhaustiveStream::ExhaustiveStream(int k)
    : bits_(k), mask_(0) {
  if (k < 1 || k > 32) {
    throw std::invalid_argument("exhaustive stream width must be in [1, 32], got " +
                                std::to_string(k));
  }
  mask_ = (std::uint64_t{1} << k) - 1;
}

std::uint32_t mask_low(std::uint32_t p, int k) {
  if (k < 1 || k > 32) {
    throw std::invalid_argument("mask width must be in [1, 32], got " +
                                std::to_string(k));
  }
  return k == 32 ? p : p & ((std::uint32_t{1} << k) - 1);
}

}  // namespace sround
