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

#include "sround/bfloat16.hpp"

#include <stdexcept>

#include "sround/rounding.hpp"

namespace sround {

std::uint16_t b32_to_bf16(std::uint32_t bits, FloatRoundMode mode,
                          PrngStream* stream, int random_width) {
  if (random_width < 1 || random_width > 32) {
    throw std::invalid_argument("random width must be in [1, 32]");
  }
  std::uint32_t random = 0;
  if (mode == FloatRoundMode::kStochastic) {
    if (stream == nullptr) {
      throw std::invalid_argument("stochastic bfloat16 rounding needs a stream");
    }
    random = stream->next_u32();
  }

  const std::uint32_t sign = bits & 0x80000000u;
  const std::uint32_t magnitude = bits & 0x7fffffffu;
  if (is_nan_b32(bits)) {
    auto top = static_cast<std::uint16_t>(bits >> 16);
    if ((top & 0x007f) == 0) top |= 0x0040;
    return top;
  }
  if (is_inf_b32(bits)) {
    return static_cast<std::uint16_t>(bits >> 16);
  }

  const std::uint32_t residual = magnitude & 0xffffu;
  bool up = false;
  if (mode == FloatRoundMode::kNearestTiesUp) {
    up = residual >= 0x8000u;
  } else {
    up = stochastic_carry(residual, 16, random, random_width);
  }
  // Max finite magnitude 0x7f7fffff + 1 ulp lands exactly on 0x7f80 (inf).
  const std::uint32_t rounded = (magnitude >> 16) + (up ? 1u : 0u);
  return static_cast<std::uint16_t>((sign >> 16) | rounded);
}

}  // namespace sround
