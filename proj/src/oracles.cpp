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

#include "sround/oracles.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdlib>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <stdexcept>

#include "sround/accelerator.hpp"
#include "sround/bfloat16.hpp"
#include "sround/prng.hpp"
#include "sround/rounding.hpp"

namespace sround {
namespace {

struct Tally {
  OracleResult& out;
  template <typename Describe>
  void check(bool ok, Describe&& describe) {
    ++out.cases;
    if (!ok) {
      if (out.failures == 0) out.first_counterexample = describe();
      ++out.failures;
    }
  }
};

std::string hex(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "0x%llx", static_cast<unsigned long long>(v));
  return buf;
}

// floor(a / b) for b > 0 by integer division, independent of shifts.
std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && (a < 0)) --q;
  return q;
}

void unbiased(OracleResult& res, std::uint64_t) {
  Tally t{res};
  for (RoundMode mode : {RoundMode::kSrComparison, RoundMode::kSrAddition}) {
    for (int n = 1; n <= 12; ++n) {
      RoundSpec spec{mode, n, 32, true, true, 32, 32};
      ExhaustiveStream stream(n);
      for (std::int64_t x = -32768; x <= 32767; ++x) {
        const RawWord in = RawWord::from_signed(x, 32);
        // mean == x / 2^n  <=>  sum over all 2^n draws == x
        std::int64_t total = 0;
        for (std::uint32_t p = 0; p < (1u << n); ++p) {
          total += static_cast<std::int64_t>(round(in, spec, stream).value.value());
        }
        t.check(total == x, [&] {
          return std::string(to_string(mode)) + " x=" + std::to_string(x) +
                 " n=" + std::to_string(n) + " sum=" + std::to_string(total);
        });
      }
    }
  }
}

void equivalence(OracleResult& res, std::uint64_t) {
  Tally t{res};
  for (int n = 1; n <= 12; ++n) {
    const RoundSpec cmp{RoundMode::kSrComparison, n, 32, false, false, 32, 32};
    RoundSpec add = cmp;
    add.mode = RoundMode::kSrAddition;
    ExhaustiveStream stream(n);
    for (std::uint32_t r = 0; r < (1u << n); ++r) {
      const RawWord in = RawWord::from_unsigned(r, 32);
      std::uint64_t up_cmp = 0;
      std::uint64_t up_add = 0;
      for (std::uint32_t p = 0; p < (1u << n); ++p) {
        up_cmp += sr_by_comparison(in, cmp, stream).rounded_up ? 1 : 0;
      }
      for (std::uint32_t p = 0; p < (1u << n); ++p) {
        up_add += sr_by_addition(in, add, stream).rounded_up ? 1 : 0;
      }
      t.check(up_cmp == r && up_add == r, [&] {
        return "n=" + std::to_string(n) + " r=" + std::to_string(r) +
               " cmp=" + std::to_string(up_cmp) + " add=" + std::to_string(up_add);
      });
    }
  }
}

void nearest(OracleResult& res, std::uint64_t) {
  Tally t{res};
  for (int n = 1; n <= 8; ++n) {
    const RoundSpec spec{RoundMode::kRnTiesUp, n, 32, true, true, 16, 16};
    const std::int64_t scale = std::int64_t{1} << n;
    for (std::int64_t x = -32768; x <= 32767; ++x) {
      const std::int64_t q = floor_div(x, scale);
      const std::int64_t d = x - q * scale;  // x/2^n - q == d/2^n in [0, 1)
      const std::int64_t expected = 2 * d >= scale ? q + 1 : q;
      const auto got = static_cast<std::int64_t>(
          rn_ties_up(RawWord::from_signed(x, 16), spec).value.value());
      t.check(got == expected, [&] {
        return "x=" + std::to_string(x) + " n=" + std::to_string(n) +
               " expected=" + std::to_string(expected) + " got=" + std::to_string(got);
      });
    }
  }
}

void limited_width(OracleResult& res, std::uint64_t) {
  Tally t{res};
  for (int w : {4, 8}) {
    for (int n = 1; n <= 12; ++n) {
      const RoundSpec spec{RoundMode::kSrAddition, n, w, false, false, 32, 32};
      const int draws_bits = std::min(w, n);
      ExhaustiveStream stream(draws_bits);
      const std::uint64_t draws = std::uint64_t{1} << draws_bits;
      for (std::uint32_t r = 0; r < (1u << n); ++r) {
        const RawWord in = RawWord::from_unsigned(r, 32);
        std::uint64_t up = 0;
        for (std::uint64_t k = 0; k < draws; ++k) {
          up += sr_by_addition(in, spec, stream).rounded_up ? 1 : 0;
        }
        // |up/draws - r/2^n| < 2^-w, cross-multiplied to integers.
        const std::int64_t lhs = static_cast<std::int64_t>(up << n) -
                                 static_cast<std::int64_t>(std::uint64_t{r} * draws);
        t.check((static_cast<std::uint64_t>(std::llabs(lhs)) << w) < (draws << n), [&] {
          return "w=" + std::to_string(w) + " n=" + std::to_string(n) +
                 " r=" + std::to_string(r) + " up=" + std::to_string(up);
        });
      }
    }
  }
}

void bf16(OracleResult& res, std::uint64_t seed) {
  Tally t{res};
  for (std::uint32_t b = 0; b <= 0xffff; ++b) {
    const auto h = static_cast<std::uint16_t>(b);
    ConstantStream zero(0);
    const std::uint16_t rn = b32_to_bf16(bf16_to_b32(h), FloatRoundMode::kNearestTiesUp, nullptr);
    const std::uint16_t sr = b32_to_bf16(bf16_to_b32(h), FloatRoundMode::kStochastic, &zero);
    t.check(rn == h && sr == h, [&] { return "round trip of " + hex(h); });
  }

  std::mt19937_64 gen(seed);
  ExhaustiveStream stream(16);
  for (int sample = 0; sample < 1000; ++sample) {
    std::uint32_t x = 0;
    do {
      x = static_cast<std::uint32_t>(gen());
    } while ((x & 0x7f800000u) == 0x7f800000u);
    std::uint32_t up = 0;
    for (std::uint32_t p = 0; p <= 0xffff; ++p) {
      up += b32_to_bf16(x, FloatRoundMode::kStochastic, &stream) != (x >> 16) ? 1 : 0;
    }
    t.check(up == (x & 0xffffu), [&] {
      return "SR count for " + hex(x) + " is " + std::to_string(up);
    });
  }
  const std::uint16_t tie = b32_to_bf16(0x3f808000u, FloatRoundMode::kNearestTiesUp, nullptr);
  t.check(tie == 0x3f81, [&] { return "RN tie gave " + hex(tie); });
}

void sim(OracleResult& res, std::uint64_t seed) {
  Tally t{res};
  constexpr int kStimuli = 100'000;
  for (int width : {8, 16, 32}) {
    for (const accel::OpSelect& op : accel::all_ops()) {
      accel::Accelerator unit(std::make_unique<Jkiss32>(seed), width);
      Jkiss32 twin(seed);
      std::mt19937_64 gen(seed ^ static_cast<std::uint64_t>(width));
      const std::uint32_t base = accel::block_offset(op);
      const bool wide = accel::is_wide(op.family);
      // Stimuli per op at full width; a smaller sample for the narrow variants.
      const int count = width == 32 ? kStimuli : kStimuli / 10;
      for (int s = 0; s < count; ++s) {
        const auto config = static_cast<std::uint32_t>(gen() & 0x1f);
        const std::uint64_t arg = gen();
        unit.write(accel::kConfigOffset, config);
        const std::uint64_t start = unit.cycle();
        unit.write(base + accel::kArgLo, static_cast<std::uint32_t>(arg));
        if (wide) unit.write(base + accel::kArgHi, static_cast<std::uint32_t>(arg >> 32));
        unit.tick(unit.read_deficit(base + accel::kResult));
        const std::uint32_t got = unit.read(base + accel::kResult);
        const std::uint64_t latency = unit.cycle() - start;

        std::uint32_t expected = 0;
        if (op.family == accel::Family::kB32ToBf16) {
          const auto mode = op.mode == accel::Mode::kStochastic
                                ? FloatRoundMode::kStochastic
                                : FloatRoundMode::kNearestTiesUp;
          expected = b32_to_bf16(static_cast<std::uint32_t>(arg), mode, &twin, width);
        } else {
          const RoundSpec spec = accel::round_spec_for(op, config, width);
          const std::uint64_t pattern = wide ? arg : (arg & 0xffffffffu);
          expected = static_cast<std::uint32_t>(
              round(spec.input(pattern), spec, twin).value.bits());
        }
        const std::uint64_t want_latency = wide ? 4 : 3;
        t.check(got == expected && latency == want_latency, [&] {
          return accel::to_string(op) + " w=" + std::to_string(width) +
                 " arg=" + hex(arg) + " config=" + std::to_string(config) +
                 " model=" + hex(got) + " library=" + hex(expected) +
                 " latency=" + std::to_string(latency);
        });
      }
    }
  }
}

void prng(OracleResult& res, std::uint64_t seed) {
  Tally t{res};
  constexpr int kDraws = 1'000'000;
  Jkiss32 a(seed);
  Jkiss32 b(seed);
  std::array<std::uint64_t, 32> ones{};
  bool same = true;
  for (int k = 0; k < kDraws; ++k) {
    const std::uint32_t v = a.next_u32();
    same = same && v == b.next_u32();
    for (int bit = 0; bit < 32; ++bit) ones[bit] += (v >> bit) & 1;
  }
  t.check(same, [] { return std::string("equal seeds diverged"); });
  for (int bit = 0; bit < 32; ++bit) {
    const double freq = static_cast<double>(ones[bit]) / kDraws;
    t.check(freq > 0.49 && freq < 0.51, [&] {
      return "bit " + std::to_string(bit) + " frequency " + std::to_string(freq);
    });
  }
}

using Suite = std::function<void(OracleResult&, std::uint64_t)>;

const std::vector<std::pair<std::string, Suite>>& registry() {
  static const std::vector<std::pair<std::string, Suite>> suites = {
      {"unbiased", unbiased},     {"equivalence", equivalence},
      {"rn", nearest},            {"limited-width", limited_width},
      {"bf16", bf16},             {"sim", sim},
      {"prng", prng},
  };
  return suites;
}

}  // namespace

const std::vector<std::string>& oracle_suites() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, fn] : registry()) out.push_back(name);
    return out;
  }();
  return names;
}

std::vector<OracleResult> run_oracles(std::string_view selection,
                                      std::uint64_t seed) {
  std::vector<OracleResult> results;
  for (const auto& [name, fn] : registry()) {
    if (selection != "all" && selection != name) continue;
    OracleResult r;
    r.suite = name;
    const auto start = std::chrono::steady_clock::now();
    fn(r, seed);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    results.push_back(std::move(r));
  }
  if (results.empty()) {
    throw std::invalid_argument("unknown oracle suite '" + std::string(selection) + "'");
  }
  return results;
}

}  // namespace sround
