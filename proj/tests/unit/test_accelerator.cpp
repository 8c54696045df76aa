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

#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "sround/accelerator.hpp"
#include "sround/bfloat16.hpp"

using namespace sround::accel;
using sround::Jkiss32;

namespace {

Accelerator make(std::uint64_t seed = 1, int width = 32) {
  return Accelerator(std::make_unique<Jkiss32>(seed), width);
}

ScriptResult run_text(Accelerator& unit, const std::string& text) {
  std::istringstream in(text);
  const auto steps = parse_script(in);
  return run_script(unit, steps);
}

}  // namespace

TEST_CASE("address map is injective and round-trips") {
  std::set<std::uint32_t> seen;
  for (const OpSelect& op : all_ops()) {
    const std::uint32_t off = block_offset(op);
    CHECK(seen.insert(off).second);
    CHECK(off % kBlockStride == 0);
    const auto back = decode_block(off);
    REQUIRE(back.has_value());
    CHECK(*back == op);
    for (std::uint32_t reg : {kArgLo, kArgHi, kResult, kFlags}) {
      CHECK(decode_block(off + reg) == back);
    }
  }
  CHECK(seen.size() == kBlockCount);
  CHECK(block_offset({Family::kFix64To32, Mode::kNearest, true}) == 0x60);
  CHECK(block_offset({Family::kFix32To32, Mode::kNearest, false}) == 0xb0);
  CHECK(block_offset({Family::kB32ToBf16, Mode::kNearest, false}) == 0x150);
  CHECK(to_string({Family::kFix32To32, Mode::kNearest, false}) == "fix32to32-rn-u");
  CHECK_FALSE(decode_block(0x0).has_value());
  CHECK_FALSE(decode_block(0x160).has_value());
}

TEST_CASE("64-bit op latency is 4 cycles, 32-bit is 3") {
  Accelerator a = make();
  a.write(kConfigOffset, 0xf);
  const std::uint64_t start = a.cycle();
  a.write(0x60, 0x18000);
  a.write(0x64, 0);
  CHECK(a.read_deficit(0x68) == 1);
  a.tick();
  CHECK(a.read(0x68) == 2);
  CHECK(a.cycle() - start == 4);

  const std::uint64_t start32 = a.cycle();
  a.write(0xb0, 0x17fff);
  a.tick(a.read_deficit(0xb8));
  CHECK(a.read(0xb8) == 1);
  CHECK(a.cycle() - start32 == 3);
}

TEST_CASE("reading early is a protocol error with the deficit") {
  Accelerator a = make();
  a.write(0xb0, 3);
  const std::uint64_t before = a.cycle();
  try {
    a.read(0xb8);
    FAIL("expected a protocol error");
  } catch (const ProtocolError& e) {
    CHECK(e.deficit() == 1);
    CHECK(e.offset() == 0xb8);
  }
  CHECK(a.cycle() == before);
  // Argument registers are readable at once.
  CHECK(a.read(0xb0) == 3);
  CHECK(a.read(0xb8) == 2);  // n = 1, RN: 3/2 = 1.5 ties up
}

TEST_CASE("bus errors") {
  Accelerator a = make();
  CHECK_THROWS_AS(a.write(0x004, 1), BusError);
  CHECK_THROWS_AS(a.write(0x200, 1), BusError);
  CHECK_THROWS_AS(a.write(0xb8, 1), BusError);  // RESULT is read-only
  CHECK_THROWS_AS(a.write(0xb4, 1), BusError);  // ARG_HI only in 64-bit blocks
  CHECK_THROWS_AS(a.read(0xb4), BusError);
  CHECK_THROWS_AS(a.read(0xb2), BusError);
  CHECK_THROWS_AS(a.read(0x500), BusError);
  CHECK(a.cycle() == 0);
}

TEST_CASE("writes while busy stall") {
  Accelerator a = make();
  CHECK(a.write(0xb0, 1) == 0);
  CHECK(a.busy());
  CHECK(a.write(0xf0, 1) == 1);
  CHECK(a.cycle() == 3);
}

TEST_CASE("config is latched at trigger time and masked") {
  Accelerator a = make();
  a.write(kConfigOffset, 0xffffffffu);
  CHECK(a.config() == 0x1f);
  CHECK(a.read(kConfigOffset) == 0x1f);
  a.write(kConfigOffset, 3);  // n = 4
  a.write(0xb0, 0x18);        // 1.5 -> 2
  a.write(kConfigOffset, 0);  // later config does not touch the result
  CHECK(a.read(0xb8) == 2);
}

TEST_CASE("result extension and flags") {
  Accelerator a = make();
  a.write(kConfigOffset, 15);
  // fix32to16 RN signed: 0x7fff8000 >> 16 rounds to 0x8000, saturates.
  const std::uint32_t blk = block_offset({Family::kFix32To16, Mode::kNearest, true});
  a.write(blk + kArgLo, 0x7fff8000u);
  a.tick();
  CHECK(a.read(blk + kResult) == 0x7fffu);
  CHECK(a.read(blk + kFlags) == (kFlagSaturated | kFlagRoundedUp));
  a.write(blk + kArgLo, 0xffff0000u);  // -1.0 -> 0xffff sign-extended
  a.tick();
  CHECK(a.read(blk + kResult) == 0xffffffffu);
  CHECK(a.read(blk + kFlags) == 0);
  // 16-bit family ignores the upper half of ARG_LO.
  const std::uint32_t b16 = block_offset({Family::kFix16To16, Mode::kNearest, false});
  a.write(kConfigOffset, 3);
  a.write(b16 + kArgLo, 0xabcd0018u);
  a.tick();
  CHECK(a.read(b16 + kResult) == 2);
}

TEST_CASE("model matches direct library calls") {
  Accelerator a = make(42, 16);
  Jkiss32 twin(42);
  std::mt19937_64 gen(5);
  for (int k = 0; k < 20000; ++k) {
    const OpSelect op = all_ops()[gen() % kBlockCount];
    const std::uint32_t base = block_offset(op);
    const auto config = static_cast<std::uint32_t>(gen() % 32);
    const auto lo = static_cast<std::uint32_t>(gen());
    const auto hi = static_cast<std::uint32_t>(gen());
    a.write(kConfigOffset, config);
    a.write(base + kArgLo, lo);
    if (is_wide(op.family)) a.write(base + kArgHi, hi);
    a.tick(a.read_deficit(base + kResult));
    const std::uint32_t got = a.read(base + kResult);

    std::uint32_t want = 0;
    if (op.family == Family::kB32ToBf16) {
      const auto mode = op.mode == Mode::kStochastic ? sround::FloatRoundMode::kStochastic
                                                     : sround::FloatRoundMode::kNearestTiesUp;
      want = sround::b32_to_bf16(lo, mode, &twin, 16);
    } else {
      const sround::RoundSpec spec = round_spec_for(op, config, 16);
      std::uint64_t pattern = lo;
      if (spec.in_bits == 64) pattern |= std::uint64_t{hi} << 32;
      if (spec.in_bits == 16) pattern &= 0xffff;
      want = static_cast<std::uint32_t>(
          sround::round(spec.input(pattern), spec, twin).value.bits());
    }
    REQUIRE(got == want);
  }
}

TEST_CASE("random width validation") {
  CHECK_THROWS_AS(make(1, 4), std::invalid_argument);
  CHECK_THROWS_AS(make(1, 12), std::invalid_argument);
  CHECK_THROWS_AS(Accelerator(nullptr), std::invalid_argument);
  CHECK(make(1, 8).random_width() == 8);
}

TEST_CASE("script parsing") {
  std::istringstream ok("# header\n\nW 0 f  # config\nR 68\nE 2\n");
  const auto steps = parse_script(ok);
  REQUIRE(steps.size() == 3);
  CHECK(steps[0].kind == ScriptStep::Kind::kWrite);
  CHECK(steps[0].data == 0xf);
  CHECK(steps[0].line == 3);
  CHECK(steps[2].kind == ScriptStep::Kind::kExpect);

  for (const char* bad : {"X 1\n", "W 1\n", "R\n", "R zz\n", "E 1 2\n", "W 0 100000000\n"}) {
    CAPTURE(bad);
    std::istringstream in(bad);
    CHECK_THROWS_AS(parse_script(in), std::invalid_argument);
  }
}

TEST_CASE("empty script") {
  Accelerator a = make();
  const auto r = run_text(a, "");
  CHECK(r.ok);
  CHECK(r.log.empty());
}

TEST_CASE("64-bit sequence is logged at cycles 1, 2, 4") {
  Accelerator a = make();
  const auto r = run_text(a, "W 60 18000\nW 64 0\nR 68\n");
  REQUIRE(r.ok);
  REQUIRE(r.log.size() == 3);
  CHECK(r.log[0].cycle == 1);
  CHECK(r.log[1].cycle == 2);
  CHECK(r.log[2].cycle == 4);
  CHECK(r.log[2].status == "wait:1");
}

TEST_CASE("expectation failures and errors stop the run") {
  Accelerator a = make();
  auto r = run_text(a, "W 0 f\nW b0 18000\nR b8\nE 1\nR 0\n");
  CHECK_FALSE(r.ok);
  CHECK(r.log.back().status == "mismatch");
  CHECK(r.error.find("expected 0x00000001, got 0x00000002") != std::string::npos);
  CHECK(r.log.size() == 4);

  Accelerator b = make();
  r = run_text(b, "E 1\n");
  CHECK_FALSE(r.ok);
  CHECK(r.log.back().status == "no-read");

  Accelerator c = make();
  r = run_text(c, "W 300 1\nR 0\n");
  CHECK_FALSE(r.ok);
  CHECK(r.log.size() == 1);
  CHECK(r.log.back().status == "bus-error");
}

TEST_CASE("RN reciprocal addends through the bus") {
  // s16.15 sum, u0.32 reciprocal: n = 17, unsigned 32-bit block.
  std::ostringstream script;
  script << std::hex << "W 0 10\n";
  for (std::uint64_t i = 2; i <= 1000; ++i) {
    const std::uint64_t addend = (std::uint64_t{1} << 32) / i;
    const std::uint64_t want = (addend + (1u << 16)) >> 17;
    script << "W b0 " << addend << "\nR b8\nE " << want << "\n";
  }
  Accelerator a = make();
  const auto r = run_text(a, script.str());
  CHECK(r.ok);
  CHECK(r.error.empty());
}

TEST_CASE("CSV log") {
  Accelerator a = make();
  const auto r = run_text(a, "W 0 f\nR 0\nE f\n");
  std::ostringstream out;
  write_log_csv(out, r.log);
  CHECK(out.str() ==
        "cycle,op,offset,data,status\n"
        "1,W,0x00000000,0x0000000f,ok\n"
        "2,R,0x00000000,0x0000000f,ok\n"
        "2,E,0x00000000,0x0000000f,ok\n");
}

TEST_CASE("same seed, same log") {
  const std::string text = "W 0 7\nW 40 12345\nR 48\nW 140 3f801234\nR 148\n";
  Accelerator a = make(77);
  Accelerator b = make(77);
  const auto ra = run_text(a, text);
  const auto rb = run_text(b, text);
  REQUIRE(ra.log.size() == rb.log.size());
  for (std::size_t k = 0; k < ra.log.size(); ++k) {
    CHECK(ra.log[k].data == rb.log[k].data);
    CHECK(ra.log[k].cycle == rb.log[k].cycle);
  }
}
