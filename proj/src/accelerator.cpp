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

#include "sround/accelerator.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "sround/bfloat16.hpp"

namespace sround::accel {
namespace {

std::string hex(std::uint32_t v) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "0x%08x", v);
  return buf;
}

std::array<OpSelect, kBlockCount> build_ops() {
  std::array<OpSelect, kBlockCount> ops{};
  int k = 0;
  for (Family f : {Family::kFix64To32, Family::kFix32To32, Family::kFix32To16,
                   Family::kFix16To16}) {
    for (Mode m : {Mode::kStochastic, Mode::kNearest}) {
      for (bool s : {true, false}) ops[k++] = OpSelect{f, m, s};
    }
  }
  ops[k++] = OpSelect{Family::kB32ToBf16, Mode::kStochastic, false};
  ops[k++] = OpSelect{Family::kB32ToBf16, Mode::kNearest, false};
  return ops;
}

int block_index(std::uint32_t offset) {
  if (offset < kBlockBase) return -1;
  const std::uint32_t k = (offset - kBlockBase) / kBlockStride;
  return k < static_cast<std::uint32_t>(kBlockCount) ? static_cast<int>(k) : -1;
}

std::uint32_t parse_hex(const std::string& token, int line) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(token, &used, 16);
    if (used != token.size() || v > 0xffffffffull) throw std::out_of_range("");
    return static_cast<std::uint32_t>(v);
  } catch (const std::logic_error&) {
    throw std::invalid_argument("script line " + std::to_string(line) +
                                ": bad hex value '" + token + "'");
  }
}

}  // namespace

const std::array<OpSelect, kBlockCount>& all_ops() {
  static const auto ops = build_ops();
  return ops;
}

std::uint32_t block_offset(const OpSelect& op) {
  const auto& ops = all_ops();
  for (int k = 0; k < kBlockCount; ++k) {
    const OpSelect& o = ops[k];
    const bool match = o.family == op.family && o.mode == op.mode &&
                       (op.family == Family::kB32ToBf16 ||
                        o.is_signed == op.is_signed);
    if (match) return kBlockBase + kBlockStride * static_cast<std::uint32_t>(k);
  }
  throw std::invalid_argument("operation has no block in the address map");
}

std::optional<OpSelect> decode_block(std::uint32_t offset) {
  const int k = block_index(offset);
  if (k < 0) return std::nullopt;
  return all_ops()[k];
}

bool is_wide(Family family) { return family == Family::kFix64To32; }

std::string to_string(const OpSelect& op) {
  std::string out;
  switch (op.family) {
    case Family::kFix64To32: out = "fix64to32"; break;
    case Family::kFix32To32: out = "fix32to32"; break;
    case Family::kFix32To16: out = "fix32to16"; break;
    case Family::kFix16To16: out = "fix16to16"; break;
    case Family::kB32ToBf16: out = "b32tobf16"; break;
  }
  out += op.mode == Mode::kStochastic ? "-sr" : "-rn";
  if (op.family != Family::kB32ToBf16) out += op.is_signed ? "-s" : "-u";
  return out;
}

RoundSpec round_spec_for(const OpSelect& op, std::uint32_t config,
                         int random_width) {
  RoundSpec spec;
  spec.mode = op.mode == Mode::kStochastic ? RoundMode::kSrAddition
                                           : RoundMode::kRnTiesUp;
  spec.drop_bits = static_cast<int>(config & 0x1f) + 1;
  spec.random_width = random_width;
  spec.in_signed = op.is_signed;
  spec.out_signed = op.is_signed;
  switch (op.family) {
    case Family::kFix64To32: spec.in_bits = 64; spec.out_bits = 32; break;
    case Family::kFix32To32: spec.in_bits = 32; spec.out_bits = 32; break;
    case Family::kFix32To16: spec.in_bits = 32; spec.out_bits = 16; break;
    case Family::kFix16To16: spec.in_bits = 16; spec.out_bits = 16; break;
    case Family::kB32ToBf16:
      throw std::invalid_argument("bfloat16 rounding has no fixed-point spec");
  }
  return spec;
}

ProtocolError::ProtocolError(std::uint32_t offset, std::uint64_t deficit)
    : std::runtime_error("read of " + hex(offset) + " is " +
                         std::to_string(deficit) +
                         " cycle(s) before the result is valid"),
      offset_(offset),
      deficit_(deficit) {}

Accelerator::Accelerator(std::unique_ptr<PrngStream> stream, int random_width)
    : stream_(std::move(stream)), random_width_(random_width) {
  if (!stream_) throw std::invalid_argument("accelerator needs a PRNG stream");
  if (random_width != 8 && random_width != 16 && random_width != 32) {
    throw std::invalid_argument("random width must be 8, 16 or 32");
  }
}

std::uint64_t Accelerator::write(std::uint32_t offset, std::uint32_t data) {
  const int k = block_index(offset);
  const std::uint32_t reg = offset >= kBlockBase ? (offset - kBlockBase) % kBlockStride : 0;
  bool mapped = offset == kConfigOffset;
  if (k >= 0) {
    const bool wide = is_wide(all_ops()[k].family);
    mapped = reg == kArgLo || (reg == kArgHi && wide);
  }
  if (!mapped) {
    throw BusError(offset, "write to unmapped or read-only offset " + hex(offset));
  }

  const std::uint64_t stall = busy() ? busy_until_ - cycle_ : 0;
  cycle_ += stall + 1;

  if (offset == kConfigOffset) {
    config_ = data & 0x1f;
    return stall;
  }
  Block& b = blocks_[k];
  const bool wide = is_wide(all_ops()[k].family);
  if (reg == kArgLo) {
    b.arg_lo = data;
    if (!wide) trigger(k);
  } else {
    b.arg_hi = data;
    trigger(k);
  }
  return stall;
}

void Accelerator::trigger(int index) {
  const OpSelect& op = all_ops()[index];
  Block& b = blocks_[index];
  if (op.family == Family::kB32ToBf16) {
    const auto mode = op.mode == Mode::kStochastic ? FloatRoundMode::kStochastic
                                                   : FloatRoundMode::kNearestTiesUp;
    b.result = b32_to_bf16(b.arg_lo, mode, stream_.get(), random_width_);
    b.flags = 0;
  } else {
    const RoundSpec spec = round_spec_for(op, config_, random_width_);
    const std::uint64_t pattern =
        spec.in_bits == 64 ? (std::uint64_t{b.arg_hi} << 32) | b.arg_lo
                           : std::uint64_t{b.arg_lo};
    const RoundOutcome out = round(spec.input(pattern), spec, *stream_);
    // RawWord keeps the sign extension, so the low word is the register value.
    b.result = static_cast<std::uint32_t>(out.value.bits());
    b.flags = (out.saturated ? kFlagSaturated : 0) |
              (out.rounded_up ? kFlagRoundedUp : 0);
  }
  // Rounding and saturation occupy the cycle after the trigger write.
  b.ready_cycle = cycle_ + 1;
  busy_until_ = b.ready_cycle;
}

std::uint64_t Accelerator::read_deficit(std::uint32_t offset) const {
  const int k = block_index(offset);
  if (k < 0) return 0;
  const std::uint32_t reg = (offset - kBlockBase) % kBlockStride;
  if (reg != kResult && reg != kFlags) return 0;
  const std::uint64_t read_cycle = cycle_ + 1;
  const std::uint64_t ready = blocks_[k].ready_cycle;
  return read_cycle <= ready ? ready - read_cycle + 1 : 0;
}

std::uint32_t Accelerator::read(std::uint32_t offset) {
  if (offset == kConfigOffset) {
    ++cycle_;
    return config_;
  }
  const int k = block_index(offset);
  if (k < 0 || offset % 4 != 0) {
    throw BusError(offset, "read of unmapped offset " + hex(offset));
  }
  const std::uint32_t reg = (offset - kBlockBase) % kBlockStride;
  if (reg == kArgHi && !is_wide(all_ops()[k].family)) {
    throw BusError(offset, "read of unmapped offset " + hex(offset));
  }
  if (const std::uint64_t deficit = read_deficit(offset); deficit > 0) {
    throw ProtocolError(offset, deficit);
  }
  ++cycle_;
  const Block& b = blocks_[k];
  switch (reg) {
    case kArgLo: return b.arg_lo;
    case kArgHi: return b.arg_hi;
    case kResult: return b.result;
    default: return b.flags;
  }
}

std::vector<ScriptStep> parse_script(std::istream& in) {
  std::vector<ScriptStep> steps;
  std::string text;
  int line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (const auto hash = text.find('#'); hash != std::string::npos) {
      text.erase(hash);
    }
    std::istringstream fields(text);
    std::string op;
    if (!(fields >> op)) continue;
    std::vector<std::string> args;
    for (std::string a; fields >> a;) args.push_back(a);

    ScriptStep step;
    step.line = line;
    const auto expect_args = [&](std::size_t count) {
      if (args.size() != count) {
        throw std::invalid_argument("script line " + std::to_string(line) +
                                    ": '" + op + "' takes " +
                                    std::to_string(count) + " operand(s)");
      }
    };
    if (op == "W" || op == "w") {
      expect_args(2);
      step.kind = ScriptStep::Kind::kWrite;
      step.offset = parse_hex(args[0], line);
      step.data = parse_hex(args[1], line);
    } else if (op == "R" || op == "r") {
      expect_args(1);
      step.kind = ScriptStep::Kind::kRead;
      step.offset = parse_hex(args[0], line);
    } else if (op == "E" || op == "e") {
      expect_args(1);
      step.kind = ScriptStep::Kind::kExpect;
      step.data = parse_hex(args[0], line);
    } else {
      throw std::invalid_argument("script line " + std::to_string(line) +
                                  ": unknown op '" + op + "'");
    }
    steps.push_back(step);
  }
  return steps;
}

ScriptResult run_script(Accelerator& unit, std::span<const ScriptStep> steps) {
  ScriptResult result;
  std::optional<Transaction> last_read;
  const auto fail = [&](Transaction t, std::string status, std::string why,
                        const ScriptStep& step) {
    t.status = std::move(status);
    result.log.push_back(t);
    result.ok = false;
    result.error = "line " + std::to_string(step.line) + ": " + why;
  };

  for (const ScriptStep& step : steps) {
    Transaction t;
    t.offset = step.offset;
    t.data = step.data;
    try {
      switch (step.kind) {
        case ScriptStep::Kind::kWrite: {
          t.op = 'W';
          const std::uint64_t stall = unit.write(step.offset, step.data);
          t.cycle = unit.cycle();
          t.status = stall > 0 ? "stall:" + std::to_string(stall) : "ok";
          result.log.push_back(t);
          break;
        }
        case ScriptStep::Kind::kRead: {
          t.op = 'R';
          const std::uint64_t wait = unit.read_deficit(step.offset);
          unit.tick(wait);
          t.data = unit.read(step.offset);
          t.cycle = unit.cycle();
          t.status = wait > 0 ? "wait:" + std::to_string(wait) : "ok";
          result.log.push_back(t);
          last_read = t;
          break;
        }
        case ScriptStep::Kind::kExpect: {
          t.op = 'E';
          t.cycle = unit.cycle();
          if (!last_read) {
            fail(t, "no-read", "expectation without a preceding read", step);
            return result;
          }
          t.offset = last_read->offset;
          if (last_read->data != step.data) {
            fail(t, "mismatch",
                 "read of " + hex(last_read->offset) + " at cycle " +
                     std::to_string(last_read->cycle) + ": expected " +
                     hex(step.data) + ", got " + hex(last_read->data),
                 step);
            return result;
          }
          t.status = "ok";
          result.log.push_back(t);
          break;
        }
      }
    } catch (const BusError& e) {
      t.cycle = unit.cycle();
      fail(t, "bus-error", e.what(), step);
      return result;
    } catch (const ProtocolError& e) {
      t.cycle = unit.cycle();
      fail(t, "protocol-error", e.what(), step);
      return result;
    }
  }
  return result;
}

void write_log_csv(std::ostream& out, std::span<const Transaction> log) {
  out << "cycle,op,offset,data,status\n";
  for (const Transaction& t : log) {
    out << t.cycle << ',' << t.op << ',' << hex(t.offset) << ',' << hex(t.data)
        << ',' << t.status << '\n';
  }
}

}  // namespace sround::accel
