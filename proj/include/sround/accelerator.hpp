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

#include <array>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sround/prng.hpp"
#include "sround/rounding.hpp"

namespace sround::accel {

enum class Family {
  kFix64To32,
  kFix32To32,
  kFix32To16,
  kFix16To16,
  kB32ToBf16,
};

enum class Mode { kStochastic, kNearest };

/// Operation selected by the address an argument is written to.
struct OpSelect {
  Family family = Family::kFix32To32;
  Mode mode = Mode::kStochastic;
  bool is_signed = true;  // ignored by kB32ToBf16

  friend bool operator==(const OpSelect&, const OpSelect&) = default;
};

// Address map (byte offsets, word aligned).
//
//   0x000        CONFIG   rw  bits [4:0] = drop count - 1
//   0x040 + 16k  block k, one per OpSelect:
//     +0x0       ARG_LO   rw  argument (low word); triggers 16/32-bit ops
//     +0x4       ARG_HI   rw  high word, 64-bit families only; triggers
//     +0x8       RESULT   ro  rounded value, sign/zero extended to 32 bits
//     +0xC       FLAGS    ro  bit 0 saturated, bit 1 rounded up
//
// Blocks 0..15 enumerate the four fixed-point families in order, each with
// SR signed, SR unsigned, RN signed, RN unsigned. Block 16 is bfloat16 SR,
// block 17 bfloat16 RN.
inline constexpr std::uint32_t kConfigOffset = 0x000;
inline constexpr std::uint32_t kBlockBase = 0x040;
inline constexpr std::uint32_t kBlockStride = 0x010;
inline constexpr std::uint32_t kArgLo = 0x0;
inline constexpr std::uint32_t kArgHi = 0x4;
inline constexpr std::uint32_t kResult = 0x8;
inline constexpr std::uint32_t kFlags = 0xC;
inline constexpr int kBlockCount = 18;

inline constexpr std::uint32_t kFlagSaturated = 1u << 0;
inline constexpr std::uint32_t kFlagRoundedUp = 1u << 1;

/// All mapped operations in block order.
const std::array<OpSelect, kBlockCount>& all_ops();

std::uint32_t block_offset(const OpSelect& op);
std::optional<OpSelect> decode_block(std::uint32_t offset);

bool is_wide(Family family);
std::string to_string(const OpSelect& op);

/// The library call the datapath performs for `op` under a config value.
RoundSpec round_spec_for(const OpSelect& op, std::uint32_t config,
                         int random_width);

class BusError : public std::runtime_error {
 public:
  BusError(std::uint32_t offset, const std::string& what)
      : std::runtime_error(what), offset_(offset) {}
  std::uint32_t offset() const { return offset_; }

 private:
  std::uint32_t offset_;
};

/// A result was read before the operation producing it completed.
class ProtocolError : public std::runtime_error {
 public:
  ProtocolError(std::uint32_t offset, std::uint64_t deficit);
  std::uint32_t offset() const { return offset_; }
  std::uint64_t deficit() const { return deficit_; }

 private:
  std::uint32_t offset_;
  std::uint64_t deficit_;
};

/// Cycle-counting model of the memory-mapped rounding unit.
///
/// Every bus access takes one cycle. Writing the trigger register latches the
/// decoded operation and the current config, draws one random word for SR
/// ops, and makes the result readable after one rounding cycle. A
/// write-round-read sequence therefore spans 4 cycles for 64-bit arguments
/// (two writes) and 3 cycles otherwise. Writes issued while an operation is
/// in flight stall until it completes.
class Accelerator {
 public:
  /// random_width must be 8, 16 or 32.
  explicit Accelerator(std::unique_ptr<PrngStream> stream,
                       int random_width = 32);

  /// Returns the number of stall cycles inserted before the write.
  std::uint64_t write(std::uint32_t offset, std::uint32_t data);
  std::uint32_t read(std::uint32_t offset);

  /// Idle bus cycles.
  void tick(std::uint64_t cycles = 1) { cycle_ += cycles; }

  /// Cycles a read of `offset` must wait before it is valid (0 if ready).
  std::uint64_t read_deficit(std::uint32_t offset) const;

  std::uint64_t cycle() const { return cycle_; }
  std::uint32_t config() const { return config_; }
  int random_width() const { return random_width_; }
  bool busy() const { return cycle_ < busy_until_; }

 private:
  struct Block {
    std::uint32_t arg_lo = 0;
    std::uint32_t arg_hi = 0;
    std::uint32_t result = 0;
    std::uint32_t flags = 0;
    std::uint64_t ready_cycle = 0;
  };

  void trigger(int index);

  std::unique_ptr<PrngStream> stream_;
  int random_width_;
  std::uint32_t config_ = 0;
  std::uint64_t cycle_ = 0;
  std::uint64_t busy_until_ = 0;
  std::array<Block, kBlockCount> blocks_{};
};

struct ScriptStep {
  enum class Kind { kWrite, kRead, kExpect };
  Kind kind = Kind::kRead;
  std::uint32_t offset = 0;
  std::uint32_t data = 0;
  int line = 0;
};

/// Line format: `W <offset-hex> <data-hex>`, `R <offset-hex>`,
/// `E <data-hex>`, `# comment`. Blank lines are skipped. Throws
/// std::invalid_argument naming the offending line.
std::vector<ScriptStep> parse_script(std::istream& in);

struct Transaction {
  std::uint64_t cycle = 0;
  char op = 'R';
  std::uint32_t offset = 0;
  std::uint32_t data = 0;
  std::string status;
};

struct ScriptResult {
  std::vector<Transaction> log;
  bool ok = true;
  std::string error;  // diff report for the first failure
};

/// Runs steps in order. Reads of a pending result wait for it (logged as
/// "wait:N"); stalled writes log "stall:N". The first failed expectation,
/// bus error or protocol error stops the run.
ScriptResult run_script(Accelerator& unit, std::span<const ScriptStep> steps);

/// CSV with header `cycle,op,offset,data,status`; offset and data in hex.
void write_log_csv(std::ostream& out, std::span<const Transaction> log);

}  // namespace sround::accel
