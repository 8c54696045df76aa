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
#include <vector>

namespace sround {

struct OracleResult {
  std::string suite;
  std::uint64_t cases = 0;
  std::uint64_t failures = 0;
  std::string first_counterexample;
  double seconds = 0.0;

  bool passed() const { return failures == 0 && cases > 0; }
};

/// Names accepted by run_oracles, besides "all".
const std::vector<std::string>& oracle_suites();

/// Exhaustive and differential property suites:
///   unbiased       SR mean over all 2^n draws equals x / 2^n (16-bit x, n <= 12)
///   equivalence    comparison and addition SR round up for exactly r draws
///   rn             nearest-ties-up against exact rational rounding
///   limited-width  round-up probability within 2^-w of r / 2^n, w in {4, 8}
///   bf16           widening round trip, SR round-up counts, RN tie
///   sim            accelerator model against library calls, and latencies
///   prng           reproducibility and per-bit frequency of JKISS32
/// Throws std::invalid_argument for an unknown selection.
std::vector<OracleResult> run_oracles(std::string_view selection,
                                      std::uint64_t seed = 1);

}  // namespace sround
