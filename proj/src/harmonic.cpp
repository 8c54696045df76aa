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

#include "sround/harmonic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace sround {

std::uint64_t reciprocal_fixed(std::uint64_t i, int frac_bits) {
  if (frac_bits != 16 && frac_bits != 32) {
    throw std::invalid_argument("reciprocal fraction bits must be 16 or 32");
  }
  if (i < 2) {
    throw std::invalid_argument("reciprocal needs i >= 2 (1/1 overflows u0.Y)");
  }
  return (std::uint64_t{1} << frac_bits) / i;
}

std::string fixed_to_decimal(std::int64_t raw, int frac_bits) {
  if (frac_bits < 0 || frac_bits > 32) {
    throw std::invalid_argument("fraction bits must be in [0, 32]");
  }
  const bool negative = raw < 0;
  const unsigned __int128 mag =
      negative ? static_cast<unsigned __int128>(-static_cast<__int128>(raw))
               : static_cast<unsigned __int128>(raw);
  const unsigned __int128 one = static_cast<unsigned __int128>(1) << frac_bits;
  const auto integer = static_cast<std::uint64_t>(mag >> frac_bits);
  // frac / 2^p == frac * 5^p / 10^p, and frac * 5^p < 10^32 fits 128 bits.
  unsigned __int128 digits = mag & (one - 1);
  for (int k = 0; k < frac_bits; ++k) digits *= 5;

  std::string frac(static_cast<std::size_t>(frac_bits), '0');
  for (int k = frac_bits - 1; k >= 0; --k) {
    frac[static_cast<std::size_t>(k)] = static_cast<char>('0' + digits % 10);
    digits /= 10;
  }
  while (!frac.empty() && frac.back() == '0') frac.pop_back();

  std::string out = (negative ? "-" : "") + std::to_string(integer);
  if (!frac.empty()) out += "." + frac;
  return out;
}

double binary64_harmonic(std::uint64_t n) {
  double sum = 0.0;
  for (std::uint64_t i = 1; i <= n; ++i) sum += 1.0 / static_cast<double>(i);
  return sum;
}

void HarmonicConfig::validate() const {
  if (div_fraction_bits != 16 && div_fraction_bits != 32) {
    throw std::invalid_argument("divider must be u0.16 or u0.32");
  }
  if (sum_format.word_bits() != div_fraction_bits) {
    throw std::invalid_argument("sum format " + sum_format.to_string() +
                                " does not pair with u0." +
                                std::to_string(div_fraction_bits));
  }
  if (sum_format.fraction_bits() >= div_fraction_bits) {
    throw std::invalid_argument("sum format must keep fewer fraction bits "
                                "than the divider");
  }
  if (max_iterations < 2) {
    throw std::invalid_argument("max_iterations must be at least 2");
  }
  for (std::uint64_t c : checkpoints) {
    if (c < 1 || c > max_iterations) {
      throw std::invalid_argument("checkpoint " + std::to_string(c) +
                                  " is outside [1, max_iterations]");
    }
  }
  addend_spec().validate();
}

RoundSpec HarmonicConfig::addend_spec() const {
  RoundSpec spec;
  spec.mode = mode;
  spec.drop_bits = div_fraction_bits - sum_format.fraction_bits();
  spec.random_width = random_width;
  spec.in_signed = false;
  spec.in_bits = div_fraction_bits;
  spec.out_signed = sum_format.is_signed();
  spec.out_bits = sum_format.word_bits();
  return spec;
}

ExperimentReport run_harmonic(const HarmonicConfig& cfg) {
  cfg.validate();
  const RoundSpec spec = cfg.addend_spec();
  const int p = cfg.sum_format.fraction_bits();
  const Wide lo = cfg.sum_format.min_raw();
  const Wide hi = cfg.sum_format.max_raw();

  std::vector<std::uint64_t> marks = cfg.checkpoints;
  std::sort(marks.begin(), marks.end());
  marks.erase(std::unique(marks.begin(), marks.end()), marks.end());

  ExperimentReport report;
  report.sum_format = cfg.sum_format;
  report.mode = cfg.mode;
  report.seed = cfg.seed;

  Jkiss32 stream(cfg.seed);
  Wide sum = Wide{1} << p;
  std::size_t next_mark = 0;

  const auto record = [&](std::uint64_t i) {
    const auto raw = static_cast<std::int64_t>(sum);
    report.checkpoints.push_back(
        Checkpoint{i, raw, fixed_to_decimal(raw, p), std::ldexp(static_cast<double>(raw), -p)});
  };
  while (next_mark < marks.size() && marks[next_mark] <= 1) record(marks[next_mark++]);

  double next_point = 2.0;
  const double growth =
      cfg.trajectory_points > 1
          ? std::pow(static_cast<double>(cfg.max_iterations) / 2.0,
                     1.0 / static_cast<double>(cfg.trajectory_points - 1))
          : 0.0;

  // Convergence depends only on the addend, which repeats for long stretches.
  std::uint64_t last_live_addend = ~std::uint64_t{0};
  std::uint64_t i = 2;
  for (; i <= cfg.max_iterations; ++i) {
    const RawWord addend =
        RawWord::from_unsigned(reciprocal_fixed(i, cfg.div_fraction_bits),
                               cfg.div_fraction_bits);
    const RoundOutcome r = round(addend, spec, stream);
    const Wide rounded = r.value.value();
    if (rounded == 0 && addend.bits() != last_live_addend &&
        !can_round_to_nonzero(addend, spec)) {
      // The reciprocal only shrinks, so no later addend can be non-zero.
      report.convergence_iteration = i;
      break;
    }
    if (rounded == 0) last_live_addend = addend.bits();
    sum += rounded;
    if (sum > hi) { sum = hi; report.saturated = true; }
    if (sum < lo) { sum = lo; report.saturated = true; }

    while (next_mark < marks.size() && marks[next_mark] == i) record(marks[next_mark++]);
    if (cfg.trajectory_points > 0 && static_cast<double>(i) >= next_point) {
      report.trajectory.emplace_back(i, static_cast<std::int64_t>(sum));
      next_point = std::max(next_point * growth, static_cast<double>(i + 1));
    }
  }
  report.iterations_run = std::min(i, cfg.max_iterations);
  while (next_mark < marks.size()) record(marks[next_mark++]);
  if (cfg.trajectory_points > 0 &&
      (report.trajectory.empty() || report.trajectory.back().first < cfg.max_iterations)) {
    report.trajectory.emplace_back(cfg.max_iterations, static_cast<std::int64_t>(sum));
  }
  report.final_raw_sum = static_cast<std::int64_t>(sum);
  return report;
}

EnsembleStats run_harmonic_ensemble(const HarmonicConfig& cfg,
                                    std::span<const std::uint64_t> seeds,
                                    unsigned threads) {
  if (seeds.size() < 2) {
    throw std::invalid_argument("an ensemble needs at least two runs");
  }
  if (!is_stochastic(cfg.mode)) {
    throw std::invalid_argument("ensembles are only meaningful for SR modes");
  }
  cfg.validate();

  EnsembleStats stats;
  stats.seeds.assign(seeds.begin(), seeds.end());
  stats.final_sums.assign(seeds.size(), 0.0);

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(seeds.size()));

  const int p = cfg.sum_format.fraction_bits();
  const auto work = [&](unsigned worker) {
    for (std::size_t r = worker; r < seeds.size(); r += threads) {
      HarmonicConfig run = cfg;
      run.seed = seeds[r];
      run.trajectory_points = 0;
      const ExperimentReport rep = run_harmonic(run);
      const std::int64_t raw =
          rep.checkpoints.empty() ? rep.final_raw_sum : rep.checkpoints.back().raw_sum;
      stats.final_sums[r] = std::ldexp(static_cast<double>(raw), -p);
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work, t);
  work(0);
  for (auto& t : pool) t.join();

  const double n = static_cast<double>(seeds.size());
  stats.mean = std::accumulate(stats.final_sums.begin(), stats.final_sums.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : stats.final_sums) ss += (v - stats.mean) * (v - stats.mean);
  stats.stddev = std::sqrt(ss / (n - 1.0));
  stats.error = kBinary64Reference - stats.mean;
  return stats;
}

EnsembleStats run_harmonic_ensemble(const HarmonicConfig& cfg, int runs,
                                    unsigned threads) {
  if (runs < 2) throw std::invalid_argument("an ensemble needs at least two runs");
  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(runs));
  std::iota(seeds.begin(), seeds.end(), cfg.seed);
  return run_harmonic_ensemble(cfg, seeds, threads);
}

}  // namespace sround
