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

// Command-line front end. Links only the C interface.

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sround/sround.h"

namespace {

struct PrngDeleter {
  void operator()(sround_prng* p) const { sround_prng_destroy(p); }
};
struct AccelDeleter {
  void operator()(sround_accel* p) const { sround_accel_destroy(p); }
};
struct ScriptDeleter {
  void operator()(sround_script_result* p) const { sround_script_result_destroy(p); }
};
struct ReportDeleter {
  void operator()(sround_harmonic_report* p) const { sround_harmonic_report_destroy(p); }
};
struct EnsembleDeleter {
  void operator()(sround_ensemble* p) const { sround_ensemble_destroy(p); }
};
struct OracleDeleter {
  void operator()(sround_oracle_report* p) const { sround_oracle_report_destroy(p); }
};

class CliError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void check(sround_status status) {
  if (status != SROUND_OK) throw CliError(sround_last_error());
}

std::uint64_t parse_integer(const std::string& text) {
  const bool negative = !text.empty() && text[0] == '-';
  const std::string body = negative ? text.substr(1) : text;
  std::size_t used = 0;
  std::uint64_t v = 0;
  try {
    v = std::stoull(body, &used, 0);
  } catch (const std::exception&) {
    throw CliError("not an integer: '" + text + "'");
  }
  if (used != body.size()) throw CliError("not an integer: '" + text + "'");
  return negative ? ~v + 1 : v;
}

// "s64:s32" -> (in_signed, in_bits, out_signed, out_bits)
void parse_path(const std::string& text, sround_round_spec& spec) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw CliError("format must look like s64:s32");
  const auto side = [&](const std::string& s, int& is_signed, int& bits) {
    if (s.size() < 3 || (s[0] != 's' && s[0] != 'u')) {
      throw CliError("bad format side '" + s + "'");
    }
    is_signed = s[0] == 's' ? 1 : 0;
    bits = std::atoi(s.c_str() + 1);
  };
  side(text.substr(0, colon), spec.in_signed, spec.in_bits);
  side(text.substr(colon + 1), spec.out_signed, spec.out_bits);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CliError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::uint64_t> parse_checkpoints(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) out.push_back(parse_integer(item));
  }
  return out;
}

int cmd_round(const std::vector<std::string>& values, const std::string& format,
              const std::string& mode_text, int bits, std::uint64_t seed,
              int random_width, int repeat) {
  std::unique_ptr<sround_prng, PrngDeleter> stream;
  {
    sround_prng* raw = nullptr;
    check(sround_prng_create_jkiss32(seed, &raw));
    stream.reset(raw);
  }

  if (format == "b32:bf16") {
    const auto mode = mode_text == "rn" ? SROUND_FLOAT_RN_TIES_UP : SROUND_FLOAT_SR;
    for (const std::string& v : values) {
      const auto bits32 = static_cast<std::uint32_t>(parse_integer(v));
      for (int k = 0; k < repeat; ++k) {
        std::uint16_t out = 0;
        check(sround_b32_to_bf16(bits32, mode, random_width, stream.get(), &out));
        std::printf("0x%08" PRIx32 " -> 0x%04" PRIx16 "\n", bits32, out);
      }
    }
    return 0;
  }

  sround_round_spec spec{};
  check(sround_mode_parse(mode_text.c_str(), &spec.mode));
  spec.drop_bits = bits;
  spec.random_width = random_width;
  parse_path(format, spec);
  std::printf("input,result_hex,result,rounded_up,saturated\n");
  for (const std::string& v : values) {
    const std::uint64_t input = parse_integer(v);
    for (int k = 0; k < repeat; ++k) {
      sround_round_outcome out{};
      check(sround_round(input, &spec, stream.get(), &out));
      const std::uint64_t mask =
          spec.out_bits >= 64 ? ~0ull : (std::uint64_t{1} << spec.out_bits) - 1;
      std::printf("%s,0x%0*" PRIx64 ",%" PRId64 ",%d,%d\n", v.c_str(),
                  spec.out_bits / 4, out.bits & mask, out.value, out.rounded_up,
                  out.saturated);
    }
  }
  return 0;
}

int cmd_bf16(const std::vector<std::string>& values, const std::string& mode_text,
             std::uint64_t seed, int random_width) {
  return cmd_round(values, "b32:bf16", mode_text, 16, seed, random_width, 1);
}

struct HarmonicOptions {
  std::string sum_format = "s16.15";
  std::string mode = "sr";
  std::uint64_t iters = 5'000'000;
  int runs = 1;
  std::uint64_t seed = 1;
  int random_width = 32;
  std::string checkpoints;
  std::string csv;
  std::string plot;
  bool until_converged = false;
};

int cmd_harmonic(HarmonicOptions opt) {
  sround_format fmt{};
  check(sround_format_parse(opt.sum_format.c_str(), &fmt));
  sround_harmonic_config cfg{};
  cfg.sum_format = opt.sum_format.c_str();
  check(sround_mode_parse(opt.mode.c_str(), &cfg.mode));
  cfg.seed = opt.seed;
  cfg.random_width = opt.random_width;
  if (opt.until_converged) {
    // The last non-zero reciprocal is at i = 2^word_bits.
    opt.iters = (std::uint64_t{1} << fmt.word_bits) + 2;
  }
  cfg.max_iterations = opt.iters;
  std::vector<std::uint64_t> marks = parse_checkpoints(opt.checkpoints);
  if (marks.empty()) marks.push_back(std::min<std::uint64_t>(opt.iters, 5'000'000));
  std::sort(marks.begin(), marks.end());
  cfg.checkpoints = marks.data();
  cfg.checkpoint_count = marks.size();
  cfg.trajectory_points = opt.plot.empty() ? 0 : 400;

  // The quoted constant at the standard checkpoint, a fresh recursive sum
  // elsewhere.
  const auto reference_at = [](std::uint64_t i) {
    return i == 5'000'000 ? sround_binary64_reference() : sround_binary64_harmonic(i);
  };
  if (opt.runs > 1) {
    sround_ensemble* raw = nullptr;
    check(sround_harmonic_ensemble(&cfg, opt.runs, &raw));
    std::unique_ptr<sround_ensemble, EnsembleDeleter> ens(raw);
    double mean = 0, stddev = 0, error = 0;
    check(sround_ensemble_stats(ens.get(), &mean, &stddev, &error));
    const double reference = reference_at(marks.back());
    error = reference - mean;
    std::printf("format=%s mode=%s runs=%d iteration=%" PRIu64 "\n",
                opt.sum_format.c_str(), opt.mode.c_str(), opt.runs, marks.back());
    std::printf("mean=%.6f stddev=%.6f error_vs_binary64(%.3f)=%.6f\n", mean, stddev,
                reference, error);
    if (!opt.csv.empty()) {
      std::ofstream out(opt.csv);
      if (!out) throw CliError("cannot open " + opt.csv);
      out << "run,seed,final_sum\n";
      for (std::size_t k = 0; k < sround_ensemble_size(ens.get()); ++k) {
        std::uint64_t seed = 0;
        double sum = 0;
        check(sround_ensemble_run(ens.get(), k, &seed, &sum));
        char line[96];
        std::snprintf(line, sizeof line, "%zu,%" PRIu64 ",%.17g\n", k, seed, sum);
        out << line;
      }
    }
    return 0;
  }

  sround_harmonic_report* raw = nullptr;
  check(sround_harmonic_run(&cfg, &raw));
  std::unique_ptr<sround_harmonic_report, ReportDeleter> report(raw);
  std::uint64_t converged = 0;
  const bool has_converged = sround_harmonic_convergence(report.get(), &converged) != 0;
  std::printf("format=%s mode=%s seed=%" PRIu64 "\n", opt.sum_format.c_str(),
              opt.mode.c_str(), opt.seed);
  if (has_converged) {
    std::printf("converged_at=%" PRIu64 "\n", converged);
  } else {
    std::printf("converged_at=not-converged (within %" PRIu64 " iterations)\n", opt.iters);
  }
  if (sround_harmonic_saturated(report.get())) std::printf("sum saturated\n");

  std::ofstream csv;
  if (!opt.csv.empty()) {
    csv.open(opt.csv);
    if (!csv) throw CliError("cannot open " + opt.csv);
    csv << "iteration,raw_sum,sum,error_vs_binary64,format,mode,seed\n";
  }
  for (std::size_t k = 0; k < sround_harmonic_checkpoint_count(report.get()); ++k) {
    std::uint64_t i = 0;
    std::int64_t raw_sum = 0;
    double value = 0;
    const char* decimal = nullptr;
    check(sround_harmonic_checkpoint(report.get(), k, &i, &raw_sum, &value, &decimal));
    const double reference = reference_at(i);
    std::printf("i=%" PRIu64 " sum=%s error_vs_binary64=%.6f\n", i, decimal,
                reference - value);
    if (csv.is_open()) {
      csv << i << ',' << raw_sum << ',' << decimal << ',' << (reference - value) << ','
          << opt.sum_format << ',' << opt.mode << ',' << opt.seed << '\n';
    }
  }
  if (!opt.plot.empty()) {
    std::ofstream plot(opt.plot);
    if (!plot) throw CliError("cannot open " + opt.plot);
    plot << "iteration,sum\n";
    for (std::size_t k = 0; k < sround_harmonic_trajectory_size(report.get()); ++k) {
      std::uint64_t i = 0;
      double value = 0;
      check(sround_harmonic_trajectory_point(report.get(), k, &i, &value));
      char line[64];
      std::snprintf(line, sizeof line, "%" PRIu64 ",%.17g\n", i, value);
      plot << line;
    }
  }
  return 0;
}

int cmd_sim(const std::string& script, std::uint64_t seed, int random_width,
            const std::string& log_path) {
  const std::string text = read_file(script);
  sround_accel* raw_unit = nullptr;
  check(sround_accel_create(seed, random_width, &raw_unit));
  std::unique_ptr<sround_accel, AccelDeleter> unit(raw_unit);

  sround_script_result* raw = nullptr;
  const sround_status status = sround_accel_run_script(unit.get(), text.c_str(), &raw);
  if (raw == nullptr) throw CliError(sround_last_error());
  std::unique_ptr<sround_script_result, ScriptDeleter> result(raw);

  if (!log_path.empty()) {
    check(sround_script_result_write_csv(result.get(), log_path.c_str()));
  } else {
    std::printf("cycle,op,offset,data,status\n");
    for (std::size_t k = 0; k < sround_script_result_size(result.get()); ++k) {
      std::uint64_t cycle = 0;
      char op = '?';
      std::uint32_t offset = 0, data = 0;
      const char* st = nullptr;
      check(sround_script_result_entry(result.get(), k, &cycle, &op, &offset, &data, &st));
      std::printf("%" PRIu64 ",%c,0x%08" PRIx32 ",0x%08" PRIx32 ",%s\n", cycle, op, offset,
                  data, st);
    }
  }
  if (status != SROUND_OK) {
    std::fprintf(stderr, "sim failed: %s\n", sround_script_result_error(result.get()));
    return 1;
  }
  return 0;
}

int cmd_oracle(const std::string& suite, std::uint64_t seed) {
  sround_oracle_report* raw = nullptr;
  check(sround_oracle_run(suite.c_str(), seed, &raw));
  std::unique_ptr<sround_oracle_report, OracleDeleter> report(raw);
  bool all_passed = true;
  for (std::size_t k = 0; k < sround_oracle_report_size(report.get()); ++k) {
    const char* name = nullptr;
    const char* example = nullptr;
    std::uint64_t cases = 0, failures = 0;
    double seconds = 0;
    check(sround_oracle_report_entry(report.get(), k, &name, &cases, &failures, &example,
                                     &seconds));
    const bool ok = failures == 0 && cases > 0;
    all_passed = all_passed && ok;
    std::printf("%-14s %s  cases=%" PRIu64 " failures=%" PRIu64 " (%.2fs)\n", name,
                ok ? "PASS" : "FAIL", cases, failures, seconds);
    if (!ok) std::printf("  first counterexample: %s\n", example);
  }
  return all_passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic rounding toolkit"};
  app.require_subcommand(1);

  // round
  std::vector<std::string> round_values;
  std::string round_format = "s64:s32";
  std::string round_mode = "sr";
  int round_bits = 16;
  std::uint64_t round_seed = 1;
  int round_width = 32;
  int round_repeat = 1;
  auto* round_cmd = app.add_subcommand("round", "Round raw fixed-point words (or b32 patterns)");
  round_cmd->add_option("values", round_values, "Raw input patterns (hex or decimal)")
      ->required();
  round_cmd->add_option("--format", round_format,
                        "Input:output words, e.g. s64:s32, u32:s16, s16:s16, b32:bf16")
      ->capture_default_str();
  round_cmd->add_option("--mode", round_mode, "sr, sr-cmp, rn or rd")->capture_default_str();
  round_cmd->add_option("--bits", round_bits, "Number of low bits to drop (1..32)")
      ->capture_default_str();
  round_cmd->add_option("--seed", round_seed, "JKISS32 seed")->capture_default_str();
  round_cmd->add_option("--random-width", round_width, "Random bits used by SR")
      ->capture_default_str();
  round_cmd->add_option("--repeat", round_repeat, "Round each value this many times")
      ->check(CLI::PositiveNumber);

  // bf16
  std::vector<std::string> bf16_values;
  std::string bf16_mode = "rn";
  std::uint64_t bf16_seed = 1;
  int bf16_width = 32;
  auto* bf16_cmd = app.add_subcommand("bf16", "Round binary32 hex patterns to bfloat16");
  bf16_cmd->add_option("values", bf16_values, "binary32 patterns, e.g. 0x3f808000")->required();
  bf16_cmd->add_option("--mode", bf16_mode, "rn or sr")->capture_default_str();
  bf16_cmd->add_option("--seed", bf16_seed, "JKISS32 seed")->capture_default_str();
  bf16_cmd->add_option("--random-width", bf16_width, "Random bits used by SR");

  // harmonic
  HarmonicOptions h;
  auto* harmonic_cmd = app.add_subcommand("harmonic", "Harmonic series stagnation experiment");
  harmonic_cmd->add_option("--sum-format", h.sum_format, "s16.15 or s8.7")->capture_default_str();
  harmonic_cmd->add_option("--mode", h.mode, "sr, sr-cmp, rn or rd")->capture_default_str();
  harmonic_cmd->add_option("--iters", h.iters, "Last series index")->capture_default_str();
  harmonic_cmd->add_option("--runs", h.runs, "Runs with seeds seed, seed+1, ... (SR only)")
      ->capture_default_str();
  harmonic_cmd->add_option("--seed", h.seed, "JKISS32 seed of the first run")
      ->capture_default_str();
  harmonic_cmd->add_option("--random-width", h.random_width, "Random bits used by SR");
  harmonic_cmd->add_option("--checkpoints", h.checkpoints, "Comma-separated iterations");
  harmonic_cmd->add_option("--csv", h.csv, "Write checkpoint (or per-run) CSV here");
  harmonic_cmd->add_option("--plot", h.plot, "Write (iteration,sum) curve points here");
  harmonic_cmd->add_flag("--until-converged", h.until_converged,
                         "Run until the addends can no longer be non-zero (long for s16.15)");

  // sim
  std::string sim_script, sim_log;
  std::uint64_t sim_seed = 1;
  int sim_width = 32;
  auto* sim_cmd = app.add_subcommand("sim", "Drive the accelerator model with a stimulus script");
  sim_cmd->add_option("--script", sim_script, "Stimulus script")->required();
  sim_cmd->add_option("--seed", sim_seed, "JKISS32 seed of the model's stream")
      ->capture_default_str();
  sim_cmd->add_option("--random-width", sim_width, "8, 16 or 32")->capture_default_str();
  sim_cmd->add_option("--log", sim_log, "Transaction log CSV (default: stdout)");

  // oracle
  std::string oracle_suite = "all";
  std::uint64_t oracle_seed = 1;
  auto* oracle_cmd = app.add_subcommand("oracle", "Run exhaustive property suites");
  oracle_cmd->add_option("--suite", oracle_suite, "Suite name or 'all'")->capture_default_str();
  oracle_cmd->add_option("--seed", oracle_seed, "Seed for sampled suites");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*round_cmd) {
      return cmd_round(round_values, round_format, round_mode, round_bits, round_seed,
                       round_width, round_repeat);
    }
    if (*bf16_cmd) return cmd_bf16(bf16_values, bf16_mode, bf16_seed, bf16_width);
    if (*harmonic_cmd) return cmd_harmonic(h);
    if (*sim_cmd) return cmd_sim(sim_script, sim_seed, sim_width, sim_log);
    if (*oracle_cmd) return cmd_oracle(oracle_suite, oracle_seed);
  } catch (const CliError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
