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

#include "sround/sround.h"

#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "sround/accelerator.hpp"
#include "sround/bfloat16.hpp"
#include "sround/fixed_point.hpp"
#include "sround/harmonic.hpp"
#include "sround/oracles.hpp"
#include "sround/prng.hpp"
#include "sround/rounding.hpp"

struct sround_prng {
  std::unique_ptr<sround::PrngStream> stream;
};

struct sround_accel {
  sround::accel::Accelerator unit;
};

struct sround_script_result {
  sround::accel::ScriptResult result;
};

struct sround_harmonic_report {
  sround::ExperimentReport report;
};

struct sround_ensemble {
  sround::EnsembleStats stats;
};

struct sround_oracle_report {
  std::vector<sround::OracleResult> results;
};

namespace {

thread_local std::string g_last_error;

sround_status fail(sround_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Runs `body`, mapping exceptions onto status codes.
template <typename Body>
sround_status guard(Body&& body) {
  g_last_error.clear();
  try {
    return body();
  } catch (const sround::accel::BusError& e) {
    return fail(SROUND_ERR_BUS, e.what());
  } catch (const sround::accel::ProtocolError& e) {
    return fail(SROUND_ERR_PROTOCOL, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(SROUND_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return fail(SROUND_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(SROUND_ERR_INTERNAL, "unknown error");
  }
}

sround_status null_arg(const char* what) {
  return fail(SROUND_ERR_INVALID_ARGUMENT, std::string(what) + " is NULL");
}

sround::RoundMode to_mode(sround_mode mode) {
  switch (mode) {
    case SROUND_MODE_SR_COMPARISON: return sround::RoundMode::kSrComparison;
    case SROUND_MODE_SR_ADDITION: return sround::RoundMode::kSrAddition;
    case SROUND_MODE_RN_TIES_UP: return sround::RoundMode::kRnTiesUp;
    case SROUND_MODE_RD_TRUNCATE: return sround::RoundMode::kRdTruncate;
  }
  throw std::invalid_argument("unknown rounding mode " + std::to_string(mode));
}

sround_mode from_mode(sround::RoundMode mode) {
  switch (mode) {
    case sround::RoundMode::kSrComparison: return SROUND_MODE_SR_COMPARISON;
    case sround::RoundMode::kSrAddition: return SROUND_MODE_SR_ADDITION;
    case sround::RoundMode::kRnTiesUp: return SROUND_MODE_RN_TIES_UP;
    case sround::RoundMode::kRdTruncate: return SROUND_MODE_RD_TRUNCATE;
  }
  return SROUND_MODE_SR_ADDITION;
}

sround::HarmonicConfig to_config(const sround_harmonic_config& c) {
  if (c.sum_format == nullptr) throw std::invalid_argument("sum_format is NULL");
  sround::HarmonicConfig cfg;
  cfg.sum_format = sround::FixedFormat::parse(c.sum_format);
  cfg.div_fraction_bits = cfg.sum_format.word_bits();
  cfg.mode = to_mode(c.mode);
  cfg.seed = c.seed;
  cfg.random_width = c.random_width;
  cfg.max_iterations = c.max_iterations;
  if (c.checkpoints != nullptr && c.checkpoint_count > 0) {
    cfg.checkpoints.assign(c.checkpoints, c.checkpoints + c.checkpoint_count);
  } else {
    cfg.checkpoints = {c.max_iterations};
  }
  cfg.trajectory_points = c.trajectory_points;
  return cfg;
}

sround::accel::Family parse_family(const std::string& name) {
  using sround::accel::Family;
  if (name == "fix64to32") return Family::kFix64To32;
  if (name == "fix32to32") return Family::kFix32To32;
  if (name == "fix32to16") return Family::kFix32To16;
  if (name == "fix16to16") return Family::kFix16To16;
  if (name == "b32tobf16") return Family::kB32ToBf16;
  throw std::invalid_argument("unknown accelerator family '" + name + "'");
}

}  // namespace

extern "C" {

const char* sround_last_error(void) { return g_last_error.c_str(); }

const char* sround_version(void) { return "0.1.0"; }

sround_status sround_format_parse(const char* text, sround_format* out) {
  if (text == nullptr) return null_arg("text");
  if (out == nullptr) return null_arg("out");
  return guard([&] {
    const auto f = sround::FixedFormat::parse(text);
    *out = sround_format{f.is_signed() ? 1 : 0, f.integer_bits(), f.fraction_bits(),
                         f.word_bits()};
    return SROUND_OK;
  });
}

sround_status sround_mode_parse(const char* text, sround_mode* out) {
  if (text == nullptr) return null_arg("text");
  if (out == nullptr) return null_arg("out");
  return guard([&] {
    *out = from_mode(sround::parse_round_mode(text));
    return SROUND_OK;
  });
}

sround_status sround_prng_create_jkiss32(uint64_t seed, sround_prng** out) {
  if (out == nullptr) return null_arg("out");
  return guard([&] {
    *out = new sround_prng{std::make_unique<sround::Jkiss32>(seed)};
    return SROUND_OK;
  });
}

sround_status sround_prng_create_constant(uint32_t value, sround_prng** out) {
  if (out == nullptr) return null_arg("out");
  return guard([&] {
    *out = new sround_prng{std::make_unique<sround::ConstantStream>(value)};
    return SROUND_OK;
  });
}

sround_status sround_prng_create_exhaustive(int bits, sround_prng** out) {
  if (out == nullptr) return null_arg("out");
  return guard([&] {
    *out = new sround_prng{std::make_unique<sround::ExhaustiveStream>(bits)};
    return SROUND_OK;
  });
}

void sround_prng_destroy(sround_prng* stream) { delete stream; }

sround_status sround_prng_next(sround_prng* stream, uint32_t* out) {
  if (stream == nullptr) return null_arg("stream");
  if (out == nullptr) return null_arg("out");
  *out = stream->stream->next_u32();
  return SROUND_OK;
}

sround_status sround_prng_reseed(sround_prng* stream, uint64_t seed) {
  if (stream == nullptr) return null_arg("stream");
  stream->stream->reseed(seed);
  return SROUND_OK;
}

sround_status sround_round(uint64_t input, const sround_round_spec* spec,
                           sround_prng* stream, sround_round_outcome* out) {
  if (spec == nullptr) return null_arg("spec");
  if (out == nullptr) return null_arg("out");
  return guard([&] {
    sround::RoundSpec s;
    s.mode = to_mode(spec->mode);
    s.drop_bits = spec->drop_bits;
    s.random_width = spec->random_width;
    s.in_signed = spec->in_signed != 0;
    s.out_signed = spec->out_signed != 0;
    s.in_bits = spec->in_bits;
    s.out_bits = spec->out_bits;
    s.validate();
    if (sround::is_stochastic(s.mode) && stream == nullptr) {
      return fail(SROUND_ERR_INVALID_ARGUMENT, "stochastic rounding needs a stream");
    }
    sround::ConstantStream unused;
    sround::PrngStream& source = stream != nullptr ? *stream->stream : unused;
    const sround::RoundOutcome r = sround::round(s.input(input), s, source);
    *out = sround_round_outcome{r.value.bits(), static_cast<int64_t>(r.value.value()),
                                r.rounded_up ? 1 : 0, r.saturated ? 1 : 0};
    return SROUND_OK;
  });
}

sround_status sround_b32_to_bf16(uint32_t bits, sround_float_mode mode, int random_width,
                                 sround_prng* stream, uint16_t* out) {
  if (out == nullptr) return null_arg("out");
  return guard([&] {
    const auto m = mode == SROUND_FLOAT_SR ? sround::FloatRoundMode::kStochastic
                                           : sround::FloatRoundMode::kNearestTiesUp;
    if (mode != SROUND_FLOAT_SR && mode != SROUND_FLOAT_RN_TIES_UP) {
      return fail(SROUND_ERR_INVALID_ARGUMENT, "unknown float rounding mode");
    }
    *out = sround::b32_to_bf16(bits, m, stream != nullptr ? stream->stream.get() : nullptr,
                               random_width);
    return SROUND_OK;
  });
}

uint32_t sround_bf16_to_b32(uint16_t bits) { return sround::bf16_to_b32(bits); }

sround_status sround_accel_create(uint64_t seed, int random_width, sround_accel** out) {
  if (out == nullptr) return null_arg("out");
  return guard([&] {
    *out = new sround_accel{
        sround::accel::Accelerator(std::make_unique<sround::Jkiss32>(seed), random_width)};
    return SROUND_OK;
  });
}

void sround_accel_destroy(sround_accel* unit) { delete unit; }

sround_status sround_accel_write(sround_accel* unit, uint32_t offset, uint32_t data,
                                 uint64_t* stall_cycles) {
  if (unit == nullptr) return null_arg("unit");
  return guard([&] {
    const uint64_t stall = unit->unit.write(offset, data);
    if (stall_cycles != nullptr) *stall_cycles = stall;
    return SROUND_OK;
  });
}

sround_status sround_accel_read(sround_accel* unit, uint32_t offset, uint32_t* out) {
  if (unit == nullptr) return null_arg("unit");
  if (out == nullptr) return null_arg("out");
  return guard([&] {
    *out = unit->unit.read(offset);
    return SROUND_OK;
  });
}

sround_status sround_accel_tick(sround_accel* unit, uint64_t cycles) {
  if (unit == nullptr) return null_arg("unit");
  unit->unit.tick(cycles);
  return SROUND_OK;
}

uint64_t sround_accel_cycle(const sround_accel* unit) {
  return unit == nullptr ? 0 : unit->unit.cycle();
}

sround_status sround_accel_block_offset(const char* family, const char* mode, int is_signed,
                                        uint32_t* out) {
  if (family == nullptr) return null_arg("family");
  if (mode == nullptr) return null_arg("mode");
  if (out == nullptr) return null_arg("out");
  return guard([&] {
    const std::string m(mode);
    if (m != "sr" && m != "rn") {
      return fail(SROUND_ERR_INVALID_ARGUMENT, "accelerator mode must be 'sr' or 'rn'");
    }
    const sround::accel::OpSelect op{
        parse_family(family),
        m == "sr" ? sround::accel::Mode::kStochastic : sround::accel::Mode::kNearest,
        is_signed != 0};
    *out = sround::accel::block_offset(op);
    return SROUND_OK;
  });
}

sround_status sround_accel_run_script(sround_accel* unit, const char* script_text,
                                      sround_script_result** out) {
  if (unit == nullptr) return null_arg("unit");
  if (script_text == nullptr) return null_arg("script_text");
  if (out == nullptr) return null_arg("out");
  *out = nullptr;
  std::vector<sround::accel::ScriptStep> steps;
  try {
    std::istringstream in(script_text);
    steps = sround::accel::parse_script(in);
  } catch (const std::exception& e) {
    return fail(SROUND_ERR_PARSE, e.what());
  }
  return guard([&] {
    auto holder = std::make_unique<sround_script_result>();
    holder->result = sround::accel::run_script(unit->unit, steps);
    sround_status status = SROUND_OK;
    if (!holder->result.ok) {
      const std::string& last = holder->result.log.back().status;
      status = last == "bus-error"        ? SROUND_ERR_BUS
               : last == "protocol-error" ? SROUND_ERR_PROTOCOL
                                          : SROUND_ERR_EXPECTATION;
      g_last_error = holder->result.error;
    }
    *out = holder.release();
    return status;
  });
}

size_t sround_script_result_size(const sround_script_result* result) {
  return result == nullptr ? 0 : result->result.log.size();
}

sround_status sround_script_result_entry(const sround_script_result* result, size_t index,
                                         uint64_t* cycle, char* op, uint32_t* offset,
                                         uint32_t* data, const char** status) {
  if (result == nullptr) return null_arg("result");
  if (index >= result->result.log.size()) {
    return fail(SROUND_ERR_INVALID_ARGUMENT, "log index out of range");
  }
  const auto& t = result->result.log[index];
  if (cycle) *cycle = t.cycle;
  if (op) *op = t.op;
  if (offset) *offset = t.offset;
  if (data) *data = t.data;
  if (status) *status = t.status.c_str();
  return SROUND_OK;
}

const char* sround_script_result_error(const sround_script_result* result) {
  return result == nullptr ? "" : result->result.error.c_str();
}

sround_status sround_script_result_write_csv(const sround_script_result* result,
                                             const char* path) {
  if (result == nullptr) return null_arg("result");
  if (path == nullptr) return null_arg("path");
  std::ofstream out(path);
  if (!out) return fail(SROUND_ERR_IO, std::string("cannot open ") + path);
  sround::accel::write_log_csv(out, result->result.log);
  return out ? SROUND_OK : fail(SROUND_ERR_IO, std::string("write failed: ") + path);
}

void sround_script_result_destroy(sround_script_result* result) { delete result; }

sround_status sround_harmonic_run(const sround_harmonic_config* config,
                                  sround_harmonic_report** out) {
  if (config == nullptr) return null_arg("config");
  if (out == nullptr) return null_arg("out");
  return guard([&] {
    *out = new sround_harmonic_report{sround::run_harmonic(to_config(*config))};
    return SROUND_OK;
  });
}

void sround_harmonic_report_destroy(sround_harmonic_report* report) { delete report; }

int sround_harmonic_convergence(const sround_harmonic_report* report, uint64_t* iteration) {
  if (report == nullptr || !report->report.convergence_iteration) return 0;
  if (iteration) *iteration = *report->report.convergence_iteration;
  return 1;
}

int sround_harmonic_saturated(const sround_harmonic_report* report) {
  return report != nullptr && report->report.saturated ? 1 : 0;
}

size_t sround_harmonic_checkpoint_count(const sround_harmonic_report* report) {
  return report == nullptr ? 0 : report->report.checkpoints.size();
}

sround_status sround_harmonic_checkpoint(const sround_harmonic_report* report, size_t index,
                                         uint64_t* iteration, int64_t* raw_sum, double* value,
                                         const char** decimal) {
  if (report == nullptr) return null_arg("report");
  if (index >= report->report.checkpoints.size()) {
    return fail(SROUND_ERR_INVALID_ARGUMENT, "checkpoint index out of range");
  }
  const auto& c = report->report.checkpoints[index];
  if (iteration) *iteration = c.iteration;
  if (raw_sum) *raw_sum = c.raw_sum;
  if (value) *value = c.value;
  if (decimal) *decimal = c.decimal.c_str();
  return SROUND_OK;
}

size_t sround_harmonic_trajectory_size(const sround_harmonic_report* report) {
  return report == nullptr ? 0 : report->report.trajectory.size();
}

sround_status sround_harmonic_trajectory_point(const sround_harmonic_report* report,
                                               size_t index, uint64_t* iteration,
                                               double* value) {
  if (report == nullptr) return null_arg("report");
  if (index >= report->report.trajectory.size()) {
    return fail(SROUND_ERR_INVALID_ARGUMENT, "trajectory index out of range");
  }
  const auto& [i, raw] = report->report.trajectory[index];
  if (iteration) *iteration = i;
  if (value) *value = std::ldexp(static_cast<double>(raw), -report->report.sum_format.fraction_bits());
  return SROUND_OK;
}

sround_status sround_harmonic_ensemble(const sround_harmonic_config* config, int runs,
                                       sround_ensemble** out) {
  if (config == nullptr) return null_arg("config");
  if (out == nullptr) return null_arg("out");
  return guard([&] {
    *out = new sround_ensemble{sround::run_harmonic_ensemble(to_config(*config), runs)};
    return SROUND_OK;
  });
}

void sround_ensemble_destroy(sround_ensemble* ensemble) { delete ensemble; }

sround_status sround_ensemble_stats(const sround_ensemble* ensemble, double* mean,
                                    double* stddev, double* error) {
  if (ensemble == nullptr) return null_arg("ensemble");
  if (mean) *mean = ensemble->stats.mean;
  if (stddev) *stddev = ensemble->stats.stddev;
  if (error) *error = ensemble->stats.error;
  return SROUND_OK;
}

size_t sround_ensemble_size(const sround_ensemble* ensemble) {
  return ensemble == nullptr ? 0 : ensemble->stats.final_sums.size();
}

sround_status sround_ensemble_run(const sround_ensemble* ensemble, size_t index,
                                  uint64_t* seed, double* final_sum) {
  if (ensemble == nullptr) return null_arg("ensemble");
  if (index >= ensemble->stats.final_sums.size()) {
    return fail(SROUND_ERR_INVALID_ARGUMENT, "run index out of range");
  }
  if (seed) *seed = ensemble->stats.seeds[index];
  if (final_sum) *final_sum = ensemble->stats.final_sums[index];
  return SROUND_OK;
}

size_t sround_oracle_suite_count(void) { return sround::oracle_suites().size(); }

const char* sround_oracle_suite_name(size_t index) {
  const auto& names = sround::oracle_suites();
  return index < names.size() ? names[index].c_str() : nullptr;
}

sround_status sround_oracle_run(const char* selection, uint64_t seed,
                                sround_oracle_report** out) {
  if (selection == nullptr) return null_arg("selection");
  if (out == nullptr) return null_arg("out");
  return guard([&] {
    *out = new sround_oracle_report{sround::run_oracles(selection, seed)};
    return SROUND_OK;
  });
}

void sround_oracle_report_destroy(sround_oracle_report* report) { delete report; }

size_t sround_oracle_report_size(const sround_oracle_report* report) {
  return report == nullptr ? 0 : report->results.size();
}

sround_status sround_oracle_report_entry(const sround_oracle_report* report, size_t index,
                                         const char** suite, uint64_t* cases,
                                         uint64_t* failures, const char** counterexample,
                                         double* seconds) {
  if (report == nullptr) return null_arg("report");
  if (index >= report->results.size()) {
    return fail(SROUND_ERR_INVALID_ARGUMENT, "suite index out of range");
  }
  const auto& r = report->results[index];
  if (suite) *suite = r.suite.c_str();
  if (cases) *cases = r.cases;
  if (failures) *failures = r.failures;
  if (counterexample) *counterexample = r.first_counterexample.c_str();
  if (seconds) *seconds = r.seconds;
  return SROUND_OK;
}

double sround_binary64_harmonic(uint64_t n) { return sround::binary64_harmonic(n); }

double sround_binary64_reference(void) { return sround::kBinary64Reference; }

}  // extern "C"
