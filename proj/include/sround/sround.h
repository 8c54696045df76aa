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

/* C interface to the sround library.
 *
 * All functions return an sround_status. On failure, sround_last_error()
 * returns a message for the calling thread that stays valid until the next
 * call into the library from that thread. Handles are opaque and owned by the
 * caller; destroy functions accept NULL.
 */
#ifndef SROUND_SROUND_H_
#define SROUND_SROUND_H_

#include <stddef.h>
#include <stdint.h>

#if defined(SROUND_BUILDING_LIBRARY)
#define SROUND_API __attribute__((visibility("default")))
#else
#define SROUND_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sround_status {
  SROUND_OK = 0,
  SROUND_ERR_INVALID_ARGUMENT = 1,
  SROUND_ERR_BUS = 2,         /* unmapped or read-only accelerator offset */
  SROUND_ERR_PROTOCOL = 3,    /* result read before it was valid */
  SROUND_ERR_EXPECTATION = 4, /* a script expectation failed */
  SROUND_ERR_IO = 5,
  SROUND_ERR_PARSE = 6,
  SROUND_ERR_INTERNAL = 7
} sround_status;

typedef enum sround_mode {
  SROUND_MODE_SR_COMPARISON = 0,
  SROUND_MODE_SR_ADDITION = 1,
  SROUND_MODE_RN_TIES_UP = 2,
  SROUND_MODE_RD_TRUNCATE = 3
} sround_mode;

typedef enum sround_float_mode {
  SROUND_FLOAT_RN_TIES_UP = 0,
  SROUND_FLOAT_SR = 1
} sround_float_mode;

typedef struct sround_format {
  int is_signed;
  int integer_bits;
  int fraction_bits;
  int word_bits;
} sround_format;

typedef struct sround_round_spec {
  sround_mode mode;
  int drop_bits;    /* 1..32 */
  int random_width; /* 1..32 */
  int in_signed;
  int out_signed;
  int in_bits;  /* 16, 32, 64 */
  int out_bits; /* 16, 32 */
} sround_round_spec;

typedef struct sround_round_outcome {
  uint64_t bits; /* result, sign/zero extended to 64 bits */
  int64_t value; /* the same result as an integer */
  int rounded_up;
  int saturated;
} sround_round_outcome;

typedef struct sround_prng sround_prng;
typedef struct sround_accel sround_accel;
typedef struct sround_harmonic_report sround_harmonic_report;
typedef struct sround_ensemble sround_ensemble;
typedef struct sround_oracle_report sround_oracle_report;
typedef struct sround_script_result sround_script_result;

SROUND_API const char* sround_last_error(void);
SROUND_API const char* sround_version(void);

/* Formats and modes. */
SROUND_API sround_status sround_format_parse(const char* text, sround_format* out);
SROUND_API sround_status sround_mode_parse(const char* text, sround_mode* out);

/* Random streams. */
SROUND_API sround_status sround_prng_create_jkiss32(uint64_t seed, sround_prng** out);
SROUND_API sround_status sround_prng_create_constant(uint32_t value, sround_prng** out);
SROUND_API sround_status sround_prng_create_exhaustive(int bits, sround_prng** out);
SROUND_API void sround_prng_destroy(sround_prng* stream);
SROUND_API sround_status sround_prng_next(sround_prng* stream, uint32_t* out);
SROUND_API sround_status sround_prng_reseed(sround_prng* stream, uint64_t seed);

/* Fixed-point rounding. `input` is a raw pattern; only the low in_bits bits
 * are used. `stream` may be NULL for RN and RD. */
SROUND_API sround_status sround_round(uint64_t input, const sround_round_spec* spec,
                                      sround_prng* stream, sround_round_outcome* out);

/* binary32 <-> bfloat16. `stream` may be NULL for RN. */
SROUND_API sround_status sround_b32_to_bf16(uint32_t bits, sround_float_mode mode,
                                            int random_width, sround_prng* stream,
                                            uint16_t* out);
SROUND_API uint32_t sround_bf16_to_b32(uint16_t bits);

/* Accelerator model. The model owns a JKISS32 stream seeded with `seed`.
 * random_width is 8, 16 or 32. */
SROUND_API sround_status sround_accel_create(uint64_t seed, int random_width,
                                             sround_accel** out);
SROUND_API void sround_accel_destroy(sround_accel* unit);
SROUND_API sround_status sround_accel_write(sround_accel* unit, uint32_t offset,
                                            uint32_t data, uint64_t* stall_cycles);
SROUND_API sround_status sround_accel_read(sround_accel* unit, uint32_t offset,
                                           uint32_t* out);
SROUND_API sround_status sround_accel_tick(sround_accel* unit, uint64_t cycles);
SROUND_API uint64_t sround_accel_cycle(const sround_accel* unit);
/* Offset of the register block for (family, mode, signedness), where family
 * is one of "fix64to32", "fix32to32", "fix32to16", "fix16to16", "b32tobf16"
 * and mode is "sr" or "rn". */
SROUND_API sround_status sround_accel_block_offset(const char* family, const char* mode,
                                                   int is_signed, uint32_t* out);

/* Runs a stimulus script (see parse format in the README) against `unit`.
 * Returns SROUND_ERR_EXPECTATION, _BUS or _PROTOCOL if the run stopped early;
 * the result handle is still produced in that case. */
SROUND_API sround_status sround_accel_run_script(sround_accel* unit, const char* script_text,
                                                 sround_script_result** out);
SROUND_API size_t sround_script_result_size(const sround_script_result* result);
SROUND_API sround_status sround_script_result_entry(const sround_script_result* result,
                                                    size_t index, uint64_t* cycle, char* op,
                                                    uint32_t* offset, uint32_t* data,
                                                    const char** status);
SROUND_API const char* sround_script_result_error(const sround_script_result* result);
/* CSV: cycle,op,offset,data,status. */
SROUND_API sround_status sround_script_result_write_csv(const sround_script_result* result,
                                                        const char* path);
SROUND_API void sround_script_result_destroy(sround_script_result* result);

/* Harmonic series experiment. */
typedef struct sround_harmonic_config {
  const char* sum_format; /* "s16.15" or "s8.7" */
  sround_mode mode;
  uint64_t seed;
  int random_width;
  uint64_t max_iterations;
  const uint64_t* checkpoints; /* may be NULL: defaults to max_iterations */
  size_t checkpoint_count;
  size_t trajectory_points; /* 0 for none */
} sround_harmonic_config;

SROUND_API sround_status sround_harmonic_run(const sround_harmonic_config* config,
                                             sround_harmonic_report** out);
SROUND_API void sround_harmonic_report_destroy(sround_harmonic_report* report);
/* Returns 1 and sets *iteration if the run converged, else 0. */
SROUND_API int sround_harmonic_convergence(const sround_harmonic_report* report,
                                           uint64_t* iteration);
SROUND_API int sround_harmonic_saturated(const sround_harmonic_report* report);
SROUND_API size_t sround_harmonic_checkpoint_count(const sround_harmonic_report* report);
SROUND_API sround_status sround_harmonic_checkpoint(const sround_harmonic_report* report,
                                                    size_t index, uint64_t* iteration,
                                                    int64_t* raw_sum, double* value,
                                                    const char** decimal);
SROUND_API size_t sround_harmonic_trajectory_size(const sround_harmonic_report* report);
SROUND_API sround_status sround_harmonic_trajectory_point(const sround_harmonic_report* report,
                                                          size_t index, uint64_t* iteration,
                                                          double* value);

/* SR ensemble over seeds config->seed, config->seed + 1, ... */
SROUND_API sround_status sround_harmonic_ensemble(const sround_harmonic_config* config, int runs,
                                                  sround_ensemble** out);
SROUND_API void sround_ensemble_destroy(sround_ensemble* ensemble);
SROUND_API sround_status sround_ensemble_stats(const sround_ensemble* ensemble, double* mean,
                                               double* stddev, double* error);
SROUND_API size_t sround_ensemble_size(const sround_ensemble* ensemble);
SROUND_API sround_status sround_ensemble_run(const sround_ensemble* ensemble, size_t index,
                                             uint64_t* seed, double* final_sum);

/* Property suites: "all" or one of the names from sround_oracle_suite_name. */
SROUND_API size_t sround_oracle_suite_count(void);
SROUND_API const char* sround_oracle_suite_name(size_t index);
SROUND_API sround_status sround_oracle_run(const char* selection, uint64_t seed,
                                           sround_oracle_report** out);
SROUND_API void sround_oracle_report_destroy(sround_oracle_report* report);
SROUND_API size_t sround_oracle_report_size(const sround_oracle_report* report);
SROUND_API sround_status sround_oracle_report_entry(const sround_oracle_report* report,
                                                    size_t index, const char** suite,
                                                    uint64_t* cases, uint64_t* failures,
                                                    const char** counterexample,
                                                    double* seconds);

/* Reference double-precision recursive harmonic sum of 1/i, i = 1..n. */
SROUND_API double sround_binary64_harmonic(uint64_t n);
SROUND_API double sround_binary64_reference(void);

#ifdef __cplusplus
}
#endif

#endif /* SROUND_SROUND_H_ */
