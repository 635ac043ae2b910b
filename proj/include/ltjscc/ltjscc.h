// Copyright 2026 The ltjscc Authors
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

#ifndef LTJSCC_LTJSCC_H
#define LTJSCC_LTJSCC_H

#include <stddef.h>
#include <stdint.h>

#if defined(LTJSCC_BUILDING_LIBRARY)
#define LTJ_API __attribute__((visibility("default")))
#else
#define LTJ_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ltj_status {
  LTJ_OK = 0,
  LTJ_ERR_INTERNAL = 1,
  LTJ_ERR_CONFIG = 2,
  LTJ_ERR_PARSE = 3,
  LTJ_ERR_INFEASIBLE = 4,
  LTJ_ERR_STRUCTURAL = 5,
  LTJ_ERR_ARGUMENT = 6
} ltj_status;

typedef struct ltj_config ltj_config;
typedef struct ltj_block ltj_block;

/* Message of the most recent failure on the calling thread. */
LTJ_API const char *ltj_last_error(void);
LTJ_API const char *ltj_version(void);

/* Lower and upper end of the achievable interval reported by the most recent
 * LTJ_ERR_INFEASIBLE on the calling thread. */
LTJ_API ltj_status ltj_last_infeasible_interval(double *low, double *high);

LTJ_API ltj_status ltj_config_create(ltj_config **out);
LTJ_API ltj_status ltj_config_load(const char *path, ltj_config **out);
LTJ_API ltj_status ltj_config_set(ltj_config *config, const char *key,
                                  const char *value);
LTJ_API ltj_status ltj_config_validate(const ltj_config *config);
LTJ_API void ltj_config_destroy(ltj_config *config);

LTJ_API ltj_status ltj_block_generate(const ltj_config *config,
                                      ltj_block **out);
LTJ_API ltj_status ltj_block_load(const char *path, double mu_floor,
                                  ltj_block **out);
LTJ_API ltj_status ltj_block_save(const ltj_block *block, const char *path,
                                  int binary);
LTJ_API size_t ltj_block_size(const ltj_block *block);
/* Copies up to `capacity` entries; either output may be NULL. */
LTJ_API ltj_status ltj_block_copy(const ltj_block *block, uint8_t *bits,
                                  double *mu, size_t capacity);
LTJ_API void ltj_block_destroy(ltj_block *block);

LTJ_API ltj_status ltj_capacity(double sigma2, double *out);
LTJ_API ltj_status ltj_channel_tanh_mean(double sigma2, double *out);
LTJ_API ltj_status ltj_predicted_complexity(const ltj_config *config,
                                            size_t n, double eta,
                                            double *out);

/* BP decoding on an explicit graph. Output o uses the inputs
 * indices[offsets[o] .. offsets[o + 1]); offsets has n + 1 entries.
 * `marginals` and `soft_bits` (either may be NULL) receive k values. */
LTJ_API ltj_status ltj_decode(size_t k, const double *mu, size_t n,
                              const double *channel_llr,
                              const uint32_t *offsets, const uint32_t *indices,
                              double eta, double *marginals, double *soft_bits,
                              uint64_t *op_count);

/* Subcommands. A NULL output path writes to standard output. */
LTJ_API ltj_status ltj_cmd_generate(const ltj_config *config,
                                    const char *out_path, int binary);
LTJ_API ltj_status ltj_cmd_design(const ltj_config *config,
                                  const char *source_path,
                                  const char *out_path);
LTJ_API ltj_status ltj_cmd_encode(const ltj_config *config,
                                  const char *source_path,
                                  const char *out_path,
                                  const char *channel_out_path);
LTJ_API ltj_status ltj_cmd_decode(const ltj_config *config,
                                  const char *symbols_path,
                                  const char *priors_path,
                                  const char *out_path,
                                  const char *trace_path);
LTJ_API ltj_status ltj_cmd_simulate(const ltj_config *config,
                                    const char *out_path);
LTJ_API ltj_status ltj_cmd_sweep(const ltj_config *config,
                                 const char *out_path);

/* Writes the documented configuration keys into `buffer` and returns the
 * length needed including the terminator. */
LTJ_API size_t ltj_config_schema(char *buffer, size_t capacity);

#ifdef __cplusplus
}
#endif

#endif
