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

#include "ltjscc/ltjscc.h"

#include "ltjscc/bp_decoder.hpp"
#include "ltjscc/channel.hpp"
#include "ltjscc/commands.hpp"
#include "ltjscc/config.hpp"
#include "ltjscc/errors.hpp"
#include "ltjscc/source_model.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <iostream>
#include <new>
#include <optional>
#include <string>

struct ltj_config {
  ltjscc::RunConfig value;
};

struct ltj_block {
  ltjscc::BitBlock value;
};

namespace {

thread_local std::string last_error;
thread_local double infeasible_low = 0.0;
thread_local double infeasible_high = 0.0;

ltj_status fail(ltj_status status, const char *message) {
  last_error = message;
  return status;
}

template <typename F> ltj_status guarded(F &&body) {
  try {
    body();
    last_error.clear();
    return LTJ_OK;
  } catch (const ltjscc::InfeasibleError &e) {
    infeasible_low = e.achievable_low();
    infeasible_high = e.achievable_high();
    return fail(LTJ_ERR_INFEASIBLE, e.what());
  } catch (const ltjscc::ConfigError &e) {
    return fail(LTJ_ERR_CONFIG, e.what());
  } catch (const ltjscc::ParseError &e) {
    return fail(LTJ_ERR_PARSE, e.what());
  } catch (const ltjscc::StructuralError &e) {
    return fail(LTJ_ERR_STRUCTURAL, e.what());
  } catch (const std::bad_alloc &) {
    return fail(LTJ_ERR_INTERNAL, "out of memory");
  } catch (const std::exception &e) {
    return fail(LTJ_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(LTJ_ERR_INTERNAL, "unknown error");
  }
}

std::optional<std::filesystem::path> opt_path(const char *p) {
  if (!p)
    return std::nullopt;
  return std::filesystem::path(p);
}

// Runs body(stream) against the file at `path`, or standard output when
// `path` is NULL.
template <typename F> void with_output(const char *path, F &&body) {
  if (!path) {
    body(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw ltjscc::ParseError(std::string(path) + ": cannot open for writing");
  body(out);
  out.flush();
  if (!out)
    throw ltjscc::ParseError(std::string(path) + ": write failed");
}

} // namespace

extern "C" {

const char *ltj_last_error(void) { return last_error.c_str(); }

const char *ltj_version(void) { return "0.1.0"; }

ltj_status ltj_last_infeasible_interval(double *low, double *high) {
  if (!low || !high)
    return fail(LTJ_ERR_ARGUMENT, "null output pointer");
  *low = infeasible_low;
  *high = infeasible_high;
  return LTJ_OK;
}

ltj_status ltj_config_create(ltj_config **out) {
  if (!out)
    return fail(LTJ_ERR_ARGUMENT, "null output pointer");
  return guarded([&] { *out = new ltj_config{}; });
}

ltj_status ltj_config_load(const char *path, ltj_config **out) {
  if (!path || !out)
    return fail(LTJ_ERR_ARGUMENT, "null argument");
  return guarded([&] { *out = new ltj_config{ltjscc::load_config(path)}; });
}

ltj_status ltj_config_set(ltj_config *config, const char *key,
                          const char *value) {
  if (!config || !key || !value)
    return fail(LTJ_ERR_ARGUMENT, "null argument");
  return guarded([&] { config->value.set(key, value); });
}

ltj_status ltj_config_validate(const ltj_config *config) {
  if (!config)
    return fail(LTJ_ERR_ARGUMENT, "null config");
  return guarded([&] { config->value.validate(); });
}

void ltj_config_destroy(ltj_config *config) { delete config; }

ltj_status ltj_block_generate(const ltj_config *config, ltj_block **out) {
  if (!config || !out)
    return fail(LTJ_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    ltjscc::SourceSpec spec = config->value.source;
    spec.c = 1;
    *out = new ltj_block{ltjscc::generate_source(spec, config->value.seed).front()};
  });
}

ltj_status ltj_block_load(const char *path, double mu_floor, ltj_block **out) {
  if (!path || !out)
    return fail(LTJ_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new ltj_block{ltjscc::load_bits_with_priors(path, mu_floor)};
  });
}

ltj_status ltj_block_save(const ltj_block *block, const char *path,
                          int binary) {
  if (!block || !path)
    return fail(LTJ_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    ltjscc::save_bits_with_priors(block->value, path,
                                  binary ? ltjscc::PriorsFormat::Binary
                                         : ltjscc::PriorsFormat::Text);
  });
}

size_t ltj_block_size(const ltj_block *block) {
  return block ? block->value.size() : 0;
}

ltj_status ltj_block_copy(const ltj_block *block, uint8_t *bits, double *mu,
                          size_t capacity) {
  if (!block)
    return fail(LTJ_ERR_ARGUMENT, "null block");
  const size_t count = std::min(capacity, block->value.size());
  const auto b = block->value.bits();
  const auto m = block->value.prior().values();
  if (bits)
    std::copy_n(b.begin(), count, bits);
  if (mu)
    std::copy_n(m.begin(), count, mu);
  return LTJ_OK;
}

void ltj_block_destroy(ltj_block *block) { delete block; }

ltj_status ltj_capacity(double sigma2, double *out) {
  if (!out)
    return fail(LTJ_ERR_ARGUMENT, "null output pointer");
  return guarded([&] { *out = ltjscc::capacity(sigma2); });
}

ltj_status ltj_channel_tanh_mean(double sigma2, double *out) {
  if (!out)
    return fail(LTJ_ERR_ARGUMENT, "null output pointer");
  return guarded([&] { *out = ltjscc::channel_tanh_mean(sigma2); });
}

ltj_status ltj_predicted_complexity(const ltj_config *config, size_t n,
                                    double eta, double *out) {
  if (!config || !out)
    return fail(LTJ_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    *out = ltjscc::predicted_complexity(n, config->value.source.k,
                                        config->value.degree_distribution(),
                                        eta);
  });
}

ltj_status ltj_decode(size_t k, const double *mu, size_t n,
                      const double *channel_llr, const uint32_t *offsets,
                      const uint32_t *indices, double eta, double *marginals,
                      double *soft_bits, uint64_t *op_count) {
  if ((k > 0 && !mu) || (n > 0 && (!channel_llr || !indices)) || !offsets)
    return fail(LTJ_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    std::vector<ltjscc::CodedSymbolSpec> specs(n);
    for (size_t o = 0; o < n; ++o) {
      if (offsets[o + 1] < offsets[o])
        throw ltjscc::StructuralError("offsets must be non-decreasing");
      specs[o].symbol_index = o;
      specs[o].indices.assign(indices + offsets[o], indices + offsets[o + 1]);
    }
    const ltjscc::DecodeGraph graph(
        specs, ltjscc::LlrVector(channel_llr, channel_llr + n),
        ltjscc::PriorVector(std::vector<double>(mu, mu + k), 0.0));
    const ltjscc::DecodeResult r = ltjscc::decode(graph, eta);
    if (marginals)
      std::copy(r.marginals.begin(), r.marginals.end(), marginals);
    if (soft_bits)
      std::copy(r.soft_bits.begin(), r.soft_bits.end(), soft_bits);
    if (op_count)
      *op_count = r.op_count;
  });
}

ltj_status ltj_cmd_generate(const ltj_config *config, const char *out_path,
                            int binary) {
  if (!config || !out_path)
    return fail(LTJ_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    ltjscc::cmd_generate(config->value, out_path,
                         binary ? ltjscc::PriorsFormat::Binary
                                : ltjscc::PriorsFormat::Text);
  });
}

ltj_status ltj_cmd_design(const ltj_config *config, const char *source_path,
                          const char *out_path) {
  if (!config)
    return fail(LTJ_ERR_ARGUMENT, "null config");
  return guarded([&] {
    with_output(out_path, [&](std::ostream &out) {
      ltjscc::cmd_design(config->value, opt_path(source_path), out);
    });
  });
}

ltj_status ltj_cmd_encode(const ltj_config *config, const char *source_path,
                          const char *out_path, const char *channel_out_path) {
  if (!config || !source_path || !out_path)
    return fail(LTJ_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    ltjscc::cmd_encode(config->value, source_path, out_path,
                       opt_path(channel_out_path));
  });
}

ltj_status ltj_cmd_decode(const ltj_config *config, const char *symbols_path,
                          const char *priors_path, const char *out_path,
                          const char *trace_path) {
  if (!config || !symbols_path || !priors_path)
    return fail(LTJ_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    std::optional<std::ofstream> trace;
    if (trace_path) {
      trace.emplace(trace_path, std::ios::binary | std::ios::trunc);
      if (!*trace)
        throw ltjscc::ParseError(std::string(trace_path) +
                                 ": cannot open for writing");
    }
    with_output(out_path, [&](std::ostream &out) {
      ltjscc::cmd_decode(config->value, symbols_path, priors_path, out,
                         trace ? &*trace : nullptr);
    });
  });
}

ltj_status ltj_cmd_simulate(const ltj_config *config, const char *out_path) {
  if (!config)
    return fail(LTJ_ERR_ARGUMENT, "null config");
  return guarded([&] {
    with_output(out_path, [&](std::ostream &out) {
      ltjscc::cmd_simulate(config->value, out);
    });
  });
}

ltj_status ltj_cmd_sweep(const ltj_config *config, const char *out_path) {
  if (!config)
    return fail(LTJ_ERR_ARGUMENT, "null config");
  return guarded([&] {
    with_output(out_path, [&](std::ostream &out) {
      ltjscc::cmd_sweep(config->value, out);
    });
  });
}

size_t ltj_config_schema(char *buffer, size_t capacity) {
  const std::string schema = ltjscc::config_schema();
  if (buffer && capacity > 0) {
    const size_t count = std::min(capacity - 1, schema.size());
    std::memcpy(buffer, schema.data(), count);
    buffer[count] = '\0';
  }
  return schema.size() + 1;
}

} // extern "C"
