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

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace {

int exit_code(ltj_status status) {
  switch (status) {
  case LTJ_OK:
    return 0;
  case LTJ_ERR_CONFIG:
  case LTJ_ERR_ARGUMENT:
    return 2;
  case LTJ_ERR_PARSE:
  case LTJ_ERR_STRUCTURAL:
    return 3;
  case LTJ_ERR_INFEASIBLE:
    return 4;
  default:
    return 1;
  }
}

int report(ltj_status status) {
  if (status != LTJ_OK)
    std::fprintf(stderr, "ltjscc: %s\n", ltj_last_error());
  return exit_code(status);
}

const char *c_str_or_null(const std::string &s) {
  return s.empty() ? nullptr : s.c_str();
}

struct ConfigDeleter {
  void operator()(ltj_config *c) const { ltj_config_destroy(c); }
};
using ConfigHandle = std::unique_ptr<ltj_config, ConfigDeleter>;

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Rateless LT coding with bit priors: design, encode, decode "
               "and broadcast simulation"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(ltj_version()));

  std::string config_path, out_path;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> jobs;
  std::vector<std::string> overrides;
  bool trace = false;

  app.add_option("--config", config_path, "flat key = value configuration file");
  app.add_option("--seed", seed, "override the configured seed");
  app.add_option("--jobs", jobs, "worker threads")->check(CLI::Range(1u, 1024u));
  app.add_option("--out", out_path, "output path (standard output if omitted)");
  app.add_option("--set", overrides, "override a configuration key, key=value");
  app.add_flag("--trace", trace, "decode: also write the per-iteration trace");

  std::string source, symbols, priors, channel_out;
  bool binary = false;

  auto *generate = app.add_subcommand("generate", "write a synthetic priors file");
  generate->add_flag("--binary", binary, "write the binary priors format");

  auto *design = app.add_subcommand("design", "selection design report");
  design->add_option("source", source, "priors file; generated when omitted");

  auto *encode = app.add_subcommand("encode", "write coded symbols");
  encode->add_option("source", source, "priors file")->required();
  encode->add_option("--channel-out", channel_out,
                     "also write channel LLRs at the configured sigma2");

  auto *decode = app.add_subcommand("decode", "decode symbols into marginals");
  decode->add_option("symbols", symbols, "coded or received symbol file")
      ->required();
  decode->add_option("priors", priors, "priors file")->required();

  auto *simulate = app.add_subcommand("simulate", "broadcast simulation");
  auto *sweep = app.add_subcommand("sweep", "parameter sweep");
  auto *schema = app.add_subcommand("schema", "list configuration keys");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (schema->parsed()) {
    const std::size_t size = ltj_config_schema(nullptr, 0);
    std::string text(size, '\0');
    ltj_config_schema(text.data(), size);
    std::fputs(text.c_str(), stdout);
    return 0;
  }

  ltj_config *raw = nullptr;
  ltj_status status = config_path.empty()
                          ? ltj_config_create(&raw)
                          : ltj_config_load(config_path.c_str(), &raw);
  if (status != LTJ_OK)
    return report(status);
  ConfigHandle config(raw);

  for (const std::string &kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "ltjscc: --set expects key=value, got '%s'\n",
                   kv.c_str());
      return 2;
    }
    status = ltj_config_set(config.get(), kv.substr(0, eq).c_str(),
                            kv.substr(eq + 1).c_str());
    if (status != LTJ_OK)
      return report(status);
  }
  if (seed) {
    status = ltj_config_set(config.get(), "seed", std::to_string(*seed).c_str());
    if (status != LTJ_OK)
      return report(status);
  }
  if (jobs) {
    status = ltj_config_set(config.get(), "jobs", std::to_string(*jobs).c_str());
    if (status != LTJ_OK)
      return report(status);
  }

  const char *out = c_str_or_null(out_path);
  if (generate->parsed()) {
    if (!out) {
      std::fprintf(stderr, "ltjscc: generate requires --out\n");
      return 2;
    }
    status = ltj_cmd_generate(config.get(), out, binary ? 1 : 0);
  } else if (design->parsed()) {
    status = ltj_cmd_design(config.get(), c_str_or_null(source), out);
  } else if (encode->parsed()) {
    if (!out) {
      std::fprintf(stderr, "ltjscc: encode requires --out\n");
      return 2;
    }
    status = ltj_cmd_encode(config.get(), source.c_str(), out,
                            c_str_or_null(channel_out));
  } else if (decode->parsed()) {
    std::string trace_path;
    if (trace)
      trace_path = out ? out_path + ".trace.csv" : "/dev/stderr";
    status = ltj_cmd_decode(config.get(), symbols.c_str(), priors.c_str(), out,
                            c_str_or_null(trace_path));
  } else if (simulate->parsed()) {
    status = ltj_cmd_simulate(config.get(), out);
  } else if (sweep->parsed()) {
    status = ltj_cmd_sweep(config.get(), out);
  }
  return report(status);
}
