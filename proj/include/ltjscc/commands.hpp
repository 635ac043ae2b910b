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

#pragma once

#include "ltjscc/config.hpp"
#include "ltjscc/source_model.hpp"

#include <filesystem>
#include <optional>
#include <ostream>

namespace ltjscc {

// Writes one synthetic stream (bits with priors) drawn from the configured
// source profile.
void cmd_generate(const RunConfig &config, const std::filesystem::path &out,
                  PriorsFormat format = PriorsFormat::Text);

// Design report for the given priors file, or for generated streams when no
// path is given.
void cmd_design(const RunConfig &config,
                const std::optional<std::filesystem::path> &source,
                std::ostream &out);

// Writes an NLTS coded-symbol file and, optionally, the NLLR file a receiver
// at the configured sigma2 would see.
void cmd_encode(const RunConfig &config, const std::filesystem::path &source,
                const std::filesystem::path &out,
                const std::optional<std::filesystem::path> &channel_out = {});

void cmd_decode(const RunConfig &config, const std::filesystem::path &symbols,
                const std::filesystem::path &priors, std::ostream &out,
                std::ostream *trace = nullptr);

// Per-trial, per-receiver broadcast records.
void cmd_simulate(const RunConfig &config, std::ostream &out);

void cmd_sweep(const RunConfig &config, std::ostream &out);

} // namespace ltjscc
