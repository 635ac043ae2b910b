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

#include "ltjscc/broadcast.hpp"
#include "ltjscc/degree_distribution.hpp"
#include "ltjscc/uep_design.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ltjscc {

struct ReceiverSpec {
  double sigma2;
  double alpha;
  double beta;
  std::uint64_t seed;
};

enum class LambdaMode { Fixed, Tuned };

/// Every tunable of a run. Loaded from a flat `key = value` file; each key is
/// validated when set and cross-field constraints by validate().
struct RunConfig {
  std::uint64_t seed = 0;

  SourceSpec source;
  double llr_cap = kDefaultLlrCap;

  std::size_t d_max = kDefaultMaxDegree;
  std::optional<std::vector<double>> omega;
  bool omega_stability = false;

  LambdaMode lambda_mode = LambdaMode::Fixed;
  double lambda = 0.0;
  std::optional<double> psi_target;
  double lambda_max = kDefaultLambdaMax;
  double tune_tol = 1e-3;
  std::size_t mc_samples = kDefaultPsiSamples;
  double eps1 = kDefaultEps1;
  double eps2 = kDefaultEps2;
  std::size_t design_grid = 11;

  double sigma2 = 0.5;
  double alpha = 0.0;
  double beta = 0.0;
  std::vector<ReceiverSpec> receivers;
  ScalingTable table;

  RateMode rate_mode = RateMode::Entropy;
  std::optional<std::size_t> n;
  double eta = 0.0;
  std::size_t max_symbols = 1u << 20;
  std::size_t trials = 100;
  unsigned jobs = 1;

  std::vector<double> sweep_sigma2;
  std::vector<double> sweep_alpha;
  std::vector<double> sweep_beta;
  std::vector<std::size_t> sweep_n;
  std::vector<double> sweep_eta;

  // Throws ConfigError naming the key on unknown keys or bad values.
  void set(std::string_view key, std::string_view value);
  void validate() const;

  DegreeDistribution degree_distribution() const;
  SelectionPolicy selection_policy() const;
  // Iteration budget: `eta` when set, otherwise from the scaling table.
  double effective_eta() const;
  std::vector<ReceiverProfile> receiver_profiles() const;
  std::vector<SweepPoint> sweep_grid() const;
  SweepSettings sweep_settings() const;
};

RunConfig load_config(const std::filesystem::path &path);

// Parses the same `key = value` lines from a string; `origin` prefixes error
// messages.
RunConfig parse_config(std::string_view text, std::string_view origin = "config");

// Documented keys with their defaults, one per line.
std::string config_schema();

} // namespace ltjscc
