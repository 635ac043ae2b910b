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

#include "ltjscc/bp_decoder.hpp"
#include "ltjscc/degree_distribution.hpp"
#include "ltjscc/lt_codec.hpp"
#include "ltjscc/selection_weights.hpp"
#include "ltjscc/source_model.hpp"
#include "ltjscc/uep_design.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace ltjscc {

/// Piecewise-linear tables mapping the tradeoff knobs to a rate scale gamma
/// and an iteration budget eta. Knots strictly increase; gamma and eta are
/// non-increasing along them.
struct ScalingTable {
  std::vector<double> alpha_knots{0.0, 4.0};
  std::vector<double> gamma_values{2.0, 0.5};
  std::vector<double> beta_knots{0.0, 16.0};
  std::vector<double> eta_values{16.0, 1.0};

  void validate() const;
};

struct Scaling {
  double gamma;
  double eta;
};

// Interpolates both tables, clamping at the ends of each domain.
Scaling scaling_map(double alpha, double beta, const ScalingTable &table = {});

enum class RateMode {
  // Prior entropy sum_i H2(sigmoid(mu_i)); needs no knowledge of the bits.
  Entropy,
  // -sum_i log2 p(b_i | prior) using the actual bits.
  BitConditional,
};

// Information content of a stream in bits under the chosen mode.
double stream_information(const BitBlock &block, RateMode mode);

// ceil(gamma / Cap(sigma2) * information)
std::size_t allocate_rate(const BitBlock &block, double gamma, double sigma2,
                          RateMode mode = RateMode::Entropy);
std::size_t allocate_rate_for_capacity(const BitBlock &block, double gamma,
                                       double capacity_bits,
                                       RateMode mode = RateMode::Entropy);

/// The c parallel streams of one session, each with its own generator.
class StreamSet {
public:
  // One selection-weight vector per block. Generator seeds are derived from
  // the session seed and the stream position.
  StreamSet(std::vector<BitBlock> blocks, DegreeDistribution omega,
            std::vector<SelectionWeights> weights, std::uint64_t session_seed);

  static StreamSet uniform(std::vector<BitBlock> blocks,
                           DegreeDistribution omega,
                           std::uint64_t session_seed);

  std::size_t streams() const noexcept { return blocks_.size(); }
  std::size_t k() const noexcept { return blocks_.front().size(); }
  std::uint64_t session_seed() const noexcept { return session_seed_; }
  const BitBlock &block(std::size_t j) const { return blocks_.at(j); }
  const GeneratorStream &generator(std::size_t j) const {
    return generators_.at(j);
  }

private:
  std::vector<BitBlock> blocks_;
  std::vector<GeneratorStream> generators_;
  std::uint64_t session_seed_;
};

/// Categorical choice of the stream that carries each transmitted symbol,
/// with probability proportional to the stream's information content. Slot t
/// depends only on (session seed, t).
class StreamPoller {
public:
  explicit StreamPoller(const StreamSet &streams,
                        RateMode mode = RateMode::Entropy);

  std::size_t poll(std::uint64_t slot) const;
  std::span<const double> probabilities() const noexcept { return prob_; }
  // True when every weight was zero and polling fell back to uniform.
  bool uniform_fallback() const noexcept { return fallback_; }

private:
  std::uint64_t seed_;
  std::vector<double> prob_;
  std::vector<double> cdf_;
  bool fallback_ = false;
};

struct ReceiverProfile {
  std::size_t id = 0;
  double sigma2 = 1.0;
  double alpha = 0.0;
  double beta = 0.0;
  std::uint64_t seed = 0;
  double gamma = 1.0;
  double eta = 1.0;
  // Fixed total symbol budget across streams; unset means allocate_rate.
  std::optional<std::size_t> symbols;
};

// Fills gamma and eta from scaling_map and validates the profile.
ReceiverProfile make_receiver(std::size_t id, double sigma2, double alpha,
                              double beta, std::uint64_t seed,
                              const ScalingTable &table = {});

struct SimulationRecord {
  std::size_t receiver_id = 0;
  std::size_t bits_received = 0;
  std::size_t budget = 0;
  double eta = 0.0;
  double ber = 0.0;
  double soft_distortion = 0.0;
  std::uint64_t ops = 0;
  double bits_per_source_bit = 0.0;
  double ops_per_source_bit = 0.0;
  double side_info_bits = 0.0;
  bool truncated = false;

  bool operator==(const SimulationRecord &) const = default;
};

struct BroadcastOutcome {
  std::vector<SimulationRecord> records;
  std::size_t transmitted_symbols = 0;
  bool uniform_polling = false;
};

// Total symbol budget of a receiver over all streams.
std::size_t receiver_budget(const StreamSet &streams,
                            const ReceiverProfile &receiver,
                            RateMode mode = RateMode::Entropy);

// One shared transmission of min(max_symbols, max budget) symbols; every
// receiver corrupts its own prefix with noise seeded by (trial_seed,
// receiver.seed) and decodes each stream separately.
BroadcastOutcome run_broadcast(const StreamSet &streams,
                               const std::vector<ReceiverProfile> &receivers,
                               std::size_t max_symbols,
                               std::uint64_t trial_seed,
                               RateMode mode = RateMode::Entropy,
                               double llr_cap = kDefaultLlrCap);

enum class SourceProfile { Uniform, Bimodal };

struct SourceSpec {
  std::size_t k = 256;
  std::size_t c = 1;
  SourceProfile profile = SourceProfile::Uniform;
  double certainty_low = 0.5;
  double certainty_high = 4.0;
  double mu_floor = kDefaultMuFloor;
};

std::vector<BitBlock> generate_source(const SourceSpec &spec,
                                      std::uint64_t seed);

struct SelectionPolicy {
  // Fixed lambda, or tuned per stream towards psi_target when set.
  double lambda = 0.0;
  std::optional<double> psi_target;
  double lambda_max = kDefaultLambdaMax;
  double tolerance = 1e-3;
  std::size_t mc_samples = kDefaultPsiSamples;
};

std::vector<SelectionWeights> choose_weights(const std::vector<BitBlock> &blocks,
                                             const DegreeDistribution &omega,
                                             const SelectionPolicy &policy,
                                             std::uint64_t seed);

struct SweepPoint {
  double sigma2;
  double alpha;
  double beta;
  // Zero means derive from the receiver's scaling.
  std::size_t n = 0;
  double eta = 0.0;
};

struct SweepSettings {
  SourceSpec source;
  DegreeDistribution omega = DegreeDistribution::raptor();
  SelectionPolicy selection;
  ScalingTable table;
  RateMode mode = RateMode::Entropy;
  double llr_cap = kDefaultLlrCap;
  std::size_t trials = 100;
  std::size_t max_symbols = 1u << 20;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
};

struct SweepRow {
  double sigma2;
  double snr_db;
  double alpha;
  double beta;
  double gamma;
  double eta;
  double n_total;
  double ber_mean;
  double ber_stderr;
  double soft_distortion_mean;
  double soft_distortion_stderr;
  double ops_mean;
  double bits_per_source_bit;
  double ops_per_source_bit;
  std::size_t trials;
};

// Every point sees the same sources, schedules and noise seeds for a given
// trial index, so differences between points are paired.
std::vector<SweepRow> sweep(const std::vector<SweepPoint> &grid,
                            const SweepSettings &settings);

// One Monte-Carlo trial of a session: sources, selection weights, schedule
// and noise all derive from (settings.seed, trial).
BroadcastOutcome run_session_trial(const SweepSettings &settings,
                                   const std::vector<ReceiverProfile> &receivers,
                                   std::size_t trial);

// Per-trial records for one grid point, in trial order.
std::vector<SimulationRecord> sweep_trials(const SweepPoint &point,
                                           const SweepSettings &settings);

// Runs body(i) for i in [0, count) on up to `jobs` threads.
void parallel_for(std::size_t count, unsigned jobs,
                  const std::function<void(std::size_t)> &body);

} // namespace ltjscc
