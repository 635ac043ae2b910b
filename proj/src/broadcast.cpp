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

#include "ltjscc/broadcast.hpp"

#include "ltjscc/channel.hpp"
#include "ltjscc/errors.hpp"
#include "ltjscc/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <string>
#include <thread>

namespace ltjscc {

namespace {

void check_table(const std::vector<double> &knots,
                 const std::vector<double> &values, const char *knot_name,
                 const char *value_name, double value_min) {
  if (knots.empty() || knots.size() != values.size())
    throw ConfigError(std::string(knot_name) + " and " + value_name +
                      " must be non-empty and of equal length");
  for (std::size_t i = 0; i < knots.size(); ++i) {
    if (!std::isfinite(knots[i]) || !std::isfinite(values[i]))
      throw ConfigError(std::string(knot_name) + " table has non-finite entries");
    if (values[i] < value_min)
      throw ConfigError(std::string(value_name) + " values must be at least " +
                        std::to_string(value_min));
    if (i > 0 && !(knots[i] > knots[i - 1]))
      throw ConfigError(std::string(knot_name) + " must be strictly increasing");
    if (i > 0 && values[i] > values[i - 1])
      throw ConfigError(std::string(value_name) +
                        " must be non-increasing along " + knot_name);
  }
}

double interpolate(double x, const std::vector<double> &knots,
                   const std::vector<double> &values) {
  if (x <= knots.front())
    return values.front();
  if (x >= knots.back())
    return values.back();
  const auto hi = std::size_t(
      std::upper_bound(knots.begin(), knots.end(), x) - knots.begin());
  const std::size_t lo = hi - 1;
  const double w = (x - knots[lo]) / (knots[hi] - knots[lo]);
  return values[lo] + w * (values[hi] - values[lo]);
}

} // namespace

void ScalingTable::validate() const {
  check_table(alpha_knots, gamma_values, "alpha_knots", "gamma_values",
              std::numeric_limits<double>::min());
  check_table(beta_knots, eta_values, "beta_knots", "eta_values", 1.0);
}

Scaling scaling_map(double alpha, double beta, const ScalingTable &table) {
  table.validate();
  if (!(alpha >= 0.0) || !(beta >= 0.0) || !std::isfinite(alpha) ||
      !std::isfinite(beta))
    throw ConfigError("alpha and beta must be finite and non-negative");
  return {interpolate(alpha, table.alpha_knots, table.gamma_values),
          interpolate(beta, table.beta_knots, table.eta_values)};
}

double stream_information(const BitBlock &block, RateMode mode) {
  const auto mu = block.prior().values();
  const auto bits = block.bits();
  double total = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (mode == RateMode::Entropy) {
      total += binary_entropy(sigmoid(mu[i]));
    } else {
      // p(b | prior) = sigmoid(mu) for b = 0, sigmoid(-mu) for b = 1.
      const double signed_mu = bits[i] ? -mu[i] : mu[i];
      total -= std::log2(sigmoid(signed_mu));
    }
  }
  return total;
}

std::size_t allocate_rate_for_capacity(const BitBlock &block, double gamma,
                                       double capacity_bits, RateMode mode) {
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    throw ConfigError("gamma must be positive");
  if (!(capacity_bits > 0.0))
    throw ConfigError("capacity must be positive");
  const double n = std::ceil(gamma / capacity_bits *
                             stream_information(block, mode));
  return static_cast<std::size_t>(std::max(0.0, n));
}

std::size_t allocate_rate(const BitBlock &block, double gamma, double sigma2,
                          RateMode mode) {
  ChannelParams{sigma2, 0}.validate();
  return allocate_rate_for_capacity(block, gamma, capacity(sigma2), mode);
}

StreamSet::StreamSet(std::vector<BitBlock> blocks, DegreeDistribution omega,
                     std::vector<SelectionWeights> weights,
                     std::uint64_t session_seed)
    : blocks_(std::move(blocks)), session_seed_(session_seed) {
  if (blocks_.empty())
    throw ConfigError("a session needs at least one stream");
  if (weights.size() != blocks_.size())
    throw StructuralError("one selection-weight vector per stream required");
  const std::size_t k = blocks_.front().size();
  for (std::size_t j = 0; j < blocks_.size(); ++j) {
    if (blocks_[j].size() != k)
      throw StructuralError("stream " + std::to_string(j) + " has length " +
                            std::to_string(blocks_[j].size()) + ", expected " +
                            std::to_string(k));
    if (weights[j].size() != k)
      throw StructuralError("selection weights of stream " +
                            std::to_string(j) + " do not match its length");
    generators_.emplace_back(derive_seed(session_seed, 1, j), omega,
                             std::move(weights[j]));
  }
}

StreamSet StreamSet::uniform(std::vector<BitBlock> blocks,
                             DegreeDistribution omega,
                             std::uint64_t session_seed) {
  std::vector<SelectionWeights> weights;
  for (const BitBlock &b : blocks)
    weights.push_back(SelectionWeights::uniform(b.size()));
  return StreamSet(std::move(blocks), std::move(omega), std::move(weights),
                   session_seed);
}

StreamPoller::StreamPoller(const StreamSet &streams, RateMode mode)
    : seed_(derive_seed(streams.session_seed(), 2)) {
  const std::size_t c = streams.streams();
  prob_.resize(c);
  for (std::size_t j = 0; j < c; ++j)
    prob_[j] = stream_information(streams.block(j), mode);
  double total = std::accumulate(prob_.begin(), prob_.end(), 0.0);
  if (!(total > 0.0)) {
    fallback_ = true;
    std::fill(prob_.begin(), prob_.end(), 1.0);
    total = double(c);
  }
  for (double &p : prob_)
    p /= total;
  cdf_.resize(c);
  std::partial_sum(prob_.begin(), prob_.end(), cdf_.begin());
  cdf_.back() = 1.0;
}

std::size_t StreamPoller::poll(std::uint64_t slot) const {
  if (cdf_.size() == 1)
    return 0;
  SplitMix64 gen(derive_seed(seed_, slot));
  const double u = uniform_open01(gen);
  const auto j =
      std::size_t(std::upper_bound(cdf_.begin(), cdf_.end(), u) - cdf_.begin());
  return std::min(j, cdf_.size() - 1);
}

ReceiverProfile make_receiver(std::size_t id, double sigma2, double alpha,
                              double beta, std::uint64_t seed,
                              const ScalingTable &table) {
  ChannelParams{sigma2, seed}.validate();
  const Scaling s = scaling_map(alpha, beta, table);
  ReceiverProfile r;
  r.id = id;
  r.sigma2 = sigma2;
  r.alpha = alpha;
  r.beta = beta;
  r.seed = seed;
  r.gamma = s.gamma;
  r.eta = s.eta;
  return r;
}

std::size_t receiver_budget(const StreamSet &streams,
                            const ReceiverProfile &receiver, RateMode mode) {
  if (receiver.symbols)
    return *receiver.symbols;
  std::size_t total = 0;
  for (std::size_t j = 0; j < streams.streams(); ++j)
    total += allocate_rate(streams.block(j), receiver.gamma, receiver.sigma2,
                           mode);
  return total;
}

BroadcastOutcome run_broadcast(const StreamSet &streams,
                               const std::vector<ReceiverProfile> &receivers,
                               std::size_t max_symbols,
                               std::uint64_t trial_seed, RateMode mode,
                               double llr_cap) {
  if (receivers.empty())
    throw ConfigError("broadcast needs at least one receiver");
  const std::size_t c = streams.streams(), k = streams.k();

  std::vector<std::size_t> budgets;
  for (const ReceiverProfile &r : receivers) {
    ChannelParams{r.sigma2, r.seed}.validate();
    if (!(r.eta >= 1.0))
      throw ConfigError("receiver iteration budget must be at least 1");
    budgets.push_back(receiver_budget(streams, r, mode));
  }
  const std::size_t transmitted =
      std::min(max_symbols, *std::max_element(budgets.begin(), budgets.end()));

  const StreamPoller poller(streams, mode);
  std::vector<std::uint32_t> stream_of(transmitted);
  std::vector<CodedSymbolSpec> spec_of(transmitted);
  std::vector<std::uint8_t> coded(transmitted);
  std::vector<std::uint64_t> next(c, 0);
  for (std::size_t t = 0; t < transmitted; ++t) {
    const std::size_t j = poller.poll(t);
    stream_of[t] = static_cast<std::uint32_t>(j);
    spec_of[t] = streams.generator(j).symbol(next[j]++);
    coded[t] = encode_symbol(streams.block(j), spec_of[t]);
  }
  const std::vector<double> signal = modulate(coded);

  double side_info = 0.0;
  for (std::size_t j = 0; j < c; ++j)
    side_info += stream_information(streams.block(j), RateMode::Entropy);

  BroadcastOutcome outcome;
  outcome.transmitted_symbols = transmitted;
  outcome.uniform_polling = poller.uniform_fallback();
  const double source_bits = double(c * k);
  for (std::size_t r = 0; r < receivers.size(); ++r) {
    const ReceiverProfile &rx = receivers[r];
    const std::size_t m = std::min(budgets[r], transmitted);
    const std::vector<double> received =
        transmit(std::span(signal).first(m),
                 {rx.sigma2, derive_seed(trial_seed, rx.seed)});
    const LlrVector llr = demodulate(received, rx.sigma2, llr_cap);

    SimulationRecord rec;
    rec.receiver_id = rx.id;
    rec.bits_received = m;
    rec.budget = budgets[r];
    rec.truncated = budgets[r] > max_symbols;
    rec.eta = std::ceil(rx.eta);
    rec.side_info_bits = side_info;
    std::size_t errors = 0;
    double distortion = 0.0;
    for (std::size_t j = 0; j < c; ++j) {
      std::vector<CodedSymbolSpec> specs;
      LlrVector stream_llr;
      for (std::size_t t = 0; t < m; ++t) {
        if (stream_of[t] == j) {
          specs.push_back(spec_of[t]);
          stream_llr.push_back(llr[t]);
        }
      }
      const BitBlock &block = streams.block(j);
      const DecodeGraph graph(specs, std::move(stream_llr), block.prior());
      const DecodeResult res = decode(graph, rx.eta);
      const auto bits = block.bits();
      for (std::size_t i = 0; i < k; ++i) {
        const std::uint8_t hard = res.marginals[i] < 0.0 ? 1 : 0;
        errors += hard != bits[i];
        distortion += std::abs(res.soft_bits[i] - double(bits[i]));
      }
      rec.ops += res.op_count;
    }
    rec.ber = double(errors) / source_bits;
    rec.soft_distortion = distortion / source_bits;
    rec.bits_per_source_bit = double(m) / source_bits;
    rec.ops_per_source_bit = double(rec.ops) / source_bits;
    outcome.records.push_back(rec);
  }
  return outcome;
}

std::vector<BitBlock> generate_source(const SourceSpec &spec,
                                      std::uint64_t seed) {
  if (spec.c == 0)
    throw ConfigError("c must be at least 1");
  std::vector<BitBlock> blocks;
  for (std::size_t j = 0; j < spec.c; ++j) {
    const std::uint64_t s = derive_seed(seed, j);
    blocks.push_back(spec.profile == SourceProfile::Bimodal
                         ? generate_bimodal(spec.k, spec.certainty_low,
                                            spec.certainty_high, s,
                                            spec.mu_floor)
                         : generate_synthetic(spec.k, spec.certainty_low,
                                              spec.certainty_high, s,
                                              spec.mu_floor));
  }
  return blocks;
}

std::vector<SelectionWeights> choose_weights(const std::vector<BitBlock> &blocks,
                                             const DegreeDistribution &omega,
                                             const SelectionPolicy &policy,
                                             std::uint64_t seed) {
  std::vector<SelectionWeights> out;
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    const std::vector<double> u = reliability(blocks[j].prior());
    double lambda = policy.lambda;
    if (policy.psi_target)
      lambda = tune_lambda(u, omega, *policy.psi_target, policy.tolerance,
                           policy.lambda_max,
                           {policy.mc_samples, derive_seed(seed, j), 60});
    out.push_back(lambda == 0.0 ? SelectionWeights::uniform(u.size())
                                : selection_weights(u, lambda));
  }
  return out;
}

void parallel_for(std::size_t count, unsigned jobs,
                  const std::function<void(std::size_t)> &body) {
  const std::size_t workers = std::min<std::size_t>(std::max(1u, jobs), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i)
      body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure)
            failure = std::current_exception();
          next = count;
        }
      }
    });
  }
  for (std::thread &t : pool)
    t.join();
  if (failure)
    std::rethrow_exception(failure);
}

BroadcastOutcome run_session_trial(const SweepSettings &settings,
                                   const std::vector<ReceiverProfile> &receivers,
                                   std::size_t trial) {
  const std::uint64_t trial_seed = derive_seed(settings.seed, trial);
  std::vector<BitBlock> blocks =
      generate_source(settings.source, derive_seed(trial_seed, 1));
  std::vector<SelectionWeights> weights = choose_weights(
      blocks, settings.omega, settings.selection, derive_seed(trial_seed, 2));
  const StreamSet streams(std::move(blocks), settings.omega, std::move(weights),
                          derive_seed(trial_seed, 3));
  return run_broadcast(streams, receivers, settings.max_symbols,
                       derive_seed(trial_seed, 4), settings.mode,
                       settings.llr_cap);
}

std::vector<SimulationRecord> sweep_trials(const SweepPoint &point,
                                           const SweepSettings &settings) {
  if (settings.trials == 0)
    throw ConfigError("trials must be at least 1");
  ReceiverProfile rx = make_receiver(0, point.sigma2, point.alpha, point.beta,
                                     0, settings.table);
  if (point.n > 0)
    rx.symbols = point.n;
  if (point.eta > 0.0) {
    if (point.eta < 1.0)
      throw ConfigError("eta must be at least 1");
    rx.eta = point.eta;
  }
  std::vector<SimulationRecord> records(settings.trials);
  parallel_for(settings.trials, settings.jobs, [&](std::size_t t) {
    records[t] = run_session_trial(settings, {rx}, t).records.front();
  });
  return records;
}

std::vector<SweepRow> sweep(const std::vector<SweepPoint> &grid,
                            const SweepSettings &settings) {
  if (grid.empty())
    throw ConfigError("sweep grid is empty");
  std::vector<SweepRow> rows;
  for (const SweepPoint &point : grid) {
    const std::vector<SimulationRecord> recs = sweep_trials(point, settings);
    const Scaling scaled = scaling_map(point.alpha, point.beta, settings.table);
    const double count = double(recs.size());
    auto mean_of = [&](auto field) {
      double s = 0.0;
      for (const SimulationRecord &r : recs)
        s += double(field(r));
      return s / count;
    };
    auto stderr_of = [&](auto field, double mean) {
      if (recs.size() < 2)
        return 0.0;
      double s = 0.0;
      for (const SimulationRecord &r : recs)
        s += (double(field(r)) - mean) * (double(field(r)) - mean);
      return std::sqrt(s / (count - 1.0) / count);
    };
    const auto ber = [](const SimulationRecord &r) { return r.ber; };
    const auto dist = [](const SimulationRecord &r) { return r.soft_distortion; };
    SweepRow row;
    row.sigma2 = point.sigma2;
    row.snr_db = snr_db_from_sigma2(point.sigma2);
    row.alpha = point.alpha;
    row.beta = point.beta;
    row.gamma = scaled.gamma;
    row.eta = point.eta > 0.0 ? std::ceil(point.eta) : std::ceil(scaled.eta);
    row.n_total = mean_of([](const SimulationRecord &r) { return r.bits_received; });
    row.ber_mean = mean_of(ber);
    row.ber_stderr = stderr_of(ber, row.ber_mean);
    row.soft_distortion_mean = mean_of(dist);
    row.soft_distortion_stderr = stderr_of(dist, row.soft_distortion_mean);
    row.ops_mean = mean_of([](const SimulationRecord &r) { return r.ops; });
    row.bits_per_source_bit =
        mean_of([](const SimulationRecord &r) { return r.bits_per_source_bit; });
    row.ops_per_source_bit =
        mean_of([](const SimulationRecord &r) { return r.ops_per_source_bit; });
    row.trials = recs.size();
    rows.push_back(row);
  }
  return rows;
}

} // namespace ltjscc
