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
#include "ltjscc/errors.hpp"
#include "ltjscc/rng.hpp"
#include "test_helpers.hpp"

#include <doctest.h>

#include <cmath>

using namespace ltjscc;

namespace {

BitBlock zero_prior_block(std::size_t k) {
  return BitBlock(std::vector<std::uint8_t>(k, 0),
                  PriorVector(std::vector<double>(k, 0.0), 0.0));
}

} // namespace

TEST_CASE("rate allocation") {
  const BitBlock flat = zero_prior_block(100);
  CHECK(stream_information(flat, RateMode::Entropy) == doctest::Approx(100.0));
  CHECK(allocate_rate_for_capacity(flat, 1.0, 0.5) == 200);
  CHECK(allocate_rate_for_capacity(flat, 0.5, 0.5) == 100);
  CHECK(allocate_rate(flat, 1.0, 1.0) ==
        std::size_t(std::ceil(100.0 / capacity(1.0))));

  const BitBlock sure(std::vector<std::uint8_t>{0, 1},
                      PriorVector({4.0, -4.0}));
  CHECK(stream_information(sure, RateMode::Entropy) ==
        doctest::Approx(2 * 0.12997927466630485).epsilon(1e-12));
  CHECK(stream_information(sure, RateMode::BitConditional) ==
        doctest::Approx(-2 * std::log2(sigmoid(4.0))).epsilon(1e-12));
  const BitBlock wrong(std::vector<std::uint8_t>{1}, PriorVector({4.0}));
  CHECK(stream_information(wrong, RateMode::BitConditional) ==
        doctest::Approx(-std::log2(1 - sigmoid(4.0))).epsilon(1e-12));
  CHECK_THROWS_AS(allocate_rate(flat, 0.0, 1.0), ConfigError);
}

TEST_CASE("scaling map corners, midpoint and clamping") {
  Scaling s = scaling_map(0, 0);
  CHECK(s.gamma == 2.0);
  CHECK(s.eta == 16.0);
  s = scaling_map(4, 16);
  CHECK(s.gamma == 0.5);
  CHECK(s.eta == 1.0);
  s = scaling_map(2, 8);
  CHECK(s.gamma == doctest::Approx(1.25));
  CHECK(s.eta == doctest::Approx(8.5));
  s = scaling_map(100, 1000);
  CHECK(s.gamma == 0.5);
  CHECK(s.eta == 1.0);

  ScalingTable rising;
  rising.gamma_values = {0.5, 2.0};
  CHECK_THROWS_AS(rising.validate(), ConfigError);
  CHECK_THROWS_AS(scaling_map(1, 1, rising), ConfigError);
  ScalingTable unordered;
  unordered.beta_knots = {3.0, 3.0};
  CHECK_THROWS_AS(unordered.validate(), ConfigError);
  ScalingTable low_eta;
  low_eta.eta_values = {4.0, 0.5};
  CHECK_THROWS_AS(low_eta.validate(), ConfigError);
  CHECK_THROWS_AS(scaling_map(-1, 0), ConfigError);
}

TEST_CASE("scaling map is monotone in each knob") {
  double prev_gamma = 1e9, prev_eta = 1e9;
  for (double t = 0; t <= 20; t += 0.25) {
    const Scaling s = scaling_map(t / 5, t);
    CHECK(s.gamma <= prev_gamma);
    CHECK(s.eta <= prev_eta);
    prev_gamma = s.gamma;
    prev_eta = s.eta;
  }
}

TEST_CASE("poller frequencies follow stream information") {
  std::vector<BitBlock> blocks{generate_synthetic(64, 0.1, 0.2, 1),
                               generate_synthetic(64, 2.0, 3.0, 2),
                               generate_synthetic(64, 5.0, 6.0, 3)};
  const StreamSet set = StreamSet::uniform(blocks, DegreeDistribution::raptor(), 9);
  const StreamPoller poller(set);
  const auto p = poller.probabilities();
  double total = 0;
  for (const auto &b : blocks)
    total += stream_information(b, RateMode::Entropy);
  for (std::size_t j = 0; j < 3; ++j)
    CHECK(p[j] == doctest::Approx(stream_information(blocks[j], RateMode::Entropy) / total));
  const std::size_t N = 40000;
  std::vector<double> count(3, 0.0);
  for (std::uint64_t t = 0; t < N; ++t)
    count[poller.poll(t)] += 1;
  for (std::size_t j = 0; j < 3; ++j) {
    const double se = std::sqrt(p[j] * (1 - p[j]) / N);
    CHECK(std::abs(count[j] / N - p[j]) < 4 * se);
  }
  CHECK(poller.poll(123) == poller.poll(123));
  CHECK_FALSE(poller.uniform_fallback());

  const StreamSet single = StreamSet::uniform({blocks[1]}, DegreeDistribution::raptor(), 9);
  const StreamPoller one(single);
  for (std::uint64_t t = 0; t < 100; ++t)
    CHECK(one.poll(t) == 0);
}

TEST_CASE("poller falls back to uniform when no stream carries information") {
  std::vector<BitBlock> blocks{
      BitBlock(std::vector<std::uint8_t>(16, 0), PriorVector(std::vector<double>(16, 800.0))),
      BitBlock(std::vector<std::uint8_t>(16, 0), PriorVector(std::vector<double>(16, 800.0)))};
  const StreamSet set = StreamSet::uniform(blocks, DegreeDistribution::raptor(), 1);
  const StreamPoller poller(set);
  CHECK(poller.uniform_fallback());
  CHECK(poller.probabilities()[0] == 0.5);
}

TEST_CASE("broadcast records") {
  const std::vector<BitBlock> blocks = generate_source({64, 2}, 5);
  const StreamSet set = StreamSet::uniform(blocks, DegreeDistribution::raptor(), 11);

  SUBCASE("identical receivers get identical records") {
    auto a = make_receiver(0, 0.5, 1.0, 4.0, 77);
    auto b = make_receiver(1, 0.5, 1.0, 4.0, 77);
    const auto out = run_broadcast(set, {a, b}, 1u << 20, 3);
    REQUIRE(out.records.size() == 2);
    SimulationRecord r0 = out.records[0], r1 = out.records[1];
    CHECK(r0.receiver_id == 0);
    CHECK(r1.receiver_id == 1);
    r1.receiver_id = 0;
    CHECK(r0 == r1);
  }

  SUBCASE("transmission length is the largest budget") {
    auto fast = make_receiver(0, 0.25, 4.0, 16.0, 1);
    auto slow = make_receiver(1, 2.0, 0.0, 0.0, 2);
    const auto out = run_broadcast(set, {fast, slow}, 1u << 20, 3);
    const std::size_t bf = receiver_budget(set, fast), bs = receiver_budget(set, slow);
    CHECK(bs > bf);
    CHECK(out.transmitted_symbols == bs);
    CHECK(out.records[0].bits_received == bf);
    CHECK(out.records[1].bits_received == bs);
    CHECK_FALSE(out.records[1].truncated);
    CHECK(out.records[0].bits_per_source_bit == doctest::Approx(double(bf) / 128));
    CHECK(out.records[1].ber >= 0.0);
    CHECK(out.records[1].ber <= 1.0);

    const auto cut = run_broadcast(set, {fast, slow}, bf, 3);
    CHECK(cut.transmitted_symbols == bf);
    CHECK_FALSE(cut.records[0].truncated);
    CHECK(cut.records[1].truncated);
    CHECK(cut.records[1].bits_received == bf);
  }

  SUBCASE("ops grow linearly with the iteration budget") {
    ReceiverProfile r = make_receiver(0, 0.5, 0.0, 0.0, 4);
    r.symbols = 150;
    r.eta = 1.0;
    const auto one = run_broadcast(set, {r}, 1u << 20, 8);
    r.eta = 4.0;
    const auto four = run_broadcast(set, {r}, 1u << 20, 8);
    CHECK(one.records[0].bits_received == 150);
    CHECK(four.records[0].ops == 4 * one.records[0].ops);
    CHECK(four.records[0].ops_per_source_bit ==
          doctest::Approx(double(four.records[0].ops) / 128));
  }
}

TEST_CASE("session trials are reproducible and paired") {
  SweepSettings settings;
  settings.source = {48, 1};
  settings.trials = 6;
  settings.seed = 21;
  const SweepPoint p1{0.5, 0.0, 0.0, 60, 2.0};
  const auto a = sweep_trials(p1, settings);
  const auto b = sweep_trials(p1, settings);
  CHECK(a == b);
  settings.jobs = 3;
  CHECK(sweep_trials(p1, settings) == a);
  settings.jobs = 1;

  // Sources do not depend on the operating point.
  const auto rows = sweep({p1, {0.5, 0.0, 0.0, 60, 4.0}}, settings);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].n_total == 60.0);
  CHECK(rows[1].eta == 4.0);
  CHECK(rows[1].ops_mean == doctest::Approx(2 * rows[0].ops_mean));
  CHECK(rows[0].trials == 6);
  CHECK(rows[0].snr_db == doctest::Approx(snr_db_from_sigma2(0.5)));
}

TEST_CASE("parallel_for covers every index and propagates exceptions") {
  std::vector<int> hit(50, 0);
  parallel_for(50, 4, [&](std::size_t i) { hit[i] += 1; });
  for (int h : hit)
    CHECK(h == 1);
  CHECK_THROWS_AS(parallel_for(10, 3,
                               [](std::size_t i) {
                                 if (i == 7)
                                   throw ConfigError("boom");
                               }),
                  ConfigError);
}

TEST_CASE("bimodal and uniform sources") {
  const auto uni = generate_source({200, 3, SourceProfile::Uniform, 1.0, 2.0}, 4);
  REQUIRE(uni.size() == 3);
  for (const auto &b : uni)
    for (double m : b.prior().values()) {
      CHECK(std::abs(m) >= 1.0);
      CHECK(std::abs(m) <= 2.0);
    }
  CHECK(uni[0].prior().values()[0] != uni[1].prior().values()[0]);
  const auto bi = generate_source({200, 1, SourceProfile::Bimodal, 3.0, 4.0}, 4);
  double weak = 0, strong = 0;
  for (std::size_t i = 0; i < 200; ++i)
    (i % 2 ? strong : weak) += std::abs(bi[0].prior()[i]);
  CHECK(weak < strong);
}
