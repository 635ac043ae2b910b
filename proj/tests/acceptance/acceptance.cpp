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

// Acceptance runner. Each criterion prints one PASS/FAIL line; the exit status
// is non-zero when any selected criterion fails.

#include "ltjscc/bp_decoder.hpp"
#include "ltjscc/broadcast.hpp"
#include "ltjscc/channel.hpp"
#include "ltjscc/commands.hpp"
#include "ltjscc/config.hpp"
#include "ltjscc/degree_distribution.hpp"
#include "ltjscc/lt_codec.hpp"
#include "ltjscc/rng.hpp"
#include "ltjscc/selection_weights.hpp"
#include "ltjscc/source_model.hpp"
#include "ltjscc/uep_design.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace ltjscc;

namespace {

constexpr std::uint64_t kSeed = 20260101;

struct Outcome {
  bool pass;
  std::string detail;
};

struct Criterion {
  int id;
  const char *name;
  double runtime_limit_s;
  std::function<Outcome()> run;
};

struct MeanSe {
  double mean;
  double se;
};

MeanSe mean_se(const std::vector<double> &xs) {
  const double n = double(xs.size());
  const double m = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : xs)
    ss += (x - m) * (x - m);
  return {m, n > 1 ? std::sqrt(ss / (n - 1) / n) : 0.0};
}

std::vector<double> paired_diff(const std::vector<double> &a,
                                const std::vector<double> &b) {
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    d[i] = a[i] - b[i];
  return d;
}

std::string fmt(const char *format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

double uniform(SplitMix64 &g, double lo, double hi) {
  return lo + (hi - lo) * uniform_open01(g);
}

// Random degree law on {1..d_max} with random support.
DegreeDistribution random_omega(SplitMix64 &g, std::size_t d_max) {
  std::vector<double> p(d_max, 0.0);
  for (double &x : p)
    if (uniform_open01(g) < 0.6)
      x = standard_exponential(g);
  p[g() % d_max] += standard_exponential(g) + 0.01;
  const double total = std::accumulate(p.begin(), p.end(), 0.0);
  for (double &x : p)
    x /= total;
  return DegreeDistribution(p);
}

std::vector<CodedSymbolSpec> random_forest(SplitMix64 &g, std::size_t k,
                                           std::size_t n) {
  // Grow a bipartite tree, attaching each new node to an earlier node of the
  // other side, then drop some outputs to split it into a forest.
  std::vector<CodedSymbolSpec> specs(n);
  std::vector<std::size_t> inputs_in{0}, outputs_in;
  std::size_t next_input = 1, next_output = 0;
  while (next_input < k || next_output < n) {
    const bool take_output = next_input == k || outputs_in.empty() ||
                             (next_output < n && (g() & 1));
    if (take_output) {
      const std::size_t i = inputs_in[g() % inputs_in.size()];
      specs[next_output].indices.push_back(std::uint32_t(i));
      outputs_in.push_back(next_output++);
    } else {
      const std::size_t o = outputs_in[g() % outputs_in.size()];
      specs[o].indices.push_back(std::uint32_t(next_input));
      inputs_in.push_back(next_input++);
    }
  }
  std::vector<CodedSymbolSpec> kept;
  for (auto &s : specs) {
    if (uniform_open01(g) < 0.2)
      continue;
    std::sort(s.indices.begin(), s.indices.end());
    s.symbol_index = kept.size();
    kept.push_back(std::move(s));
  }
  return kept;
}

LlrVector noisy_llr(const std::vector<std::uint8_t> &coded, double sigma2,
                    std::uint64_t seed) {
  return demodulate(transmit(modulate(coded), {sigma2, seed}), sigma2);
}

Outcome criterion_complexity() {
  SplitMix64 g(derive_seed(kSeed, 1));
  std::size_t mismatches = 0;
  for (int inst = 0; inst < 200; ++inst) {
    const std::size_t k = 1 + g() % 512;
    const std::size_t n = g() % 1025;
    const DegreeDistribution omega = random_omega(g, 1 + g() % std::min<std::size_t>(k, 20));
    const double eta = uniform(g, 1.0, 20.0);
    std::vector<double> u(k);
    for (double &x : u)
      x = uniform_open01(g);
    const GeneratorStream gen(g(), omega, selection_weights(u, uniform(g, 0, 5)));
    const auto specs = rebuild_graph(gen, n);
    LlrVector llr(n);
    for (double &l : llr)
      l = uniform(g, -6, 6);
    std::vector<double> mu(k);
    for (double &m : mu)
      m = uniform(g, -4, 4);
    const DecodeGraph graph(specs, llr, PriorVector(mu, 0.0));
    const DecodeResult r = decode(graph, eta);
    const std::uint64_t per_iter = 8 * graph.edges() + 3 * n + k;
    std::uint64_t prev = 0;
    for (const IterationStats &s : r.iterations) {
      mismatches += s.op_count_cum - prev != per_iter;
      prev = s.op_count_cum;
    }
    mismatches += r.op_count != std::uint64_t(std::ceil(eta)) * per_iter;
  }

  struct Setting {
    std::size_t k, n;
    DegreeDistribution omega;
    double eta;
  };
  const std::vector<Setting> settings{
      {256, 512, DegreeDistribution::raptor(), 5.0},
      {100, 300, random_omega(g, 12), 3.5},
      {512, 1024, DegreeDistribution::uniform(20), 2.0}};
  double worst_z = 0.0;
  bool means_ok = true;
  for (const Setting &s : settings) {
    std::vector<double> ops;
    for (int draw = 0; draw < 1000; ++draw) {
      const GeneratorStream gen(derive_seed(kSeed, 11, ops.size() + 1000 * s.k), s.omega,
                                SelectionWeights::uniform(s.k));
      const auto specs = rebuild_graph(gen, s.n);
      const DecodeGraph graph(specs, LlrVector(s.n, 1.0),
                              PriorVector(std::vector<double>(s.k, 0.5)));
      ops.push_back(double(decode(graph, s.eta).op_count));
    }
    const MeanSe m = mean_se(ops);
    const double predicted = predicted_complexity(s.n, s.k, s.omega, s.eta);
    const double gap = std::abs(m.mean - predicted);
    worst_z = std::max(worst_z, m.se > 0 ? gap / m.se : (gap > 0 ? 1e9 : 0.0));
    means_ok = means_ok && gap <= 3.0 * m.se + 1e-9 * predicted;
  }
  return {mismatches == 0 && means_ok,
          fmt("200 instances, %zu per-iteration mismatches; worst |mean-predicted| = %.2f SE",
              mismatches, worst_z)};
}

Outcome criterion_bp_exact() {
  SplitMix64 g(derive_seed(kSeed, 2));
  double worst = 0.0;
  for (int inst = 0; inst < 100; ++inst) {
    const std::size_t k = 1 + g() % 10;
    const std::size_t n = 1 + g() % 12;
    const auto specs = random_forest(g, k, n);
    std::vector<std::uint8_t> bits(k);
    std::vector<double> mu(k);
    for (std::size_t i = 0; i < k; ++i) {
      mu[i] = (g() & 1 ? 1.0 : -1.0) * uniform(g, 0.5, 4.0);
      bits[i] = uniform_open01(g) < 1.0 - sigmoid(mu[i]);
    }
    const BitBlock block(bits, PriorVector(mu));
    std::vector<std::uint8_t> coded;
    for (const auto &s : specs)
      coded.push_back(encode_symbol(block, s));
    const double sigma2 = uniform(g, 0.5, 2.0);
    const DecodeGraph graph(specs, noisy_llr(coded, sigma2, g()), block.prior());
    const DecodeResult r = decode(graph, double(2 * (k + specs.size()) + 2));
    const auto exact = exact_marginals(graph);
    for (std::size_t i = 0; i < k; ++i)
      worst = std::max(worst, std::abs(r.marginals[i] - exact[i]));
  }
  return {worst <= 1e-6, fmt("100 cycle-free instances, max |BP - exact| = %.3g", worst)};
}

Outcome criterion_first_iteration() {
  const std::size_t k = 256;
  const DegreeDistribution omega = DegreeDistribution::raptor();
  bool ok = true;
  std::string detail;
  for (double sigma2 : {0.25, 0.5, 1.0}) {
    std::vector<double> delta;
    for (std::uint64_t t = 0; t < 1000; ++t) {
      const std::uint64_t seed = derive_seed(kSeed, 3, t);
      const BitBlock source = generate_synthetic(k, 0.5, 4.0, derive_seed(seed, 1));
      // All-zero frame: zero bits with priors flipped by the true bits.
      const std::vector<std::uint8_t> zeros(k, 0);
      const BitBlock frame(zeros, PriorVector(flip_priors(source).mu_tilde));
      const GeneratorStream gen(derive_seed(seed, 2), omega,
                                SelectionWeights::uniform(k));
      const auto specs = rebuild_graph(gen, k);
      const DecodeGraph graph(specs,
                              noisy_llr(std::vector<std::uint8_t>(k, 0), sigma2,
                                        derive_seed(seed, 3)),
                              frame.prior());
      const auto diag = message_increase_diagnostic(decode(graph, 2.0, zeros));
      delta.push_back(diag.at(0));
    }
    const MeanSe m = mean_se(delta);
    ok = ok && m.mean > 3.0 * m.se;
    detail += fmt("sigma2=%.2f: delta=%.4f (z=%.1f) ", sigma2, m.mean, m.mean / m.se);
  }
  return {ok, detail};
}

Outcome criterion_bound_ordering() {
  SplitMix64 g(derive_seed(kSeed, 4));
  int lower_fail = 0, upper_fail = 0;
  double worst_upper = 0.0;
  for (int inst = 0; inst < 100; ++inst) {
    const std::size_t k = 2 + g() % 9;
    const BitBlock block = generate_synthetic(k, 0.5, 4.0, g());
    const DegreeDistribution omega = random_omega(g, 1 + g() % k);
    const double lambda = uniform(g, 0.0, 5.0);
    const auto u = reliability(block.prior());
    const double lower = pinsker_mi_bound(u, omega, lambda, 20000, g());
    const double kl = exact_symbol_kl(block, omega, selection_weights(u, lambda), 10);
    const double upper = dkl_upper_bound(u, omega);
    lower_fail += !(lower <= kl);
    if (!(kl <= upper)) {
      ++upper_fail;
      worst_upper = std::max(worst_upper, kl - upper);
    }
  }
  return {lower_fail == 0 && upper_fail == 0,
          fmt("100 instances: %d lower-bound violations, %d upper-bound violations "
              "(largest excess %.3g nats)",
              lower_fail, upper_fail, worst_upper)};
}

Outcome criterion_psi_tuning() {
  SplitMix64 g(derive_seed(kSeed, 5));
  const DegreeDistribution omega = DegreeDistribution::raptor();
  int monotone_fail = 0, tune_fail = 0;
  double worst_z = 0.0;
  for (int inst = 0; inst < 20; ++inst) {
    const std::size_t k = 32 + g() % 225;
    const double weak_share = uniform(g, 0.1, 0.6);
    std::vector<double> u(k);
    for (double &x : u)
      x = reliability(uniform_open01(g) < weak_share ? uniform(g, 0.01, 0.5)
                                                     : uniform(g, 2.0, 6.0));
    const std::uint64_t seed = g();
    const PsiEstimator est(u, omega, 4096, seed);
    double prev = -1.0;
    for (int i = 0; i < 10; ++i) {
      const double v = est(kDefaultLambdaMax * i / 9.0);
      monotone_fail += v < prev;
      prev = v;
    }
    const double lo = est(0.0), hi = est(kDefaultLambdaMax);
    const double target = lo + uniform(g, 0.2, 0.8) * (hi - lo);
    const double lambda =
        tune_lambda(u, omega, target, 1e-3, kDefaultLambdaMax, {4096, seed, 60});
    const auto tuned = est.estimate(lambda);
    const bool in_sample = std::abs(tuned.mean - target) < 1e-3;
    // The tuned and fresh estimates are independent, so their difference has
    // the combined standard error.
    const auto fresh = PsiEstimator(u, omega, 16384, derive_seed(seed, 99)).estimate(lambda);
    const double se = std::hypot(tuned.standard_error, fresh.standard_error);
    const double gap = std::abs(fresh.mean - target);
    worst_z = std::max(worst_z, std::max(0.0, gap - 1e-3) / se);
    tune_fail += !(in_sample && gap <= 1e-3 + 3.0 * se);
  }
  return {monotone_fail == 0 && tune_fail == 0,
          fmt("20 instances: %d monotonicity breaks, %d tuning misses; worst fresh "
              "excess beyond tol = %.2f SE",
              monotone_fail, tune_fail, worst_z)};
}

std::vector<double> ber_of(const std::vector<SimulationRecord> &records) {
  std::vector<double> out;
  for (const auto &r : records)
    out.push_back(r.ber);
  return out;
}

Outcome criterion_monotone_ber() {
  SweepSettings settings;
  settings.source = {256, 1, SourceProfile::Uniform, 0.5, 4.0};
  settings.trials = 1000;
  settings.seed = derive_seed(kSeed, 6);
  const double sigma2 = 0.5;
  bool ok = true;
  std::string detail = "n:";
  std::vector<double> prev;
  for (std::size_t n : {128, 256, 384, 512}) {
    const auto ber = ber_of(sweep_trials({sigma2, 0, 0, n, 10.0}, settings));
    if (!prev.empty()) {
      const MeanSe d = mean_se(paired_diff(ber, prev));
      ok = ok && d.mean <= 3.0 * d.se;
    }
    detail += fmt(" %.4g", mean_se(ber).mean);
    prev = ber;
  }
  detail += "; eta:";
  prev.clear();
  for (double eta : {1.0, 2.0, 5.0, 10.0}) {
    const auto ber = ber_of(sweep_trials({sigma2, 0, 0, 256, eta}, settings));
    if (!prev.empty()) {
      const MeanSe d = mean_se(paired_diff(ber, prev));
      ok = ok && d.mean <= 3.0 * d.se;
    }
    detail += fmt(" %.4g", mean_se(ber).mean);
    prev = ber;
  }
  return {ok, "mean BER " + detail};
}

Outcome criterion_uep_benefit() {
  SweepSettings settings;
  settings.source = {256, 1, SourceProfile::Bimodal, 4.0, 6.0};
  settings.trials = 1000;
  settings.seed = derive_seed(kSeed, 7);
  const SweepPoint point{0.5, 0.0, 0.0, 256, 1.0};

  const auto uniform_runs = sweep_trials(point, settings);
  settings.selection.psi_target = 0.18;
  settings.selection.mc_samples = 1024;
  settings.selection.tolerance = 1e-3;
  const auto tuned_runs = sweep_trials(point, settings);

  std::vector<double> u, t;
  for (std::size_t i = 0; i < uniform_runs.size(); ++i) {
    u.push_back(uniform_runs[i].soft_distortion);
    t.push_back(tuned_runs[i].soft_distortion);
  }
  const MeanSe d = mean_se(paired_diff(t, u));
  return {d.mean + 3.0 * d.se < 0.0,
          fmt("soft distortion uniform %.5f, tuned %.5f, paired diff %.5f (z=%.1f)",
              mean_se(u).mean, mean_se(t).mean, d.mean, d.mean / d.se)};
}

Outcome criterion_broadcast() {
  SplitMix64 g(derive_seed(kSeed, 8));
  int structural_fail = 0, repro_fail = 0, sessions = 0;
  for (std::size_t receivers : {2, 4, 8}) {
    for (int s = 0; s < 5; ++s, ++sessions) {
      std::string text = "k = 128\nc = 2\nseed = " + std::to_string(g() >> 1) +
                         "\nreceivers = ";
      for (std::size_t j = 0; j < receivers; ++j)
        text += fmt("%s%.17g:%.17g:%.17g:%llu", j ? "," : "", uniform(g, 0.1, 2.0),
                    uniform(g, 0.0, 4.0), uniform(g, 0.0, 16.0),
                    (unsigned long long)(g() >> 1));
      const RunConfig config = parse_config(text + "\n");
      const SweepSettings settings = config.sweep_settings();
      const auto profiles = config.receiver_profiles();
      const std::size_t trial = g() % 1000;
      const BroadcastOutcome out = run_session_trial(settings, profiles, trial);

      const auto blocks = generate_source(
          settings.source, derive_seed(derive_seed(settings.seed, trial), 1));
      std::size_t longest = 0;
      for (std::size_t j = 0; j < receivers; ++j) {
        std::size_t budget = 0;
        for (const BitBlock &b : blocks)
          budget += allocate_rate(b, profiles[j].gamma, profiles[j].sigma2);
        longest = std::max(longest, budget);
        structural_fail += out.records[j].budget != budget ||
                           out.records[j].bits_received != budget;
      }
      structural_fail += out.transmitted_symbols != longest;

      const RunConfig again = parse_config(text + "\n");
      repro_fail += run_session_trial(again.sweep_settings(),
                                      again.receiver_profiles(), trial)
                        .records != out.records;
      RunConfig one_trial = again;
      one_trial.trials = 2;
      std::ostringstream a, b;
      cmd_simulate(one_trial, a);
      one_trial.jobs = 2;
      cmd_simulate(one_trial, b);
      repro_fail += a.str() != b.str();
    }
  }
  return {structural_fail == 0 && repro_fail == 0,
          fmt("%d sessions over K in {2,4,8}: %d length mismatches, %d "
              "non-reproducible runs",
              sessions, structural_fail, repro_fail)};
}

Outcome criterion_channel() {
  std::mt19937_64 engine(kSeed);
  bool ok = true;
  std::string detail;
  for (double sigma2 : {0.25, 1.0, 4.0}) {
    const double m = 2.0 / sigma2;
    std::normal_distribution<double> llr(m, std::sqrt(2.0 * m));
    double info = 0.0, tanh_sum = 0.0;
    const int samples = 10'000'000;
    for (int i = 0; i < samples; ++i) {
      const double l = llr(engine);
      info += l > 0 ? std::log1p(std::exp(-l)) : -l + std::log1p(std::exp(l));
      tanh_sum += std::tanh(0.5 * l);
    }
    const double cap_mc = 1.0 - info / samples / std::log(2.0);
    const double v_mc = tanh_sum / samples;
    const double dc = std::abs(capacity(sigma2) - cap_mc);
    const double dv = std::abs(channel_tanh_mean(sigma2) - v_mc);
    ok = ok && dc <= 2e-3 && dv <= 2e-3;
    detail += fmt("sigma2=%.2f |dC|=%.1e |dV|=%.1e; ", sigma2, dc, dv);
  }
  double prev_c = 2.0, prev_v = 2.0;
  bool decreasing = true;
  for (int i = 0; i < 20; ++i) {
    const double sigma2 = 0.05 * std::pow(200.0, i / 19.0);
    const double c = capacity(sigma2), v = channel_tanh_mean(sigma2);
    decreasing = decreasing && c < prev_c && v < prev_v;
    prev_c = c;
    prev_v = v;
  }
  detail += decreasing ? "strictly decreasing on grid" : "NOT decreasing on grid";
  return {ok && decreasing, detail};
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"ltjscc acceptance criteria"};
  std::vector<int> selected;
  app.add_option("--criterion", selected, "criterion number(s) to run (default all)")
      ->check(CLI::Range(1, 9));
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria{
      {1, "exact complexity accounting", 60, criterion_complexity},
      {2, "BP matches exact marginals on cycle-free graphs", 60, criterion_bp_exact},
      {3, "first-iteration message increase", 120, criterion_first_iteration},
      {4, "KL bound ordering", 60, criterion_bound_ordering},
      {5, "Psi monotonicity and tuning", 60, criterion_psi_tuning},
      {6, "BER monotone in n and eta", 300, criterion_monotone_ber},
      {7, "UEP benefit on bimodal sources", 300, criterion_uep_benefit},
      {8, "broadcast length and reproducibility", 120, criterion_broadcast},
      {9, "channel numerics", 120, criterion_channel},
  };

  int failed = 0;
  for (const Criterion &c : criteria) {
    if (!selected.empty() &&
        std::find(selected.begin(), selected.end(), c.id) == selected.end())
      continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception &e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.runtime_limit_s) {
      o.pass = false;
      o.detail += fmt(" [runtime %.1fs exceeds %.0fs]", secs, c.runtime_limit_s);
    }
    std::printf("criterion %d (%s): %s | %s | %.1fs\n", c.id, c.name,
                o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
