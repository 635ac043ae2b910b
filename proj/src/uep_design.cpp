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

#include "ltjscc/uep_design.hpp"

#include "ltjscc/channel.hpp"
#include "ltjscc/errors.hpp"
#include "ltjscc/lt_codec.hpp"
#include "ltjscc/rng.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace ltjscc {

SelectionWeights::SelectionWeights(std::vector<double> rho, double lambda)
    : rho_(std::move(rho)), lambda_(lambda) {
  if (rho_.empty())
    throw ConfigError("selection weights are empty");
  double sum = 0.0;
  for (double w : rho_) {
    if (!(w > 0.0) || !std::isfinite(w))
      throw ConfigError("selection weights must be positive and finite");
    sum += w;
  }
  for (double &w : rho_)
    w /= sum;
}

SelectionWeights SelectionWeights::uniform(std::size_t k) {
  return SelectionWeights(std::vector<double>(k, 1.0), 0.0);
}

SelectionWeights selection_weights(std::span<const double> reliability,
                                   double lambda) {
  if (reliability.empty())
    throw ConfigError("reliability vector is empty");
  std::vector<double> z(reliability.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (!std::isfinite(reliability[i]))
      throw ConfigError("reliability values must be finite");
    z[i] = lambda * reliability[i];
  }
  const double top = *std::max_element(z.begin(), z.end());
  for (double &v : z)
    v = std::max(std::exp(v - top), std::numeric_limits<double>::min());
  return SelectionWeights(std::move(z), lambda);
}

double reliability(double mu) noexcept {
  const double a = std::abs(mu);
  return (2.0 * sigmoid(a) - 1.0) * std::tanh(0.5 * a);
}

std::vector<double> reliability(std::span<const double> mu) {
  std::vector<double> u(mu.size());
  std::transform(mu.begin(), mu.end(), u.begin(),
                 [](double m) { return reliability(m); });
  return u;
}

std::vector<double> reliability(const PriorVector &prior) {
  return reliability(prior.values());
}

namespace {

std::vector<double> edge_cdf(const DegreeDistribution &omega) {
  std::vector<double> cdf = omega.edge_distribution();
  std::partial_sum(cdf.begin(), cdf.end(), cdf.begin());
  cdf.back() = 1.0;
  return cdf;
}

} // namespace

PsiEstimator::PsiEstimator(std::span<const double> reliability,
                           const DegreeDistribution &omega, std::size_t samples,
                           std::uint64_t seed)
    : u_(reliability.begin(), reliability.end()) {
  if (samples == 0)
    throw ConfigError("Psi needs at least one Monte-Carlo sample");
  if (u_.empty())
    throw ConfigError("reliability vector is empty");
  omega.check_fits(u_.size());
  const std::vector<double> cdf = edge_cdf(omega);
  const std::size_t k = u_.size();
  degrees_.resize(samples);
  race_.resize(samples * k);
  for (std::size_t s = 0; s < samples; ++s) {
    SplitMix64 gen(derive_seed(seed, s));
    const double v = uniform_open01(gen);
    const auto d = std::size_t(std::upper_bound(cdf.begin(), cdf.end(), v) -
                               cdf.begin()) + 1;
    degrees_[s] = static_cast<std::uint32_t>(std::min(d, cdf.size()));
    for (std::size_t i = 0; i < k; ++i)
      race_[s * k + i] = standard_exponential(gen);
  }
}

PsiEstimator::Estimate PsiEstimator::estimate(double lambda) const {
  const std::size_t k = u_.size();
  const double top = *std::max_element(u_.begin(), u_.end());
  std::vector<double> rate(k);
  for (std::size_t i = 0; i < k; ++i)
    rate[i] = std::exp(lambda * (u_[i] - top));
  std::vector<std::uint32_t> order;
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t s = 0; s < degrees_.size(); ++s) {
    const std::size_t d = degrees_[s];
    first_arrivals(std::span(race_).subspan(s * k, k), rate, d, order);
    double prod = 1.0;
    for (std::size_t j = 0; j < d; ++j)
      prod *= u_[order[j]];
    sum += prod;
    sum_sq += prod * prod;
  }
  const double n = double(degrees_.size());
  const double mean = sum / n;
  const double var = n > 1 ? std::max(0.0, (sum_sq - n * mean * mean) / (n - 1)) : 0.0;
  return {mean, std::sqrt(var / n)};
}

double psi(double lambda, std::span<const double> reliability,
           const DegreeDistribution &omega, std::size_t mc_samples,
           std::uint64_t seed) {
  return PsiEstimator(reliability, omega, mc_samples, seed)(lambda);
}

double tune_lambda(std::span<const double> reliability,
                   const DegreeDistribution &omega, double target, double tol,
                   double lambda_max, const TuneOptions &options) {
  if (!(tol > 0.0) || !(lambda_max > 0.0))
    throw ConfigError("tune_lambda needs tol > 0 and lambda_max > 0");
  const PsiEstimator estimator(reliability, omega, options.mc_samples,
                               options.seed);
  const double at_zero = estimator(0.0);
  if (std::abs(at_zero - target) < tol)
    return 0.0;
  const double at_max = estimator(lambda_max);
  if (target < at_zero || target > at_max)
    throw InfeasibleError("infeasible target " + std::to_string(target) +
                              ": achievable Psi interval is [" +
                              std::to_string(at_zero) + ", " +
                              std::to_string(at_max) + "]",
                          at_zero, at_max);
  double lo = 0.0, hi = lambda_max;
  double best = lambda_max, best_err = std::abs(at_max - target);
  for (int it = 0; it < options.max_iterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double value = estimator(mid);
    const double err = std::abs(value - target);
    if (err < best_err || (err == best_err && mid < best)) {
      best = mid;
      best_err = err;
    }
    if (err < tol)
      return mid;
    (value < target ? lo : hi) = mid;
  }
  return best;
}

double init_constraint(std::span<const double> reliability,
                       const DegreeDistribution &omega, double lambda,
                       double v_channel, std::size_t mc_samples,
                       std::uint64_t seed) {
  return v_channel * psi(lambda, reliability, omega, mc_samples, seed);
}

double pinsker_mi_bound(std::span<const double> reliability,
                        const DegreeDistribution &omega, double lambda,
                        std::size_t mc_samples, std::uint64_t seed) {
  const double gap = psi(lambda, reliability, omega, mc_samples, seed) - 1.0;
  return 0.5 * gap * gap;
}

double dkl_upper_bound(std::span<const double> reliability,
                       const DegreeDistribution &omega,
                       bool min_degree_subsets) {
  omega.check_fits(reliability.size());
  std::vector<double> sorted(reliability.begin(), reliability.end());
  if (min_degree_subsets)
    std::sort(sorted.begin(), sorted.end());
  else
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
  const std::vector<double> edge = omega.edge_distribution();
  double avg = 0.0, prefix = 1.0;
  for (std::size_t d = 1; d <= edge.size(); ++d) {
    prefix *= sorted[d - 1];
    avg += edge[d - 1] * prefix;
  }
  return 4.0 * (avg - 1.0) * (avg - 1.0);
}

std::vector<double> plackett_luce_subset_law(std::span<const double> rho,
                                             std::size_t max_size) {
  const std::size_t k = rho.size();
  if (k > 20)
    throw ConfigError("subset enumeration limited to k <= 20");
  const std::size_t full = std::size_t(1) << k;
  std::vector<double> law(full, 0.0);
  law[0] = 1.0;
  for (std::size_t mask = 0; mask < full; ++mask) {
    const double p = law[mask];
    if (p == 0.0 || std::size_t(std::popcount(mask)) >= max_size)
      continue;
    double remaining = 0.0;
    for (std::size_t j = 0; j < k; ++j)
      if (!(mask >> j & 1u))
        remaining += rho[j];
    for (std::size_t j = 0; j < k; ++j)
      if (!(mask >> j & 1u))
        law[mask | (std::size_t(1) << j)] += p * rho[j] / remaining;
  }
  return law;
}

namespace {

// sum_d omega(d) sum_{|S|=d} P(S) prod_{j in S} factor[j]
double expected_subset_product(std::span<const double> factor,
                               const DegreeDistribution &omega,
                               const SelectionWeights &weights,
                               std::size_t max_k) {
  const std::size_t k = factor.size();
  if (k > max_k)
    throw ConfigError("refusing exact enumeration for k=" + std::to_string(k) +
                      " (limit " + std::to_string(max_k) + ")");
  if (weights.size() != k)
    throw StructuralError("selection weights do not match stream length");
  omega.check_fits(k);
  const std::vector<double> edge = omega.edge_distribution();
  const std::vector<double> law =
      plackett_luce_subset_law(weights.rho(), omega.max_degree());
  double total = 0.0;
  for (std::size_t mask = 1; mask < law.size(); ++mask) {
    if (law[mask] == 0.0)
      continue;
    const auto d = std::size_t(std::popcount(mask));
    double prod = 1.0;
    for (std::size_t j = 0; j < k; ++j)
      if (mask >> j & 1u)
        prod *= factor[j];
    total += edge[d - 1] * law[mask] * prod;
  }
  return total;
}

} // namespace

double exact_psi(std::span<const double> reliability,
                 const DegreeDistribution &omega,
                 const SelectionWeights &weights, std::size_t max_k) {
  return expected_subset_product(reliability, omega, weights, max_k);
}

double exact_symbol_kl(const BitBlock &block, const DegreeDistribution &omega,
                       const SelectionWeights &weights, std::size_t max_k) {
  const FlippedPrior flipped = flip_priors(block);
  std::vector<double> t(flipped.mu_tilde.size());
  std::transform(flipped.mu_tilde.begin(), flipped.mu_tilde.end(), t.begin(),
                 [](double m) { return std::tanh(0.5 * m); });
  const double expected = expected_subset_product(t, omega, weights, max_k);
  // p(v = 0) = (1 + expected) / 2; KL(delta_0 || p) = -ln p(v = 0).
  return -std::log1p(-0.5 * (1.0 - expected));
}

namespace {

DesignPoint evaluate_point(const PsiEstimator &estimator, double lambda,
                           double v_channel, double dkl,
                           const DesignSettings &s) {
  DesignPoint p;
  p.lambda = lambda;
  p.psi = estimator(lambda);
  p.init_constraint = v_channel * p.psi;
  p.pinsker_bound = 0.5 * (p.psi - 1.0) * (p.psi - 1.0);
  p.dkl_upper = dkl;
  p.feasible_eps1 = p.init_constraint > s.eps1;
  p.feasible_eps2 = p.pinsker_bound > s.eps2;
  return p;
}

// Smallest lambda in [0, lambda_max] with V Psi(lambda) > eps1, by bisection
// on the monotone estimate.
double smallest_initializing_lambda(const PsiEstimator &estimator,
                                    double v_channel,
                                    const DesignSettings &s) {
  const auto ok = [&](double lambda) {
    return v_channel * estimator(lambda) > s.eps1;
  };
  if (ok(0.0))
    return 0.0;
  double lo = 0.0, hi = s.lambda_max;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? hi : lo) = mid;
  }
  return hi;
}

} // namespace

DesignReport design_report(std::span<const double> reliability,
                           const DegreeDistribution &omega, double sigma2,
                           const DesignSettings &settings) {
  if (settings.grid_points < 2)
    throw ConfigError("design grid needs at least two points");
  DesignReport report;
  report.v_channel = channel_tanh_mean(sigma2);
  const PsiEstimator estimator(reliability, omega, settings.mc_samples,
                               settings.seed);
  const double dkl = dkl_upper_bound(reliability, omega);
  const double at_zero = estimator(0.0);
  const double at_max = estimator(settings.lambda_max);

  if (settings.psi_target) {
    TuneOptions opts{settings.mc_samples, settings.seed, 60};
    report.tuned_lambda = tune_lambda(reliability, omega, *settings.psi_target,
                                      settings.tolerance, settings.lambda_max,
                                      opts);
  } else {
    const double needed = settings.eps1 / report.v_channel;
    if (!(report.v_channel * at_max > settings.eps1))
      throw InfeasibleError(
          "initialization constraint unreachable: needs Psi > " +
              std::to_string(needed) + ", achievable Psi interval is [" +
              std::to_string(at_zero) + ", " + std::to_string(at_max) + "]",
          at_zero, at_max);
    report.tuned_lambda =
        smallest_initializing_lambda(estimator, report.v_channel, settings);
  }
  report.tuned = evaluate_point(estimator, report.tuned_lambda,
                                report.v_channel, dkl, settings);
  if (!report.tuned.feasible_eps1 || !report.tuned.feasible_eps2)
    throw InfeasibleError(
        "no lambda meets eps1=" + std::to_string(settings.eps1) +
            " and eps2=" + std::to_string(settings.eps2) +
            "; achievable Psi interval is [" + std::to_string(at_zero) + ", " +
            std::to_string(at_max) + "], Psi must lie in (" +
            std::to_string(settings.eps1 / report.v_channel) + ", " +
            std::to_string(1.0 - std::sqrt(2.0 * settings.eps2)) + ")",
        at_zero, at_max);

  for (std::size_t g = 0; g < settings.grid_points; ++g) {
    const double lambda =
        settings.lambda_max * double(g) / double(settings.grid_points - 1);
    report.rows.push_back(
        evaluate_point(estimator, lambda, report.v_channel, dkl, settings));
  }
  const bool on_grid = std::any_of(
      report.rows.begin(), report.rows.end(),
      [&](const DesignPoint &p) { return p.lambda == report.tuned_lambda; });
  if (!on_grid)
    report.rows.push_back(report.tuned);
  std::stable_sort(report.rows.begin(), report.rows.end(),
                   [](const DesignPoint &a, const DesignPoint &b) {
                     return a.lambda < b.lambda;
                   });
  return report;
}

} // namespace ltjscc
