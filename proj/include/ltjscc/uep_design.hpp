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

#include "ltjscc/degree_distribution.hpp"
#include "ltjscc/selection_weights.hpp"
#include "ltjscc/source_model.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace ltjscc {

inline constexpr std::size_t kDefaultPsiSamples = 4096;
inline constexpr std::size_t kDefaultExactMaxK = 12;
inline constexpr double kDefaultLambdaMax = 50.0;
inline constexpr double kDefaultEps1 = 0.05;
inline constexpr double kDefaultEps2 = 1e-4;

// Expected tanh of the flipped prior: [2 sigmoid(|mu|) - 1] tanh(|mu|/2).
double reliability(double mu) noexcept;
std::vector<double> reliability(std::span<const double> mu);
std::vector<double> reliability(const PriorVector &prior);

/// Monte-Carlo estimator of Psi(lambda), the expected product of
/// reliabilities over a coded symbol's index set.
///
/// Degrees are drawn from the edge-perspective law omega(d) and index sets
/// from the LT sampler under rho ~ exp(lambda U). All randomness (degrees and
/// race times) is drawn once at construction, so evaluations at different
/// lambda share common random numbers and the estimate is monotone in lambda
/// sample by sample.
class PsiEstimator {
public:
  PsiEstimator(std::span<const double> reliability,
               const DegreeDistribution &omega,
               std::size_t samples = kDefaultPsiSamples,
               std::uint64_t seed = 0);

  struct Estimate {
    double mean;
    double standard_error;
  };

  Estimate estimate(double lambda) const;
  double operator()(double lambda) const { return estimate(lambda).mean; }

  std::size_t samples() const noexcept { return degrees_.size(); }

private:
  std::vector<double> u_;
  std::vector<std::uint32_t> degrees_;
  std::vector<double> race_; // samples x k
};

double psi(double lambda, std::span<const double> reliability,
           const DegreeDistribution &omega,
           std::size_t mc_samples = kDefaultPsiSamples, std::uint64_t seed = 0);

struct TuneOptions {
  std::size_t mc_samples = kDefaultPsiSamples;
  std::uint64_t seed = 0;
  int max_iterations = 60;
};

// Bisection on lambda in [0, lambda_max] until |Psi(lambda) - target| < tol,
// with common random numbers across evaluations. Throws InfeasibleError
// carrying [Psi(0), Psi(lambda_max)] when the target is outside that range.
double tune_lambda(std::span<const double> reliability,
                   const DegreeDistribution &omega, double target, double tol,
                   double lambda_max = kDefaultLambdaMax,
                   const TuneOptions &options = {});

// V * Psi(lambda); compare against eps1.
double init_constraint(std::span<const double> reliability,
                       const DegreeDistribution &omega, double lambda,
                       double v_channel,
                       std::size_t mc_samples = kDefaultPsiSamples,
                       std::uint64_t seed = 0);

// Pinsker lower bound on per-symbol mutual information, (Psi - 1)^2 / 2.
double pinsker_mi_bound(std::span<const double> reliability,
                        const DegreeDistribution &omega, double lambda,
                        std::size_t mc_samples = kDefaultPsiSamples,
                        std::uint64_t seed = 0);

// 4 [sum_d omega(d) prod_{d smallest U} U - 1]^2. With
// `min_degree_subsets = false` the d largest reliabilities are used instead,
// which gives the low end of the same bracket.
double dkl_upper_bound(std::span<const double> reliability,
                       const DegreeDistribution &omega,
                       bool min_degree_subsets = true);

// Exact probability that the first |S| arrivals of the Plackett-Luce draw
// under `rho` form the set S, for every S with |S| <= max_size. Indexed by
// bitmask; requires rho.size() <= 20.
std::vector<double> plackett_luce_subset_law(std::span<const double> rho,
                                             std::size_t max_size);

// Psi by full subset enumeration (k <= max_k).
double exact_psi(std::span<const double> reliability,
                 const DegreeDistribution &omega,
                 const SelectionWeights &weights,
                 std::size_t max_k = kDefaultExactMaxK);

// Exact per-symbol KL between q(v | bits, priors) and p(v | priors), taken in
// the all-zero frame: priors are flipped by the block's bits, q puts all mass
// on v = 0, and p(v = 0) = (1 + E prod tanh(mu~_j / 2)) / 2 with the
// expectation over omega(d) and the exact subset law. Nats. Refuses k > max_k.
double exact_symbol_kl(const BitBlock &block, const DegreeDistribution &omega,
                       const SelectionWeights &weights,
                       std::size_t max_k = kDefaultExactMaxK);

struct DesignSettings {
  double eps1 = kDefaultEps1;
  double eps2 = kDefaultEps2;
  double lambda_max = kDefaultLambdaMax;
  double tolerance = 1e-3;
  std::size_t mc_samples = kDefaultPsiSamples;
  std::uint64_t seed = 0;
  std::size_t grid_points = 11;
  // When unset, lambda is the smallest value meeting both constraints.
  std::optional<double> psi_target;
};

struct DesignPoint {
  double lambda;
  double psi;
  double init_constraint;
  double pinsker_bound;
  double dkl_upper;
  bool feasible_eps1;
  bool feasible_eps2;
};

struct DesignReport {
  double v_channel = 0.0;
  double tuned_lambda = 0.0;
  DesignPoint tuned{};
  // Grid over [0, lambda_max] with the tuned point merged in, sorted by lambda.
  std::vector<DesignPoint> rows;
};

// Evaluates the design quantities on a lambda grid and selects lambda.
// Throws InfeasibleError when no lambda in the bracket meets the targets.
DesignReport design_report(std::span<const double> reliability,
                           const DegreeDistribution &omega, double sigma2,
                           const DesignSettings &settings = {});

} // namespace ltjscc
