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

#include <cstddef>
#include <span>
#include <vector>

namespace ltjscc {

inline constexpr std::size_t kDefaultMaxDegree = 16;

// Stability floor on the degree-2 mass: Omega(2) > 1/ln(16).
double stability_floor() noexcept;

/// Output-degree law Omega(d), d = 1..d_max.
///
/// Probabilities are non-negative and normalised to sum to one. With the
/// stability flag set, construction rejects laws whose degree-2 mass does not
/// exceed stability_floor().
class DegreeDistribution {
public:
  // `omega[d-1]` is the probability of degree d. Inputs whose sum is within
  // 1e-6 of one are renormalised; anything further off is rejected.
  explicit DegreeDistribution(std::vector<double> omega,
                              bool enforce_stability = false);

  static DegreeDistribution point_mass(std::size_t degree);
  static DegreeDistribution uniform(std::size_t max_degree);
  // Raptor-code output distribution truncated to `max_degree` and
  // renormalised.
  static DegreeDistribution raptor(std::size_t max_degree = kDefaultMaxDegree);

  std::size_t max_degree() const noexcept { return omega_.size(); }
  double probability(std::size_t degree) const noexcept;
  std::span<const double> probabilities() const noexcept { return omega_; }
  std::span<const double> cdf() const noexcept { return cdf_; }

  // sum_d d * Omega(d)
  double mean() const noexcept;

  // Edge-perspective law omega(d) = d Omega(d) / sum_d' d' Omega(d').
  std::vector<double> edge_distribution() const;

  // Throws StructuralError when d_max exceeds the stream length.
  void check_fits(std::size_t k) const;

private:
  std::vector<double> omega_;
  std::vector<double> cdf_;
};

} // namespace ltjscc
