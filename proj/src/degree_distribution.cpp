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

#include "ltjscc/degree_distribution.hpp"

#include "ltjscc/errors.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace ltjscc {

double stability_floor() noexcept { return 1.0 / std::log(16.0); }

DegreeDistribution::DegreeDistribution(std::vector<double> omega,
                                       bool enforce_stability)
    : omega_(std::move(omega)) {
  if (omega_.empty())
    throw ConfigError("degree distribution is empty");
  double sum = 0.0;
  for (double p : omega_) {
    if (!(p >= 0.0) || !std::isfinite(p))
      throw ConfigError("degree probabilities must be finite and non-negative");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-6)
    throw ConfigError("degree probabilities sum to " + std::to_string(sum) +
                      ", expected 1");
  for (double &p : omega_)
    p /= sum;
  // Trailing zero mass does not raise d_max.
  while (omega_.size() > 1 && omega_.back() == 0.0)
    omega_.pop_back();
  if (enforce_stability && !(probability(2) > stability_floor()))
    throw ConfigError("Omega(2) must exceed 1/ln(16) when stability is enforced");
  cdf_.resize(omega_.size());
  std::partial_sum(omega_.begin(), omega_.end(), cdf_.begin());
  cdf_.back() = 1.0;
}

DegreeDistribution DegreeDistribution::point_mass(std::size_t degree) {
  if (degree == 0)
    throw ConfigError("degree must be at least 1");
  std::vector<double> omega(degree, 0.0);
  omega.back() = 1.0;
  return DegreeDistribution(std::move(omega));
}

DegreeDistribution DegreeDistribution::uniform(std::size_t max_degree) {
  if (max_degree == 0)
    throw ConfigError("degree must be at least 1");
  return DegreeDistribution(
      std::vector<double>(max_degree, 1.0 / double(max_degree)));
}

DegreeDistribution DegreeDistribution::raptor(std::size_t max_degree) {
  struct Term {
    std::size_t degree;
    double mass;
  };
  static constexpr Term kTerms[] = {
      {1, 0.007969}, {2, 0.493570}, {3, 0.166220},  {4, 0.072646},
      {5, 0.082558}, {8, 0.056058}, {9, 0.037229},  {19, 0.055590},
      {65, 0.025023}, {66, 0.003135},
  };
  if (max_degree < 2)
    throw ConfigError("raptor distribution needs d_max >= 2");
  std::vector<double> omega(max_degree, 0.0);
  double kept = 0.0;
  for (const Term &t : kTerms)
    if (t.degree <= max_degree) {
      omega[t.degree - 1] = t.mass;
      kept += t.mass;
    }
  for (double &p : omega)
    p /= kept;
  return DegreeDistribution(std::move(omega));
}

double DegreeDistribution::probability(std::size_t degree) const noexcept {
  if (degree == 0 || degree > omega_.size())
    return 0.0;
  return omega_[degree - 1];
}

double DegreeDistribution::mean() const noexcept {
  double m = 0.0;
  for (std::size_t d = 1; d <= omega_.size(); ++d)
    m += double(d) * omega_[d - 1];
  return m;
}

std::vector<double> DegreeDistribution::edge_distribution() const {
  const double m = mean();
  std::vector<double> edge(omega_.size());
  for (std::size_t d = 1; d <= omega_.size(); ++d)
    edge[d - 1] = double(d) * omega_[d - 1] / m;
  return edge;
}

void DegreeDistribution::check_fits(std::size_t k) const {
  if (max_degree() > k)
    throw StructuralError("d_max " + std::to_string(max_degree()) +
                          " exceeds stream length " + std::to_string(k));
}

} // namespace ltjscc
