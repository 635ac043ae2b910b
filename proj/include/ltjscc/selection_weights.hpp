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

/// Normalised per-bit selection probabilities rho, rho_j ~ exp(lambda U_j).
class SelectionWeights {
public:
  // Takes unnormalised positive weights.
  explicit SelectionWeights(std::vector<double> rho, double lambda = 0.0);

  static SelectionWeights uniform(std::size_t k);

  std::size_t size() const noexcept { return rho_.size(); }
  std::span<const double> rho() const noexcept { return rho_; }
  double lambda() const noexcept { return lambda_; }

private:
  std::vector<double> rho_;
  double lambda_;
};

SelectionWeights selection_weights(std::span<const double> reliability,
                                   double lambda);

} // namespace ltjscc
