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
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace ltjscc {

inline constexpr double kDefaultMuFloor = 1e-3;

// Numerically stable logistic function.
double sigmoid(double x) noexcept;

// Binary entropy in bits; H2(0) = H2(1) = 0.
double binary_entropy(double p) noexcept;

/// Per-bit prior log-likelihood ratios, ln p(b=0)/p(b=1).
///
/// Every entry is finite and at least `mu_floor` in magnitude. Immutable
/// after construction.
class PriorVector {
public:
  explicit PriorVector(std::vector<double> mu,
                       double mu_floor = kDefaultMuFloor);

  std::size_t size() const noexcept { return mu_.size(); }
  double operator[](std::size_t i) const noexcept { return mu_[i]; }
  std::span<const double> values() const noexcept { return mu_; }

private:
  std::vector<double> mu_;
};

/// Message bits of one stream together with their priors.
class BitBlock {
public:
  BitBlock(std::vector<std::uint8_t> bits, PriorVector prior);

  std::size_t size() const noexcept { return bits_.size(); }
  std::span<const std::uint8_t> bits() const noexcept { return bits_; }
  const PriorVector &prior() const noexcept { return prior_; }

private:
  std::vector<std::uint8_t> bits_;
  PriorVector prior_;
};

/// Priors seen in the all-zero frame: each entry negated where the bit is 1.
struct FlippedPrior {
  std::vector<double> mu_tilde;
};

// |mu| ~ U[certainty_low, certainty_high], sign uniform, and each bit drawn
// from the law its prior describes. Pure function of the arguments.
BitBlock generate_synthetic(std::size_t k, double certainty_low,
                            double certainty_high, std::uint64_t seed,
                            double mu_floor = kDefaultMuFloor);

// Half the bits (even positions) nearly uninformative, |mu| ~ U[mu_floor,
// 2 mu_floor]; the rest (odd positions) |mu| ~ U[certainty_low,
// certainty_high]. Used for unequal-protection experiments.
BitBlock generate_bimodal(std::size_t k, double certainty_low,
                          double certainty_high, std::uint64_t seed,
                          double mu_floor = kDefaultMuFloor);

enum class PriorsFormat { Text, Binary };

// Reads either the text format (`<bit>\t<mu>` per line, '#' comments) or the
// binary "NPRI" format; the format is detected from the leading magic.
BitBlock load_bits_with_priors(const std::filesystem::path &path,
                               double mu_floor = kDefaultMuFloor);

void save_bits_with_priors(const BitBlock &block,
                           const std::filesystem::path &path,
                           PriorsFormat format = PriorsFormat::Text);

FlippedPrior flip_priors(const BitBlock &block);

// Probability that the flipped prior lands on the wrong side of zero:
// 1 - sigmoid(|mu|).
double wrong_side_probability(double mu) noexcept;

} // namespace ltjscc
