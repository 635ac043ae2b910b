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

#include <cstdint>
#include <span>
#include <vector>

namespace ltjscc {

inline constexpr double kDefaultLlrCap = 30.0;

/// BIAWGN channel parameters: noise variance per real dimension and the
/// seed of the noise sequence.
struct ChannelParams {
  double sigma2;
  std::uint64_t seed;

  void validate() const;
};

// Demodulated channel LLRs, ln p(v=0|u^)/p(v=1|u^), clamped to +-llr_cap.
using LlrVector = std::vector<double>;

// BPSK: bit 0 -> +1, bit 1 -> -1.
std::vector<double> modulate(std::span<const std::uint8_t> bits);

// Adds i.i.d. N(0, sigma2) noise drawn from the seed.
std::vector<double> transmit(std::span<const double> symbols,
                             const ChannelParams &params);

LlrVector demodulate(std::span<const double> received, double sigma2,
                     double llr_cap = kDefaultLlrCap);

// BIAWGN capacity in bits per channel use, by adaptive quadrature over the
// LLR law N(2/sigma2, 4/sigma2). The first call switches off the GSL abort
// handler; failures surface as ltjscc::Error.
double capacity(double sigma2);

// E[tanh(L/2)] under the same LLR law; the channel reliability statistic
// used by the initialization constraint.
double channel_tanh_mean(double sigma2);

double snr_db_from_sigma2(double sigma2);
double sigma2_from_snr_db(double snr_db);

} // namespace ltjscc
