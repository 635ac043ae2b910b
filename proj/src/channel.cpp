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

#include "ltjscc/channel.hpp"

#include "ltjscc/errors.hpp"
#include "ltjscc/rng.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <random>
#include <string>
#include <tuple>

namespace ltjscc {

void ChannelParams::validate() const {
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2))
    throw ConfigError("noise variance must be positive and finite");
}

std::vector<double> modulate(std::span<const std::uint8_t> bits) {
  std::vector<double> out(bits.size());
  std::transform(bits.begin(), bits.end(), out.begin(),
                 [](std::uint8_t b) { return b ? -1.0 : 1.0; });
  return out;
}

std::vector<double> transmit(std::span<const double> symbols,
                             const ChannelParams &params) {
  params.validate();
  SplitMix64 gen(params.seed);
  std::normal_distribution<double> noise(0.0, std::sqrt(params.sigma2));
  std::vector<double> out(symbols.size());
  for (std::size_t i = 0; i < symbols.size(); ++i)
    out[i] = symbols[i] + noise(gen);
  return out;
}

LlrVector demodulate(std::span<const double> received, double sigma2,
                     double llr_cap) {
  if (!(sigma2 > 0.0))
    throw ConfigError("noise variance must be positive");
  LlrVector out(received.size());
  for (std::size_t i = 0; i < received.size(); ++i)
    out[i] = std::clamp(2.0 * received[i] / sigma2, -llr_cap, llr_cap);
  return out;
}

namespace {

constexpr std::size_t kQuadratureLimit = 512;
constexpr double kTailSigmas = 40.0;

template <class F> double density_integrand(double l, void *params) {
  const auto &[f, mean, sd] = *static_cast<std::tuple<F, double, double> *>(params);
  const double z = (l - mean) / sd;
  return std::exp(-0.5 * z * z) * f(l);
}

// E[f(L)] for L ~ N(m, 2m), m = 2/sigma2, by adaptive Gauss-Kronrod
// quadrature over +-40 standard deviations, split at L = 0.
template <class F> double llr_expectation(double sigma2, F f) {
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2))
    throw ConfigError("noise variance must be positive and finite");
  const double mean = 2.0 / sigma2;
  const double sd = std::sqrt(2.0 * mean);
  std::tuple<F, double, double> params{f, mean, sd};
  gsl_function fn{&density_integrand<F>, &params};
  std::unique_ptr<gsl_integration_workspace, decltype(&gsl_integration_workspace_free)>
      ws(gsl_integration_workspace_alloc(kQuadratureLimit),
         &gsl_integration_workspace_free);
  if (!ws)
    throw Error("failed to allocate quadrature workspace");
  const double lo = mean - kTailSigmas * sd, hi = mean + kTailSigmas * sd;
  std::vector<double> cuts{lo};
  if (lo < 0.0 && hi > 0.0)
    cuts.push_back(0.0);
  cuts.push_back(hi);
  static std::once_flag quiet;
  std::call_once(quiet, [] { gsl_set_error_handler_off(); });
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double value = 0.0, err = 0.0;
    const int status =
        gsl_integration_qag(&fn, cuts[i], cuts[i + 1], 1e-15, 1e-13,
                            kQuadratureLimit, GSL_INTEG_GAUSS61, ws.get(),
                            &value, &err);
    if (status != GSL_SUCCESS && status != GSL_EROUND)
      throw Error(std::string("quadrature failed: ") + gsl_strerror(status));
    total += value;
  }
  return total / (sd * std::sqrt(2.0 * std::numbers::pi));
}

// log2(1 + e^{-x}) without overflow.
double log2_one_plus_exp_neg(double x) {
  if (x > 0.0)
    return std::log1p(std::exp(-x)) / std::numbers::ln2;
  return (-x + std::log1p(std::exp(x))) / std::numbers::ln2;
}

} // namespace

double capacity(double sigma2) {
  return 1.0 - llr_expectation(sigma2, log2_one_plus_exp_neg);
}

double channel_tanh_mean(double sigma2) {
  return llr_expectation(sigma2, [](double l) { return std::tanh(0.5 * l); });
}

double snr_db_from_sigma2(double sigma2) {
  return 10.0 * std::log10(1.0 / sigma2);
}

double sigma2_from_snr_db(double snr_db) {
  return std::pow(10.0, -snr_db / 10.0);
}

} // namespace ltjscc
