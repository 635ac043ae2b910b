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

#include "ltjscc/bp_decoder.hpp"

#include "ltjscc/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

namespace ltjscc {

DecodeGraph::DecodeGraph(std::span<const CodedSymbolSpec> specs,
                         LlrVector channel_llr, PriorVector prior)
    : channel_llr_(std::move(channel_llr)), prior_(std::move(prior)) {
  if (specs.size() != channel_llr_.size())
    throw StructuralError("graph has " + std::to_string(specs.size()) +
                          " outputs but " + std::to_string(channel_llr_.size()) +
                          " channel LLRs");
  const std::size_t k = prior_.size();
  out_offset_.reserve(specs.size() + 1);
  out_offset_.push_back(0);
  std::vector<std::uint32_t> in_degree(k, 0);
  for (const CodedSymbolSpec &spec : specs) {
    std::vector<std::uint32_t> sorted = spec.indices;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw StructuralError("duplicate edge in coded symbol " +
                            std::to_string(spec.symbol_index));
    for (std::uint32_t i : spec.indices) {
      if (i >= k)
        throw StructuralError("coded symbol " +
                              std::to_string(spec.symbol_index) +
                              " references input " + std::to_string(i) +
                              " of " + std::to_string(k));
      edge_input_.push_back(i);
      ++in_degree[i];
    }
    out_offset_.push_back(static_cast<std::uint32_t>(edge_input_.size()));
  }
  in_offset_.assign(k + 1, 0);
  for (std::size_t i = 0; i < k; ++i)
    in_offset_[i + 1] = in_offset_[i] + in_degree[i];
  in_edge_.resize(edge_input_.size());
  std::vector<std::uint32_t> fill(in_offset_.begin(), in_offset_.end() - 1);
  for (std::uint32_t e = 0; e < edge_input_.size(); ++e)
    in_edge_[fill[edge_input_[e]]++] = e;
}

namespace {

double cap(double m) noexcept {
  return std::clamp(m, -kMessageCap, kMessageCap);
}

double clamp_tanh(double t) noexcept {
  return std::clamp(t, -kTanhClamp, kTanhClamp);
}

double edge_mean(std::span<const double> msg,
                 std::span<const std::uint32_t> edge_input,
                 std::span<const std::uint8_t> known_bits) {
  if (msg.empty())
    return 0.0;
  double sum = 0.0;
  for (std::size_t e = 0; e < msg.size(); ++e) {
    if (known_bits.empty())
      sum += std::abs(msg[e]);
    else
      sum += known_bits[edge_input[e]] ? -msg[e] : msg[e];
  }
  return sum / double(msg.size());
}

} // namespace

DecodeResult decode(const DecodeGraph &graph, double eta,
                    std::span<const std::uint8_t> known_bits) {
  if (!(eta >= 1.0) || !std::isfinite(eta))
    throw ConfigError("iteration count must be at least 1");
  const std::size_t k = graph.k(), n = graph.n(), edges = graph.edges();
  if (!known_bits.empty() && known_bits.size() != k)
    throw StructuralError("known bits do not match graph size");
  const auto rounds = static_cast<std::size_t>(std::ceil(eta));
  const auto out_offset = graph.output_offsets();
  const auto edge_input = graph.edge_inputs();
  const auto in_offset = graph.input_offsets();
  const auto in_edge = graph.input_edges();
  const auto llr = graph.channel_llr();
  const auto mu = graph.prior().values();

  std::vector<double> m_io(edges), m_oi(edges), t(edges), marginal(k);
  for (std::size_t e = 0; e < edges; ++e)
    m_io[e] = mu[edge_input[e]];

  DecodeResult result;
  result.signed_trace = !known_bits.empty();
  OpCounter &ops = result.ops;

  for (std::size_t round = 0; round < rounds; ++round) {
    const double mean_in = edge_mean(m_io, edge_input, known_bits);

    for (std::size_t o = 0; o < n; ++o) {
      const std::size_t begin = out_offset[o], end = out_offset[o + 1];
      const double tv = std::tanh(llr[o] / 2.0);
      double prod = 1.0 * tv;
      std::size_t zeros = tv == 0.0 ? 1 : 0;
      double nonzero = tv == 0.0 ? 1.0 : tv;
      for (std::size_t e = begin; e < end; ++e) {
        t[e] = std::tanh(m_io[e] / 2.0);
        prod *= t[e];
        if (t[e] == 0.0)
          ++zeros;
        else
          nonzero *= t[e];
      }
      for (std::size_t e = begin; e < end; ++e) {
        double ext;
        if (zeros == 0)
          ext = prod / t[e];
        else if (zeros == 1 && t[e] == 0.0)
          ext = nonzero;
        else
          ext = 0.0;
        m_oi[e] = cap(2.0 * std::atanh(clamp_tanh(ext)));
      }
      const std::uint64_t d = end - begin;
      ops.tanh += d + 1;
      ops.div += 2 * d + 1;
      ops.mul += 2 * d + 1;
      ops.atanh += d;
    }

    for (std::size_t i = 0; i < k; ++i) {
      double sum = 0.0;
      for (std::size_t j = in_offset[i]; j < in_offset[i + 1]; ++j)
        sum += m_oi[in_edge[j]];
      marginal[i] = mu[i] + sum;
      for (std::size_t j = in_offset[i]; j < in_offset[i + 1]; ++j) {
        const std::uint32_t e = in_edge[j];
        m_io[e] = cap(marginal[i] - m_oi[e]);
      }
      const std::uint64_t d = in_offset[i + 1] - in_offset[i];
      ops.add += d + 1;
      ops.sub += d;
    }

    result.message_mean_trace.push_back(mean_in);
    result.iterations.push_back({round + 1, mean_in,
                                 edge_mean(m_oi, edge_input, known_bits),
                                 ops.total()});
  }

  result.marginals = std::move(marginal);
  result.soft_bits.resize(k);
  for (std::size_t i = 0; i < k; ++i)
    result.soft_bits[i] = 1.0 - sigmoid(result.marginals[i]);
  result.iterations_run = rounds;
  result.op_count = ops.total();
  return result;
}

namespace {

double log_add(double a, double b) noexcept {
  if (a < b)
    std::swap(a, b);
  if (b == -INFINITY)
    return a;
  return a + std::log1p(std::exp(b - a));
}

} // namespace

std::vector<double> exact_marginals(const DecodeGraph &graph) {
  const std::size_t k = graph.k(), n = graph.n();
  if (k > 16)
    throw ConfigError("refusing exact enumeration for k=" + std::to_string(k) +
                      " (limit 16)");
  const auto out_offset = graph.output_offsets();
  const auto edge_input = graph.edge_inputs();
  const auto llr = graph.channel_llr();
  const auto mu = graph.prior().values();
  std::vector<std::uint32_t> masks(n, 0);
  for (std::size_t o = 0; o < n; ++o)
    for (std::size_t e = out_offset[o]; e < out_offset[o + 1]; ++e)
      masks[o] |= 1u << edge_input[e];

  std::vector<double> log_zero(k, -INFINITY), log_one(k, -INFINITY);
  for (std::uint32_t word = 0; word < (1u << k); ++word) {
    double w = 0.0;
    for (std::size_t i = 0; i < k; ++i)
      w += (word >> i & 1u) ? -0.5 * mu[i] : 0.5 * mu[i];
    for (std::size_t o = 0; o < n; ++o)
      w += (std::popcount(word & masks[o]) & 1) ? -0.5 * llr[o] : 0.5 * llr[o];
    for (std::size_t i = 0; i < k; ++i) {
      double &slot = (word >> i & 1u) ? log_one[i] : log_zero[i];
      slot = log_add(slot, w);
    }
  }
  std::vector<double> out(k);
  for (std::size_t i = 0; i < k; ++i)
    out[i] = log_zero[i] - log_one[i];
  return out;
}

double predicted_complexity(std::size_t n, std::size_t k,
                            const DegreeDistribution &omega, double eta) {
  if (!(eta > 0.0))
    return 0.0;
  const double rounds = std::ceil(eta);
  return rounds * (8.0 * double(n) * omega.mean() + 3.0 * double(n) + double(k));
}

std::uint64_t measured_complexity(const DecodeResult &result) noexcept {
  return result.op_count;
}

std::vector<double> message_increase_diagnostic(const DecodeResult &result) {
  const auto &trace = result.message_mean_trace;
  std::vector<double> delta;
  for (std::size_t l = 1; l < trace.size(); ++l)
    delta.push_back(trace[l] - trace[l - 1]);
  return delta;
}

} // namespace ltjscc
