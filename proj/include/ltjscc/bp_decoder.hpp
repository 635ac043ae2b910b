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

#include "ltjscc/channel.hpp"
#include "ltjscc/degree_distribution.hpp"
#include "ltjscc/lt_codec.hpp"
#include "ltjscc/source_model.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ltjscc {

inline constexpr double kTanhClamp = 1.0 - 1e-12;
inline constexpr double kMessageCap = 30.0;

/// Bipartite LT graph with its channel and prior evidence.
///
/// Edges are stored output-major: the edges of output o occupy
/// [output_offsets()[o], output_offsets()[o + 1]) and edge_inputs() gives the
/// input node of each. input_offsets()/input_edges() index the same edges by
/// input node.
class DecodeGraph {
public:
  DecodeGraph(std::span<const CodedSymbolSpec> specs, LlrVector channel_llr,
              PriorVector prior);

  std::size_t k() const noexcept { return prior_.size(); }
  std::size_t n() const noexcept { return channel_llr_.size(); }
  std::size_t edges() const noexcept { return edge_input_.size(); }

  std::span<const std::uint32_t> output_offsets() const noexcept {
    return out_offset_;
  }
  std::span<const std::uint32_t> edge_inputs() const noexcept {
    return edge_input_;
  }
  std::span<const std::uint32_t> input_offsets() const noexcept {
    return in_offset_;
  }
  std::span<const std::uint32_t> input_edges() const noexcept {
    return in_edge_;
  }
  std::span<const double> channel_llr() const noexcept { return channel_llr_; }
  const PriorVector &prior() const noexcept { return prior_; }

private:
  LlrVector channel_llr_;
  PriorVector prior_;
  std::vector<std::uint32_t> out_offset_;
  std::vector<std::uint32_t> edge_input_;
  std::vector<std::uint32_t> in_offset_;
  std::vector<std::uint32_t> in_edge_;
};

struct OpCounter {
  std::uint64_t tanh = 0;
  std::uint64_t atanh = 0;
  std::uint64_t mul = 0;
  std::uint64_t div = 0;
  std::uint64_t add = 0;
  std::uint64_t sub = 0;

  std::uint64_t total() const noexcept {
    return tanh + atanh + mul + div + add + sub;
  }
};

struct IterationStats {
  std::size_t iteration;
  double mean_input_msg;
  double mean_output_msg;
  std::uint64_t op_count_cum;
};

struct DecodeResult {
  std::vector<double> marginals;
  std::vector<double> soft_bits;
  std::size_t iterations_run = 0;
  std::uint64_t op_count = 0;
  OpCounter ops;
  // Mean input-to-output message entering each iteration. With known bits the
  // messages are taken in the all-zero frame, otherwise as magnitudes.
  std::vector<double> message_mean_trace;
  std::vector<IterationStats> iterations;
  bool signed_trace = false;
};

// Flooding BP with priors for ceil(eta) rounds. `known_bits`, when non-empty,
// is used only to express the message trace in the all-zero frame.
DecodeResult decode(const DecodeGraph &graph, double eta,
                    std::span<const std::uint8_t> known_bits = {});

// Posterior LLRs by enumeration of all 2^k input words (k <= 16).
std::vector<double> exact_marginals(const DecodeGraph &graph);

// ceil(eta) [8 n sum_d d Omega(d) + 3n + k]
double predicted_complexity(std::size_t n, std::size_t k,
                            const DegreeDistribution &omega, double eta);

std::uint64_t measured_complexity(const DecodeResult &result) noexcept;

// Successive differences of message_mean_trace; empty when fewer than two
// iterations ran.
std::vector<double> message_increase_diagnostic(const DecodeResult &result);

} // namespace ltjscc
