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
#include "ltjscc/rng.hpp"
#include "ltjscc/selection_weights.hpp"
#include "ltjscc/source_model.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace ltjscc {

/// One LT output symbol: the sorted, distinct input indices it XORs.
struct CodedSymbolSpec {
  std::uint64_t symbol_index = 0;
  std::vector<std::uint32_t> indices;

  std::size_t degree() const noexcept { return indices.size(); }
  bool operator==(const CodedSymbolSpec &) const = default;
};

// Inverse-CDF categorical draw; returns a degree in [1, d_max].
std::size_t sample_degree(SplitMix64 &gen, const DegreeDistribution &omega);

// Weighted sampling of d distinct indices without replacement, Plackett-Luce
// order: every index receives a Gumbel perturbation of ln rho_i and the d
// largest win. Implemented in the equivalent exponential-race form (smallest
// E_i / rho_i, E_i ~ Exp(1)). Result is sorted ascending.
std::vector<std::uint32_t> sample_indices(SplitMix64 &gen,
                                          std::span<const double> rho,
                                          std::size_t d);

// Deterministic core of sample_indices: the d smallest race_time[i] / rate[i].
// `order` is scratch of any size; on return its first d entries (sorted) are
// the winners.
void first_arrivals(std::span<const double> race_time,
                    std::span<const double> rate, std::size_t d,
                    std::vector<std::uint32_t> &order);

/// Seeded, stateless source of coded-symbol specs. Symbol t depends only on
/// (seed, t, Omega, rho), so encoder and decoder rebuild identical graphs and
/// any prefix or range can be generated independently.
class GeneratorStream {
public:
  GeneratorStream(std::uint64_t seed, DegreeDistribution omega,
                  SelectionWeights weights);

  std::uint64_t seed() const noexcept { return seed_; }
  std::size_t k() const noexcept { return weights_.size(); }
  const DegreeDistribution &omega() const noexcept { return omega_; }
  const SelectionWeights &weights() const noexcept { return weights_; }

  CodedSymbolSpec symbol(std::uint64_t index) const;

private:
  std::uint64_t seed_;
  DegreeDistribution omega_;
  SelectionWeights weights_;
};

std::uint8_t encode_symbol(const BitBlock &block, const CodedSymbolSpec &spec);

struct EncodedStream {
  std::vector<std::uint8_t> bits;
  std::vector<CodedSymbolSpec> specs;
};

// First n symbols of the stream.
EncodedStream encode_stream(const BitBlock &block,
                            const GeneratorStream &generator, std::size_t n);

std::vector<CodedSymbolSpec> rebuild_graph(const GeneratorStream &generator,
                                           std::size_t n);

/// Contents of an "NLTS" coded-symbol file. Specs are never stored; the
/// decoder regenerates them from the seed.
struct CodedSymbolFile {
  std::uint32_t k = 0;
  std::uint64_t seed = 0;
  std::vector<std::uint8_t> bits;
};

void write_coded_symbols(const std::filesystem::path &path,
                         const CodedSymbolFile &file);
CodedSymbolFile read_coded_symbols(const std::filesystem::path &path);

/// Contents of an "NLLR" received-symbol file: channel LLRs in place of hard
/// bits, same header layout as NLTS.
struct ReceivedSymbolFile {
  std::uint32_t k = 0;
  std::uint64_t seed = 0;
  std::vector<double> llr;
};

void write_received_symbols(const std::filesystem::path &path,
                            const ReceivedSymbolFile &file);
ReceivedSymbolFile read_received_symbols(const std::filesystem::path &path);

// True when the file at `path` starts with the NLLR magic.
bool is_received_symbol_file(const std::filesystem::path &path);

} // namespace ltjscc
