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

#include "ltjscc/errors.hpp"
#include "ltjscc/lt_codec.hpp"
#include "test_helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

using namespace ltjscc;

TEST_CASE("degree draws follow the distribution") {
  const DegreeDistribution omega({0.1, 0.5, 0.15, 0.25});
  SplitMix64 gen(1);
  const int draws = 100000;
  std::vector<int> count(5, 0);
  for (int i = 0; i < draws; ++i) {
    const std::size_t d = sample_degree(gen, omega);
    REQUIRE(d >= 1);
    REQUIRE(d <= 4);
    ++count[d];
  }
  for (std::size_t d = 1; d <= 4; ++d) {
    const double p = omega.probability(d);
    const double se = std::sqrt(p * (1 - p) / draws);
    CHECK(std::abs(count[d] / double(draws) - p) < 4 * se);
  }
}

TEST_CASE("index sets are distinct, sorted and bounded") {
  SplitMix64 gen(2);
  const std::vector<double> rho(20, 1.0 / 20);
  for (std::size_t d = 1; d <= 20; ++d) {
    const auto idx = sample_indices(gen, rho, d);
    REQUIRE(idx.size() == d);
    CHECK(std::is_sorted(idx.begin(), idx.end()));
    CHECK(std::set<std::uint32_t>(idx.begin(), idx.end()).size() == d);
    CHECK(idx.back() < 20);
  }
  CHECK_THROWS_AS(sample_indices(gen, rho, 21), StructuralError);
}

TEST_CASE("weighted selection matches the sequential draw law") {
  // Probability that the first two sequential draws without replacement form
  // the set {i, j}: rho_i rho_j / (1 - rho_i) + rho_j rho_i / (1 - rho_j).
  const std::vector<double> rho{0.5, 0.3, 0.15, 0.05};
  SplitMix64 gen(3);
  const int draws = 200000;
  std::map<std::pair<std::uint32_t, std::uint32_t>, int> count;
  for (int t = 0; t < draws; ++t) {
    const auto idx = sample_indices(gen, rho, 2);
    ++count[{idx[0], idx[1]}];
  }
  for (std::uint32_t i = 0; i < 4; ++i) {
    for (std::uint32_t j = i + 1; j < 4; ++j) {
      const double p = rho[i] * rho[j] / (1 - rho[i]) +
                       rho[j] * rho[i] / (1 - rho[j]);
      const double se = std::sqrt(p * (1 - p) / draws);
      CAPTURE(i);
      CAPTURE(j);
      CHECK(std::abs(count[{i, j}] / double(draws) - p) < 4 * se);
    }
  }
}

TEST_CASE("single draws follow the selection weights") {
  const std::vector<double> rho{0.6, 0.1, 0.3};
  SplitMix64 gen(4);
  const int draws = 100000;
  std::vector<int> count(3, 0);
  for (int t = 0; t < draws; ++t)
    ++count[sample_indices(gen, rho, 1)[0]];
  for (std::size_t i = 0; i < 3; ++i) {
    const double se = std::sqrt(rho[i] * (1 - rho[i]) / draws);
    CHECK(std::abs(count[i] / double(draws) - rho[i]) < 4 * se);
  }
}

TEST_CASE("generator symbols depend only on seed and index") {
  const GeneratorStream g(77, DegreeDistribution::raptor(),
                          SelectionWeights::uniform(64));
  const auto forward = rebuild_graph(g, 50);
  for (std::size_t t = 50; t-- > 0;)
    CHECK(g.symbol(t) == forward[t]);
  const GeneratorStream other(78, DegreeDistribution::raptor(),
                              SelectionWeights::uniform(64));
  std::size_t same = 0;
  for (std::size_t t = 0; t < 50; ++t)
    same += other.symbol(t) == forward[t];
  CHECK(same < 25);
  CHECK_THROWS_AS(GeneratorStream(1, DegreeDistribution::uniform(10),
                                  SelectionWeights::uniform(5)),
                  StructuralError);
}

TEST_CASE("coded bit is the XOR of the selected message bits") {
  const BitBlock block({1, 0, 1, 1}, PriorVector({1.0, 1.0, 1.0, 1.0}));
  CHECK(encode_symbol(block, {0, {0, 2}}) == 0);
  CHECK(encode_symbol(block, {0, {0, 1, 2, 3}}) == 1);
  CHECK(encode_symbol(block, {0, {1}}) == 0);
  CHECK_THROWS_AS(encode_symbol(block, {0, {4}}), StructuralError);
}

TEST_CASE("encoded stream is a prefix-consistent function of the seed") {
  const BitBlock block = generate_synthetic(32, 0.5, 4.0, 1);
  const GeneratorStream g(5, DegreeDistribution::raptor(8),
                          SelectionWeights::uniform(32));
  const auto a = encode_stream(block, g, 40);
  const auto b = encode_stream(block, g, 20);
  CHECK(std::equal(b.bits.begin(), b.bits.end(), a.bits.begin()));
  CHECK(encode_stream(block, g, 0).bits.empty());
}

TEST_CASE("coded symbol files round-trip") {
  const auto path = testing::scratch_dir() / "s.nlts";
  CodedSymbolFile f{32, 0x0123456789abcdefULL, {1, 0, 1, 1, 0, 0, 0, 1, 1}};
  write_coded_symbols(path, f);
  CHECK(std::filesystem::file_size(path) == 20 + 2);
  const auto r = read_coded_symbols(path);
  CHECK(r.k == 32);
  CHECK(r.seed == f.seed);
  CHECK(r.bits == f.bits);
  CHECK_FALSE(is_received_symbol_file(path));

  write_coded_symbols(path, {8, 1, {}});
  CHECK(std::filesystem::file_size(path) == 20);
  CHECK(read_coded_symbols(path).bits.empty());
}

TEST_CASE("received symbol files round-trip") {
  const auto path = testing::scratch_dir() / "s.nllr";
  ReceivedSymbolFile f{16, 9, {0.5, -3.25, 0.0}};
  write_received_symbols(path, f);
  CHECK(is_received_symbol_file(path));
  const auto r = read_received_symbols(path);
  CHECK(r.llr == f.llr);
  CHECK(r.k == 16);
}

TEST_CASE("malformed symbol files") {
  const auto path = testing::scratch_dir() / "bad.nlts";
  testing::write_file(path, "NLTS");
  CHECK_THROWS_AS(read_coded_symbols(path), ParseError);
  write_coded_symbols(path, {8, 1, {1, 0, 1}});
  std::string data = testing::read_file(path);
  data[0] = 'X';
  testing::write_file(path, data);
  CHECK_THROWS_AS(read_coded_symbols(path), ParseError);
  write_coded_symbols(path, {8, 1, std::vector<std::uint8_t>(9, 1)});
  data = testing::read_file(path);
  data.pop_back();
  testing::write_file(path, data);
  CHECK_THROWS_AS(read_coded_symbols(path), ParseError);
}
