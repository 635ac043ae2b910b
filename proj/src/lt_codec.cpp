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

#include "ltjscc/lt_codec.hpp"

#include "ltjscc/errors.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>

namespace ltjscc {

std::size_t sample_degree(SplitMix64 &gen, const DegreeDistribution &omega) {
  const double u = uniform_open01(gen);
  const auto cdf = omega.cdf();
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  const auto d = static_cast<std::size_t>(it - cdf.begin()) + 1;
  return std::min(d, omega.max_degree());
}

void first_arrivals(std::span<const double> race_time,
                    std::span<const double> rate, std::size_t d,
                    std::vector<std::uint32_t> &order) {
  const std::size_t k = race_time.size();
  order.resize(k);
  std::iota(order.begin(), order.end(), 0u);
  if (d < k) {
    thread_local std::vector<double> arrival;
    arrival.resize(k);
    for (std::size_t i = 0; i < k; ++i)
      arrival[i] = race_time[i] / rate[i];
    std::nth_element(order.begin(), order.begin() + std::ptrdiff_t(d), order.end(),
                     [&](std::uint32_t a, std::uint32_t b) {
                       const double ta = arrival[a], tb = arrival[b];
                       return ta < tb || (ta == tb && a < b);
                     });
  }
  std::sort(order.begin(), order.begin() + std::ptrdiff_t(d));
}

std::vector<std::uint32_t> sample_indices(SplitMix64 &gen,
                                          std::span<const double> rho,
                                          std::size_t d) {
  const std::size_t k = rho.size();
  if (d > k)
    throw StructuralError("cannot select " + std::to_string(d) + " of " +
                          std::to_string(k) + " indices");
  thread_local std::vector<double> race;
  thread_local std::vector<std::uint32_t> order;
  race.resize(k);
  for (double &t : race)
    t = standard_exponential(gen);
  first_arrivals(race, rho, d, order);
  return {order.begin(), order.begin() + std::ptrdiff_t(d)};
}

GeneratorStream::GeneratorStream(std::uint64_t seed, DegreeDistribution omega,
                                 SelectionWeights weights)
    : seed_(seed), omega_(std::move(omega)), weights_(std::move(weights)) {
  omega_.check_fits(weights_.size());
}

CodedSymbolSpec GeneratorStream::symbol(std::uint64_t index) const {
  SplitMix64 gen(derive_seed(seed_, index));
  const std::size_t d = sample_degree(gen, omega_);
  return {index, sample_indices(gen, weights_.rho(), d)};
}

std::uint8_t encode_symbol(const BitBlock &block, const CodedSymbolSpec &spec) {
  const auto bits = block.bits();
  std::uint8_t v = 0;
  for (std::uint32_t i : spec.indices) {
    if (i >= bits.size())
      throw StructuralError("symbol index " + std::to_string(i) +
                            " out of range for stream of length " +
                            std::to_string(bits.size()));
    v ^= bits[i];
  }
  return v;
}

EncodedStream encode_stream(const BitBlock &block,
                            const GeneratorStream &generator, std::size_t n) {
  if (block.size() != generator.k())
    throw StructuralError("generator built for k=" +
                          std::to_string(generator.k()) +
                          " but stream has k=" + std::to_string(block.size()));
  EncodedStream out;
  out.specs = rebuild_graph(generator, n);
  out.bits.reserve(n);
  for (const auto &spec : out.specs)
    out.bits.push_back(encode_symbol(block, spec));
  return out;
}

std::vector<CodedSymbolSpec> rebuild_graph(const GeneratorStream &generator,
                                           std::size_t n) {
  std::vector<CodedSymbolSpec> specs;
  specs.reserve(n);
  for (std::size_t t = 0; t < n; ++t)
    specs.push_back(generator.symbol(t));
  return specs;
}

namespace {

constexpr std::array<char, 4> kSymbolsMagic{'N', 'L', 'T', 'S'};
constexpr std::array<char, 4> kReceivedMagic{'N', 'L', 'L', 'R'};
constexpr std::size_t kHeaderBytes = 4 + 4 + 8 + 4;

template <class T> void put_le(std::string &out, T v) {
  for (std::size_t i = 0; i < sizeof(T); ++i)
    out.push_back(static_cast<char>((std::uint64_t(v) >> (8 * i)) & 0xff));
}

template <class T> T get_le(const std::string &in, std::size_t off) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i)
    v |= std::uint64_t(static_cast<unsigned char>(in[off + i])) << (8 * i);
  return static_cast<T>(v);
}

std::string slurp(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw ParseError(path.string() + ": cannot open");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void dump(const std::filesystem::path &path, const std::string &data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw ParseError(path.string() + ": cannot open for writing");
  out.write(data.data(), std::streamsize(data.size()));
  if (!out)
    throw ParseError(path.string() + ": write failed");
}

std::string header(const std::array<char, 4> &magic, std::uint32_t k,
                   std::uint64_t seed, std::size_t n) {
  if (n > 0xffffffffu)
    throw StructuralError("symbol count does not fit the 32-bit header field");
  std::string out(magic.begin(), magic.end());
  put_le<std::uint32_t>(out, k);
  put_le<std::uint64_t>(out, seed);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(n));
  return out;
}

// Validates magic and size; returns n.
std::uint32_t check_header(const std::string &data,
                           const std::array<char, 4> &magic,
                           const std::filesystem::path &path) {
  if (data.size() < kHeaderBytes)
    throw ParseError(path.string() + ": truncated header at offset " +
                     std::to_string(data.size()));
  if (std::memcmp(data.data(), magic.data(), magic.size()) != 0)
    throw ParseError(path.string() + ": offset 0: bad magic, expected " +
                     std::string(magic.begin(), magic.end()));
  return get_le<std::uint32_t>(data, 16);
}

} // namespace

void write_coded_symbols(const std::filesystem::path &path,
                         const CodedSymbolFile &file) {
  std::string data = header(kSymbolsMagic, file.k, file.seed, file.bits.size());
  const std::size_t payload = (file.bits.size() + 7) / 8;
  const std::size_t base = data.size();
  data.resize(base + payload, '\0');
  for (std::size_t t = 0; t < file.bits.size(); ++t) {
    if (file.bits[t] > 1)
      throw StructuralError("coded bit " + std::to_string(t) + " is not 0 or 1");
    if (file.bits[t])
      data[base + t / 8] = static_cast<char>(
          static_cast<unsigned char>(data[base + t / 8]) | (1u << (t % 8)));
  }
  dump(path, data);
}

CodedSymbolFile read_coded_symbols(const std::filesystem::path &path) {
  const std::string data = slurp(path);
  const std::uint32_t n = check_header(data, kSymbolsMagic, path);
  const std::size_t payload = (std::size_t(n) + 7) / 8;
  if (data.size() != kHeaderBytes + payload)
    throw ParseError(path.string() + ": expected " +
                     std::to_string(kHeaderBytes + payload) + " bytes for " +
                     std::to_string(n) + " symbols, found " +
                     std::to_string(data.size()));
  CodedSymbolFile file;
  file.k = get_le<std::uint32_t>(data, 4);
  file.seed = get_le<std::uint64_t>(data, 8);
  file.bits.resize(n);
  for (std::size_t t = 0; t < n; ++t)
    file.bits[t] =
        (static_cast<unsigned char>(data[kHeaderBytes + t / 8]) >> (t % 8)) & 1u;
  return file;
}

void write_received_symbols(const std::filesystem::path &path,
                            const ReceivedSymbolFile &file) {
  std::string data = header(kReceivedMagic, file.k, file.seed, file.llr.size());
  for (double v : file.llr)
    put_le<std::uint64_t>(data, std::bit_cast<std::uint64_t>(v));
  dump(path, data);
}

ReceivedSymbolFile read_received_symbols(const std::filesystem::path &path) {
  const std::string data = slurp(path);
  const std::uint32_t n = check_header(data, kReceivedMagic, path);
  if (data.size() != kHeaderBytes + std::size_t(n) * 8)
    throw ParseError(path.string() + ": expected " +
                     std::to_string(kHeaderBytes + std::size_t(n) * 8) +
                     " bytes, found " + std::to_string(data.size()));
  ReceivedSymbolFile file;
  file.k = get_le<std::uint32_t>(data, 4);
  file.seed = get_le<std::uint64_t>(data, 8);
  file.llr.resize(n);
  for (std::size_t t = 0; t < n; ++t) {
    const std::size_t off = kHeaderBytes + t * 8;
    file.llr[t] = std::bit_cast<double>(get_le<std::uint64_t>(data, off));
    if (!std::isfinite(file.llr[t]))
      throw ParseError(path.string() + ": offset " + std::to_string(off) +
                       ": LLR is not finite");
  }
  return file;
}

bool is_received_symbol_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  char magic[4] = {};
  in.read(magic, 4);
  return in && std::memcmp(magic, kReceivedMagic.data(), 4) == 0;
}

} // namespace ltjscc
