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

#include "ltjscc/source_model.hpp"

#include "ltjscc/errors.hpp"
#include "ltjscc/rng.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

namespace ltjscc {

double sigmoid(double x) noexcept {
  if (x >= 0.0)
    return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double binary_entropy(double p) noexcept {
  if (p <= 0.0 || p >= 1.0)
    return 0.0;
  return -(p * std::log2(p) + (1.0 - p) * std::log2(1.0 - p));
}

PriorVector::PriorVector(std::vector<double> mu, double mu_floor)
    : mu_(std::move(mu)) {
  if (!(mu_floor >= 0.0))
    throw ConfigError("mu_floor must be non-negative");
  for (std::size_t i = 0; i < mu_.size(); ++i) {
    if (!std::isfinite(mu_[i]))
      throw ConfigError("prior " + std::to_string(i) + " is not finite");
    if (std::abs(mu_[i]) < mu_floor)
      throw ConfigError("prior " + std::to_string(i) + " has |mu| below mu_floor");
  }
}

BitBlock::BitBlock(std::vector<std::uint8_t> bits, PriorVector prior)
    : bits_(std::move(bits)), prior_(std::move(prior)) {
  if (bits_.size() != prior_.size())
    throw StructuralError("bit count " + std::to_string(bits_.size()) +
                          " does not match prior count " +
                          std::to_string(prior_.size()));
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i] > 1)
      throw StructuralError("bit " + std::to_string(i) + " is not 0 or 1");
}

namespace {

void check_certainty(std::size_t k, double lo, double hi, double mu_floor) {
  if (k == 0)
    throw ConfigError("stream length must be at least 1");
  if (!(lo > 0.0) || !(lo <= hi) || !std::isfinite(hi))
    throw ConfigError("certainty range must satisfy 0 < low <= high");
  if (lo < mu_floor)
    throw ConfigError("certainty_low is below mu_floor");
}

// Draws sign and bit for one prior magnitude.
void draw_bit(SplitMix64 &gen, double magnitude, double &mu,
              std::uint8_t &bit) {
  mu = (gen() >> 63) ? -magnitude : magnitude;
  // p(b = 1) = 1 - sigmoid(mu) = sigmoid(-mu)
  bit = uniform_open01(gen) < sigmoid(-mu) ? 1 : 0;
}

} // namespace

BitBlock generate_synthetic(std::size_t k, double certainty_low,
                            double certainty_high, std::uint64_t seed,
                            double mu_floor) {
  check_certainty(k, certainty_low, certainty_high, mu_floor);
  SplitMix64 gen(seed);
  std::vector<double> mu(k);
  std::vector<std::uint8_t> bits(k);
  const double span = certainty_high - certainty_low;
  for (std::size_t i = 0; i < k; ++i) {
    const double magnitude = certainty_low + span * uniform_open01(gen);
    draw_bit(gen, magnitude, mu[i], bits[i]);
  }
  return BitBlock(std::move(bits), PriorVector(std::move(mu), mu_floor));
}

BitBlock generate_bimodal(std::size_t k, double certainty_low,
                          double certainty_high, std::uint64_t seed,
                          double mu_floor) {
  check_certainty(k, certainty_low, certainty_high, mu_floor);
  if (!(mu_floor > 0.0))
    throw ConfigError("bimodal source needs mu_floor > 0");
  SplitMix64 gen(seed);
  std::vector<double> mu(k);
  std::vector<std::uint8_t> bits(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double u = uniform_open01(gen);
    const double magnitude =
        (i % 2 == 0) ? mu_floor * (1.0 + u)
                     : certainty_low + (certainty_high - certainty_low) * u;
    draw_bit(gen, magnitude, mu[i], bits[i]);
  }
  return BitBlock(std::move(bits), PriorVector(std::move(mu), mu_floor));
}

namespace {

constexpr std::array<char, 4> kPriorsMagic{'N', 'P', 'R', 'I'};

std::uint32_t read_u32_le(const unsigned char *p) {
  return std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 |
         std::uint32_t(p[2]) << 16 | std::uint32_t(p[3]) << 24;
}

std::uint64_t read_u64_le(const unsigned char *p) {
  return std::uint64_t(read_u32_le(p)) |
         std::uint64_t(read_u32_le(p + 4)) << 32;
}

void write_u32_le(std::ostream &out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i)
    out.put(static_cast<char>((v >> (8 * i)) & 0xff));
}

void write_u64_le(std::ostream &out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i)
    out.put(static_cast<char>((v >> (8 * i)) & 0xff));
}

BitBlock parse_binary(const std::string &data, const std::string &name,
                      double mu_floor) {
  const auto *p = reinterpret_cast<const unsigned char *>(data.data());
  if (data.size() < 8)
    throw ParseError(name + ": truncated header at offset " +
                     std::to_string(data.size()));
  const std::uint32_t count = read_u32_le(p + 4);
  if (count == 0)
    throw ParseError(name + ": zero-length stream");
  const std::size_t need = 8 + std::size_t(count) * 9;
  if (data.size() != need)
    throw ParseError(name + ": expected " + std::to_string(need) +
                     " bytes for " + std::to_string(count) +
                     " records, found " + std::to_string(data.size()));
  std::vector<std::uint8_t> bits(count);
  std::vector<double> mu(count);
  for (std::uint32_t r = 0; r < count; ++r) {
    const std::size_t off = 8 + std::size_t(r) * 9;
    if (p[off] > 1)
      throw ParseError(name + ": offset " + std::to_string(off) +
                       ": bit must be 0 or 1");
    bits[r] = p[off];
    mu[r] = std::bit_cast<double>(read_u64_le(p + off + 1));
    if (!std::isfinite(mu[r]))
      throw ParseError(name + ": offset " + std::to_string(off + 1) +
                       ": mu is not finite");
    if (std::abs(mu[r]) < mu_floor)
      throw ParseError(name + ": offset " + std::to_string(off + 1) +
                       ": |mu| below mu_floor");
  }
  return BitBlock(std::move(bits), PriorVector(std::move(mu), mu_floor));
}

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos)
    return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

BitBlock parse_text(const std::string &data, const std::string &name,
                    double mu_floor) {
  std::vector<std::uint8_t> bits;
  std::vector<double> mu;
  std::istringstream in(data);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = trim(line);
    if (view.empty() || view.front() == '#')
      continue;
    const auto where = [&] { return name + ":" + std::to_string(line_no) + ": "; };
    const auto tab = view.find('\t');
    if (tab == std::string_view::npos)
      throw ParseError(where() + "expected <bit><TAB><mu>");
    const std::string_view bit_field = trim(view.substr(0, tab));
    const std::string_view mu_field = trim(view.substr(tab + 1));
    if (bit_field != "0" && bit_field != "1")
      throw ParseError(where() + "bit must be 0 or 1");
    double value = 0.0;
    const auto [ptr, ec] =
        std::from_chars(mu_field.data(), mu_field.data() + mu_field.size(), value);
    if (ec != std::errc() || ptr != mu_field.data() + mu_field.size() ||
        mu_field.empty())
      throw ParseError(where() + "malformed mu '" + std::string(mu_field) + "'");
    if (!std::isfinite(value))
      throw ParseError(where() + "mu is not finite");
    if (std::abs(value) < mu_floor)
      throw ParseError(where() + "|mu| below mu_floor");
    bits.push_back(bit_field == "1" ? 1 : 0);
    mu.push_back(value);
  }
  if (bits.empty())
    throw ParseError(name + ": zero-length stream");
  return BitBlock(std::move(bits), PriorVector(std::move(mu), mu_floor));
}

} // namespace

BitBlock load_bits_with_priors(const std::filesystem::path &path,
                               double mu_floor) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw ParseError(path.string() + ": cannot open");
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string data = buf.str();
  if (data.size() >= 4 &&
      std::memcmp(data.data(), kPriorsMagic.data(), kPriorsMagic.size()) == 0)
    return parse_binary(data, path.string(), mu_floor);
  return parse_text(data, path.string(), mu_floor);
}

void save_bits_with_priors(const BitBlock &block,
                           const std::filesystem::path &path,
                           PriorsFormat format) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw ParseError(path.string() + ": cannot open for writing");
  const auto bits = block.bits();
  const auto mu = block.prior().values();
  if (format == PriorsFormat::Binary) {
    out.write(kPriorsMagic.data(), kPriorsMagic.size());
    write_u32_le(out, static_cast<std::uint32_t>(block.size()));
    for (std::size_t i = 0; i < block.size(); ++i) {
      out.put(static_cast<char>(bits[i]));
      write_u64_le(out, std::bit_cast<std::uint64_t>(mu[i]));
    }
  } else {
    out << "# bit\tmu\n";
    char buf[64];
    for (std::size_t i = 0; i < block.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%d\t%.17g\n", int(bits[i]), mu[i]);
      out << buf;
    }
  }
  if (!out)
    throw ParseError(path.string() + ": write failed");
}

FlippedPrior flip_priors(const BitBlock &block) {
  FlippedPrior flipped;
  flipped.mu_tilde.resize(block.size());
  const auto bits = block.bits();
  const auto mu = block.prior().values();
  for (std::size_t i = 0; i < block.size(); ++i)
    flipped.mu_tilde[i] = bits[i] ? -mu[i] : mu[i];
  return flipped;
}

double wrong_side_probability(double mu) noexcept {
  return 1.0 - sigmoid(std::abs(mu));
}

} // namespace ltjscc
