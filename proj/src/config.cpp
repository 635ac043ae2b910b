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

#include "ltjscc/config.hpp"

#include "ltjscc/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace ltjscc {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos)
    return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos)
      break;
    start = pos + 1;
  }
  return parts;
}

[[noreturn]] void bad(std::string_view key, std::string_view value,
                      std::string_view why) {
  throw ConfigError(std::string(key) + ": invalid value '" +
                    std::string(value) + "' (" + std::string(why) + ")");
}

double to_double(std::string_view key, std::string_view v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out))
    bad(key, v, "expected a finite real");
  return out;
}

std::uint64_t to_u64(std::string_view key, std::string_view v) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    bad(key, v, "expected a non-negative integer");
  return out;
}

bool to_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes")
    return true;
  if (v == "false" || v == "0" || v == "no")
    return false;
  bad(key, v, "expected true or false");
}

std::vector<double> to_doubles(std::string_view key, std::string_view v) {
  std::vector<double> out;
  if (v.empty())
    return out;
  for (std::string_view p : split(v, ','))
    out.push_back(to_double(key, p));
  return out;
}

std::vector<std::size_t> to_sizes(std::string_view key, std::string_view v) {
  std::vector<std::size_t> out;
  if (v.empty())
    return out;
  for (std::string_view p : split(v, ','))
    out.push_back(static_cast<std::size_t>(to_u64(key, p)));
  return out;
}

void require(bool ok, std::string_view key, std::string_view value,
             std::string_view why) {
  if (!ok)
    bad(key, value, why);
}

using Setter = std::function<void(RunConfig &, std::string_view, std::string_view)>;

const std::map<std::string, Setter, std::less<>> &setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"seed", [](RunConfig &c, auto k, auto v) { c.seed = to_u64(k, v); }},
      {"k",
       [](RunConfig &c, auto k, auto v) {
         c.source.k = to_u64(k, v);
         require(c.source.k >= 1 && c.source.k <= (1u << 24), k, v,
                 "must be in [1, 2^24]");
       }},
      {"c",
       [](RunConfig &c, auto k, auto v) {
         c.source.c = to_u64(k, v);
         require(c.source.c >= 1, k, v, "must be at least 1");
       }},
      {"certainty_low",
       [](RunConfig &c, auto k, auto v) {
         c.source.certainty_low = to_double(k, v);
         require(c.source.certainty_low > 0.0, k, v, "must be positive");
       }},
      {"certainty_high",
       [](RunConfig &c, auto k, auto v) {
         c.source.certainty_high = to_double(k, v);
         require(c.source.certainty_high > 0.0, k, v, "must be positive");
       }},
      {"source_profile",
       [](RunConfig &c, auto k, auto v) {
         if (v == "uniform")
           c.source.profile = SourceProfile::Uniform;
         else if (v == "bimodal")
           c.source.profile = SourceProfile::Bimodal;
         else
           bad(k, v, "expected uniform or bimodal");
       }},
      {"mu_floor",
       [](RunConfig &c, auto k, auto v) {
         c.source.mu_floor = to_double(k, v);
         require(c.source.mu_floor >= 0.0, k, v, "must be non-negative");
       }},
      {"llr_cap",
       [](RunConfig &c, auto k, auto v) {
         c.llr_cap = to_double(k, v);
         require(c.llr_cap > 0.0, k, v, "must be positive");
       }},
      {"d_max",
       [](RunConfig &c, auto k, auto v) {
         c.d_max = to_u64(k, v);
         require(c.d_max >= 1, k, v, "must be at least 1");
       }},
      {"omega",
       [](RunConfig &c, auto k, auto v) {
         std::vector<double> probs;
         for (std::string_view term : split(v, ',')) {
           const auto parts = split(term, ':');
           require(parts.size() == 2, k, v, "expected d:p pairs");
           const auto d = to_u64(k, parts[0]);
           require(d >= 1 && d <= 4096, k, v, "degree out of range");
           if (probs.size() < d)
             probs.resize(d, 0.0);
           probs[d - 1] += to_double(k, parts[1]);
         }
         try {
           (void)DegreeDistribution(probs);
         } catch (const Error &e) {
           bad(k, v, e.what());
         }
         c.omega = std::move(probs);
       }},
      {"omega_stability",
       [](RunConfig &c, auto k, auto v) { c.omega_stability = to_bool(k, v); }},
      {"lambda_mode",
       [](RunConfig &c, auto k, auto v) {
         if (v == "fixed")
           c.lambda_mode = LambdaMode::Fixed;
         else if (v == "tuned")
           c.lambda_mode = LambdaMode::Tuned;
         else
           bad(k, v, "expected fixed or tuned");
       }},
      {"lambda",
       [](RunConfig &c, auto k, auto v) {
         c.lambda = to_double(k, v);
         require(c.lambda >= 0.0, k, v, "must be non-negative");
       }},
      {"psi_target",
       [](RunConfig &c, auto k, auto v) {
         c.psi_target = to_double(k, v);
         require(*c.psi_target >= 0.0 && *c.psi_target <= 1.0, k, v,
                 "must lie in [0, 1]");
       }},
      {"lambda_max",
       [](RunConfig &c, auto k, auto v) {
         c.lambda_max = to_double(k, v);
         require(c.lambda_max > 0.0, k, v, "must be positive");
       }},
      {"tune_tol",
       [](RunConfig &c, auto k, auto v) {
         c.tune_tol = to_double(k, v);
         require(c.tune_tol > 0.0, k, v, "must be positive");
       }},
      {"mc_samples",
       [](RunConfig &c, auto k, auto v) {
         c.mc_samples = to_u64(k, v);
         require(c.mc_samples >= 1, k, v, "must be at least 1");
       }},
      {"eps1",
       [](RunConfig &c, auto k, auto v) {
         c.eps1 = to_double(k, v);
         require(c.eps1 > 0.0, k, v, "must be positive");
       }},
      {"eps2",
       [](RunConfig &c, auto k, auto v) {
         c.eps2 = to_double(k, v);
         require(c.eps2 > 0.0, k, v, "must be positive");
       }},
      {"design_grid",
       [](RunConfig &c, auto k, auto v) {
         c.design_grid = to_u64(k, v);
         require(c.design_grid >= 2, k, v, "must be at least 2");
       }},
      {"sigma2",
       [](RunConfig &c, auto k, auto v) {
         c.sigma2 = to_double(k, v);
         require(c.sigma2 > 0.0, k, v, "must be positive");
       }},
      {"alpha",
       [](RunConfig &c, auto k, auto v) {
         c.alpha = to_double(k, v);
         require(c.alpha >= 0.0, k, v, "must be non-negative");
       }},
      {"beta",
       [](RunConfig &c, auto k, auto v) {
         c.beta = to_double(k, v);
         require(c.beta >= 0.0, k, v, "must be non-negative");
       }},
      {"receivers",
       [](RunConfig &c, auto k, auto v) {
         c.receivers.clear();
         if (v.empty())
           return;
         for (std::string_view term : split(v, ',')) {
           const auto parts = split(term, ':');
           require(parts.size() == 4, k, v, "expected sigma2:alpha:beta:seed");
           ReceiverSpec r{to_double(k, parts[0]), to_double(k, parts[1]),
                          to_double(k, parts[2]), to_u64(k, parts[3])};
           require(r.sigma2 > 0.0 && r.alpha >= 0.0 && r.beta >= 0.0, k, v,
                   "need sigma2 > 0, alpha >= 0, beta >= 0");
           c.receivers.push_back(r);
         }
       }},
      {"alpha_knots", [](RunConfig &c, auto k, auto v) { c.table.alpha_knots = to_doubles(k, v); }},
      {"gamma_values", [](RunConfig &c, auto k, auto v) { c.table.gamma_values = to_doubles(k, v); }},
      {"beta_knots", [](RunConfig &c, auto k, auto v) { c.table.beta_knots = to_doubles(k, v); }},
      {"eta_values", [](RunConfig &c, auto k, auto v) { c.table.eta_values = to_doubles(k, v); }},
      {"rate_mode",
       [](RunConfig &c, auto k, auto v) {
         if (v == "entropy")
           c.rate_mode = RateMode::Entropy;
         else if (v == "bit_conditional")
           c.rate_mode = RateMode::BitConditional;
         else
           bad(k, v, "expected entropy or bit_conditional");
       }},
      {"n", [](RunConfig &c, auto k, auto v) { c.n = to_u64(k, v); }},
      {"eta",
       [](RunConfig &c, auto k, auto v) {
         c.eta = to_double(k, v);
         require(c.eta == 0.0 || c.eta >= 1.0, k, v, "must be 0 (derive) or >= 1");
       }},
      {"max_symbols",
       [](RunConfig &c, auto k, auto v) { c.max_symbols = to_u64(k, v); }},
      {"trials",
       [](RunConfig &c, auto k, auto v) {
         c.trials = to_u64(k, v);
         require(c.trials >= 1, k, v, "must be at least 1");
       }},
      {"jobs",
       [](RunConfig &c, auto k, auto v) {
         const auto j = to_u64(k, v);
         require(j >= 1 && j <= 1024, k, v, "must be in [1, 1024]");
         c.jobs = static_cast<unsigned>(j);
       }},
      {"sweep_sigma2",
       [](RunConfig &c, auto k, auto v) {
         c.sweep_sigma2 = to_doubles(k, v);
         for (double s : c.sweep_sigma2)
           require(s > 0.0, k, v, "entries must be positive");
       }},
      {"sweep_alpha",
       [](RunConfig &c, auto k, auto v) {
         c.sweep_alpha = to_doubles(k, v);
         for (double s : c.sweep_alpha)
           require(s >= 0.0, k, v, "entries must be non-negative");
       }},
      {"sweep_beta",
       [](RunConfig &c, auto k, auto v) {
         c.sweep_beta = to_doubles(k, v);
         for (double s : c.sweep_beta)
           require(s >= 0.0, k, v, "entries must be non-negative");
       }},
      {"sweep_n", [](RunConfig &c, auto k, auto v) { c.sweep_n = to_sizes(k, v); }},
      {"sweep_eta",
       [](RunConfig &c, auto k, auto v) {
         c.sweep_eta = to_doubles(k, v);
         for (double s : c.sweep_eta)
           require(s == 0.0 || s >= 1.0, k, v, "entries must be 0 or >= 1");
       }},
  };
  return table;
}

} // namespace

void RunConfig::set(std::string_view key, std::string_view value) {
  const auto &table = setters();
  const auto it = table.find(key);
  if (it == table.end())
    throw ConfigError("unknown configuration key '" + std::string(key) + "'");
  it->second(*this, key, trim(value));
}

void RunConfig::validate() const {
  if (source.certainty_low > source.certainty_high)
    throw ConfigError("certainty_low must not exceed certainty_high");
  if (source.certainty_low < source.mu_floor)
    throw ConfigError("certainty_low must be at least mu_floor");
  if (lambda_mode == LambdaMode::Tuned && !psi_target)
    throw ConfigError("lambda_mode = tuned requires psi_target");
  table.validate();
  const DegreeDistribution omega_dist = degree_distribution();
  if (omega_dist.max_degree() > source.k)
    throw ConfigError("largest output degree " +
                      std::to_string(omega_dist.max_degree()) +
                      " exceeds k = " + std::to_string(source.k));
}

DegreeDistribution RunConfig::degree_distribution() const {
  if (omega) {
    if (omega->size() > d_max)
      throw ConfigError("omega has degrees above d_max");
    return DegreeDistribution(*omega, omega_stability);
  }
  DegreeDistribution raptor = DegreeDistribution::raptor(d_max);
  if (omega_stability)
    return DegreeDistribution(
        {raptor.probabilities().begin(), raptor.probabilities().end()}, true);
  return raptor;
}

SelectionPolicy RunConfig::selection_policy() const {
  SelectionPolicy p;
  p.lambda = lambda;
  if (lambda_mode == LambdaMode::Tuned)
    p.psi_target = psi_target;
  p.lambda_max = lambda_max;
  p.tolerance = tune_tol;
  p.mc_samples = mc_samples;
  return p;
}

double RunConfig::effective_eta() const {
  return eta > 0.0 ? eta : scaling_map(alpha, beta, table).eta;
}

std::vector<ReceiverProfile> RunConfig::receiver_profiles() const {
  std::vector<ReceiverSpec> specs = receivers;
  if (specs.empty())
    specs.push_back({sigma2, alpha, beta, 0});
  std::vector<ReceiverProfile> out;
  for (std::size_t j = 0; j < specs.size(); ++j) {
    ReceiverProfile r = make_receiver(j, specs[j].sigma2, specs[j].alpha,
                                      specs[j].beta, specs[j].seed, table);
    if (eta > 0.0)
      r.eta = eta;
    if (n)
      r.symbols = *n;
    out.push_back(r);
  }
  return out;
}

std::vector<SweepPoint> RunConfig::sweep_grid() const {
  const auto or_default = [](const auto &list, auto fallback) {
    using T = typename std::decay_t<decltype(list)>::value_type;
    return list.empty() ? std::vector<T>{static_cast<T>(fallback)} : list;
  };
  const auto s2 = or_default(sweep_sigma2, sigma2);
  const auto al = or_default(sweep_alpha, alpha);
  const auto be = or_default(sweep_beta, beta);
  const auto ns = or_default(sweep_n, n.value_or(0));
  const auto et = or_default(sweep_eta, eta);
  std::vector<SweepPoint> grid;
  for (double s : s2)
    for (double a : al)
      for (double b : be)
        for (std::size_t m : ns)
          for (double e : et)
            grid.push_back({s, a, b, m, e});
  return grid;
}

SweepSettings RunConfig::sweep_settings() const {
  SweepSettings s;
  s.source = source;
  s.omega = degree_distribution();
  s.selection = selection_policy();
  s.table = table;
  s.mode = rate_mode;
  s.llr_cap = llr_cap;
  s.trials = trials;
  s.max_symbols = max_symbols;
  s.seed = seed;
  s.jobs = jobs;
  return s;
}

RunConfig parse_config(std::string_view text, std::string_view origin) {
  RunConfig config;
  std::set<std::string, std::less<>> seen;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = std::min(text.find('\n', start), text.size());
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty())
      continue;
    const std::string where = std::string(origin) + ":" + std::to_string(line_no);
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError(where + ": expected key = value");
    const std::string_view key = trim(line.substr(0, eq));
    if (!seen.insert(std::string(key)).second)
      throw ConfigError(where + ": duplicate key '" + std::string(key) + "'");
    try {
      config.set(key, line.substr(eq + 1));
    } catch (const ConfigError &e) {
      throw ConfigError(where + ": " + e.what());
    }
  }
  config.validate();
  return config;
}

RunConfig load_config(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw ParseError(path.string() + ": cannot open configuration file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string());
}

std::string config_schema() {
  return R"(# key = default                  meaning
seed = 0                          master seed for every randomized step
k = 256                           bits per stream
c = 1                             number of parallel streams
source_profile = uniform          uniform | bimodal synthetic priors
certainty_low = 0.5               smallest |mu| of generated priors
certainty_high = 4                largest |mu| of generated priors
mu_floor = 0.001                  smallest admissible |mu|
llr_cap = 30                      channel LLR clamp
d_max = 16                        largest output degree
omega =                           d:p,... ; empty means truncated Raptor
omega_stability = false           require Omega(2) > 1/ln(16)
lambda_mode = fixed               fixed | tuned
lambda = 0                        selection skew when fixed
psi_target =                      Psi target used when lambda_mode = tuned
lambda_max = 50                   upper end of the lambda bracket
tune_tol = 0.001                  tolerance of the Psi search
mc_samples = 4096                 Monte-Carlo samples per Psi estimate
eps1 = 0.05                       initialization threshold on V Psi
eps2 = 0.0001                     information threshold on (Psi - 1)^2 / 2
design_grid = 11                  lambda grid points in the design report
sigma2 = 0.5                      channel noise variance
alpha = 0                         rate tradeoff knob
beta = 0                          complexity tradeoff knob
receivers =                       sigma2:alpha:beta:seed,... (broadcast)
alpha_knots = 0,4                 scaling table for gamma
gamma_values = 2,0.5
beta_knots = 0,16                 scaling table for eta
eta_values = 16,1
rate_mode = entropy               entropy | bit_conditional
n =                               fixed symbol budget; empty means allocate
eta = 0                           iterations; 0 means from the scaling table
max_symbols = 1048576             transmitter cap
trials = 100                      Monte-Carlo trials
jobs = 1                          worker threads
sweep_sigma2 =                    comma lists spanning the sweep grid;
sweep_alpha =                     an empty list uses the scalar key
sweep_beta =
sweep_n =
sweep_eta =
)";
}

} // namespace ltjscc
