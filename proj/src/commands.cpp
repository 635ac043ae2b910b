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

#include "ltjscc/commands.hpp"

#include "ltjscc/bp_decoder.hpp"
#include "ltjscc/broadcast.hpp"
#include "ltjscc/channel.hpp"
#include "ltjscc/csv.hpp"
#include "ltjscc/errors.hpp"
#include "ltjscc/lt_codec.hpp"
#include "ltjscc/rng.hpp"
#include "ltjscc/uep_design.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <string>

namespace ltjscc {

namespace {

SelectionWeights weights_for(const RunConfig &config, const BitBlock &block,
                             std::uint64_t seed) {
  return choose_weights({block}, config.degree_distribution(),
                        config.selection_policy(), derive_seed(seed, 2))
      .front();
}

std::string seed_comment(std::uint64_t seed) {
  return "seed=" + std::to_string(seed);
}

} // namespace

void cmd_generate(const RunConfig &config, const std::filesystem::path &out,
                  PriorsFormat format) {
  config.validate();
  SourceSpec spec = config.source;
  spec.c = 1;
  save_bits_with_priors(generate_source(spec, config.seed).front(), out,
                        format);
}

void cmd_design(const RunConfig &config,
                const std::optional<std::filesystem::path> &source,
                std::ostream &out) {
  config.validate();
  std::vector<BitBlock> blocks;
  if (source)
    blocks.push_back(load_bits_with_priors(*source, config.source.mu_floor));
  else
    blocks = generate_source(config.source, config.seed);
  const DegreeDistribution omega = config.degree_distribution();

  DesignSettings settings;
  settings.eps1 = config.eps1;
  settings.eps2 = config.eps2;
  settings.lambda_max = config.lambda_max;
  settings.tolerance = config.tune_tol;
  settings.mc_samples = config.mc_samples;
  settings.grid_points = config.design_grid;
  if (config.lambda_mode == LambdaMode::Tuned)
    settings.psi_target = config.psi_target;

  std::vector<DesignReport> reports;
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    settings.seed = derive_seed(config.seed, 2, j);
    reports.push_back(design_report(reliability(blocks[j].prior()), omega,
                                    config.sigma2, settings));
  }

  CsvWriter csv(out);
  csv.comment(seed_comment(config.seed));
  csv.comment("sigma2=" + format_real(config.sigma2) +
              " v_channel=" + format_real(reports.front().v_channel) +
              " eps1=" + format_real(config.eps1) +
              " eps2=" + format_real(config.eps2));
  csv.header({"lambda", "psi", "init_constraint", "pinsker_bound", "dkl_upper",
              "feasible_eps1", "feasible_eps2", "stream", "tuned"});
  for (std::size_t j = 0; j < reports.size(); ++j) {
    for (const DesignPoint &p : reports[j].rows) {
      csv.row({p.lambda, p.psi, p.init_constraint, p.pinsker_bound,
               p.dkl_upper, std::uint64_t(p.feasible_eps1),
               std::uint64_t(p.feasible_eps2), std::uint64_t(j),
               std::uint64_t(p.lambda == reports[j].tuned_lambda)});
    }
  }
  for (std::size_t j = 0; j < reports.size(); ++j)
    csv.comment("tuned_lambda[" + std::to_string(j) +
                "]=" + format_real(reports[j].tuned_lambda));
}

void cmd_encode(const RunConfig &config, const std::filesystem::path &source,
                const std::filesystem::path &out,
                const std::optional<std::filesystem::path> &channel_out) {
  config.validate();
  const BitBlock block = load_bits_with_priors(source, config.source.mu_floor);
  const DegreeDistribution omega = config.degree_distribution();
  const GeneratorStream generator(config.seed, omega,
                                  weights_for(config, block, config.seed));
  std::size_t n;
  if (config.n) {
    n = *config.n;
  } else {
    const Scaling s = scaling_map(config.alpha, config.beta, config.table);
    n = allocate_rate(block, s.gamma, config.sigma2, config.rate_mode);
  }
  if (n > 0xffffffffu)
    throw ConfigError("symbol count exceeds the file format limit");
  const EncodedStream encoded = encode_stream(block, generator, n);
  write_coded_symbols(out, {static_cast<std::uint32_t>(block.size()),
                            config.seed, encoded.bits});
  if (channel_out) {
    const std::vector<double> received =
        transmit(modulate(encoded.bits),
                 {config.sigma2, derive_seed(config.seed, 5)});
    write_received_symbols(
        *channel_out,
        {static_cast<std::uint32_t>(block.size()), config.seed,
         demodulate(received, config.sigma2, config.llr_cap)});
  }
}

void cmd_decode(const RunConfig &config, const std::filesystem::path &symbols,
                const std::filesystem::path &priors, std::ostream &out,
                std::ostream *trace) {
  config.validate();
  std::uint32_t k;
  std::uint64_t seed;
  LlrVector llr;
  if (is_received_symbol_file(symbols)) {
    ReceivedSymbolFile file = read_received_symbols(symbols);
    k = file.k;
    seed = file.seed;
    llr = std::move(file.llr);
    for (double &v : llr)
      v = std::clamp(v, -config.llr_cap, config.llr_cap);
  } else {
    const CodedSymbolFile file = read_coded_symbols(symbols);
    k = file.k;
    seed = file.seed;
    const double magnitude = std::min(2.0 / config.sigma2, config.llr_cap);
    for (std::uint8_t b : file.bits)
      llr.push_back(b ? -magnitude : magnitude);
  }
  const BitBlock block = load_bits_with_priors(priors, config.source.mu_floor);
  if (block.size() != k)
    throw StructuralError(symbols.string() + " was encoded for k=" +
                          std::to_string(k) + " but " + priors.string() +
                          " holds " + std::to_string(block.size()) + " bits");
  const GeneratorStream generator(seed, config.degree_distribution(),
                                  weights_for(config, block, seed));
  const std::vector<CodedSymbolSpec> specs = rebuild_graph(generator, llr.size());
  const std::size_t n = llr.size();
  const DecodeGraph graph(specs, std::move(llr), block.prior());
  const double eta = config.effective_eta();
  const DecodeResult result = decode(graph, eta);

  CsvWriter csv(out);
  csv.comment(seed_comment(seed));
  csv.comment("k=" + std::to_string(k) + " n=" + std::to_string(n) +
              " eta=" + std::to_string(result.iterations_run));
  csv.header({"index", "marginal", "p1"});
  for (std::size_t i = 0; i < result.marginals.size(); ++i)
    csv.row({std::uint64_t(i), result.marginals[i], result.soft_bits[i]});
  csv.comment("op_count=" + std::to_string(result.op_count));

  if (trace) {
    CsvWriter t(*trace);
    t.comment(seed_comment(seed));
    t.header({"iteration", "mean_input_msg", "mean_output_msg", "op_count_cum"});
    for (const IterationStats &s : result.iterations)
      t.row({std::uint64_t(s.iteration), s.mean_input_msg, s.mean_output_msg,
             std::uint64_t(s.op_count_cum)});
  }
}

void cmd_simulate(const RunConfig &config, std::ostream &out) {
  config.validate();
  const SweepSettings settings = config.sweep_settings();
  const std::vector<ReceiverProfile> receivers = config.receiver_profiles();
  std::vector<BroadcastOutcome> outcomes(config.trials);
  parallel_for(config.trials, config.jobs, [&](std::size_t t) {
    outcomes[t] = run_session_trial(settings, receivers, t);
  });
  if (std::any_of(outcomes.begin(), outcomes.end(),
                  [](const BroadcastOutcome &o) { return o.uniform_polling; }))
    std::cerr << "warning: every stream has zero information; polling "
                 "streams uniformly\n";

  CsvWriter csv(out);
  csv.comment(seed_comment(config.seed));
  csv.header({"trial", "receiver", "sigma2", "alpha", "beta", "gamma", "eta",
              "budget", "bits_received", "transmitted", "truncated", "ber",
              "soft_distortion", "ops", "bits_per_source_bit",
              "ops_per_source_bit", "side_info_bits"});
  for (std::size_t t = 0; t < outcomes.size(); ++t) {
    for (const SimulationRecord &r : outcomes[t].records) {
      const ReceiverProfile &rx = receivers[r.receiver_id];
      csv.row({std::uint64_t(t), std::uint64_t(r.receiver_id), rx.sigma2,
               rx.alpha, rx.beta, rx.gamma, r.eta, std::uint64_t(r.budget),
               std::uint64_t(r.bits_received),
               std::uint64_t(outcomes[t].transmitted_symbols),
               std::uint64_t(r.truncated), r.ber, r.soft_distortion,
               std::uint64_t(r.ops), r.bits_per_source_bit,
               r.ops_per_source_bit, r.side_info_bits});
    }
  }
}

void cmd_sweep(const RunConfig &config, std::ostream &out) {
  config.validate();
  const std::vector<SweepRow> rows =
      sweep(config.sweep_grid(), config.sweep_settings());
  CsvWriter csv(out);
  csv.comment(seed_comment(config.seed));
  csv.header({"sigma2", "snr_db", "alpha", "beta", "gamma", "eta", "n_total",
              "ber_mean", "ber_stderr", "soft_distortion_mean", "ops_mean",
              "bits_per_source_bit", "ops_per_source_bit", "trials"});
  for (const SweepRow &r : rows)
    csv.row({r.sigma2, r.snr_db, r.alpha, r.beta, r.gamma, r.eta, r.n_total,
             r.ber_mean, r.ber_stderr, r.soft_distortion_mean, r.ops_mean,
             r.bits_per_source_bit, r.ops_per_source_bit,
             std::uint64_t(r.trials)});
}

} // namespace ltjscc
