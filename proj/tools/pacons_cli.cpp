// SPDX-License-Identifier: Apache-2.0
//
// pacons: power-consumption-aware linear precoding for massive MIMO
// Copyright (C) 2026 The pacons authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "pacons/closed_form.hpp"
#include "pacons/harness.hpp"
#include "pacons/power.hpp"
#include "pacons/problems.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>

namespace {

using nlohmann::json;
using namespace pacons;

struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::string out_path;
};

ExperimentConfig load_with_overrides(const CommonOptions& opts) {
  ExperimentConfig cfg = load_config(opts.config_path);
  if (opts.seed) cfg.seed = *opts.seed;
  if (opts.trials) cfg.trials = *opts.trials;
  cfg.validate();
  return cfg;
}

json matrix_part(const CMatrix& w, bool imag) {
  json rows = json::array();
  for (Index k = 0; k < w.rows(); ++k) {
    json row = json::array();
    for (Index m = 0; m < w.cols(); ++m) row.push_back(imag ? w(k, m).imag() : w(k, m).real());
    rows.push_back(std::move(row));
  }
  return rows;
}

json precoder_json(const std::string& name, const PrecodingMatrix& w, const ChannelMatrix& channel,
                   const ExperimentConfig& cfg) {
  PowerReport report = power_report(w, PaModel{}, cfg.activation_threshold);
  RVector sinr = evaluate_sinr(channel, w, cfg.sigma_nu);
  return json{
      {"precoder", name},
      {"W_real", matrix_part(w.entries(), false)},
      {"W_imag", matrix_part(w.entries(), true)},
      {"p_m", std::vector<double>(report.per_antenna.data(), report.per_antenna.data() + report.per_antenna.size())},
      {"p_tx", report.p_tx},
      {"p_cons", report.p_cons},
      {"p_cons_normalized", report.p_cons_normalized},
      {"active_count", report.active_count},
      {"sinr", std::vector<double>(sinr.data(), sinr.data() + sinr.size())},
  };
}

json config_json(const ExperimentConfig& cfg) {
  json j{{"scenario", to_string(cfg.scenario)},
         {"channel", to_string(cfg.channel)},
         {"antennas", cfg.antennas},
         {"users", cfg.users},
         {"gamma_db", cfg.gamma_db},
         {"sigma_nu", cfg.sigma_nu},
         {"p_max_cap", cfg.p_max_cap ? json(*cfg.p_max_cap) : json(nullptr)},
         {"trials", cfg.trials},
         {"seed", cfg.seed},
         {"precoder", to_string(cfg.pair)},
         {"activation_threshold", cfg.activation_threshold},
         {"solver",
          {{"rho", cfg.solver.rho},
           {"eps_abs", cfg.solver.eps_abs},
           {"eps_rel", cfg.solver.eps_rel},
           {"max_iters", cfg.solver.max_iters},
           {"over_relaxation", cfg.solver.over_relaxation},
           {"adaptive_rho", cfg.solver.adaptive_rho}}}};
  if (cfg.channel == ChannelKind::Los) {
    j["los_angle_distribution"] = {{"kind", "uniform"}, {"min_rad", kLosAngleMin}, {"max_rad", kLosAngleMax}};
  }
  return j;
}

// Writes to --out when given, stdout otherwise.
template <class Writer>
void emit(const std::string& path, Writer write) {
  if (path.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
  write(out);
}

void write_metadata(const std::string& out_path, const json& meta) {
  if (out_path.empty()) return;
  emit(out_path + ".meta.json", [&](std::ostream& os) { os << meta.dump(2) << '\n'; });
}

int run_precode(const CommonOptions& opts) {
  ExperimentConfig cfg = load_with_overrides(opts);
  const Index m = cfg.antennas.front();
  ChannelMatrix channel = draw_channel(cfg, m, 0);
  TargetSpec targets = cfg.targets();

  std::optional<PrecodingMatrix> conventional;
  std::optional<PrecodingMatrix> efficient;
  json solver_info = nullptr;
  std::string conv_name = to_string(cfg.pair);
  if (cfg.pair == PrecoderPair::Mrt) {
    CRowVector h = channel.row(0);
    conventional = mrt(h, cfg.gamma_linear(), cfg.sigma_nu);
    efficient = mrt_efficient(h, cfg.gamma_linear(), cfg.sigma_nu, cfg.p_max_cap).precoder;
  } else {
    conventional = cfg.pair == PrecoderPair::Zf ? zf(channel, targets) : rzf(channel, targets);
    ConvexProblem problem =
        cfg.pair == PrecoderPair::Zf ? build_zf_eff(channel, targets) : build_rzf_eff(channel, targets);
    SolveReport rep = solve(problem, cfg.solver);
    solver_info = {{"status", to_string(rep.status)},
                   {"iterations", rep.iterations},
                   {"primal_residual", rep.primal_residual},
                   {"dual_residual", rep.dual_residual}};
    if (rep.status == SolveStatus::Infeasible) {
      throw InfeasibleTarget("efficient " + conv_name + " program reported infeasible");
    }
    if (rep.status != SolveStatus::Optimal) {
      throw std::runtime_error("efficient " + conv_name + " solve did not converge in " +
                               std::to_string(rep.iterations) + " iterations");
    }
    efficient = rep.solution;
  }

  json doc{{"config", config_json(cfg)},
           {"precoders",
            json::array({precoder_json(conv_name, *conventional, channel, cfg),
                         precoder_json(conv_name + "_eff", *efficient, channel, cfg)})},
           {"pcg", pcg_ratio(*conventional, *efficient)},
           {"solver", solver_info}};
  emit(opts.out_path, [&](std::ostream& os) { os << doc.dump(2) << '\n'; });
  return 0;
}

int run_sweep(const CommonOptions& opts) {
  ExperimentConfig cfg = load_with_overrides(opts);
  SweepResult result;
  if (cfg.scenario == Scenario::SingleUserPcg) {
    result = run_single_user_pcg(cfg);
  } else if (cfg.scenario == Scenario::MultiUserPcg) {
    result = run_multi_user_pcg(cfg);
  } else {
    throw ConfigError("config: sweep needs scenario single_user_pcg or multi_user_pcg");
  }
  emit(opts.out_path, [&](std::ostream& os) { write_sweep_csv(os, result); });
  write_metadata(opts.out_path, {{"config", config_json(cfg)},
                                 {"total_trials", result.total_trials()},
                                 {"total_failures", result.total_failures()}});
  if (!result.within_failure_budget()) {
    std::cerr << "error: " << result.total_failures() << " of " << result.total_trials()
              << " trials failed (more than 1%)\n";
    return 3;
  }
  return 0;
}

int run_profile(const CommonOptions& opts) {
  ExperimentConfig cfg = load_with_overrides(opts);
  if (cfg.scenario != Scenario::AntennaProfile) {
    throw ConfigError("config: profile needs scenario antenna_profile");
  }
  AntennaProfile profile = run_antenna_profile(cfg);
  emit(opts.out_path, [&](std::ostream& os) { write_profile_csv(os, profile); });
  write_metadata(opts.out_path, {{"config", config_json(cfg)},
                                 {"active_conventional", profile.conventional.active_count},
                                 {"active_efficient", profile.efficient.active_count},
                                 {"p_cons_normalized_conventional", profile.conventional.p_cons_normalized},
                                 {"p_cons_normalized_efficient", profile.efficient.p_cons_normalized}});
  return 0;
}

void add_common(CLI::App* cmd, CommonOptions& opts, bool with_trials) {
  cmd->add_option("-c,--config", opts.config_path, "experiment config file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--seed", opts.seed, "override the config seed");
  if (with_trials) cmd->add_option("--trials", opts.trials, "override the config trial count");
  cmd->add_option("-o,--out", opts.out_path, "output file (default: stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Consumption-efficient massive MIMO precoding"};
  app.require_subcommand(1);

  CommonOptions precode_opts, sweep_opts, profile_opts;
  CLI::App* precode = app.add_subcommand("precode", "one instance: precoders and power report as JSON");
  add_common(precode, precode_opts, false);
  CLI::App* sweep = app.add_subcommand("sweep", "Monte Carlo PCG sweep as CSV");
  add_common(sweep, sweep_opts, true);
  CLI::App* profile = app.add_subcommand("profile", "per-antenna power of one realization as CSV");
  add_common(profile, profile_opts, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*precode) return run_precode(precode_opts);
    if (*sweep) return run_sweep(sweep_opts);
    if (*profile) return run_profile(profile_opts);
  } catch (const InfeasibleTarget& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return 4;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
