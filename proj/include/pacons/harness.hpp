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

#ifndef PACONS_HARNESS_HPP
#define PACONS_HARNESS_HPP

#include "pacons/convex.hpp"
#include "pacons/model.hpp"
#include "pacons/power.hpp"

#include <cstdint>
#include <iosfwd>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pacons {

enum class Scenario { SingleUserPcg, MultiUserPcg, AntennaProfile };
enum class ChannelKind { Los, Nlos };
enum class PrecoderPair { Mrt, Zf, Rzf };

std::string to_string(Scenario s);
std::string to_string(ChannelKind c);
std::string to_string(PrecoderPair p);

/// LOS users are placed uniformly in (pi/36, 35pi/36).
inline constexpr double kLosAngleMin = std::numbers::pi / 36.0;
inline constexpr double kLosAngleMax = 35.0 * std::numbers::pi / 36.0;

/// Environment variable that sets the worker-thread count.
inline constexpr const char* kThreadsEnv = "PACONS_THREADS";

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  Scenario scenario = Scenario::SingleUserPcg;
  ChannelKind channel = ChannelKind::Nlos;
  std::vector<Index> antennas{64};
  Index users = 1;
  double gamma_db = 10.0;
  double sigma_nu = 1.0;
  std::optional<double> p_max_cap;
  int trials = 1;
  std::uint64_t seed = 1;
  PrecoderPair pair = PrecoderPair::Mrt;
  double activation_threshold = kDefaultActivationThreshold;
  SolverConfig solver;

  double gamma_linear() const;
  TargetSpec targets() const;
  /// Throws ConfigError; the message names the offending field.
  void validate() const;
};

/// Flat `key = value` text, one entry per line, `#` starts a comment.
///
///   scenario   single_user_pcg | multi_user_pcg | antenna_profile
///   channel    nlos | los
///   antennas   comma-separated M list
///   users      K
///   gamma_db   SINR target in dB (converted once to linear)
///   sigma_nu   noise amplitude
///   p_max_cap  per-antenna cap, or `none`
///   trials, seed
///   precoder   mrt | zf | rzf
///   activation_threshold
///   rho, eps_abs, eps_rel, max_iters, over_relaxation, adaptive_rho   (solver)
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

/// Channel for one trial. The stream is Rng::for_trial(seed, (M << 32) | trial).
ChannelMatrix draw_channel(const ExperimentConfig& cfg, Index antennas, std::uint64_t trial);

struct SweepPoint {
  Index antennas = 0;
  double mean_pcg = 0.0;
  double std_error = 0.0;  // sample std / sqrt(successful trials)
  int trials = 0;
  int failures = 0;
  double min_pcg = 0.0;
  double mean_active_fraction = 0.0;  // efficient precoder
  double seconds = 0.0;
};

struct SweepResult {
  std::vector<SweepPoint> points;

  int total_trials() const;
  int total_failures() const;
  /// At most 1% of trials may fail.
  bool within_failure_budget() const;
};

/// Closed-form single-user gain per trial: pcg_single_user without a cap,
/// ||w_mrt||_1 / ||w_mrt_eff||_1 with one (infeasible trials count as failures).
SweepResult run_single_user_pcg(const ExperimentConfig& cfg);

/// Conventional closed form against the solved consumption-efficient program.
SweepResult run_multi_user_pcg(const ExperimentConfig& cfg);

struct AntennaProfile {
  Index antennas = 0;
  RVector p_conventional;
  RVector p_efficient;
  PowerReport conventional;
  PowerReport efficient;
  SolveReport solve;
};

/// One realization (trial 0 of cfg.seed) at cfg.antennas.front().
AntennaProfile run_antenna_profile(const ExperimentConfig& cfg);

/// Header `M,mean_pcg,stderr,trials,failures`, 12 significant digits.
void write_sweep_csv(std::ostream& out, const SweepResult& result);
/// Header `antenna,p_conventional,p_efficient`.
void write_profile_csv(std::ostream& out, const AntennaProfile& profile);

std::string format_number(double v);

/// Worker count from PACONS_THREADS, else hardware concurrency (at least 1).
unsigned worker_threads();

}  // namespace pacons

#endif  // PACONS_HARNESS_HPP
