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

#include "pacons/harness.hpp"

#include "pacons/closed_form.hpp"
#include "pacons/problems.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <istream>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace pacons {
namespace {

std::string trim(const std::string& s) {
  auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: '" + key + "' expects a number, got '" + value + "'");
  }
}

long long parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    long long v = std::stoll(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: '" + key + "' expects an integer, got '" + value + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  std::string v = lower(value);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("config: '" + key + "' expects a boolean, got '" + value + "'");
}

// Runs body(i) for i in [0, count) on worker threads; the first exception is rethrown.
template <class Body>
void parallel_for(int count, Body body) {
  unsigned workers = std::min<unsigned>(worker_threads(), static_cast<unsigned>(std::max(count, 1)));
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (int i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = count;
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
}

struct TrialOutcome {
  bool ok = false;
  double pcg = 0.0;
  double active_fraction = 0.0;
};

SweepPoint aggregate(Index antennas, const std::vector<TrialOutcome>& outcomes, double seconds) {
  SweepPoint pt;
  pt.antennas = antennas;
  pt.trials = static_cast<int>(outcomes.size());
  pt.seconds = seconds;
  double sum = 0.0, active = 0.0;
  int ok = 0;
  pt.min_pcg = std::numeric_limits<double>::infinity();
  for (const auto& o : outcomes) {
    if (!o.ok) {
      ++pt.failures;
      continue;
    }
    ++ok;
    sum += o.pcg;
    active += o.active_fraction;
    pt.min_pcg = std::min(pt.min_pcg, o.pcg);
  }
  if (ok == 0) {
    pt.mean_pcg = std::numeric_limits<double>::quiet_NaN();
    pt.std_error = std::numeric_limits<double>::quiet_NaN();
    return pt;
  }
  pt.mean_pcg = sum / ok;
  pt.mean_active_fraction = active / ok;
  double ss = 0.0;
  for (const auto& o : outcomes) {
    if (o.ok) ss += (o.pcg - pt.mean_pcg) * (o.pcg - pt.mean_pcg);
  }
  double sample_var = ok > 1 ? ss / (ok - 1) : 0.0;
  pt.std_error = std::sqrt(sample_var / ok);
  return pt;
}

double elapsed_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct PrecoderPairResult {
  PrecodingMatrix conventional;
  SolveReport efficient;
};

PrecoderPairResult solve_pair(const ExperimentConfig& cfg, const ChannelMatrix& channel) {
  TargetSpec targets = cfg.targets();
  switch (cfg.pair) {
    case PrecoderPair::Mrt: {
      CRowVector h = channel.row(0);
      double gamma = cfg.gamma_linear();
      return {mrt(h, gamma, cfg.sigma_nu),
              solve(build_mrt_eff(h, gamma, cfg.sigma_nu, cfg.p_max_cap), cfg.solver)};
    }
    case PrecoderPair::Zf:
      return {zf(channel, targets), solve(build_zf_eff(channel, targets), cfg.solver)};
    case PrecoderPair::Rzf:
      return {rzf(channel, targets), solve(build_rzf_eff(channel, targets), cfg.solver)};
  }
  throw std::logic_error("unknown precoder pair");
}

}  // namespace

std::string to_string(Scenario s) {
  switch (s) {
    case Scenario::SingleUserPcg:
      return "single_user_pcg";
    case Scenario::MultiUserPcg:
      return "multi_user_pcg";
    case Scenario::AntennaProfile:
      return "antenna_profile";
  }
  return "unknown";
}

std::string to_string(ChannelKind c) { return c == ChannelKind::Los ? "los" : "nlos"; }

std::string to_string(PrecoderPair p) {
  switch (p) {
    case PrecoderPair::Mrt:
      return "mrt";
    case PrecoderPair::Zf:
      return "zf";
    case PrecoderPair::Rzf:
      return "rzf";
  }
  return "unknown";
}

double ExperimentConfig::gamma_linear() const { return db_to_linear(gamma_db); }

TargetSpec ExperimentConfig::targets() const {
  return TargetSpec::uniform(users, gamma_linear(), sigma_nu, p_max_cap);
}

void ExperimentConfig::validate() const {
  if (trials < 1) throw ConfigError("config: trials must be at least 1");
  if (users < 1) throw ConfigError("config: users must be at least 1");
  if (antennas.empty()) throw ConfigError("config: antennas list is empty");
  for (Index m : antennas) {
    if (m < 1) throw ConfigError("config: antenna counts must be positive");
    if (m < users) {
      throw ConfigError("dimension error: K = " + std::to_string(users) + " users exceeds M = " +
                        std::to_string(m) + " antennas");
    }
  }
  if (!std::isfinite(gamma_db)) throw ConfigError("config: gamma_db must be finite");
  if (!(sigma_nu > 0.0)) throw ConfigError("config: sigma_nu must be positive");
  if (p_max_cap && !(*p_max_cap > 0.0)) throw ConfigError("config: p_max_cap must be positive");
  if (!(activation_threshold > 0.0 && activation_threshold < 1.0)) {
    throw ConfigError("config: activation_threshold must lie in (0, 1)");
  }
  if (scenario == Scenario::SingleUserPcg && users != 1) {
    throw ConfigError("config: single_user_pcg needs users = 1");
  }
  if (scenario != Scenario::SingleUserPcg && pair == PrecoderPair::Mrt && users != 1) {
    throw ConfigError("config: the mrt precoder pair is single-user (users = 1)");
  }
  if (scenario == Scenario::AntennaProfile && antennas.size() != 1) {
    throw ConfigError("config: antenna_profile takes exactly one antenna count");
  }
  try {
    solver.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    std::string key = lower(trim(line.substr(0, eq)));
    std::string value = trim(line.substr(eq + 1));
    if (value.empty()) throw ConfigError("config: '" + key + "' has no value");

    if (key == "scenario") {
      std::string v = lower(value);
      if (v == "single_user_pcg") cfg.scenario = Scenario::SingleUserPcg;
      else if (v == "multi_user_pcg") cfg.scenario = Scenario::MultiUserPcg;
      else if (v == "antenna_profile") cfg.scenario = Scenario::AntennaProfile;
      else throw ConfigError("config: unknown scenario '" + value + "'");
    } else if (key == "channel") {
      std::string v = lower(value);
      if (v == "los") cfg.channel = ChannelKind::Los;
      else if (v == "nlos") cfg.channel = ChannelKind::Nlos;
      else throw ConfigError("config: unknown channel '" + value + "'");
    } else if (key == "antennas" || key == "m") {
      cfg.antennas.clear();
      std::stringstream ss(value);
      std::string item;
      while (std::getline(ss, item, ',')) cfg.antennas.push_back(parse_int(key, trim(item)));
    } else if (key == "users" || key == "k") {
      cfg.users = parse_int(key, value);
    } else if (key == "gamma_db") {
      cfg.gamma_db = parse_double(key, value);
    } else if (key == "sigma_nu") {
      cfg.sigma_nu = parse_double(key, value);
    } else if (key == "p_max_cap") {
      if (lower(value) == "none") cfg.p_max_cap.reset();
      else cfg.p_max_cap = parse_double(key, value);
    } else if (key == "trials") {
      cfg.trials = static_cast<int>(parse_int(key, value));
    } else if (key == "seed") {
      long long s = parse_int(key, value);
      if (s < 0) throw ConfigError("config: seed must be non-negative");
      cfg.seed = static_cast<std::uint64_t>(s);
    } else if (key == "precoder") {
      std::string v = lower(value);
      if (v == "mrt") cfg.pair = PrecoderPair::Mrt;
      else if (v == "zf") cfg.pair = PrecoderPair::Zf;
      else if (v == "rzf") cfg.pair = PrecoderPair::Rzf;
      else throw ConfigError("config: unknown precoder '" + value + "'");
    } else if (key == "activation_threshold") {
      cfg.activation_threshold = parse_double(key, value);
    } else if (key == "rho") {
      cfg.solver.rho = parse_double(key, value);
    } else if (key == "eps_abs") {
      cfg.solver.eps_abs = parse_double(key, value);
    } else if (key == "eps_rel") {
      cfg.solver.eps_rel = parse_double(key, value);
    } else if (key == "max_iters") {
      cfg.solver.max_iters = static_cast<int>(parse_int(key, value));
    } else if (key == "over_relaxation") {
      cfg.solver.over_relaxation = parse_double(key, value);
    } else if (key == "adaptive_rho") {
      cfg.solver.adaptive_rho = parse_bool(key, value);
    } else {
      throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in);
}

ChannelMatrix draw_channel(const ExperimentConfig& cfg, Index antennas, std::uint64_t trial) {
  Rng rng = Rng::for_trial(cfg.seed, (static_cast<std::uint64_t>(antennas) << 32) | trial);
  if (cfg.channel == ChannelKind::Nlos) return gen_nlos(antennas, cfg.users, rng);
  std::vector<double> angles(static_cast<std::size_t>(cfg.users));
  for (double& a : angles) a = rng.uniform(kLosAngleMin, kLosAngleMax);
  return gen_los(antennas, angles);
}

int SweepResult::total_trials() const {
  int n = 0;
  for (const auto& p : points) n += p.trials;
  return n;
}

int SweepResult::total_failures() const {
  int n = 0;
  for (const auto& p : points) n += p.failures;
  return n;
}

bool SweepResult::within_failure_budget() const {
  return 100 * total_failures() <= total_trials();
}

SweepResult run_single_user_pcg(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.scenario != Scenario::SingleUserPcg) throw ConfigError("config: scenario is not single_user_pcg");
  SweepResult result;
  for (Index m : cfg.antennas) {
    auto t0 = std::chrono::steady_clock::now();
    std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(cfg.trials));
    parallel_for(cfg.trials, [&](int t) {
      ChannelMatrix channel = draw_channel(cfg, m, static_cast<std::uint64_t>(t));
      CRowVector h = channel.row(0);
      TrialOutcome& out = outcomes[static_cast<std::size_t>(t)];
      if (!cfg.p_max_cap) {
        out = {true, pcg_single_user(h), 1.0 / static_cast<double>(m)};
        return;
      }
      try {
        EfficientMrt eff = mrt_efficient(h, cfg.gamma_linear(), cfg.sigma_nu, cfg.p_max_cap);
        PrecodingMatrix conv = mrt(h, cfg.gamma_linear(), cfg.sigma_nu);
        double active = static_cast<double>(active_antennas(eff.precoder, cfg.activation_threshold).count);
        out = {true, pcg_ratio(conv, eff.precoder), active / static_cast<double>(m)};
      } catch (const InfeasibleTarget&) {
        out = {false, 0.0, 0.0};
      }
    });
    result.points.push_back(aggregate(m, outcomes, elapsed_since(t0)));
  }
  return result;
}

SweepResult run_multi_user_pcg(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.scenario != Scenario::MultiUserPcg) throw ConfigError("config: scenario is not multi_user_pcg");
  SweepResult result;
  for (Index m : cfg.antennas) {
    auto t0 = std::chrono::steady_clock::now();
    std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(cfg.trials));
    parallel_for(cfg.trials, [&](int t) {
      ChannelMatrix channel = draw_channel(cfg, m, static_cast<std::uint64_t>(t));
      TrialOutcome& out = outcomes[static_cast<std::size_t>(t)];
      try {
        PrecoderPairResult pair = solve_pair(cfg, channel);
        if (pair.efficient.status != SolveStatus::Optimal) return;
        double active =
            static_cast<double>(active_antennas(pair.efficient.solution, cfg.activation_threshold).count);
        out = {true, pcg_ratio(pair.conventional, pair.efficient.solution), active / static_cast<double>(m)};
      } catch (const std::invalid_argument&) {
        // rank-deficient draw; counted as a failure
      }
    });
    result.points.push_back(aggregate(m, outcomes, elapsed_since(t0)));
  }
  return result;
}

AntennaProfile run_antenna_profile(const ExperimentConfig& cfg) {
  cfg.validate();
  const Index m = cfg.antennas.front();
  ChannelMatrix channel = draw_channel(cfg, m, 0);
  PrecoderPairResult pair = solve_pair(cfg, channel);
  if (pair.efficient.status != SolveStatus::Optimal) {
    throw std::runtime_error("efficient precoder solve failed: status " + to_string(pair.efficient.status) +
                             " after " + std::to_string(pair.efficient.iterations) +
                             " iterations, primal residual " + format_number(pair.efficient.primal_residual) +
                             ", dual residual " + format_number(pair.efficient.dual_residual));
  }
  AntennaProfile out{m,
                     transmit_power(pair.conventional).per_antenna,
                     transmit_power(pair.efficient.solution).per_antenna,
                     power_report(pair.conventional, PaModel{}, cfg.activation_threshold),
                     power_report(pair.efficient.solution, PaModel{}, cfg.activation_threshold),
                     pair.efficient};
  return out;
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
  out << "M,mean_pcg,stderr,trials,failures\n";
  for (const auto& p : result.points) {
    out << p.antennas << ',' << format_number(p.mean_pcg) << ',' << format_number(p.std_error) << ','
        << p.trials << ',' << p.failures << '\n';
  }
}

void write_profile_csv(std::ostream& out, const AntennaProfile& profile) {
  out << "antenna,p_conventional,p_efficient\n";
  for (Index m = 0; m < profile.antennas; ++m) {
    out << m << ',' << format_number(profile.p_conventional(m)) << ','
        << format_number(profile.p_efficient(m)) << '\n';
  }
}

unsigned worker_threads() {
  if (const char* env = std::getenv(kThreadsEnv)) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace pacons
