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

// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include "pacons/closed_form.hpp"
#include "pacons/convex.hpp"
#include "pacons/harness.hpp"
#include "pacons/model.hpp"
#include "pacons/power.hpp"
#include "pacons/problems.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

using namespace pacons;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

ExperimentConfig config(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const SweepPoint& at(const SweepResult& r, Index m) {
  for (const auto& p : r.points) {
    if (p.antennas == m) return p;
  }
  throw std::logic_error("antenna count missing from sweep");
}

CMatrix random_matrix(Rng& rng, Index rows, Index cols, double scale) {
  CMatrix m(rows, cols);
  for (Index i = 0; i < m.size(); ++i) m.data()[i] = scale * rng.complex_normal();
  return m;
}

Outcome single_user_nlos_gain() {
  auto t0 = std::chrono::steady_clock::now();
  SweepResult r = run_single_user_pcg(
      config("scenario = single_user_pcg\nchannel = nlos\nantennas = 64,100\ntrials = 10000\nseed = 1\n"));
  double secs = seconds_since(t0);
  double g100 = at(r, 100).mean_pcg, g64 = at(r, 64).mean_pcg;
  bool ok = std::abs(g100 - 2.00) <= 0.05 && std::abs(g64 - 1.92) <= 0.05 && secs < 10.0 &&
            r.total_failures() == 0;
  return {ok, "M=100 " + fmt("%.4f", g100) + " (2.00+-0.05), M=64 " + fmt("%.4f", g64) +
                  " (1.92+-0.05), 10000 trials each, " + fmt("%.2f", secs) + " s (< 10 s)"};
}

Outcome multi_user_zf_gain() {
  auto t0 = std::chrono::steady_clock::now();
  const std::string base =
      "scenario = multi_user_pcg\nchannel = nlos\nprecoder = zf\nantennas = 64\ngamma_db = 10\n"
      "sigma_nu = 1\np_max_cap = none\ntrials = 300\nseed = 4\n";
  SweepResult k2 = run_multi_user_pcg(config(base + "users = 2\n"));
  SweepResult k8 = run_multi_user_pcg(config(base + "users = 8\n"));
  double secs = seconds_since(t0);
  double g2 = k2.points[0].mean_pcg, g8 = k8.points[0].mean_pcg;
  bool ok = std::abs(g2 - 1.54) <= 0.08 && std::abs(g8 - 1.12) <= 0.05 && secs < 1800.0 &&
            k2.within_failure_budget() && k8.within_failure_budget();
  return {ok, "K=2 " + fmt("%.4f", g2) + " (1.54+-0.08), K=8 " + fmt("%.4f", g8) +
                  " (1.12+-0.05), 300 trials each, failures " +
                  std::to_string(k2.total_failures() + k8.total_failures()) + ", " + fmt("%.1f", secs) +
                  " s (< 1800 s)"};
}

Outcome sparsity_of_efficient_zf() {
  const std::string base =
      "scenario = multi_user_pcg\nchannel = nlos\nprecoder = zf\nantennas = 64\ngamma_db = 10\n"
      "sigma_nu = 1\np_max_cap = none\n";
  // K = 2: every one of 50 realizations, plus the reference profile realization
  ExperimentConfig k2 = config(base + "users = 2\nseed = 2\n");
  int worst_eff = 0, min_conv = 64, solved = 0;
  for (int t = 0; t < 50; ++t) {
    ChannelMatrix ch = draw_channel(k2, 64, static_cast<std::uint64_t>(t));
    TargetSpec targets = k2.targets();
    SolveReport rep = solve(build_zf_eff(ch, targets), k2.solver);
    if (rep.status != SolveStatus::Optimal) continue;
    ++solved;
    worst_eff = std::max(worst_eff, active_antennas(rep.solution, 1e-6).count);
    min_conv = std::min(min_conv, active_antennas(zf(ch, targets), 1e-6).count);
  }
  ExperimentConfig profile_cfg = config(
      "scenario = antenna_profile\nchannel = nlos\nprecoder = zf\nantennas = 64\nusers = 2\nseed = 2\n");
  AntennaProfile profile = run_antenna_profile(profile_cfg);

  ExperimentConfig k8 = config(base + "users = 8\nseed = 3\n");
  double fraction = 0.0;
  int solved8 = 0;
  for (int t = 0; t < 50; ++t) {
    ChannelMatrix ch = draw_channel(k8, 64, static_cast<std::uint64_t>(t));
    SolveReport rep = solve(build_zf_eff(ch, k8.targets()), k8.solver);
    if (rep.status != SolveStatus::Optimal) continue;
    ++solved8;
    fraction += active_antennas(rep.solution, 1e-6).count / 64.0;
  }
  fraction /= std::max(solved8, 1);
  bool ok = solved == 50 && worst_eff <= 12 && min_conv == 64 && profile.efficient.active_count <= 12 &&
            profile.conventional.active_count == 64 && solved8 == 50 && fraction >= 0.30 && fraction <= 0.70;
  return {ok, "K=2: max active (eff) " + std::to_string(worst_eff) + " over 50 draws, profile draw " +
                  std::to_string(profile.efficient.active_count) + " (<= 12), conventional " +
                  std::to_string(min_conv) + "/64; K=8: mean active fraction " + fmt("%.3f", fraction) +
                  " over 50 draws ([0.30, 0.70])"};
}

Outcome solver_matches_closed_form() {
  Rng rng(2024);
  double worst_obj = 0.0, worst_amp = 0.0;
  int bad = 0;
  for (int t = 0; t < 100; ++t) {
    Index m = 1 + static_cast<Index>(rng.uniform() * 8.0);
    m = std::min<Index>(m, 8);
    CRowVector h = gen_nlos(m, 1, rng).row(0);
    double gamma = db_to_linear(rng.uniform(0.0, 20.0));
    std::optional<double> cap;
    if (t % 2) {
      // a cap that binds but leaves the target reachable
      double unconstrained = gamma / h.cwiseAbs2().maxCoeff();
      double reach = h.cwiseAbs().sum();
      double needed = gamma / (reach * reach);
      cap = needed + rng.uniform(0.05, 0.95) * (unconstrained - needed);
      if (!(*cap > 0.0)) cap = unconstrained;
    }
    SolveReport rep = solve(build_mrt_eff(h, gamma, 1.0, cap));
    CMatrix closed = mrt_efficient(h, gamma, 1.0, cap).precoder.entries();
    if (rep.status != SolveStatus::Optimal) {
      ++bad;
      continue;
    }
    worst_obj = std::max(worst_obj, std::abs(rep.objective - closed.cwiseAbs().sum()));
    worst_amp = std::max(worst_amp, (rep.solution.entries() - closed).cwiseAbs().maxCoeff());
  }
  bool ok = bad == 0 && worst_obj <= 1e-5 && worst_amp <= 1e-4;
  return {ok, "100 instances (M <= 8, half capped): worst objective gap " + fmt("%.2e", worst_obj) +
                  " (<= 1e-5), worst amplitude gap " + fmt("%.2e", worst_amp) + " (<= 1e-4), unsolved " +
                  std::to_string(bad)};
}

Outcome zf_rzf_exactness() {
  Rng rng(77);
  double worst_zf = 0.0, worst_rzf = 0.0;
  for (int t = 0; t < 100; ++t) {
    Index k = 1 + t % 8;
    Index m = k + static_cast<Index>(rng.uniform() * 60.0);
    ChannelMatrix ch = gen_nlos(m, k, rng);
    RVector gammas(k);
    for (Index i = 0; i < k; ++i) gammas(i) = db_to_linear(rng.uniform(0.0, 20.0));
    TargetSpec targets(gammas, rng.uniform(0.2, 2.0));
    CMatrix d = targets.scaled_targets();
    CMatrix wz = zf(ch, targets).entries();
    worst_zf = std::max(worst_zf, (ch.entries() * wz.transpose() - d).norm() / d.norm());
    double xi = rzf_slack(ch, targets).xi;
    CMatrix wr = rzf(ch, targets).entries();
    double residual = (ch.entries() * wr.transpose() - d).squaredNorm();
    worst_rzf = std::max(worst_rzf, std::abs(residual - xi) / xi);
  }
  bool ok = worst_zf <= 1e-10 && worst_rzf <= 1e-8;
  return {ok, "100 instances: worst ZF relative residual " + fmt("%.2e", worst_zf) +
                  " (<= 1e-10), worst RZF |residual - xi|/xi " + fmt("%.2e", worst_rzf) + " (<= 1e-8)"};
}

Outcome efficient_dominates() {
  Rng rng(99);
  double worst_excess = -std::numeric_limits<double>::infinity();
  double min_pcg = std::numeric_limits<double>::infinity();
  int count = 0, unsolved = 0;
  auto record = [&](const PrecodingMatrix& conv, const PrecodingMatrix& eff) {
    worst_excess = std::max(worst_excess, l21_norm(eff.entries()) - l21_norm(conv.entries()));
    min_pcg = std::min(min_pcg, pcg_ratio(conv, eff));
    ++count;
  };
  for (int t = 0; t < 100; ++t) {
    Index m = 1 + t % 64;
    CRowVector h = gen_nlos(m, 1, rng).row(0);
    record(mrt(h, 10.0, 1.0), mrt_efficient(h, 10.0, 1.0).precoder);
  }
  for (int t = 0; t < 60; ++t) {
    Index k = 1 + t % 4;
    Index m = k + 4 + t % 29;
    ChannelMatrix ch = gen_nlos(m, k, rng);
    TargetSpec targets = TargetSpec::uniform(k, db_to_linear(rng.uniform(0.0, 20.0)), 1.0);
    SolveReport z = solve(build_zf_eff(ch, targets));
    SolveReport r = solve(build_rzf_eff(ch, targets));
    if (z.status != SolveStatus::Optimal || r.status != SolveStatus::Optimal) {
      ++unsolved;
      continue;
    }
    record(zf(ch, targets), z.solution);
    record(rzf(ch, targets), r.solution);
  }
  bool ok = unsolved == 0 && worst_excess <= 1e-6 && min_pcg >= 1.0 - 1e-4;
  return {ok, std::to_string(count) + " MRT/ZF/RZF pairs: max (eff - conv) objective " +
                  fmt("%.2e", worst_excess) + " (<= 1e-6), min PCG " + fmt("%.6f", min_pcg) +
                  " (>= 0.9999), unsolved " + std::to_string(unsolved)};
}

Outcome line_of_sight() {
  SweepResult su = run_single_user_pcg(
      config("scenario = single_user_pcg\nchannel = los\nantennas = 1,2,8,64,100\ntrials = 1000\nseed = 7\n"));
  double worst = 0.0;
  for (const auto& p : su.points) {
    worst = std::max(worst, std::abs(p.mean_pcg - 1.0));
    worst = std::max(worst, std::abs(p.min_pcg - 1.0));
  }
  SweepResult mu = run_multi_user_pcg(config(
      "scenario = multi_user_pcg\nchannel = los\nprecoder = zf\nantennas = 64\nusers = 2\ngamma_db = 10\n"
      "sigma_nu = 1\ntrials = 100\nseed = 8\n"));
  double g = mu.points[0].mean_pcg;
  bool ok = worst <= 1e-12 && g >= 0.98 && g <= 1.10 && mu.within_failure_budget();
  return {ok, "single-user max |PCG - 1| " + fmt("%.1e", worst) + " (<= 1e-12, 5000 draws); multi-user M=64 K=2 mean PCG " +
                  fmt("%.4f", g) + " ([0.98, 1.10], 100 draws)"};
}

// Independent three-case second-order cone projection used as the reference.
std::pair<RVector, double> soc_reference(const RVector& x, double t) {
  double n = std::sqrt(x.squaredNorm());
  if (n <= t) return {x, t};
  if (n <= -t) return {RVector::Zero(x.size()), 0.0};
  double scale = (1.0 + t / n) / 2.0;
  return {scale * x, scale * n};
}

Outcome projections() {
  Rng rng(31337);
  const int samples = 10000;
  const Index k = 4, m = 8;
  double worst_idem = 0.0, worst_expand = 0.0, worst_soc = 0.0;
  CMatrix a = random_matrix(rng, 3, m, 1.0);
  CMatrix b = random_matrix(rng, 3, k, 1.0);
  AffineProjector affine(a, b);
  CRowVector c = random_matrix(rng, 1, m, 1.0).row(0);

  using Op = std::function<CMatrix(const CMatrix&)>;
  struct Named {
    Op op;
    Index rows;
    bool projection;  // shrinkage is non-expansive but not idempotent
  };
  std::vector<Named> ops = {
      {[&](const CMatrix& x) { return affine(x); }, k, true},
      {[](const CMatrix& x) { return project_per_antenna_ball(x, 0.5); }, k, true},
      {[](const CMatrix& x) { return project_frobenius_ball(x, 2.0); }, k, true},
      {[&](const CMatrix& x) { return project_half_space(x, c, 0.7); }, 1, true},
      {[](const CMatrix& x) { return group_soft_threshold(x, 0.6); }, k, false},
  };
  for (const auto& named : ops) {
    for (int i = 0; i < samples; ++i) {
      double scale = std::exp(rng.uniform(-4.0, 4.0));
      CMatrix x = random_matrix(rng, named.rows, m, scale);
      CMatrix y = random_matrix(rng, named.rows, m, scale);
      CMatrix px = named.op(x), py = named.op(y);
      if (named.projection) {
        worst_idem = std::max(worst_idem, (named.op(px) - px).norm() / (1.0 + px.norm()));
      }
      worst_expand = std::max(worst_expand, (px - py).norm() - (x - y).norm());
    }
  }
  for (int i = 0; i < samples; ++i) {
    Index n = 1 + static_cast<Index>(rng.uniform() * 10.0);
    double scale = std::exp(rng.uniform(-4.0, 4.0));
    RVector x(n), y(n);
    for (Index j = 0; j < n; ++j) {
      x(j) = scale * rng.standard_normal();
      y(j) = scale * rng.standard_normal();
    }
    double s = scale * rng.standard_normal() * 1.5, t = scale * rng.standard_normal() * 1.5;
    auto [px, ps] = project_soc(x, s);
    auto [py, pt] = project_soc(y, t);
    auto [ref, rs] = soc_reference(x, s);
    worst_soc = std::max(worst_soc, ((px - ref).norm() + std::abs(ps - rs)) / (1.0 + ref.norm() + std::abs(rs)));
    auto [ppx, pps] = project_soc(px, ps);
    worst_idem = std::max(worst_idem, ((ppx - px).norm() + std::abs(pps - ps)) / (1.0 + px.norm()));
    double before = std::sqrt((x - y).squaredNorm() + (s - t) * (s - t));
    double after = std::sqrt((px - py).squaredNorm() + (ps - pt) * (ps - pt));
    worst_expand = std::max(worst_expand, after - before);
  }
  bool ok = worst_idem <= 1e-12 && worst_expand <= 1e-12 && worst_soc <= 4.0 * std::numeric_limits<double>::epsilon();
  return {ok, "10000 inputs per operator (affine, per-antenna ball, Frobenius ball, half-space, group "
              "soft-threshold, SOC): worst idempotence gap " + fmt("%.1e", worst_idem) +
                  ", worst expansion " + fmt("%.1e", worst_expand) + ", SOC vs three-case formula " +
                  fmt("%.1e", worst_soc)};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {"single-user NLOS consumption gain", single_user_nlos_gain},
      {"multi-user ZF consumption gain", multi_user_zf_gain},
      {"efficient ZF antenna activity", sparsity_of_efficient_zf},
      {"solver agrees with closed form", solver_matches_closed_form},
      {"ZF and RZF exactness", zf_rzf_exactness},
      {"efficient never worse than conventional", efficient_dominates},
      {"line-of-sight gain", line_of_sight},
      {"projections and shrinkage", projections},
  };
  int failed = 0, index = 0;
  for (const auto& c : criteria) {
    ++index;
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("[%s] %d. %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", index, c.name, o.detail.c_str(),
                seconds_since(t0));
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n", index - failed, index);
  return failed == 0 ? 0 : 1;
}
