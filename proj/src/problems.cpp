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

#include "pacons/problems.hpp"

#include "pacons/closed_form.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace pacons {
namespace {

void require_matching(const ChannelMatrix& channel, const TargetSpec& targets) {
  if (targets.users() != channel.users()) {
    throw std::invalid_argument("target count does not match the user count");
  }
}

void require_wide(const ChannelMatrix& channel) {
  if (channel.users() > channel.antennas()) {
    throw std::invalid_argument("dimension error: K = " + std::to_string(channel.users()) +
                                " users exceeds M = " + std::to_string(channel.antennas()) +
                                " antennas");
  }
}

void add_cap(std::vector<Constraint>& constraints, const std::optional<double>& cap) {
  if (cap) constraints.emplace_back(PerAntennaBall{*cap});
}

}  // namespace

ConvexProblem build_mrt_eff(const CRowVector& h, double gamma, double sigma_nu,
                            std::optional<double> p_max) {
  if (gamma < 0.0) throw std::invalid_argument("SNR target must be non-negative");
  std::vector<Constraint> constraints;
  constraints.emplace_back(HalfSpace{h, std::sqrt(gamma) * sigma_nu});
  add_cap(constraints, p_max);
  return ConvexProblem(1, h.size(), Objective::L1, std::move(constraints));
}

ConvexProblem build_sinr_eff(const ChannelMatrix& channel, const TargetSpec& targets) {
  require_matching(channel, targets);
  std::vector<Constraint> constraints;
  constraints.emplace_back(SocSinr{channel.entries(), targets.gammas(), targets.sigma_nu()});
  add_cap(constraints, targets.p_max_cap());
  return ConvexProblem(channel.users(), channel.antennas(), Objective::GroupL21, std::move(constraints));
}

ConvexProblem build_sinr_conventional(const ChannelMatrix& channel, const TargetSpec& targets) {
  require_matching(channel, targets);
  std::vector<Constraint> constraints;
  constraints.emplace_back(SocSinr{channel.entries(), targets.gammas(), targets.sigma_nu()});
  add_cap(constraints, targets.p_max_cap());
  return ConvexProblem(channel.users(), channel.antennas(), Objective::FrobeniusSquared,
                       std::move(constraints));
}

ConvexProblem build_zf_eff(const ChannelMatrix& channel, const TargetSpec& targets) {
  require_matching(channel, targets);
  require_wide(channel);
  std::vector<Constraint> constraints;
  constraints.emplace_back(AffineEquality{channel.entries(), targets.scaled_targets()});
  add_cap(constraints, targets.p_max_cap());
  // rank is checked here rather than at solve time
  ConvexProblem problem(channel.users(), channel.antennas(), Objective::GroupL21, std::move(constraints));
  AffineProjector check(channel.entries(), targets.scaled_targets());
  (void)check;
  return problem;
}

ConvexProblem build_rzf_eff(const ChannelMatrix& channel, const TargetSpec& targets,
                            std::optional<double> xi) {
  require_matching(channel, targets);
  require_wide(channel);
  double slack = xi ? *xi : rzf_slack(channel, targets).xi;
  if (!(slack >= 0.0)) throw std::invalid_argument("RZF slack must be non-negative");
  std::vector<Constraint> constraints;
  constraints.emplace_back(FrobeniusBall{channel.entries(), targets.scaled_targets(), std::sqrt(slack)});
  add_cap(constraints, targets.p_max_cap());
  return ConvexProblem(channel.users(), channel.antennas(), Objective::GroupL21, std::move(constraints));
}

}  // namespace pacons
