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

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace pacons {
namespace {

constexpr double kFeasibilityRelTol = 1e-12;
constexpr double kRankRelTol = 1e-12;

void require_nonzero(const CRowVector& h) {
  if (h.size() < 1 || !(h.squaredNorm() > 0.0)) {
    throw std::invalid_argument("channel row is all zero");
  }
}

void require_wide(const ChannelMatrix& channel, const TargetSpec& targets) {
  if (targets.users() != channel.users()) {
    throw std::invalid_argument("target count does not match the user count");
  }
  if (channel.users() > channel.antennas()) {
    throw std::invalid_argument("dimension error: K = " + std::to_string(channel.users()) +
                                " users exceeds M = " + std::to_string(channel.antennas()) +
                                " antennas");
  }
}

Complex conj_phase(const Complex& h) {
  double mag = std::abs(h);
  return mag > 0.0 ? std::conj(h) / mag : Complex(1.0, 0.0);
}

}  // namespace

PrecodingMatrix mrt(const CRowVector& h, double gamma, double sigma_nu) {
  require_nonzero(h);
  if (!(gamma > 0.0)) throw std::invalid_argument("SNR target must be positive");
  double norm = h.norm();
  double p_tx = gamma * sigma_nu * sigma_nu / (norm * norm);
  CMatrix w = (std::sqrt(p_tx) / norm) * h.conjugate();
  return PrecodingMatrix(std::move(w));
}

EfficientMrt mrt_efficient(const CRowVector& h, double gamma, double sigma_nu,
                           std::optional<double> p_max) {
  require_nonzero(h);
  if (gamma < 0.0) throw std::invalid_argument("SNR target must be non-negative");
  if (p_max && !(*p_max > 0.0)) throw std::invalid_argument("p_max must be positive");

  const Index antennas = h.size();
  RVector gain = h.cwiseAbs().transpose();
  std::vector<Index> order(static_cast<std::size_t>(antennas));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return gain(a) > gain(b); });

  const double target = std::sqrt(gamma) * sigma_nu;
  GreedyAllocation alloc;
  std::size_t support = 1;  // L
  double zeta = 0.0;

  if (p_max) {
    const double amp = std::sqrt(*p_max);
    const double reach = amp * gain.sum();
    if (reach < target * (1.0 - kFeasibilityRelTol)) {
      throw InfeasibleTarget("infeasible SNR target: all antennas saturated reach " +
                             std::to_string(reach) + " < " + std::to_string(target));
    }
    // smallest L with sqrt(p_max) * (sum of the L strongest gains) >= target
    double partial = 0.0;
    for (support = 1; support <= order.size(); ++support) {
      partial += amp * gain(order[support - 1]);
      if (partial >= target) break;
    }
    support = std::min(support, order.size());
    for (std::size_t i = 0; i + 1 < support; ++i) zeta += amp * gain(order[i]);
  }

  alloc.saturated.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(support - 1));
  alloc.marginal = order[support - 1];
  alloc.inactive.assign(order.begin() + static_cast<std::ptrdiff_t>(support), order.end());
  alloc.marginal_amplitude = std::max(0.0, target - zeta) / gain(alloc.marginal);
  if (p_max) alloc.marginal_amplitude = std::min(alloc.marginal_amplitude, std::sqrt(*p_max));

  CMatrix w = CMatrix::Zero(1, antennas);
  for (Index m : alloc.saturated) w(0, m) = conj_phase(h(m)) * std::sqrt(*p_max);
  w(0, alloc.marginal) = conj_phase(h(alloc.marginal)) * alloc.marginal_amplitude;
  return EfficientMrt{PrecodingMatrix(std::move(w)), std::move(alloc)};
}

PrecodingMatrix zf(const ChannelMatrix& channel, const TargetSpec& targets) {
  require_wide(channel, targets);
  const CMatrix& h = channel.entries();
  CMatrix gram = h * h.adjoint();
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(gram, Eigen::EigenvaluesOnly);
  double lmax = eig.eigenvalues().maxCoeff();
  if (!(eig.eigenvalues().minCoeff() > kRankRelTol * lmax)) {
    throw std::invalid_argument("rank-deficient channel: H H^H is singular");
  }
  CMatrix wt = h.adjoint() * gram.llt().solve(targets.scaled_targets());
  return PrecodingMatrix(wt.transpose());
}

RzfSlack rzf_slack(const ChannelMatrix& channel, const RVector& gammas, double sigma_nu) {
  if (gammas.size() != channel.users()) {
    throw std::invalid_argument("target count does not match the user count");
  }
  if ((gammas.array() < 0.0).any()) throw std::invalid_argument("SINR targets must be non-negative");
  const CMatrix& h = channel.entries();
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(h * h.adjoint());
  const double noise = sigma_nu * sigma_nu;
  RzfSlack out;
  out.eigenvalues = eig.eigenvalues().cwiseMax(0.0);
  RVector shrink = (out.eigenvalues.array() / noise + 1.0).square().inverse();
  // diagonal of U diag(shrink) U^H, weighted by the per-user targets
  const CMatrix& u = eig.eigenvectors();
  double trace = 0.0;
  for (Index k = 0; k < u.rows(); ++k) {
    trace += gammas(k) * (u.row(k).cwiseAbs2().transpose().array() * shrink.array()).sum();
  }
  out.xi = noise * trace;
  return out;
}

RzfSlack rzf_slack(const ChannelMatrix& channel, const TargetSpec& targets) {
  require_wide(channel, targets);
  return rzf_slack(channel, targets.gammas(), targets.sigma_nu());
}

PrecodingMatrix rzf(const ChannelMatrix& channel, const TargetSpec& targets) {
  require_wide(channel, targets);
  const CMatrix& h = channel.entries();
  const double noise = targets.sigma_nu() * targets.sigma_nu();
  CMatrix reg = h * h.adjoint();
  reg.diagonal().array() += noise;
  CMatrix wt = h.adjoint() * reg.llt().solve(targets.scaled_targets());
  return PrecodingMatrix(wt.transpose());
}

}  // namespace pacons
