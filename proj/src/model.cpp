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

#include "pacons/model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace pacons {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

Rng::Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

Rng::Rng(std::uint64_t seed, std::seed_seq& seq) : seed_(seed), engine_(seq) {}

Rng Rng::for_trial(std::uint64_t seed, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  return Rng(seed, seq);
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::standard_normal() {
  if (spare_) {
    double v = *spare_;
    spare_.reset();
    return v;
  }
  double u1 = uniform();
  double u2 = uniform();
  double radius = std::sqrt(-2.0 * std::log1p(-u1));
  double phase = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(phase);
  return radius * std::cos(phase);
}

Complex Rng::complex_normal() {
  double re = standard_normal();
  double im = standard_normal();
  return Complex(re, im) * std::numbers::sqrt2 * 0.5;
}

ChannelMatrix::ChannelMatrix(CMatrix entries, Provenance provenance)
    : entries_(std::move(entries)), provenance_(std::move(provenance)) {
  if (entries_.rows() < 1 || entries_.cols() < 1) {
    throw std::invalid_argument("channel matrix needs at least one user and one antenna");
  }
  if (!entries_.allFinite()) throw std::invalid_argument("channel matrix has non-finite entries");
}

PrecodingMatrix::PrecodingMatrix(CMatrix entries) : entries_(std::move(entries)) {
  if (!entries_.allFinite()) throw std::invalid_argument("precoding matrix has non-finite entries");
}

TargetSpec::TargetSpec(RVector gammas, double sigma_nu, std::optional<double> p_max_cap)
    : gammas_(std::move(gammas)), sigma_nu_(sigma_nu), p_max_cap_(p_max_cap) {
  if (gammas_.size() < 1) throw std::invalid_argument("target spec needs at least one user");
  if (!(gammas_.array() > 0.0).all() || !gammas_.allFinite()) {
    throw std::invalid_argument("SINR targets must be positive and finite");
  }
  if (!(sigma_nu_ > 0.0) || !std::isfinite(sigma_nu_)) {
    throw std::invalid_argument("noise amplitude sigma_nu must be positive");
  }
  if (p_max_cap_ && !(*p_max_cap_ > 0.0)) {
    throw std::invalid_argument("per-antenna power cap must be positive");
  }
}

TargetSpec TargetSpec::uniform(Index users, double gamma, double sigma_nu,
                               std::optional<double> p_max_cap) {
  return TargetSpec(RVector::Constant(users, gamma), sigma_nu, p_max_cap);
}

CMatrix TargetSpec::scaled_targets() const {
  RVector diag = gammas_.array().sqrt() * sigma_nu_;
  return diag.cast<Complex>().asDiagonal();
}

ChannelMatrix gen_los(Index antennas, const std::vector<double>& angles) {
  if (antennas < 1) throw std::invalid_argument("antenna count must be at least 1");
  if (angles.empty()) throw std::invalid_argument("LOS channel needs at least one user angle");
  CMatrix h(static_cast<Index>(angles.size()), antennas);
  for (std::size_t k = 0; k < angles.size(); ++k) {
    double theta = angles[k];
    if (!(theta > 0.0 && theta < std::numbers::pi)) {
      throw std::invalid_argument("user angle " + std::to_string(theta) +
                                  " outside the open interval (0, pi)");
    }
    double c = std::cos(theta);
    for (Index m = 0; m < antennas; ++m) {
      h(static_cast<Index>(k), m) = std::polar(1.0, -std::numbers::pi * c * static_cast<double>(m));
    }
  }
  return ChannelMatrix(std::move(h), LosProvenance{angles});
}

ChannelMatrix gen_nlos(Index antennas, Index users, Rng& rng) {
  if (antennas < 1 || users < 1) throw std::invalid_argument("NLOS channel needs M >= 1 and K >= 1");
  CMatrix h(users, antennas);
  for (Index k = 0; k < users; ++k) {
    for (Index m = 0; m < antennas; ++m) h(k, m) = rng.complex_normal();
  }
  return ChannelMatrix(std::move(h), NlosProvenance{rng.seed()});
}

RVector evaluate_sinr(const ChannelMatrix& channel, const PrecodingMatrix& precoder, double sigma_nu) {
  const CMatrix& h = channel.entries();
  const CMatrix& w = precoder.entries();
  if (h.rows() != w.rows() || h.cols() != w.cols()) {
    throw std::invalid_argument("dimension mismatch: channel is " + std::to_string(h.rows()) + "x" +
                                std::to_string(h.cols()) + ", precoder is " +
                                std::to_string(w.rows()) + "x" + std::to_string(w.cols()));
  }
  // gains(k, k') = h_k w_{k'}^T
  CMatrix gains = h * w.transpose();
  Eigen::MatrixXd power = gains.cwiseAbs2();
  RVector sinr(h.rows());
  double noise = sigma_nu * sigma_nu;
  for (Index k = 0; k < h.rows(); ++k) {
    double useful = power(k, k);
    double interference = power.row(k).sum() - useful;
    sinr(k) = useful / (interference + noise);
  }
  return sinr;
}

}  // namespace pacons
