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

#include "pacons/power.hpp"

#include <cmath>
#include <stdexcept>

namespace pacons {

PaModel::PaModel(double p_max_, double eta_max_) : p_max(p_max_), eta_max(eta_max_) {
  if (!(p_max > 0.0) || !std::isfinite(p_max)) throw std::invalid_argument("p_max must be positive");
  if (!(eta_max > 0.0 && eta_max <= 1.0)) throw std::invalid_argument("eta_max must lie in (0, 1]");
}

double PaModel::prefactor() const { return std::sqrt(p_max) / eta_max; }

double pa_efficiency(double p_m, const PaModel& pa) {
  if (p_m < 0.0) throw std::invalid_argument("negative PA output power");
  if (p_m > pa.p_max) throw std::domain_error("PA overdriven: output power exceeds p_max");
  return pa.eta_max * std::sqrt(p_m / pa.p_max);
}

double consumed_power_constant_efficiency(const PrecodingMatrix& precoder, double eta) {
  if (!(eta > 0.0 && eta <= 1.0)) throw std::invalid_argument("efficiency must lie in (0, 1]");
  return precoder.entries().squaredNorm() / eta;
}

TransmitPower transmit_power(const PrecodingMatrix& precoder) {
  TransmitPower out;
  out.per_antenna = precoder.entries().cwiseAbs2().colwise().sum().transpose();
  out.total = out.per_antenna.sum();
  return out;
}

double l21_norm(const CMatrix& w) { return w.colwise().norm().sum(); }

double consumed_power(const PrecodingMatrix& precoder, const PaModel& pa) {
  return pa.prefactor() * l21_norm(precoder.entries());
}

Activation active_antennas(const PrecodingMatrix& precoder, double rel_threshold) {
  if (!(rel_threshold > 0.0 && rel_threshold < 1.0)) {
    throw std::invalid_argument("activation threshold must lie in (0, 1)");
  }
  RVector p = transmit_power(precoder).per_antenna;
  Activation out;
  out.mask.assign(static_cast<std::size_t>(p.size()), false);
  double peak = p.size() > 0 ? p.maxCoeff() : 0.0;
  if (peak <= 0.0) return out;
  for (Index m = 0; m < p.size(); ++m) {
    if (p(m) > rel_threshold * peak) {
      out.mask[static_cast<std::size_t>(m)] = true;
      ++out.count;
    }
  }
  return out;
}

PowerReport power_report(const PrecodingMatrix& precoder, const PaModel& pa, double rel_threshold) {
  PowerReport out;
  TransmitPower tx = transmit_power(precoder);
  out.per_antenna = tx.per_antenna;
  out.p_tx = tx.total;
  out.p_cons_normalized = l21_norm(precoder.entries());
  out.p_cons = pa.prefactor() * out.p_cons_normalized;
  out.active_count = active_antennas(precoder, rel_threshold).count;
  return out;
}

double pcg_single_user(const CRowVector& h) {
  RVector mag = h.cwiseAbs().transpose();
  double l2sq = mag.squaredNorm();
  if (!(l2sq > 0.0)) throw std::invalid_argument("PCG undefined for an all-zero channel");
  return mag.maxCoeff() * mag.sum() / l2sq;
}

double pcg_ratio(const PrecodingMatrix& conventional, const PrecodingMatrix& efficient) {
  if (conventional.users() != efficient.users() || conventional.antennas() != efficient.antennas()) {
    throw std::invalid_argument("PCG ratio needs precoders of the same shape");
  }
  double denom = l21_norm(efficient.entries());
  if (!(denom > 0.0)) throw std::invalid_argument("PCG ratio undefined for a zero efficient precoder");
  return l21_norm(conventional.entries()) / denom;
}

}  // namespace pacons
