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

#ifndef PACONS_POWER_HPP
#define PACONS_POWER_HPP

#include "pacons/model.hpp"

#include <vector>

namespace pacons {

inline constexpr double kDefaultActivationThreshold = 1e-6;

/// Power amplifier with efficiency eta_max * sqrt(p / p_max) below saturation.
struct PaModel {
  double p_max = 1.0;
  double eta_max = 0.785;  // class B

  PaModel() = default;
  PaModel(double p_max, double eta_max);

  /// sqrt(p_max) / eta_max, the factor between consumed power and ||W||_{2,1}.
  double prefactor() const;
};

/// Efficiency of one PA at output power p_m. Overdrive (p_m > p_max) throws.
double pa_efficiency(double p_m, const PaModel& pa);

/// Consumed power under a constant-efficiency PA, p_tx / eta.
double consumed_power_constant_efficiency(const PrecodingMatrix& precoder, double eta);

struct TransmitPower {
  RVector per_antenna;  // p_m = sum_k |w_{k,m}|^2
  double total = 0.0;   // ||W||_F^2
};

TransmitPower transmit_power(const PrecodingMatrix& precoder);

/// Sum over antenna columns of the column 2-norms.
double l21_norm(const CMatrix& w);

/// (sqrt(p_max) / eta_max) * ||W||_{2,1}
double consumed_power(const PrecodingMatrix& precoder, const PaModel& pa);

struct Activation {
  int count = 0;
  std::vector<bool> mask;
};

/// Antenna m is active iff p_m > rel_threshold * max p.
Activation active_antennas(const PrecodingMatrix& precoder,
                           double rel_threshold = kDefaultActivationThreshold);

struct PowerReport {
  RVector per_antenna;
  double p_tx = 0.0;
  double p_cons = 0.0;             // with the PA prefactor
  double p_cons_normalized = 0.0;  // ||W||_{2,1}
  int active_count = 0;
};

PowerReport power_report(const PrecodingMatrix& precoder, const PaModel& pa = {},
                         double rel_threshold = kDefaultActivationThreshold);

/// ||h||_inf ||h||_1 / ||h||_2^2, the single-user gain of efficient over conventional MRT.
double pcg_single_user(const CRowVector& h);

/// ||W_conv||_{2,1} / ||W_eff||_{2,1}
double pcg_ratio(const PrecodingMatrix& conventional, const PrecodingMatrix& efficient);

}  // namespace pacons

#endif  // PACONS_POWER_HPP
