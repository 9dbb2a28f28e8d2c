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

#ifndef PACONS_CLOSED_FORM_HPP
#define PACONS_CLOSED_FORM_HPP

#include "pacons/model.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace pacons {

/// Thrown when no precoder can reach the requested target (e.g. every PA
/// saturated and the SNR still short).
class InfeasibleTarget : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Support structure of the consumption-efficient single-user precoder.
struct GreedyAllocation {
  std::vector<Index> saturated;  // the L-1 strongest antennas, driven at sqrt(p_max)
  Index marginal = 0;            // weakest antenna of the L strongest
  double marginal_amplitude = 0.0;
  std::vector<Index> inactive;
};

struct EfficientMrt {
  PrecodingMatrix precoder;
  GreedyAllocation allocation;
};

/// Conventional MRT meeting SNR = gamma with equality.
PrecodingMatrix mrt(const CRowVector& h, double gamma, double sigma_nu);

/// Minimizes ||w||_1 subject to Re(h w^T) >= sqrt(gamma) sigma_nu and, when
/// p_max is given, |w_m|^2 <= p_max. Power is poured into antennas in order of
/// decreasing |h_m| (ties by lower index) until the target is met. Without a
/// cap the strongest antenna carries everything.
EfficientMrt mrt_efficient(const CRowVector& h, double gamma, double sigma_nu,
                           std::optional<double> p_max = std::nullopt);

/// W^T = H^H (H H^H)^{-1} D^{1/2} sigma_nu. Throws on rank-deficient H.
PrecodingMatrix zf(const ChannelMatrix& channel, const TargetSpec& targets);

struct RzfSlack {
  double xi = 0.0;
  RVector eigenvalues;  // of H H^H, ascending
};

/// xi = sigma^2 tr[D_gamma U (Lambda / sigma^2 + I)^{-2} U^H] with H H^H = U Lambda U^H.
/// For equal targets this is sigma^2 sum_k gamma / (lambda_k / sigma^2 + 1)^2.
RzfSlack rzf_slack(const ChannelMatrix& channel, const TargetSpec& targets);
/// Same, accepting zero targets.
RzfSlack rzf_slack(const ChannelMatrix& channel, const RVector& gammas, double sigma_nu);

/// W^T = H^H (H H^H + sigma^2 I)^{-1} D^{1/2} sigma_nu.
PrecodingMatrix rzf(const ChannelMatrix& channel, const TargetSpec& targets);

}  // namespace pacons

#endif  // PACONS_CLOSED_FORM_HPP
