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

#ifndef PACONS_PROBLEMS_HPP
#define PACONS_PROBLEMS_HPP

#include "pacons/convex.hpp"
#include "pacons/model.hpp"

#include <optional>

namespace pacons {

/// min ||w||_1  s.t.  Re(h w^T) >= sqrt(gamma) sigma_nu,  |w_m|^2 <= p_max.
ConvexProblem build_mrt_eff(const CRowVector& h, double gamma, double sigma_nu,
                            std::optional<double> p_max = std::nullopt);

/// min ||W||_{2,1}  s.t.  one SINR cone per user, optional per-antenna cap.
ConvexProblem build_sinr_eff(const ChannelMatrix& channel, const TargetSpec& targets);

/// The transmit-power counterpart of build_sinr_eff: objective ||W||_F^2.
ConvexProblem build_sinr_conventional(const ChannelMatrix& channel, const TargetSpec& targets);

/// min ||W||_{2,1}  s.t.  H W^T = D^{1/2} sigma_nu, optional per-antenna cap.
ConvexProblem build_zf_eff(const ChannelMatrix& channel, const TargetSpec& targets);

/// min ||W||_{2,1}  s.t.  ||H W^T - D^{1/2} sigma_nu||_F^2 <= xi, optional cap.
/// xi defaults to rzf_slack(channel, targets).
ConvexProblem build_rzf_eff(const ChannelMatrix& channel, const TargetSpec& targets,
                            std::optional<double> xi = std::nullopt);

}  // namespace pacons

#endif  // PACONS_PROBLEMS_HPP
