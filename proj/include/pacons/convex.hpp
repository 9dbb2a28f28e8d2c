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

#ifndef PACONS_CONVEX_HPP
#define PACONS_CONVEX_HPP

#include "pacons/model.hpp"

#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace pacons {

// ---------------------------------------------------------------------------
// Problem description
//
// The variable is a complex K x M matrix W. Constraint maps of the form A W^T
// act on every user column w_k^T with the same R x M matrix A.
// ---------------------------------------------------------------------------

enum class Objective {
  GroupL21,          // sum_m ||w_{.,m}||_2
  L1,                // sum_{k,m} |w_{k,m}|
  FrobeniusSquared,  // ||W||_F^2, the conventional transmit-power objective
};

/// A W^T = B
struct AffineEquality {
  CMatrix a;
  CMatrix b;
};

/// ||A W^T - B||_F <= radius
struct FrobeniusBall {
  CMatrix a;
  CMatrix b;
  double radius = 0.0;
};

/// sum_k |w_{k,m}|^2 <= cap for every antenna m
struct PerAntennaBall {
  double cap = 0.0;
};

/// Re(c w^T) >= t, single-user only
struct HalfSpace {
  CRowVector c;
  double t = 0.0;
};

/// Re(h_k w_k^T) >= sqrt(gamma_k) ||(h_k w_{k'}^T for k' != k, sigma_nu)||_2 for every k
struct SocSinr {
  CMatrix h;
  RVector gammas;
  double sigma_nu = 1.0;
};

using Constraint = std::variant<AffineEquality, FrobeniusBall, PerAntennaBall, HalfSpace, SocSinr>;

class ConvexProblem {
 public:
  /// Throws std::invalid_argument when a constraint does not fit the variable shape.
  ConvexProblem(Index users, Index antennas, Objective objective, std::vector<Constraint> constraints);

  Index users() const { return users_; }
  Index antennas() const { return antennas_; }
  Objective objective() const { return objective_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }

  double objective_value(const CMatrix& w) const;
  /// Largest absolute violation over all constraints; 0 for a feasible point.
  double max_violation(const CMatrix& w) const;

 private:
  Index users_;
  Index antennas_;
  Objective objective_;
  std::vector<Constraint> constraints_;
};

// ---------------------------------------------------------------------------
// Solver
// ---------------------------------------------------------------------------

struct SolverConfig {
  double rho = 1.0;
  double eps_abs = 1e-10;
  double eps_rel = 1e-8;
  int max_iters = 50000;
  double over_relaxation = 1.6;
  /// Iterations over which stagnating residuals with drifting duals flag infeasibility.
  int infeasibility_window = 2000;
  /// Rebalance rho from the relative primal/dual residual ratio.
  bool adaptive_rho = true;

  void validate() const;
};

enum class SolveStatus { Optimal, MaxIters, Infeasible };

std::string to_string(SolveStatus status);

struct SolveReport {
  PrecodingMatrix solution;
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double eps_primal = 0.0;
  double eps_dual = 0.0;
  double objective = 0.0;
  SolveStatus status = SolveStatus::MaxIters;
};

/// Consensus ADMM.
///
/// Every constraint set owns a copy of the variable, either of W itself
/// (affine equality, per-antenna ball, half-space) or of its image A W^T
/// (Frobenius ball, SINR cones), and the objective owns one more copy of W.
/// Each copy is updated by an exact projection (or the objective prox), and the
/// shared W by a least-squares fit to all copies. Image copies are rescaled so
/// that ||A||_2 = 1; the constraint sets are invariant under that rescaling.
///
/// The reported solution is the objective copy, so inactive antennas are
/// exactly zero.
SolveReport solve(const ConvexProblem& problem, const SolverConfig& config = {});

// ---------------------------------------------------------------------------
// Proximal operators and projections
// ---------------------------------------------------------------------------

/// Real-composite view of W used for all norms and tolerances: antenna columns
/// in order, each as [Re w_{0,m} .. Re w_{K-1,m}, Im w_{0,m} .. Im w_{K-1,m}].
/// The L2,1 group of antenna m is the 2K-long slice starting at 2Km.
RVector to_real_composite(const CMatrix& w);
CMatrix from_real_composite(const RVector& x, Index users, Index antennas);

/// Block soft-thresholding of antenna columns, the prox of lambda ||.||_{2,1}.
CMatrix group_soft_threshold(const CMatrix& w, double lambda);
/// Entrywise complex soft-thresholding, the prox of lambda ||.||_1.
CMatrix soft_threshold(const CMatrix& w, double lambda);

/// Projection onto {W : A W^T = B} with the Gram factor of A cached.
class AffineProjector {
 public:
  AffineProjector(CMatrix a, CMatrix b);
  CMatrix operator()(const CMatrix& w) const;

 private:
  CMatrix a_;
  CMatrix b_;
  Eigen::LLT<CMatrix> gram_;
};

CMatrix project_affine(const CMatrix& w, const CMatrix& a, const CMatrix& b);
CMatrix project_per_antenna_ball(const CMatrix& w, double cap);
CMatrix project_half_space(const CMatrix& w, const CRowVector& c, double t);
/// Projection onto the centered ball ||Y||_F <= radius.
CMatrix project_frobenius_ball(const CMatrix& y, double radius);

/// Projection onto {(x, t) : ||x||_2 <= t}.
std::pair<RVector, double> project_soc(const RVector& x, double t);
/// Projection onto {(x, t) : ||x||_2 <= aperture * t}, aperture > 0.
std::pair<RVector, double> project_soc(const RVector& x, double t, double aperture);

}  // namespace pacons

#endif  // PACONS_CONVEX_HPP
