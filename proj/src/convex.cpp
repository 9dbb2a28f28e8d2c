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

#include "pacons/convex.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <stdexcept>

namespace pacons {
namespace {

constexpr double kRankRelTol = 1e-12;
constexpr double kRhoMin = 1e-6;
constexpr double kRhoMax = 1e6;
constexpr int kRhoUpdateInterval = 25;
constexpr double kRhoUpdateRatio = 5.0;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("invalid problem: " + what);
}

double spectral_norm(const CMatrix& a) {
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(a * a.adjoint(), Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, eig.eigenvalues().maxCoeff()));
}

// Image-space copy y = A W^T + offset, plus constant-only slack coordinates.
struct ImageBlock {
  CMatrix a;           // R x M, rescaled to unit spectral norm
  CMatrix offset;      // R x K
  RVector slack_base;  // q constants with no dependence on W
  std::function<void(CMatrix&, RVector&)> project;

  CMatrix y, u;
  RVector s, us;
};

struct IdentityBlock {
  std::function<CMatrix(const CMatrix&, double rho)> project;
  CMatrix z, u;
};

// t = Re y(k,k) must dominate sqrt(gamma_k) * ||(y(k,k') for k' != k, s_k)||.
void project_sinr_cones(CMatrix& y, RVector& s, const RVector& gammas) {
  const Index users = y.rows();
  RVector x(2 * (users - 1) + 1);
  for (Index k = 0; k < users; ++k) {
    Index i = 0;
    for (Index j = 0; j < users; ++j) {
      if (j == k) continue;
      x(i++) = y(k, j).real();
      x(i++) = y(k, j).imag();
    }
    x(i) = s(k);
    auto [px, pt] = project_soc(x, y(k, k).real(), 1.0 / std::sqrt(gammas(k)));
    i = 0;
    for (Index j = 0; j < users; ++j) {
      if (j == k) continue;
      y(k, j) = Complex(px(i), px(i + 1));
      i += 2;
    }
    s(k) = px(i);
    y(k, k) = Complex(pt, y(k, k).imag());
  }
}

class AdmmSolver {
 public:
  AdmmSolver(const ConvexProblem& problem, const SolverConfig& config)
      : problem_(problem), config_(config), users_(problem.users()), antennas_(problem.antennas()) {
    build_blocks();
    factor_normal_matrix();
  }

  SolveReport run();

 private:
  void build_blocks();
  void factor_normal_matrix();
  CMatrix solve_normal(const CMatrix& rhs) const;  // rhs is M x K
  void rescale_duals(double factor);
  RVector stacked_duals() const;

  const ConvexProblem& problem_;
  SolverConfig config_;
  Index users_;
  Index antennas_;

  std::vector<IdentityBlock> ident_;  // ident_[0] is the objective copy
  std::vector<ImageBlock> image_;

  CMatrix stacked_a_;  // all image maps, R_total x M
  Eigen::LLT<CMatrix> normal_;
  double identity_count_ = 0.0;
};

void AdmmSolver::build_blocks() {
  const CMatrix zero_w = CMatrix::Zero(users_, antennas_);
  IdentityBlock obj;
  switch (problem_.objective()) {
    case Objective::GroupL21:
      obj.project = [](const CMatrix& v, double rho) { return group_soft_threshold(v, 1.0 / rho); };
      break;
    case Objective::L1:
      obj.project = [](const CMatrix& v, double rho) { return soft_threshold(v, 1.0 / rho); };
      break;
    case Objective::FrobeniusSquared:
      obj.project = [](const CMatrix& v, double rho) -> CMatrix { return v * (rho / (rho + 2.0)); };
      break;
  }
  ident_.push_back(std::move(obj));

  for (const Constraint& c : problem_.constraints()) {
    std::visit(
        Overloaded{
            [&](const AffineEquality& e) {
              auto proj = std::make_shared<AffineProjector>(e.a, e.b);
              ident_.push_back({[proj](const CMatrix& v, double) { return (*proj)(v); }, {}, {}});
            },
            [&](const PerAntennaBall& e) {
              double cap = e.cap;
              ident_.push_back(
                  {[cap](const CMatrix& v, double) { return project_per_antenna_ball(v, cap); }, {}, {}});
            },
            [&](const HalfSpace& e) {
              CRowVector c = e.c;
              double t = e.t;
              ident_.push_back(
                  {[c, t](const CMatrix& v, double) { return project_half_space(v, c, t); }, {}, {}});
            },
            [&](const FrobeniusBall& e) {
              double scale = spectral_norm(e.a);
              if (!(scale > 0.0)) scale = 1.0;
              ImageBlock blk;
              blk.a = e.a / scale;
              blk.offset = -e.b / scale;
              blk.slack_base = RVector(0);
              double radius = e.radius / scale;
              blk.project = [radius](CMatrix& y, RVector&) { y = project_frobenius_ball(y, radius); };
              image_.push_back(std::move(blk));
            },
            [&](const SocSinr& e) {
              double scale = spectral_norm(e.h);
              if (!(scale > 0.0)) scale = 1.0;
              ImageBlock blk;
              blk.a = e.h / scale;
              blk.offset = CMatrix::Zero(users_, users_);
              blk.slack_base = RVector::Constant(users_, e.sigma_nu / scale);
              RVector gammas = e.gammas;
              blk.project = [gammas](CMatrix& y, RVector& s) { project_sinr_cones(y, s, gammas); };
              image_.push_back(std::move(blk));
            },
        },
        c);
  }

  for (auto& b : ident_) {
    b.z = zero_w;
    b.u = zero_w;
  }
  for (auto& b : image_) {
    b.y = CMatrix::Zero(b.a.rows(), users_);
    b.u = b.y;
    b.s = RVector::Zero(b.slack_base.size());
    b.us = b.s;
  }
}

void AdmmSolver::factor_normal_matrix() {
  identity_count_ = static_cast<double>(ident_.size());
  Index rows = 0;
  for (const auto& b : image_) rows += b.a.rows();
  stacked_a_.resize(rows, antennas_);
  Index r = 0;
  for (const auto& b : image_) {
    stacked_a_.middleRows(r, b.a.rows()) = b.a;
    r += b.a.rows();
  }
  if (rows > 0) {
    CMatrix inner = stacked_a_ * stacked_a_.adjoint();
    inner.diagonal().array() += identity_count_;
    normal_.compute(inner);
  }
}

// (n I + A^H A)^{-1} rhs = (rhs - A^H (n I + A A^H)^{-1} A rhs) / n
CMatrix AdmmSolver::solve_normal(const CMatrix& rhs) const {
  if (stacked_a_.rows() == 0) return rhs / identity_count_;
  CMatrix inner = normal_.solve(stacked_a_ * rhs);
  return (rhs - stacked_a_.adjoint() * inner) / identity_count_;
}

void AdmmSolver::rescale_duals(double factor) {
  for (auto& b : ident_) b.u *= factor;
  for (auto& b : image_) {
    b.u *= factor;
    b.us *= factor;
  }
}

RVector AdmmSolver::stacked_duals() const {
  Index len = 0;
  for (const auto& b : ident_) len += 2 * b.u.size();
  for (const auto& b : image_) len += 2 * b.u.size() + b.us.size();
  RVector out(len);
  Index i = 0;
  auto put = [&](const CMatrix& m) {
    for (Index j = 0; j < m.size(); ++j) {
      out(i++) = m.data()[j].real();
      out(i++) = m.data()[j].imag();
    }
  };
  for (const auto& b : ident_) put(b.u);
  for (const auto& b : image_) {
    put(b.u);
    out.segment(i, b.us.size()) = b.us;
    i += b.us.size();
  }
  return out;
}

SolveReport AdmmSolver::run() {
  const double alpha = config_.over_relaxation;
  const double n_dim = static_cast<double>(2 * users_ * antennas_);
  double p_dim = 0.0;
  for (const auto& b : ident_) p_dim += static_cast<double>(2 * b.z.size());
  for (const auto& b : image_) p_dim += static_cast<double>(2 * b.y.size() + b.s.size());
  double offset_norm_sq = 0.0;
  for (const auto& b : image_) offset_norm_sq += b.offset.squaredNorm() + b.slack_base.squaredNorm();

  double rho = config_.rho;
  CMatrix w = CMatrix::Zero(users_, antennas_);
  SolveReport report{PrecodingMatrix(w)};

  // infeasibility bookkeeping
  RVector dual_snapshot = stacked_duals() * rho;
  double window_start_residual = std::numeric_limits<double>::infinity();
  double drift_budget = 0.0;
  int suspicious_windows = 0;

  for (int iter = 1; iter <= config_.max_iters; ++iter) {
    // shared-variable update
    CMatrix rhs = CMatrix::Zero(antennas_, users_);
    for (const auto& b : ident_) rhs += (b.z - b.u).transpose();
    for (const auto& b : image_) rhs += b.a.adjoint() * (b.y - b.u - b.offset);
    w = solve_normal(rhs).transpose();

    // copy updates
    double r_sq = 0.0, ax_sq = 0.0, y_sq = 0.0;
    CMatrix dual_move = CMatrix::Zero(antennas_, users_);
    double dual_mag_sq = 0.0;
    for (std::size_t i = 0; i < ident_.size(); ++i) {
      auto& b = ident_[i];
      CMatrix relaxed = alpha * w + (1.0 - alpha) * b.z;
      CMatrix z_new = b.project(relaxed + b.u, rho);
      b.u += relaxed - z_new;
      r_sq += (w - z_new).squaredNorm();
      ax_sq += w.squaredNorm();
      y_sq += z_new.squaredNorm();
      dual_move += (z_new - b.z).transpose();
      dual_mag_sq += b.u.squaredNorm();
      b.z = std::move(z_new);
    }
    for (auto& b : image_) {
      CMatrix ax = b.a * w.transpose();
      CMatrix relaxed = alpha * ax + (1.0 - alpha) * (b.y - b.offset);
      RVector relaxed_s = (1.0 - alpha) * (b.s - b.slack_base);
      CMatrix y_new = relaxed + b.offset + b.u;
      RVector s_new = relaxed_s + b.slack_base + b.us;
      b.project(y_new, s_new);
      b.u += relaxed + b.offset - y_new;
      b.us += relaxed_s + b.slack_base - s_new;
      r_sq += (ax + b.offset - y_new).squaredNorm() + (b.slack_base - s_new).squaredNorm();
      ax_sq += ax.squaredNorm();
      y_sq += y_new.squaredNorm() + s_new.squaredNorm();
      dual_move += b.a.adjoint() * (y_new - b.y);
      dual_mag_sq += (b.a.adjoint() * b.u).squaredNorm();
      b.y = std::move(y_new);
      b.s = std::move(s_new);
    }

    double r_norm = std::sqrt(r_sq);
    double s_norm = rho * dual_move.norm();
    double primal_scale = std::sqrt(std::max({ax_sq, y_sq, offset_norm_sq}));
    // the copies' duals cancel in sum at the optimum, so scale by their magnitudes
    double dual_scale = rho * std::sqrt(dual_mag_sq);
    double eps_pri = std::sqrt(p_dim) * config_.eps_abs + config_.eps_rel * primal_scale;
    double eps_dual = std::sqrt(n_dim) * config_.eps_abs + config_.eps_rel * dual_scale;

    report.iterations = iter;
    report.primal_residual = r_norm;
    report.dual_residual = s_norm;
    report.eps_primal = eps_pri;
    report.eps_dual = eps_dual;

    if (r_norm <= eps_pri && s_norm <= eps_dual) {
      report.status = SolveStatus::Optimal;
      break;
    }

    drift_budget += rho * r_norm;
    if (iter % config_.infeasibility_window == 0) {
      RVector duals = stacked_duals() * rho;
      bool stagnating = r_norm > 100.0 * eps_pri && r_norm >= 0.5 * window_start_residual;
      bool drifting = (duals - dual_snapshot).norm() >= 0.5 * drift_budget;
      suspicious_windows = (stagnating && drifting) ? suspicious_windows + 1 : 0;
      if (suspicious_windows >= 2) {
        report.status = SolveStatus::Infeasible;
        break;
      }
      dual_snapshot = std::move(duals);
      window_start_residual = r_norm;
      drift_budget = 0.0;
    }

    if (config_.adaptive_rho && iter % kRhoUpdateInterval == 0 && iter <= config_.max_iters / 2) {
      double rel_pri = r_norm / std::max(primal_scale, 1e-300);
      double rel_dual = s_norm / std::max(dual_scale, 1e-300);
      if (rel_pri > 0.0 && rel_dual > 0.0) {
        double ratio = std::sqrt(rel_pri / rel_dual);
        if (ratio > kRhoUpdateRatio || ratio < 1.0 / kRhoUpdateRatio) {
          double next = std::clamp(rho * ratio, kRhoMin, kRhoMax);
          rescale_duals(rho / next);
          rho = next;
        }
      }
    }
  }

  report.solution = PrecodingMatrix(ident_[0].z);
  report.objective = problem_.objective_value(ident_[0].z);
  return report;
}

}  // namespace

// ---------------------------------------------------------------------------

ConvexProblem::ConvexProblem(Index users, Index antennas, Objective objective,
                             std::vector<Constraint> constraints)
    : users_(users), antennas_(antennas), objective_(objective), constraints_(std::move(constraints)) {
  require(users_ >= 1 && antennas_ >= 1, "variable needs K >= 1 and M >= 1");
  require(!constraints_.empty(), "at least one constraint is required");
  for (const Constraint& c : constraints_) {
    std::visit(Overloaded{
                   [&](const AffineEquality& e) {
                     require(e.a.rows() >= 1 && e.a.cols() == antennas_, "affine map must be R x M");
                     require(e.b.rows() == e.a.rows() && e.b.cols() == users_,
                             "affine right-hand side must be R x K");
                   },
                   [&](const FrobeniusBall& e) {
                     require(e.a.rows() >= 1 && e.a.cols() == antennas_, "ball map must be R x M");
                     require(e.b.rows() == e.a.rows() && e.b.cols() == users_, "ball center must be R x K");
                     require(e.radius >= 0.0 && std::isfinite(e.radius), "ball radius must be non-negative");
                   },
                   [&](const PerAntennaBall& e) { require(e.cap > 0.0, "per-antenna cap must be positive"); },
                   [&](const HalfSpace& e) {
                     require(users_ == 1, "half-space constraint is single-user");
                     require(e.c.size() == antennas_, "half-space normal must have M entries");
                   },
                   [&](const SocSinr& e) {
                     require(e.h.rows() == users_ && e.h.cols() == antennas_, "SINR channel must be K x M");
                     require(e.gammas.size() == users_, "one SINR target per user");
                     require((e.gammas.array() > 0.0).all(), "SINR targets must be positive");
                     require(e.sigma_nu > 0.0, "noise amplitude must be positive");
                   },
               },
               c);
  }
}

double ConvexProblem::objective_value(const CMatrix& w) const {
  switch (objective_) {
    case Objective::GroupL21:
      return w.colwise().norm().sum();
    case Objective::L1:
      return w.cwiseAbs().sum();
    case Objective::FrobeniusSquared:
      return w.squaredNorm();
  }
  return 0.0;
}

double ConvexProblem::max_violation(const CMatrix& w) const {
  double worst = 0.0;
  for (const Constraint& c : constraints_) {
    double v = std::visit(
        Overloaded{
            [&](const AffineEquality& e) { return (e.a * w.transpose() - e.b).norm(); },
            [&](const FrobeniusBall& e) {
              return std::max(0.0, (e.a * w.transpose() - e.b).norm() - e.radius);
            },
            [&](const PerAntennaBall& e) {
              return std::max(0.0, w.cwiseAbs2().colwise().sum().maxCoeff() - e.cap);
            },
            [&](const HalfSpace& e) { return std::max(0.0, e.t - (e.c * w.transpose())(0, 0).real()); },
            [&](const SocSinr& e) {
              CMatrix g = e.h * w.transpose();
              double out = 0.0;
              for (Index k = 0; k < g.rows(); ++k) {
                double spread = g.row(k).squaredNorm() - std::norm(g(k, k)) + e.sigma_nu * e.sigma_nu;
                out = std::max(out, std::sqrt(e.gammas(k) * spread) - g(k, k).real());
              }
              return out;
            },
        },
        c);
    worst = std::max(worst, v);
  }
  return worst;
}

void SolverConfig::validate() const {
  if (!(rho > 0.0)) throw std::invalid_argument("solver rho must be positive");
  if (!(eps_abs > 0.0) || !(eps_rel > 0.0)) throw std::invalid_argument("solver tolerances must be positive");
  if (max_iters < 1) throw std::invalid_argument("solver max_iters must be at least 1");
  if (!(over_relaxation >= 1.0 && over_relaxation <= 1.8)) {
    throw std::invalid_argument("over-relaxation must lie in [1, 1.8]");
  }
  if (infeasibility_window < 1) throw std::invalid_argument("infeasibility window must be positive");
}

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal:
      return "optimal";
    case SolveStatus::MaxIters:
      return "max_iters";
    case SolveStatus::Infeasible:
      return "infeasible";
  }
  return "unknown";
}

SolveReport solve(const ConvexProblem& problem, const SolverConfig& config) {
  config.validate();
  AdmmSolver solver(problem, config);
  return solver.run();
}

// ---------------------------------------------------------------------------

RVector to_real_composite(const CMatrix& w) {
  const Index users = w.rows();
  RVector x(2 * w.size());
  for (Index m = 0; m < w.cols(); ++m) {
    for (Index k = 0; k < users; ++k) {
      x(2 * users * m + k) = w(k, m).real();
      x(2 * users * m + users + k) = w(k, m).imag();
    }
  }
  return x;
}

CMatrix from_real_composite(const RVector& x, Index users, Index antennas) {
  if (x.size() != 2 * users * antennas) throw std::invalid_argument("real-composite length mismatch");
  CMatrix w(users, antennas);
  for (Index m = 0; m < antennas; ++m) {
    for (Index k = 0; k < users; ++k) {
      w(k, m) = Complex(x(2 * users * m + k), x(2 * users * m + users + k));
    }
  }
  return w;
}

CMatrix group_soft_threshold(const CMatrix& w, double lambda) {
  if (lambda < 0.0) throw std::invalid_argument("threshold must be non-negative");
  CMatrix out = w;
  for (Index m = 0; m < w.cols(); ++m) {
    double norm = w.col(m).norm();
    double scale = norm > lambda ? 1.0 - lambda / norm : 0.0;
    out.col(m) *= scale;
  }
  return out;
}

CMatrix soft_threshold(const CMatrix& w, double lambda) {
  if (lambda < 0.0) throw std::invalid_argument("threshold must be non-negative");
  return w.unaryExpr([lambda](const Complex& v) {
    double mag = std::abs(v);
    return mag > lambda ? v * (1.0 - lambda / mag) : Complex(0.0, 0.0);
  });
}

AffineProjector::AffineProjector(CMatrix a, CMatrix b) : a_(std::move(a)), b_(std::move(b)) {
  if (b_.rows() != a_.rows()) throw std::invalid_argument("affine right-hand side has wrong row count");
  CMatrix gram = a_ * a_.adjoint();
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(gram, Eigen::EigenvaluesOnly);
  double lmax = eig.eigenvalues().maxCoeff();
  if (!(lmax > 0.0) || !(eig.eigenvalues().minCoeff() > kRankRelTol * lmax)) {
    throw std::invalid_argument("affine map is rank deficient");
  }
  gram_.compute(gram);
}

CMatrix AffineProjector::operator()(const CMatrix& w) const {
  if (w.cols() != a_.cols() || w.rows() != b_.cols()) {
    throw std::invalid_argument("affine projection: variable shape mismatch");
  }
  CMatrix wt = w.transpose();
  wt -= a_.adjoint() * gram_.solve(a_ * wt - b_);
  return wt.transpose();
}

CMatrix project_affine(const CMatrix& w, const CMatrix& a, const CMatrix& b) {
  return AffineProjector(a, b)(w);
}

CMatrix project_per_antenna_ball(const CMatrix& w, double cap) {
  if (!(cap > 0.0)) throw std::invalid_argument("per-antenna cap must be positive");
  CMatrix out = w;
  const double radius = std::sqrt(cap);
  for (Index m = 0; m < w.cols(); ++m) {
    double sq = w.col(m).squaredNorm();
    if (sq > cap) out.col(m) *= radius / std::sqrt(sq);
  }
  return out;
}

CMatrix project_half_space(const CMatrix& w, const CRowVector& c, double t) {
  if (w.rows() != 1 || w.cols() != c.size()) throw std::invalid_argument("half-space shape mismatch");
  double value = (c * w.transpose())(0, 0).real();
  double norm_sq = c.squaredNorm();
  if (value >= t || !(norm_sq > 0.0)) return w;
  CMatrix out = w;
  out.row(0) += ((t - value) / norm_sq) * c.conjugate();
  return out;
}

CMatrix project_frobenius_ball(const CMatrix& y, double radius) {
  if (radius < 0.0) throw std::invalid_argument("ball radius must be non-negative");
  double norm = y.norm();
  if (norm <= radius) return y;
  if (radius == 0.0) return CMatrix::Zero(y.rows(), y.cols());
  return y * (radius / norm);
}

std::pair<RVector, double> project_soc(const RVector& x, double t) {
  double norm = x.norm();
  if (norm <= t) return {x, t};
  if (norm <= -t) return {RVector::Zero(x.size()), 0.0};
  double scale = 0.5 * (1.0 + t / norm);
  return {scale * x, scale * norm};
}

std::pair<RVector, double> project_soc(const RVector& x, double t, double aperture) {
  if (!(aperture > 0.0)) throw std::invalid_argument("cone aperture must be positive");
  double norm = x.norm();
  if (norm <= aperture * t) return {x, t};
  if (aperture * norm <= -t) return {RVector::Zero(x.size()), 0.0};
  // onto the boundary ray through (aperture * x / ||x||, 1)
  double beta = (aperture * norm + t) / (1.0 + aperture * aperture);
  return {(beta * aperture / norm) * x, beta};
}

}  // namespace pacons
