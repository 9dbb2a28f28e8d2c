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

#ifndef PACONS_MODEL_HPP
#define PACONS_MODEL_HPP

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <variant>
#include <vector>

namespace pacons {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CRowVector = Eigen::RowVectorXcd;
using RVector = Eigen::VectorXd;
using Index = Eigen::Index;

double db_to_linear(double db);

/// Seeded random stream used for every channel draw.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Uniform variates take the top 53 bits of one engine output,
/// u = (x >> 11) * 2^-53. Standard normals come from the Box-Muller transform
/// on two such uniforms, (u1, u2) -> sqrt(-2 ln(1 - u1)) * (cos, sin)(2 pi u2),
/// cos first, sin cached for the next call. None of the implementation-defined
/// standard distributions are used, so a seed replays bit-exactly wherever
/// libm is the same.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  /// Independent stream for trial `trial` of a run seeded with `seed`.
  /// The engine is seeded with std::seed_seq{lo(seed), hi(seed), lo(trial), hi(trial)}.
  static Rng for_trial(std::uint64_t seed, std::uint64_t trial);

  std::uint64_t seed() const { return seed_; }

  double uniform();
  double uniform(double lo, double hi);
  double standard_normal();
  /// CN(0, 1): real and imaginary parts independent N(0, 1/2).
  Complex complex_normal();

 private:
  Rng(std::uint64_t seed, std::seed_seq& seq);

  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

struct LosProvenance {
  std::vector<double> angles;  // radians, one per user
};
struct NlosProvenance {
  std::uint64_t seed;
};
struct ExplicitProvenance {};
using Provenance = std::variant<LosProvenance, NlosProvenance, ExplicitProvenance>;

/// K x M channel, row k holds user k's gains to the M antennas.
class ChannelMatrix {
 public:
  explicit ChannelMatrix(CMatrix entries, Provenance provenance = ExplicitProvenance{});

  const CMatrix& entries() const { return entries_; }
  const Provenance& provenance() const { return provenance_; }
  Index users() const { return entries_.rows(); }
  Index antennas() const { return entries_.cols(); }
  CRowVector row(Index k) const { return entries_.row(k); }

 private:
  CMatrix entries_;
  Provenance provenance_;
};

/// K x M precoder, row k holds user k's weights across antennas.
class PrecodingMatrix {
 public:
  explicit PrecodingMatrix(CMatrix entries);

  const CMatrix& entries() const { return entries_; }
  Index users() const { return entries_.rows(); }
  Index antennas() const { return entries_.cols(); }

 private:
  CMatrix entries_;
};

/// Per-user linear SINR targets, noise amplitude and optional per-antenna cap.
class TargetSpec {
 public:
  TargetSpec(RVector gammas, double sigma_nu, std::optional<double> p_max_cap = std::nullopt);

  static TargetSpec uniform(Index users, double gamma, double sigma_nu,
                            std::optional<double> p_max_cap = std::nullopt);

  const RVector& gammas() const { return gammas_; }
  double sigma_nu() const { return sigma_nu_; }
  const std::optional<double>& p_max_cap() const { return p_max_cap_; }
  Index users() const { return gammas_.size(); }

  /// D_gamma^{1/2} sigma_nu as a dense K x K matrix.
  CMatrix scaled_targets() const;

 private:
  RVector gammas_;
  double sigma_nu_;
  std::optional<double> p_max_cap_;
};

/// Half-wavelength ULA line-of-sight channel, [H]_{k,m} = exp(-j pi cos(theta_k) m).
/// Angles must lie in the open interval (0, pi).
ChannelMatrix gen_los(Index antennas, const std::vector<double>& angles);

/// I.i.d. CN(0, 1) entries drawn row by row, real part before imaginary part.
ChannelMatrix gen_nlos(Index antennas, Index users, Rng& rng);

/// SINR_k = |h_k w_k^T|^2 / (sum_{k' != k} |h_k w_{k'}^T|^2 + sigma^2).
RVector evaluate_sinr(const ChannelMatrix& channel, const PrecodingMatrix& precoder, double sigma_nu);

}  // namespace pacons

#endif  // PACONS_MODEL_HPP
