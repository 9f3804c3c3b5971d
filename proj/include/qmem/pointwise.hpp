// Copyright 2026 The qmem Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <optional>

#include "qmem/aux_system.hpp"
#include "qmem/coefficients.hpp"

namespace qmem {

/// Symmetric positive definite control penalty Pi, optionally given as
/// Pi = Gamma / (2 eps). The Cholesky factor is computed once.
class PenaltyWeights {
 public:
  static PenaltyWeights from_matrix(const Mat& pi);
  static PenaltyWeights from_shape_scale(const Mat& gamma, double eps);

  const Mat& pi() const { return pi_; }
  Index size() const { return pi_.rows(); }
  const std::optional<Mat>& gamma() const { return gamma_; }
  const std::optional<double>& epsilon() const { return eps_; }

  /// Pi^{-1} v.
  Vec solve(const Vec& v) const { return llt_.solve(v); }
  /// |v|^2_{Pi^{-1}} = v^T Pi^{-1} v.
  double inverse_norm_sq(const Vec& v) const { return v.dot(solve(v)); }
  /// |u|^2_Pi.
  double norm_sq(const Vec& u) const { return u.dot(pi_ * u); }

 private:
  explicit PenaltyWeights(const Mat& pi);

  Mat pi_;
  Eigen::LLT<Mat> llt_;
  std::optional<Mat> gamma_;
  std::optional<double> eps_;
};

/// Throws InvalidArgument unless m is symmetric positive definite.
void require_spd(const Mat& m, const char* name);

/// U = -Pi^{-1} g(z), the unique minimiser of h(z, u) + 1/2 |u|^2_Pi.
Vec pointwise_law(const Coefficients& coeffs, const PenaltyWeights& weights,
                  const Mat& z);

/// h(z, u) + 1/2 |u|^2_Pi.
double pointwise_objective(const Coefficients& coeffs,
                           const PenaltyWeights& weights, const Mat& z,
                           const Vec& u);

ControlSignal pointwise_control(const Coefficients& coeffs,
                                const PenaltyWeights& weights);

struct PointwiseResult {
  Trajectory trajectory;
  double delta_tau = 0.0;
  /// Delta(tau) + 1/2 int |U|^2_Pi.
  double objective = 0.0;
  /// int (f - 1/2 |g|^2_{Pi^{-1}}) dt, accumulated independently.
  double objective_from_rates = 0.0;
  double accounting_rel_error = 0.0;
  /// max over interior samples of |central-difference dDelta/dt - (f - |g|^2_{Pi^{-1}})|.
  double rate_identity_error = 0.0;
};

PointwiseResult simulate_pointwise(const Coefficients& coeffs,
                                   const PenaltyWeights& weights, double tau,
                                   double dt, bool record_z = true);

/// |g(z)|^2 / max(0, f(z)): every Pi = c I with c below it makes the rate at
/// the pointwise law negative. nullopt means unbounded (f(z) <= 0). Throws
/// NoDescentDirection when max |g_k| <= 1e-12.
std::optional<double> small_pi_threshold(const Coefficients& coeffs,
                                         const Mat& z);

}  // namespace qmem
