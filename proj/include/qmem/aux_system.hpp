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

#include <functional>
#include <optional>
#include <vector>

#include "qmem/coefficients.hpp"
#include "qmem/control.hpp"
#include "qmem/tensor.hpp"

namespace qmem {

struct FG {
  double f = 0.0;  ///< <R, A* z + c>
  Vec g;           ///< (R z^T) * A-array
};

FG eval_fg(const Coefficients& coeffs, const Mat& z);

/// Delta = <R, z> + d.
double delta_of_z(const Coefficients& coeffs, const Mat& z);
/// Delta = <R, z - z0>; agrees with delta_of_z up to rounding.
double delta_of_z_centered(const Coefficients& coeffs, const Mat& z);

/// h(z, U) = f(z) + g(z)^T U, the rate of change of Delta.
double delta_dot(const Coefficients& coeffs, const Mat& z, const Vec& u);

/// Second derivative of Delta: quadratic in U, affine in dU/dt.
double delta_ddot(const Coefficients& coeffs, const Mat& z, const Vec& u,
                  const Vec& u_dot);

/// Sampled solution of z' = (A* + A-array . U) z + c, z(0) = z0.
struct Trajectory {
  std::vector<double> times;
  std::vector<Mat> z;            ///< empty when not recorded
  std::vector<Vec> U;
  std::vector<double> delta;
  std::vector<double> penalty;   ///< running 1/2 int |U|^2_Pi
  std::vector<double> phi;       ///< delta + penalty
  std::vector<double> side;      ///< optional extra running integral
  std::optional<double> blowup_time;

  std::size_t size() const { return times.size(); }
  bool complete() const { return !blowup_time.has_value(); }
};

struct SimulationOptions {
  double tau = 1.0;
  double dt = 5e-4;
  /// Pi in the running penalty; empty means identity.
  Mat penalty_weight;
  bool record_z = true;
  /// On blow-up: throw NumericOverflow, or return the partial trajectory
  /// with blowup_time set.
  bool throw_on_blowup = true;
  /// Extra integrand accumulated on the RK4 grid, e.g. for accounting checks.
  std::function<double(double, const Mat&, const Vec&)> side_integrand;
};

/// Penalty and side integrals are carried as extra RK4 state components so
/// they are integrated at the same order as z.
Trajectory simulate(const Coefficients& coeffs, const ControlSignal& control,
                    const SimulationOptions& options);

/// Moment path via the fundamental matrix: G' = A G, psi' = A psi + I, then
/// Delta = <Sigma, gamma . (mu - mu0) - Q - Q^T> with Q = (G - I) P + psi b mu0^T.
struct MomentPath {
  std::vector<double> times;
  std::vector<double> delta;
  std::vector<Vec> mu;
  std::vector<Mat> second;  ///< P + Q(t) = Re E[X(t) X0^T]
  std::vector<Mat> xi;      ///< Re E[xi xi^T]
};

/// Requires an open-loop control.
MomentPath delta_via_moments(const SystemSpec& spec, const Coefficients& coeffs,
                             const ControlSignal& control, double tau,
                             double dt);

}  // namespace qmem
