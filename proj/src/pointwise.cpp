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

#include "qmem/pointwise.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qmem/error.hpp"

namespace qmem {

void require_spd(const Mat& m, const char* name) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw InvalidArgument(std::string(name) + " must be square and non-empty");
  }
  if (!m.allFinite()) throw InvalidArgument(std::string(name) + " is not finite");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw InvalidArgument(std::string(name) + " is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Mat> eig(m, Eigen::EigenvaluesOnly);
  if (!(eig.eigenvalues().minCoeff() > 0.0)) {
    throw InvalidArgument(std::string(name) + " is not positive definite");
  }
}

PenaltyWeights::PenaltyWeights(const Mat& pi) : pi_(pi) {
  require_spd(pi_, "penalty matrix Pi");
  llt_.compute(pi_);
  if (llt_.info() != Eigen::Success) {
    throw InvalidArgument("penalty matrix Pi is singular");
  }
}

PenaltyWeights PenaltyWeights::from_matrix(const Mat& pi) {
  return PenaltyWeights(pi);
}

PenaltyWeights PenaltyWeights::from_shape_scale(const Mat& gamma, double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw InvalidArgument("epsilon must be positive and finite");
  }
  require_spd(gamma, "Gamma");
  PenaltyWeights w(gamma / (2.0 * eps));
  w.gamma_ = gamma;
  w.eps_ = eps;
  return w;
}

Vec pointwise_law(const Coefficients& coeffs, const PenaltyWeights& weights,
                  const Mat& z) {
  const Vec g = eval_fg(coeffs, z).g;
  if (g.size() != weights.size()) {
    throw InvalidArgument("pointwise_law: penalty size != control size");
  }
  return -weights.solve(g);
}

double pointwise_objective(const Coefficients& coeffs,
                           const PenaltyWeights& weights, const Mat& z,
                           const Vec& u) {
  return delta_dot(coeffs, z, u) + 0.5 * weights.norm_sq(u);
}

ControlSignal pointwise_control(const Coefficients& coeffs,
                                const PenaltyWeights& weights) {
  return ControlSignal::state_feedback(
      coeffs.r(), [&coeffs, &weights](double, const Mat& z) {
        return pointwise_law(coeffs, weights, z);
      });
}

PointwiseResult simulate_pointwise(const Coefficients& coeffs,
                                   const PenaltyWeights& weights, double tau,
                                   double dt, bool record_z) {
  if (weights.size() != coeffs.r()) {
    throw InvalidArgument("simulate_pointwise: penalty size != control size");
  }
  SimulationOptions options;
  options.tau = tau;
  options.dt = dt;
  options.penalty_weight = weights.pi();
  options.record_z = true;
  options.side_integrand = [&](double, const Mat& z, const Vec&) {
    const FG fg = eval_fg(coeffs, z);
    return fg.f - 0.5 * weights.inverse_norm_sq(fg.g);
  };

  PointwiseResult out;
  out.trajectory = simulate(coeffs, pointwise_control(coeffs, weights), options);
  const Trajectory& traj = out.trajectory;
  out.delta_tau = traj.delta.back();
  out.objective = traj.phi.back();
  out.objective_from_rates = traj.side.back();
  out.accounting_rel_error = std::abs(out.objective - out.objective_from_rates) /
                             std::max({std::abs(out.objective),
                                       std::abs(out.objective_from_rates), 1e-12});

  for (std::size_t i = 1; i + 1 < traj.size(); ++i) {
    const double h = traj.times[i + 1] - traj.times[i - 1];
    const double rate = (traj.delta[i + 1] - traj.delta[i - 1]) / h;
    const FG fg = eval_fg(coeffs, traj.z[i]);
    const double predicted = fg.f - weights.inverse_norm_sq(fg.g);
    out.rate_identity_error =
        std::max(out.rate_identity_error, std::abs(rate - predicted));
  }
  if (!record_z) out.trajectory.z.clear();
  return out;
}

std::optional<double> small_pi_threshold(const Coefficients& coeffs,
                                         const Mat& z) {
  const FG fg = eval_fg(coeffs, z);
  if (fg.g.cwiseAbs().maxCoeff() <= 1e-12) {
    throw NoDescentDirection("g(z) = 0: the control cannot change the rate");
  }
  if (fg.f <= 0.0) return std::nullopt;
  return fg.g.squaredNorm() / fg.f;
}

}  // namespace qmem
