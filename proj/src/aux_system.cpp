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

#include "qmem/aux_system.hpp"

#include <cmath>

#include "qmem/error.hpp"
#include "qmem/linalg.hpp"

namespace qmem {

namespace {

struct AugmentedState {
  Mat z;
  double penalty = 0.0;
  double side = 0.0;
};

AugmentedState operator+(const AugmentedState& a, const AugmentedState& b) {
  return {a.z + b.z, a.penalty + b.penalty, a.side + b.side};
}

AugmentedState operator*(double s, const AugmentedState& a) {
  return {s * a.z, s * a.penalty, s * a.side};
}

bool all_finite(const AugmentedState& s) {
  return s.z.allFinite() && std::isfinite(s.penalty) && std::isfinite(s.side);
}

void check_horizon(double tau, double dt) {
  if (!(tau > 0.0) || !(dt > 0.0) || !std::isfinite(tau) || !std::isfinite(dt)) {
    throw InvalidArgument("horizon and step must be positive and finite");
  }
}

}  // namespace

FG eval_fg(const Coefficients& coeffs, const Mat& z) {
  FG out;
  out.f = frobenius(coeffs.R, coeffs.A_star * z + coeffs.c);
  out.g = star(coeffs.R * z.transpose(), coeffs.A_sections);
  return out;
}

double delta_of_z(const Coefficients& coeffs, const Mat& z) {
  return frobenius(coeffs.R, z) + coeffs.d;
}

double delta_of_z_centered(const Coefficients& coeffs, const Mat& z) {
  return frobenius(coeffs.R, z - coeffs.z0);
}

double delta_dot(const Coefficients& coeffs, const Mat& z, const Vec& u) {
  const FG fg = eval_fg(coeffs, z);
  if (u.size() != fg.g.size()) throw InvalidArgument("delta_dot: control size");
  return fg.f + fg.g.dot(u);
}

double delta_ddot(const Coefficients& coeffs, const Mat& z, const Vec& u,
                  const Vec& u_dot) {
  const Index r = coeffs.r();
  if (u.size() != r || u_dot.size() != r) {
    throw InvalidArgument("delta_ddot: control size");
  }
  const Mat& a = coeffs.A_star;
  const Mat& rr = coeffs.R;
  const Mat drift = a * z + coeffs.c;
  const Mat a_tilde = dot(coeffs.A_sections, u);

  const double uncontrolled = frobenius(rr, a * drift);
  const Vec linear = star(a.transpose() * rr * z.transpose() +
                              rr * drift.transpose(),
                          coeffs.A_sections);
  const Vec quadratic =
      star(rr * z.transpose() * a_tilde.transpose(), coeffs.A_sections);
  const Vec g = star(rr * z.transpose(), coeffs.A_sections);
  return uncontrolled + linear.dot(u) + quadratic.dot(u) + g.dot(u_dot);
}

Trajectory simulate(const Coefficients& coeffs, const ControlSignal& control,
                    const SimulationOptions& options) {
  check_horizon(options.tau, options.dt);
  const Index r = coeffs.r();
  if (control.size() != r) throw InvalidArgument("simulate: control size != r");
  if (!control.covers(0.0, options.tau)) {
    throw InvalidArgument("simulate: sampled control does not cover [0, tau]");
  }
  const Mat pi = options.penalty_weight.size() == 0 ? Mat(Mat::Identity(r, r))
                                                    : options.penalty_weight;
  if (pi.rows() != r || pi.cols() != r) {
    throw InvalidArgument("simulate: penalty weight must be r x r");
  }

  auto rhs = [&](double t, const AugmentedState& s) {
    const Vec u = control(t, s.z);
    AugmentedState ds;
    ds.z = assemble_A(coeffs, u) * s.z + coeffs.c;
    ds.penalty = 0.5 * u.dot(pi * u);
    ds.side = options.side_integrand ? options.side_integrand(t, s.z, u) : 0.0;
    return ds;
  };

  Trajectory traj;
  const std::size_t samples =
      static_cast<std::size_t>(grid_steps(0.0, options.tau, options.dt) + 1);
  traj.times.reserve(samples);
  auto observe = [&](int, double t, const AugmentedState& s) {
    traj.times.push_back(t);
    if (options.record_z) traj.z.push_back(s.z);
    traj.U.push_back(control(t, s.z));
    // Centered form: exactly zero at z = z0.
    const double delta = delta_of_z_centered(coeffs, s.z);
    traj.delta.push_back(delta);
    traj.penalty.push_back(s.penalty);
    traj.phi.push_back(delta + s.penalty);
    if (options.side_integrand) traj.side.push_back(s.side);
  };

  AugmentedState start{coeffs.z0, 0.0, 0.0};
  try {
    rk4_integrate(rhs, start, 0.0, options.tau, options.dt, observe);
  } catch (const NumericOverflow& e) {
    if (options.throw_on_blowup) throw;
    traj.blowup_time = e.time();
  }
  return traj;
}

MomentPath delta_via_moments(const SystemSpec& spec, const Coefficients& coeffs,
                             const ControlSignal& control, double tau,
                             double dt) {
  check_horizon(tau, dt);
  if (!control.open_loop()) {
    throw InvalidArgument("delta_via_moments: control must be open-loop");
  }
  if (!control.covers(0.0, tau)) {
    throw InvalidArgument("delta_via_moments: control does not cover [0, tau]");
  }
  const Index n = spec.n();
  const Vec& mu0 = spec.mu0;
  const Mat p = spec.sc.alpha + dot(spec.sc.gamma, mu0);
  const Mat sigma_matrix = spec.F.transpose() * spec.F;
  const Vec& b = coeffs.b;

  // Y = [G psi], Y' = A(t) Y + [0 I].
  Mat forcing = Mat::Zero(n, 2 * n);
  forcing.rightCols(n) = Mat::Identity(n, n);
  auto rhs = [&](double t, const Mat& y) -> Mat {
    return assemble_A(coeffs, control.at(t)) * y + forcing;
  };

  MomentPath path;
  auto observe = [&](int, double t, const Mat& y) {
    const Mat g = y.leftCols(n);
    const Mat psi = y.rightCols(n);
    const Vec psi_b = psi * b;
    const Mat q = (g - Mat::Identity(n, n)) * p + psi_b * mu0.transpose();
    const Vec mu = g * mu0 + psi_b;
    const Mat xi = dot(spec.sc.gamma, Vec(mu - mu0)) - q - q.transpose();
    path.times.push_back(t);
    path.mu.push_back(mu);
    path.second.push_back(p + q);
    path.xi.push_back(xi);
    path.delta.push_back(frobenius(sigma_matrix, xi));
  };
  Mat y0 = Mat::Zero(n, 2 * n);
  y0.leftCols(n) = Mat::Identity(n, n);
  rk4_integrate(rhs, y0, 0.0, tau, dt, observe);
  return path;
}

}  // namespace qmem
