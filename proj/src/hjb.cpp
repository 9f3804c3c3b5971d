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

#include "qmem/hjb.hpp"

#include <cmath>
#include <string>

#include "qmem/error.hpp"
#include "qmem/linalg.hpp"
#include "qmem/pointwise.hpp"

namespace qmem {

namespace {

struct CoefficientState {
  Mat S;
  Vec s;
  double s0 = 0.0;
};

CoefficientState operator+(const CoefficientState& a, const CoefficientState& b) {
  return {a.S + b.S, a.s + b.s, a.s0 + b.s0};
}

CoefficientState operator*(double k, const CoefficientState& a) {
  return {k * a.S, k * a.s, k * a.s0};
}

bool all_finite(const CoefficientState& x) {
  return x.S.allFinite() && x.s.allFinite() && std::isfinite(x.s0);
}

// vec(a V) for w = vec(V), V of shape n x (n + 1): the action of I (x) a.
Vec block_apply(const Mat& a, const Vec& w) {
  const Index n = a.rows();
  const Eigen::Map<const Mat> v(w.data(), n, w.size() / n);
  const Mat out = a * v;
  return Eigen::Map<const Vec>(out.data(), out.size());
}

Mat unvec(const Vec& w, Index n) {
  return Eigen::Map<const Mat>(w.data(), n, w.size() / n);
}

// Phi(t) = [vec(A_k^T e^{(tau-t)A*^T} R)]_k.
Mat phi_matrix(const Mat& a_star, const RealArray3& sections, const Mat& r,
               double horizon_left) {
  const Mat lambda_r = expm(Mat(horizon_left * a_star)).transpose() * r;
  Mat phi(lambda_r.size(), sections.sections());
  for (Index k = 0; k < sections.sections(); ++k) {
    const Mat term = sections.section(k).transpose() * lambda_r;
    phi.col(k) = Eigen::Map<const Vec>(term.data(), term.size());
  }
  return phi;
}

void require_gamma(const Mat& gamma, Index r) {
  if (gamma.rows() != r || gamma.cols() != r) {
    throw InvalidArgument("Gamma must be r x r");
  }
  require_spd(gamma, "Gamma");
}

}  // namespace

ValueExpansion::ValueExpansion(const Coefficients& coeffs, const Mat& gamma,
                               double tau)
    : a_star_(coeffs.A_star),
      c_(coeffs.c),
      r_(coeffs.R),
      d_(coeffs.d),
      sections_(coeffs.A_sections),
      gamma_(gamma),
      tau_(tau) {
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw InvalidArgument("ValueExpansion: tau must be positive");
  }
  require_gamma(gamma, coeffs.r());
  gamma_llt_.compute(gamma_);
}

void ValueExpansion::set_first_order(FirstOrderTerm term) {
  if (std::abs(term.tau - tau_) > 1e-12 * tau_ || term.n != a_star_.rows()) {
    throw InvalidArgument("first-order term does not match the expansion");
  }
  first_ = std::move(term);
}

const FirstOrderTerm& ValueExpansion::first_order() const {
  if (!first_) throw StateError("first-order term has not been solved");
  return *first_;
}

void ValueExpansion::check_time(double t) const {
  if (!(t >= 0.0 && t <= tau_)) {
    throw InvalidArgument("time " + std::to_string(t) + " is outside [0, tau]");
  }
}

ValueAndGradient ValueExpansion::psi0(double t, const Mat& v) const {
  check_time(t);
  const ExpmIntegral e = expm_and_integral(a_star_, tau_ - t);
  ValueAndGradient out;
  out.value = frobenius(r_, e.exp * v + e.integral * c_) + d_;
  out.gradient = e.exp.transpose() * r_;
  return out;
}

double ValueExpansion::psi0_time_derivative(double t, const Mat& v) const {
  check_time(t);
  const Mat e = expm(Mat((tau_ - t) * a_star_));
  return -frobenius(r_, e * (a_star_ * v + c_));
}

double ValueExpansion::source(double t, const Mat& v) const {
  check_time(t);
  const Mat lambda = expm(Mat((tau_ - t) * a_star_)).transpose();
  const Vec a = star(lambda * r_ * v.transpose(), sections_);
  return a.dot(gamma_llt_.solve(a));
}

ValueExpansion::Interpolated ValueExpansion::interpolate(double t,
                                                         const Vec& w) const {
  const FirstOrderTerm& term = first_order();
  check_time(t);
  const Index knots = static_cast<Index>(term.times.size());
  Index i = static_cast<Index>(std::floor(t / term.step));
  if (i > knots - 2) i = knots - 2;
  if (i < 0) i = 0;
  const double h = term.step;
  double x = (t - term.times[static_cast<std::size_t>(i)]) / h;
  if (t >= term.times[static_cast<std::size_t>(i) + 1]) x = 1.0;

  const double h00 = (2.0 * x - 3.0) * x * x + 1.0;
  const double h10 = ((x - 2.0) * x + 1.0) * x;
  const double h01 = (3.0 - 2.0 * x) * x * x;
  const double h11 = (x - 1.0) * x * x;

  const Vec aw = block_apply(a_star_, w);
  auto knot = [&](Index k, Vec& s_w, Vec& s_w_dot) {
    const auto ku = static_cast<std::size_t>(k);
    s_w = term.S[ku] * w;
    const Vec phi_w = term.Phi[ku].transpose() * w;
    s_w_dot = term.Phi[ku] * gamma_llt_.solve(phi_w) - term.S[ku] * aw -
              block_apply(a_star_.transpose(), s_w);
  };
  Vec sw0, dsw0, sw1, dsw1;
  knot(i, sw0, dsw0);
  knot(i + 1, sw1, dsw1);
  const auto i0 = static_cast<std::size_t>(i);
  const auto i1 = i0 + 1;

  Interpolated out;
  out.s_w = h00 * sw0 + (h10 * h) * dsw0 + h01 * sw1 + (h11 * h) * dsw1;
  out.s = h00 * term.s[i0] + (h10 * h) * term.s_dot[i0] + h01 * term.s[i1] +
          (h11 * h) * term.s_dot[i1];
  out.s0 = h00 * term.s0[i0] + (h10 * h) * term.s0_dot[i0] +
           h01 * term.s0[i1] + (h11 * h) * term.s0_dot[i1];
  return out;
}

ValueAndGradient ValueExpansion::psi1(double t, const Mat& v) const {
  const Vec w = col(v);
  const Interpolated ip = interpolate(t, w);
  ValueAndGradient out;
  out.value = w.dot(ip.s_w) + ip.s.dot(w) + ip.s0;
  out.gradient = unvec(Vec(2.0 * ip.s_w + ip.s), v.rows());
  return out;
}

double ValueExpansion::psi1_time_derivative(double t, const Mat& v) const {
  const Vec w = col(v);
  const Interpolated ip = interpolate(t, w);
  const Vec drift = block_apply(a_star_, w) + col(c_);
  return source(t, v) - 2.0 * ip.s_w.dot(drift) - ip.s.dot(drift);
}

ValueAndGradient psi0_eval(const ValueExpansion& expansion, double t,
                           const Mat& v) {
  return expansion.psi0(t, v);
}

Vec u0_eval(const ValueExpansion& expansion, const Coefficients& coeffs,
            double t, const Mat& v) {
  const Mat grad = expansion.psi0(t, v).gradient;
  return -2.0 * expansion.gamma_solve(star(grad * v.transpose(), coeffs.A_sections));
}

Vec u1_eval(const ValueExpansion& expansion, const Coefficients& coeffs,
            double t, const Mat& v) {
  const Mat grad = expansion.psi1(t, v).gradient;
  return -2.0 * expansion.gamma_solve(star(grad * v.transpose(), coeffs.A_sections));
}

Vec first_order_control(const ValueExpansion& expansion,
                        const Coefficients& coeffs, double eps, double t,
                        const Mat& v) {
  Mat grad = expansion.psi0(t, v).gradient;
  if (eps != 0.0) grad += eps * expansion.psi1(t, v).gradient;
  return -2.0 * eps *
         expansion.gamma_solve(star(grad * v.transpose(), coeffs.A_sections));
}

FirstOrderTerm solve_psi1(const Coefficients& coeffs, const Mat& gamma,
                          double tau, double dt, kernels::Exec exec,
                          std::size_t max_doubles) {
  if (!(tau > 0.0) || !(dt > 0.0)) {
    throw InvalidArgument("solve_psi1: tau and dt must be positive");
  }
  require_gamma(gamma, coeffs.r());
  const Index n = coeffs.n();
  const Index size = n * (n + 1);
  const int steps = grid_steps(0.0, tau, dt);
  const double knot_doubles = static_cast<double>(size) * static_cast<double>(size) *
                              static_cast<double>(steps + 1);
  if (knot_doubles > static_cast<double>(max_doubles)) {
    throw CapacityError("solve_psi1: storing " + std::to_string(steps + 1) +
                        " knots of a " + std::to_string(size) + " x " +
                        std::to_string(size) +
                        " form exceeds the storage cap; use a larger step");
  }
  const double h = tau / steps;
  const Eigen::LLT<Mat> gamma_llt(gamma);
  const Mat& a_star = coeffs.A_star;
  const Vec cb = col(coeffs.c);

  auto phi_at = [&](double t) {
    return phi_matrix(a_star, coeffs.A_sections, coeffs.R, tau - t);
  };
  // k2/k3 share the midpoint and k4 of one step is k1 of the next.
  double cached_time = std::nan("");
  Mat cached_q;
  auto q_at = [&](double t) -> const Mat& {
    if (t != cached_time) {
      const Mat phi = phi_at(t);
      cached_q = phi * gamma_llt.solve(phi.transpose());
      cached_time = t;
    }
    return cached_q;
  };

  auto rhs = [&](double t, const CoefficientState& x) {
    CoefficientState dx;
    kernels::lyapunov_rhs(x.S, a_star, q_at(t), dx.S, exec);
    dx.s = -2.0 * (x.S * cb) - block_apply(a_star.transpose(), x.s);
    dx.s0 = -x.s.dot(cb);
    return dx;
  };

  FirstOrderTerm term;
  term.tau = tau;
  term.step = h;
  term.n = n;
  const auto knots = static_cast<std::size_t>(steps + 1);
  term.times.resize(knots);
  term.S.resize(knots);
  term.s.resize(knots);
  term.s0.resize(knots);
  term.Phi.resize(knots);
  term.s_dot.resize(knots);
  term.s0_dot.resize(knots);

  auto store = [&](int i, const CoefficientState& x) {
    const auto k = static_cast<std::size_t>(i);
    term.times[k] = (i == steps) ? tau : i * h;
    term.S[k] = x.S;
    term.s[k] = x.s;
    term.s0[k] = x.s0;
    term.Phi[k] = phi_at(term.times[k]);
    term.s_dot[k] = -2.0 * (x.S * cb) - block_apply(a_star.transpose(), x.s);
    term.s0_dot[k] = -x.s.dot(cb);
  };

  CoefficientState x{Mat::Zero(size, size), Vec::Zero(size), 0.0};
  store(steps, x);
  for (int i = steps; i > 0; --i) {
    const double t = (i == steps) ? tau : i * h;
    x = rk4_step(rhs, t, x, -h);
    x.S = 0.5 * (x.S + x.S.transpose()).eval();
    if (!all_finite(x)) {
      throw NumericOverflow("solve_psi1: non-finite coefficients at t = " +
                                std::to_string((i - 1) * h),
                            (i - 1) * h);
    }
    store(i - 1, x);
  }
  return term;
}

HjbResidual hjb_residual(const ValueExpansion& expansion,
                         const Coefficients& coeffs, double t, const Mat& v,
                         double eps) {
  const double tau = expansion.tau();
  const double h = kResidualStepFraction * tau;
  if (t - 2.0 * h < 0.0 || t + 2.0 * h > tau) {
    throw InvalidArgument("hjb_residual: t is too close to the boundary for the "
                          "finite-difference step");
  }
  const bool first = eps != 0.0;
  auto value = [&](double s) {
    double out = expansion.psi0(s, v).value;
    if (first) out += eps * expansion.psi1(s, v).value;
    return out;
  };
  const double dt_fd = (-value(t + 2.0 * h) + 8.0 * value(t + h) -
                        8.0 * value(t - h) + value(t - 2.0 * h)) /
                       (12.0 * h);
  double dt_exact = expansion.psi0_time_derivative(t, v);
  Mat grad = expansion.psi0(t, v).gradient;
  if (first) {
    dt_exact += eps * expansion.psi1_time_derivative(t, v);
    grad += eps * expansion.psi1(t, v).gradient;
  }
  const double transport = frobenius(grad, coeffs.A_star * v + coeffs.c);
  const Vec a = star(grad * v.transpose(), coeffs.A_sections);
  const double nonlinear = eps * a.dot(expansion.gamma_solve(a));

  HjbResidual out;
  out.value = std::abs(dt_fd + transport - nonlinear);
  out.value_exact_dt = std::abs(dt_exact + transport - nonlinear);
  out.dt_gap = std::abs(dt_fd - dt_exact);
  return out;
}

HjbRun simulate_hjb(const ValueExpansion& expansion, const Coefficients& coeffs,
                    double eps, double tau, double dt, bool record_z) {
  if (!(eps > 0.0)) throw InvalidArgument("simulate_hjb: eps must be positive");
  if (std::abs(tau - expansion.tau()) > 1e-12 * expansion.tau()) {
    throw InvalidArgument("simulate_hjb: horizon differs from the expansion's");
  }
  const FirstOrderTerm& first = expansion.first_order();
  (void)first;
  const Index r = coeffs.r();

  SimulationOptions options;
  options.tau = tau;
  options.dt = dt;
  options.penalty_weight = expansion.gamma() / (2.0 * eps);
  options.record_z = record_z;
  const auto law = ControlSignal::state_feedback(
      r, [&](double t, const Mat& z) {
        return first_order_control(expansion, coeffs, eps, std::min(t, tau), z);
      });

  HjbRun run;
  run.trajectory = simulate(coeffs, law, options);
  run.delta_tau = run.trajectory.delta.back();
  run.penalty = run.trajectory.penalty.back();
  run.phi = run.trajectory.phi.back();
  run.psi0_at_start = expansion.psi0(0.0, coeffs.z0).value;
  run.psi1_at_start = expansion.psi1(0.0, coeffs.z0).value;
  run.reference = run.psi0_at_start + eps * run.psi1_at_start;
  return run;
}

double pontryagin_diagnostic(const ValueExpansion& expansion,
                             const Coefficients& coeffs, double eps,
                             const Trajectory& trajectory) {
  if (trajectory.z.size() != trajectory.times.size() || trajectory.z.empty()) {
    throw InvalidArgument("pontryagin_diagnostic: trajectory has no z samples");
  }
  const double tau = expansion.tau();
  const Mat pi = eps > 0.0 ? Mat(expansion.gamma() / (2.0 * eps)) : Mat();
  auto hamiltonian = [&](double t, const Mat& z) {
    t = std::min(t, tau);
    Mat grad = expansion.psi0(t, z).gradient;
    if (eps > 0.0) grad += eps * expansion.psi1(t, z).gradient;
    double value = frobenius(grad, coeffs.A_star * z + coeffs.c);
    if (eps > 0.0) {
      const Vec u = first_order_control(expansion, coeffs, eps, t, z);
      value -= 0.5 * u.dot(pi * u);
    }
    return value;
  };
  const double h0 = hamiltonian(trajectory.times.front(), trajectory.z.front());
  double drift = 0.0;
  for (std::size_t i = 1; i < trajectory.size(); ++i) {
    drift = std::max(drift,
                     std::abs(hamiltonian(trajectory.times[i], trajectory.z[i]) - h0));
  }
  return drift;
}

}  // namespace qmem
