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

// Finite-horizon synthesis through the first-order expansion
// Psi_eps = Psi_0 + eps Psi_1 of the Bellman function for the penalty
// Pi_eps = Gamma / (2 eps).
//
// Psi_0 is the exact solution of the uncontrolled transport equation:
//   Psi_0(t, v) = <R, e^{(tau-t)A*} v + int_0^{tau-t} e^{sA*} ds c> + d.
// Psi_1 is a quadratic form in w = vec(v) (column-major),
//   Psi_1(t, v) = w^T S(t) w + s(t)^T w + s0(t),
// obtained by substituting the ansatz into the first-order equation. With
// Ab = I_{n+1} (x) A*, cb = vec(c) and Q(t) = Phi(t) Gamma^{-1} Phi(t)^T,
// Phi(t) = [vec(A_k^T e^{(tau-t)A*^T} R)]_k, the coefficients satisfy
//   S'  = Q - S Ab - Ab^T S,
//   s'  = -2 S cb - Ab^T s,
//   s0' = -s^T cb,
// backwards from zero terminal values.

#include <optional>
#include <vector>

#include "qmem/aux_system.hpp"
#include "qmem/coefficients.hpp"
#include "qmem/kernels.hpp"

namespace qmem {

/// Knot values of (S, s, s0) on a uniform grid over [0, tau]. Between knots
/// the coefficients are cubic Hermite interpolants built from the ODE
/// right-hand sides, so evaluation off the grid keeps fourth-order accuracy.
struct FirstOrderTerm {
  double tau = 0.0;
  double step = 0.0;
  Index n = 0;                  ///< variables; w has n (n + 1) entries
  std::vector<double> times;
  std::vector<Mat> S;           ///< symmetric N x N
  std::vector<Vec> s;
  std::vector<double> s0;
  std::vector<Mat> Phi;         ///< N x r, for Q(t_i) w products
  std::vector<Vec> s_dot;
  std::vector<double> s0_dot;
};

struct ValueAndGradient {
  double value = 0.0;
  Mat gradient;  ///< n x (n + 1)
};

class ValueExpansion {
 public:
  ValueExpansion(const Coefficients& coeffs, const Mat& gamma, double tau);

  double tau() const { return tau_; }
  const Mat& gamma() const { return gamma_; }
  Vec gamma_solve(const Vec& v) const { return gamma_llt_.solve(v); }

  bool has_first_order() const { return first_.has_value(); }
  void set_first_order(FirstOrderTerm term);
  const FirstOrderTerm& first_order() const;

  ValueAndGradient psi0(double t, const Mat& v) const;
  /// Throws StateError before set_first_order().
  ValueAndGradient psi1(double t, const Mat& v) const;

  /// d/dt Psi_0 from the closed form.
  double psi0_time_derivative(double t, const Mat& v) const;
  /// d/dt Psi_1 from the coefficient ODEs at the interpolated state.
  double psi1_time_derivative(double t, const Mat& v) const;

  /// Source term ||(e^{(tau-t)A*^T} R v^T) * A-array||^2_{Gamma^{-1}}.
  double source(double t, const Mat& v) const;

 private:
  struct Interpolated {
    Vec s_w;  ///< S(t) w
    Vec s;
    double s0 = 0.0;
  };
  Interpolated interpolate(double t, const Vec& w) const;
  void check_time(double t) const;

  Mat a_star_;
  Mat c_;
  Mat r_;
  double d_ = 0.0;
  RealArray3 sections_;
  Mat gamma_;
  Eigen::LLT<Mat> gamma_llt_;
  double tau_ = 0.0;
  std::optional<FirstOrderTerm> first_;
};

ValueAndGradient psi0_eval(const ValueExpansion& expansion, double t,
                           const Mat& v);

/// -2 Gamma^{-1} ((grad Psi_0 v^T) * A-array).
Vec u0_eval(const ValueExpansion& expansion, const Coefficients& coeffs,
            double t, const Mat& v);

/// Default cap on stored coefficient doubles (N^2 per knot).
inline constexpr std::size_t kMaxFirstOrderDoubles = std::size_t{1} << 25;

/// Backward RK4 for (S, s, s0); S is re-symmetrised after every step.
/// Throws CapacityError when the knot storage would exceed max_doubles.
FirstOrderTerm solve_psi1(const Coefficients& coeffs, const Mat& gamma,
                          double tau, double dt,
                          kernels::Exec exec = kernels::kDefaultExec,
                          std::size_t max_doubles = kMaxFirstOrderDoubles);

/// -2 Gamma^{-1} ((grad Psi_1 v^T) * A-array).
Vec u1_eval(const ValueExpansion& expansion, const Coefficients& coeffs,
            double t, const Mat& v);

/// eps u0 + eps^2 u1 = -Pi_eps^{-1} (((grad Psi_0 + eps grad Psi_1) v^T) * A-array).
Vec first_order_control(const ValueExpansion& expansion,
                        const Coefficients& coeffs, double eps, double t,
                        const Mat& v);

struct HjbResidual {
  /// |d_t Psi + <grad Psi, A* v + c> - eps |(grad Psi v^T) * A|^2_{Gamma^{-1}}|
  /// for Psi = Psi_0 + eps Psi_1, with d_t from a fourth-order central
  /// difference of step 1e-4 tau.
  double value = 0.0;
  /// Same with d_t taken from the closed form / coefficient ODEs.
  double value_exact_dt = 0.0;
  /// |finite-difference d_t - exact d_t|.
  double dt_gap = 0.0;
};

inline constexpr double kResidualStepFraction = 1e-4;

/// Requires 2 h <= t <= tau - 2 h with h = 1e-4 tau.
HjbResidual hjb_residual(const ValueExpansion& expansion,
                         const Coefficients& coeffs, double t, const Mat& v,
                         double eps);

struct HjbRun {
  Trajectory trajectory;
  double phi = 0.0;        ///< Delta(tau) + 1/2 int |U|^2_{Pi_eps}
  double delta_tau = 0.0;
  double penalty = 0.0;
  double psi0_at_start = 0.0;
  double psi1_at_start = 0.0;
  double reference = 0.0;  ///< (Psi_0 + eps Psi_1)(0, z0)
};

/// Closed loop z' = (A* + A . U) z + c with U = eps u0 + eps^2 u1.
HjbRun simulate_hjb(const ValueExpansion& expansion, const Coefficients& coeffs,
                    double eps, double tau, double dt, bool record_z = true);

/// max_t |H(t) - H(0)| for H = <grad Psi, A* z + c> - 1/2 |U|^2_{Pi_eps}
/// along a recorded trajectory; eps = 0 uses Psi_0 and U = 0.
double pontryagin_diagnostic(const ValueExpansion& expansion,
                             const Coefficients& coeffs, double eps,
                             const Trajectory& trajectory);

}  // namespace qmem
