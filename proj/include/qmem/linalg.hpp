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

#include <cmath>
#include <functional>
#include <string>

#include "qmem/error.hpp"
#include "qmem/tensor.hpp"

namespace qmem {

/// Matrix exponential by scaling and squaring with a [6/6] Pade approximant.
Mat expm(const Mat& a);
CMat expm(const CMat& a);

struct ExpmIntegral {
  Mat exp;       ///< e^{T A}
  Mat integral;  ///< int_0^T e^{s A} ds
};

/// Both factors from one exponential of T [[A, I], [0, 0]]; A may be singular.
ExpmIntegral expm_and_integral(const Mat& a, double duration);

/// Number of uniform steps used to cover [t0, t1] with step at most dt.
int grid_steps(double t0, double t1, double dt);

inline bool all_finite(const Mat& m) { return m.allFinite(); }
inline bool all_finite(const CMat& m) { return m.allFinite(); }

/// One classical RK4 step of size h (negative h steps backwards).
template <typename State, typename Rhs>
State rk4_step(Rhs&& rhs, double t, const State& y, double h) {
  const State k1 = rhs(t, y);
  const State k2 = rhs(t + 0.5 * h, State(y + (0.5 * h) * k1));
  const State k3 = rhs(t + 0.5 * h, State(y + (0.5 * h) * k2));
  const State k4 = rhs(t + h, State(y + h * k3));
  return State(y + (h / 6.0) * State(k1 + 2.0 * k2 + 2.0 * k3 + k4));
}

/// Classical fixed-step RK4 for y' = rhs(t, y) over a uniform grid from t0 to
/// t1 (t1 < t0 integrates backwards). `observe(step, t, y)` is called at every
/// grid point including the first. State needs +, scalar * and all_finite().
template <typename State, typename Rhs, typename Observer>
State rk4_integrate(Rhs&& rhs, State y, double t0, double t1, double dt,
                    Observer&& observe) {
  if (!(dt > 0.0) || !std::isfinite(t0) || !std::isfinite(t1)) {
    throw InvalidArgument("rk4_integrate: dt must be positive and times finite");
  }
  const int steps = grid_steps(t0, t1, dt);
  observe(0, t0, y);
  if (steps == 0) return y;
  const double h = (t1 - t0) / steps;
  for (int i = 0; i < steps; ++i) {
    y = rk4_step(rhs, t0 + i * h, y, h);
    const double t_next = (i + 1 == steps) ? t1 : t0 + (i + 1) * h;
    if (!all_finite(y)) {
      throw NumericOverflow(
          "non-finite state in RK4 integration at t = " + std::to_string(t_next),
          t_next);
    }
    observe(i + 1, t_next, y);
  }
  return y;
}

template <typename State, typename Rhs>
State rk4_integrate(Rhs&& rhs, State y, double t0, double t1, double dt) {
  return rk4_integrate(std::forward<Rhs>(rhs), std::move(y), t0, t1, dt,
                       [](int, double, const State&) {});
}

/// RK4 solution of Y' = A(t) Y. With y0 = I this is the fundamental matrix
/// G(t1, t0).
Mat propagate_linear(const std::function<Mat(double)>& a_of_t, const Mat& y0,
                     double t0, double t1, double dt);

}  // namespace qmem
