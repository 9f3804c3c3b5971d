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

#include "qmem/tensor.hpp"

namespace qmem {

/// Deterministic control U(t) in R^r. Open-loop kinds depend on time only;
/// state feedback is evaluated with the stage-local (t, z) pair by the
/// integrators.
class ControlSignal {
 public:
  enum class Kind { zero, sampled, time_function, state_feedback };

  using TimeFn = std::function<Vec(double)>;
  using FeedbackFn = std::function<Vec(double, const Mat&)>;

  static ControlSignal zero(Index r);
  /// Uniform samples: column i of `values` (r x K) is U(t0 + i * step);
  /// linear interpolation in between.
  static ControlSignal sampled(double t0, double step, Mat values);
  /// Smooth open-loop U(t); `derivative` is optional.
  static ControlSignal time_function(Index r, TimeFn u, TimeFn derivative = {});
  static ControlSignal state_feedback(Index r, FeedbackFn law);

  Kind kind() const { return kind_; }
  Index size() const { return r_; }
  bool open_loop() const { return kind_ != Kind::state_feedback; }

  Vec operator()(double t, const Mat& z) const;
  /// Open-loop value; throws StateError for state feedback.
  Vec at(double t) const;
  /// dU/dt where available (sampled: slope of the active segment).
  std::optional<Vec> derivative(double t) const;
  /// True when the signal is defined on [t0, t1].
  bool covers(double t0, double t1) const;

  const Mat& samples() const { return values_; }
  double sample_start() const { return t0_; }
  double sample_step() const { return step_; }

 private:
  ControlSignal(Kind kind, Index r) : kind_(kind), r_(r) {}
  Index segment(double t) const;

  Kind kind_;
  Index r_;
  double t0_ = 0.0;
  double step_ = 0.0;
  Mat values_;
  TimeFn fn_;
  TimeFn derivative_;
  FeedbackFn feedback_;
};

}  // namespace qmem
