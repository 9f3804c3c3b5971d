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

#include "qmem/control.hpp"

#include <cmath>
#include <string>

#include "qmem/error.hpp"

namespace qmem {

ControlSignal ControlSignal::zero(Index r) {
  if (r < 1) throw InvalidArgument("control dimension must be >= 1");
  return ControlSignal(Kind::zero, r);
}

ControlSignal ControlSignal::sampled(double t0, double step, Mat values) {
  if (values.rows() < 1 || values.cols() < 1) {
    throw InvalidArgument("sampled control needs at least one sample");
  }
  if (values.cols() > 1 && !(step > 0.0)) {
    throw InvalidArgument("sampled control step must be positive");
  }
  if (!values.allFinite() || !std::isfinite(t0)) {
    throw InvalidArgument("sampled control contains non-finite values");
  }
  ControlSignal s(Kind::sampled, values.rows());
  s.t0_ = t0;
  s.step_ = step;
  s.values_ = std::move(values);
  return s;
}

ControlSignal ControlSignal::time_function(Index r, TimeFn u, TimeFn derivative) {
  if (r < 1 || !u) throw InvalidArgument("time_function: need r >= 1 and a function");
  ControlSignal s(Kind::time_function, r);
  s.fn_ = std::move(u);
  s.derivative_ = std::move(derivative);
  return s;
}

ControlSignal ControlSignal::state_feedback(Index r, FeedbackFn law) {
  if (r < 1 || !law) throw InvalidArgument("state_feedback: need r >= 1 and a law");
  ControlSignal s(Kind::state_feedback, r);
  s.feedback_ = std::move(law);
  return s;
}

Index ControlSignal::segment(double t) const {
  const Index last = values_.cols() - 1;
  if (last == 0) return 0;
  const double x = (t - t0_) / step_;
  Index i = static_cast<Index>(std::floor(x));
  if (i < 0) i = 0;
  if (i > last - 1) i = last - 1;
  return i;
}

Vec ControlSignal::at(double t) const {
  switch (kind_) {
    case Kind::zero:
      return Vec::Zero(r_);
    case Kind::sampled: {
      if (values_.cols() == 1) return values_.col(0);
      const Index i = segment(t);
      const double w = (t - (t0_ + static_cast<double>(i) * step_)) / step_;
      return (1.0 - w) * values_.col(i) + w * values_.col(i + 1);
    }
    case Kind::time_function: {
      Vec u = fn_(t);
      if (u.size() != r_) throw InvalidArgument("time_function returned wrong size");
      return u;
    }
    case Kind::state_feedback:
      break;
  }
  throw StateError("state-feedback control has no open-loop value");
}

Vec ControlSignal::operator()(double t, const Mat& z) const {
  if (kind_ != Kind::state_feedback) return at(t);
  Vec u = feedback_(t, z);
  if (u.size() != r_) throw InvalidArgument("feedback law returned wrong size");
  return u;
}

std::optional<Vec> ControlSignal::derivative(double t) const {
  switch (kind_) {
    case Kind::zero:
      return Vec::Zero(r_);
    case Kind::sampled: {
      if (values_.cols() == 1) return Vec::Zero(r_);
      const Index i = segment(t);
      return Vec((values_.col(i + 1) - values_.col(i)) / step_);
    }
    case Kind::time_function:
      if (derivative_) return derivative_(t);
      return std::nullopt;
    case Kind::state_feedback:
      return std::nullopt;
  }
  return std::nullopt;
}

bool ControlSignal::covers(double t0, double t1) const {
  if (kind_ != Kind::sampled) return true;
  const double slack = 1e-9 * std::max(1.0, std::abs(t1 - t0));
  const double end = t0_ + static_cast<double>(values_.cols() - 1) * step_;
  if (values_.cols() == 1) return false;
  return t0_ <= t0 + slack && end >= t1 - slack;
}

}  // namespace qmem
