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

#include "qmem/tensor.hpp"

#include <string>

namespace qmem {

namespace {

void require_length(Index expected, Index got, const char* op) {
  if (expected != got) {
    throw InvalidArgument(std::string(op) + ": expected vector of length " +
                          std::to_string(expected) + ", got " +
                          std::to_string(got));
  }
}

}  // namespace

RealArray3 real_part(const ComplexArray3& arr) {
  RealArray3 out(arr.rows(), arr.cols(), arr.sections());
  for (Index l = 0; l < arr.sections(); ++l) {
    out.section(l) = arr.section(l).real();
  }
  return out;
}

RealArray3 imag_part(const ComplexArray3& arr) {
  RealArray3 out(arr.rows(), arr.cols(), arr.sections());
  for (Index l = 0; l < arr.sections(); ++l) {
    out.section(l) = arr.section(l).imag();
  }
  return out;
}

double max_hermitian_defect(const ComplexArray3& arr) {
  double worst = 0.0;
  for (Index l = 0; l < arr.sections(); ++l) {
    const auto s = arr.section(l);
    worst = std::max(worst, (s - s.adjoint()).cwiseAbs().maxCoeff());
  }
  return worst;
}

Mat dot(const RealArray3& arr, const Vec& x) {
  require_length(arr.sections(), x.size(), "dot");
  Mat out = Mat::Zero(arr.rows(), arr.cols());
  for (Index l = 0; l < arr.sections(); ++l) {
    if (x(l) != 0.0) out += x(l) * arr.section(l);
  }
  return out;
}

CMat dot(const ComplexArray3& arr, const Vec& x) {
  require_length(arr.sections(), x.size(), "dot");
  CMat out = CMat::Zero(arr.rows(), arr.cols());
  for (Index l = 0; l < arr.sections(); ++l) {
    if (x(l) != 0.0) out += x(l) * arr.section(l);
  }
  return out;
}

Mat diam(const RealArray3& arr, const Vec& u) {
  require_length(arr.cols(), u.size(), "diam");
  Mat out(arr.rows(), arr.sections());
  for (Index l = 0; l < arr.sections(); ++l) {
    out.col(l) = arr.section(l) * u;
  }
  return out;
}

Vec star(const Mat& u, const RealArray3& arr) {
  if (u.rows() != arr.rows() || u.cols() != arr.cols()) {
    throw InvalidArgument("star: matrix shape does not match array sections");
  }
  Vec out(arr.sections());
  for (Index l = 0; l < arr.sections(); ++l) {
    out(l) = (u.array() * arr.section(l).array()).sum();
  }
  return out;
}

Mat block_row(const RealArray3& arr) {
  Mat out(arr.rows(), arr.cols() * arr.sections());
  for (Index l = 0; l < arr.sections(); ++l) {
    out.middleCols(l * arr.cols(), arr.cols()) = arr.section(l);
  }
  return out;
}

Vec col(const Mat& m) {
  return Eigen::Map<const Vec>(m.data(), m.size());
}

}  // namespace qmem
