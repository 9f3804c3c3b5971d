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

// Reference implementations: direct transcriptions of the formulas.

#include "qmem/error.hpp"
#include "qmem/kernels.hpp"
#include "qmem/linalg.hpp"

namespace qmem::kernels::serial {

void structure_traces(const std::vector<CMat>& basis, Mat& alpha,
                      ComplexArray3& beta) {
  const Index n = static_cast<Index>(basis.size());
  const double d = static_cast<double>(basis.front().rows());
  alpha = Mat(n, n);
  beta = ComplexArray3(n, n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index k = 0; k < n; ++k) {
      alpha(j, k) = (basis[j] * basis[k]).trace().real() / d;
      for (Index l = 0; l < n; ++l) {
        beta(j, k, l) = (basis[j] * basis[k] * basis[l]).trace() / d;
      }
    }
  }
}

double closure_residual(const std::vector<CMat>& basis, const Mat& alpha,
                        const ComplexArray3& beta) {
  const Index n = static_cast<Index>(basis.size());
  const Index d = basis.front().rows();
  double worst = 0.0;
  for (Index j = 0; j < n; ++j) {
    for (Index k = 0; k < n; ++k) {
      CMat r = basis[j] * basis[k] - alpha(j, k) * CMat::Identity(d, d);
      for (Index l = 0; l < n; ++l) r -= beta(j, k, l) * basis[l];
      worst = std::max(worst, r.cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

void lyapunov_rhs(const Mat& s, const Mat& a, const Mat& q, Mat& out) {
  const Index n = a.rows();
  const Index blocks = s.rows() / n;
  Mat big = Mat::Zero(s.rows(), s.cols());
  for (Index b = 0; b < blocks; ++b) big.block(b * n, b * n, n, n) = a;
  out = q - s * big - big.transpose() * s;
}

std::vector<std::vector<CMat>> propagate_many(const ComplexRhs& rhs,
                                              const std::vector<CMat>& initial,
                                              double t0, double t1, double dt) {
  std::vector<std::vector<CMat>> paths(initial.size());
  for (std::size_t i = 0; i < initial.size(); ++i) {
    rk4_integrate(rhs, initial[i], t0, t1, dt,
                  [&](int, double, const CMat& y) { paths[i].push_back(y); });
  }
  return paths;
}

}  // namespace qmem::kernels::serial
