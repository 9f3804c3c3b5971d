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

#include "qmem/kernels.hpp"

namespace qmem::kernels {

void structure_traces(const std::vector<CMat>& basis, Mat& alpha,
                      ComplexArray3& beta, Exec exec) {
  if (exec == Exec::parallel) {
    omp::structure_traces(basis, alpha, beta);
  } else {
    serial::structure_traces(basis, alpha, beta);
  }
}

double closure_residual(const std::vector<CMat>& basis, const Mat& alpha,
                        const ComplexArray3& beta, Exec exec) {
  return exec == Exec::parallel ? omp::closure_residual(basis, alpha, beta)
                                : serial::closure_residual(basis, alpha, beta);
}

void lyapunov_rhs(const Mat& s, const Mat& a, const Mat& q, Mat& out,
                  Exec exec) {
  const Index n = a.rows();
  if (n == 0 || a.cols() != n || s.rows() != s.cols() || s.rows() % n != 0 ||
      q.rows() != s.rows() || q.cols() != s.cols()) {
    throw InvalidArgument("lyapunov_rhs: S and Q must be square with a size "
                          "divisible by the block size");
  }
  if (exec == Exec::parallel) {
    omp::lyapunov_rhs(s, a, q, out);
  } else {
    serial::lyapunov_rhs(s, a, q, out);
  }
}

std::vector<std::vector<CMat>> propagate_many(const ComplexRhs& rhs,
                                              const std::vector<CMat>& initial,
                                              double t0, double t1, double dt,
                                              Exec exec) {
  return exec == Exec::parallel
             ? omp::propagate_many(rhs, initial, t0, t1, dt)
             : serial::propagate_many(rhs, initial, t0, t1, dt);
}

}  // namespace qmem::kernels
