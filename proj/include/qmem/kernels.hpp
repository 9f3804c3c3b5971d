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

// Data-parallel kernels. Each has a plain serial reference implementation and
// an OpenMP implementation; tests check that they agree and qmem_bench times
// both. Results of the OpenMP variants do not depend on the thread count.

#include <functional>
#include <vector>

#include "qmem/tensor.hpp"

namespace qmem::kernels {

enum class Exec { serial, parallel };

/// Default used by library entry points.
inline constexpr Exec kDefaultExec = Exec::parallel;

/// alpha_{jk} = Tr(X_j X_k) / d and beta_{jkl} = Tr(X_j X_k X_l) / d.
void structure_traces(const std::vector<CMat>& basis, Mat& alpha,
                      ComplexArray3& beta, Exec exec = kDefaultExec);

/// max_{j,k} of the entrywise residual X_j X_k - alpha_{jk} I - sum_l beta_{jkl} X_l.
double closure_residual(const std::vector<CMat>& basis, const Mat& alpha,
                        const ComplexArray3& beta, Exec exec = kDefaultExec);

/// out = q - S Ab - Ab^T S with Ab = I_blocks (x) a block diagonal, where
/// S, q are N x N with N = a.rows() * blocks.
void lyapunov_rhs(const Mat& s, const Mat& a, const Mat& q, Mat& out,
                  Exec exec = kDefaultExec);

using ComplexRhs = std::function<CMat(double, const CMat&)>;

/// Integrates y' = rhs(t, y) with RK4 for every initial value independently,
/// returning the sampled path (grid_steps(t0, t1, dt) + 1 samples) of each.
std::vector<std::vector<CMat>> propagate_many(const ComplexRhs& rhs,
                                              const std::vector<CMat>& initial,
                                              double t0, double t1, double dt,
                                              Exec exec = kDefaultExec);

namespace serial {
void structure_traces(const std::vector<CMat>& basis, Mat& alpha,
                      ComplexArray3& beta);
double closure_residual(const std::vector<CMat>& basis, const Mat& alpha,
                        const ComplexArray3& beta);
void lyapunov_rhs(const Mat& s, const Mat& a, const Mat& q, Mat& out);
std::vector<std::vector<CMat>> propagate_many(const ComplexRhs& rhs,
                                              const std::vector<CMat>& initial,
                                              double t0, double t1, double dt);
}  // namespace serial

namespace omp {
void structure_traces(const std::vector<CMat>& basis, Mat& alpha,
                      ComplexArray3& beta);
double closure_residual(const std::vector<CMat>& basis, const Mat& alpha,
                        const ComplexArray3& beta);
void lyapunov_rhs(const Mat& s, const Mat& a, const Mat& q, Mat& out);
std::vector<std::vector<CMat>> propagate_many(const ComplexRhs& rhs,
                                              const std::vector<CMat>& initial,
                                              double t0, double t1, double dt);
}  // namespace omp

}  // namespace qmem::kernels
