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

#include <exception>

#include <omp.h>

#include "qmem/error.hpp"
#include "qmem/kernels.hpp"
#include "qmem/linalg.hpp"

namespace qmem::kernels::omp {

namespace {

// Exceptions must not cross the parallel region boundary; keep the first.
class ErrorSlot {
 public:
  template <typename F>
  void run(F&& f) {
    try {
      f();
    } catch (...) {
#pragma omp critical(qmem_error_slot)
      if (!error_) error_ = std::current_exception();
    }
  }
  void rethrow() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::exception_ptr error_;
};

// Pairwise products X_j X_k, row-major in (j, k).
std::vector<CMat> pair_products(const std::vector<CMat>& basis) {
  const Index n = static_cast<Index>(basis.size());
  std::vector<CMat> products(static_cast<std::size_t>(n * n));
#pragma omp parallel for collapse(2) schedule(static)
  for (Index j = 0; j < n; ++j) {
    for (Index k = 0; k < n; ++k) {
      products[static_cast<std::size_t>(j * n + k)] = basis[j] * basis[k];
    }
  }
  return products;
}

}  // namespace

void structure_traces(const std::vector<CMat>& basis, Mat& alpha,
                      ComplexArray3& beta) {
  const Index n = static_cast<Index>(basis.size());
  const double d = static_cast<double>(basis.front().rows());
  const std::vector<CMat> products = pair_products(basis);
  // Tr(P X_l) = sum_{ab} P_ab (X_l^T)_ab.
  std::vector<CMat> transposed(basis.size());
  for (std::size_t l = 0; l < basis.size(); ++l) transposed[l] = basis[l].transpose();

  alpha = Mat(n, n);
  beta = ComplexArray3(n, n, n);
#pragma omp parallel for collapse(2) schedule(static)
  for (Index j = 0; j < n; ++j) {
    for (Index k = 0; k < n; ++k) {
      const CMat& p = products[static_cast<std::size_t>(j * n + k)];
      alpha(j, k) = p.trace().real() / d;
      for (Index l = 0; l < n; ++l) {
        beta(j, k, l) = (p.array() * transposed[l].array()).sum() / d;
      }
    }
  }
}

double closure_residual(const std::vector<CMat>& basis, const Mat& alpha,
                        const ComplexArray3& beta) {
  const Index n = static_cast<Index>(basis.size());
  const Index d = basis.front().rows();
  std::vector<double> worst(static_cast<std::size_t>(n), 0.0);
#pragma omp parallel for schedule(static)
  for (Index j = 0; j < n; ++j) {
    CMat r(d, d);
    for (Index k = 0; k < n; ++k) {
      r.noalias() = basis[j] * basis[k];
      r.diagonal().array() -= alpha(j, k);
      for (Index l = 0; l < n; ++l) r -= beta(j, k, l) * basis[l];
      worst[static_cast<std::size_t>(j)] =
          std::max(worst[static_cast<std::size_t>(j)], r.cwiseAbs().maxCoeff());
    }
  }
  double out = 0.0;
  for (double w : worst) out = std::max(out, w);
  return out;
}

void lyapunov_rhs(const Mat& s, const Mat& a, const Mat& q, Mat& out) {
  const Index n = a.rows();
  const Index size = s.rows();
  const Index blocks = size / n;
  out.resize(size, size);
  const Mat at = a.transpose();
  // Each (row block, column block) tile is independent:
  //   out_bc = q_bc - S_bc a - a^T S_bc.
#pragma omp parallel for collapse(2) schedule(static)
  for (Index br = 0; br < blocks; ++br) {
    for (Index bc = 0; bc < blocks; ++bc) {
      const auto sb = s.block(br * n, bc * n, n, n);
      out.block(br * n, bc * n, n, n) =
          q.block(br * n, bc * n, n, n) - sb * a - at * sb;
    }
  }
}

std::vector<std::vector<CMat>> propagate_many(const ComplexRhs& rhs,
                                              const std::vector<CMat>& initial,
                                              double t0, double t1, double dt) {
  std::vector<std::vector<CMat>> paths(initial.size());
  ErrorSlot errors;
  const int count = static_cast<int>(initial.size());
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < count; ++i) {
    errors.run([&] {
      auto& path = paths[static_cast<std::size_t>(i)];
      path.reserve(static_cast<std::size_t>(grid_steps(t0, t1, dt) + 1));
      rk4_integrate(rhs, initial[static_cast<std::size_t>(i)], t0, t1, dt,
                    [&](int, double, const CMat& y) { path.push_back(y); });
    });
  }
  errors.rethrow();
  return paths;
}

}  // namespace qmem::kernels::omp
