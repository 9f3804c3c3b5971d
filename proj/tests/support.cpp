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

#include "support.hpp"

#include <cmath>
#include <map>

namespace qmem::testing {

Mat random_matrix(Rng& rng, Index rows, Index cols, double scale) {
  std::normal_distribution<double> normal(0.0, scale);
  Mat m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
  }
  return m;
}

Vec random_vector(Rng& rng, Index size, double scale) {
  return random_matrix(rng, size, 1, scale).col(0);
}

Mat random_spd(Rng& rng, Index size) {
  const Mat a = random_matrix(rng, size, size, 0.5);
  return a * a.transpose() + Mat::Identity(size, size);
}

CMat random_density(Rng& rng, Index dim) {
  CMat a(dim, dim);
  a.real() = random_matrix(rng, dim, dim);
  a.imag() = random_matrix(rng, dim, dim);
  CMat rho = a * a.adjoint();
  rho /= rho.trace().real();
  return 0.5 * (rho + rho.adjoint());
}

const MatrixBasis& cached_basis(int qubits) {
  static std::map<int, MatrixBasis> cache;
  auto it = cache.find(qubits);
  if (it == cache.end()) it = cache.emplace(qubits, pauli_basis(qubits)).first;
  return it->second;
}

const StructureConstants& cached_structure(int qubits) {
  static std::map<int, StructureConstants> cache;
  auto it = cache.find(qubits);
  if (it == cache.end()) {
    it = cache.emplace(qubits, derive_structure(cached_basis(qubits))).first;
  }
  return it->second;
}

SystemSpec random_spec(Rng& rng, const ScenarioShape& shape) {
  SystemSpec spec;
  spec.basis = cached_basis(shape.qubits);
  spec.sc = cached_structure(shape.qubits);
  const Index n = spec.sc.n;
  spec.E_star = random_vector(rng, n, shape.energy_scale);
  spec.K = random_matrix(rng, n, shape.r, shape.control_scale);
  spec.M = random_matrix(rng, shape.m, n, shape.coupling_scale);
  spec.N = random_vector(rng, shape.m, shape.coupling_scale);
  spec.F = random_matrix(rng, std::min<Index>(n, 2), n);
  const CMat rho = random_density(rng, spec.basis.dim);
  spec.mu0 = mean_from_state(spec.basis, rho);
  if (shape.with_rho0) spec.rho0 = rho;
  return spec;
}

SystemSpec single_qubit_demo() {
  SystemSpec spec;
  spec.basis = cached_basis(1);
  spec.sc = cached_structure(1);
  spec.E_star = Vec::Unit(3, 2);
  spec.K = Mat::Identity(3, 3);
  spec.M = Mat::Zero(2, 3);
  spec.M(0, 0) = 1.0;
  spec.N = Vec::Zero(2);
  spec.F = Mat::Identity(3, 3);
  spec.mu0 = Vec::Unit(3, 2);
  return spec;
}

Mat taylor_expm(const Mat& a) {
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.1) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.1)));
  const Mat x = a / std::ldexp(1.0, squarings);
  Mat term = Mat::Identity(a.rows(), a.cols());
  Mat sum = term;
  for (int k = 1; k <= 20; ++k) {
    term = term * x / static_cast<double>(k);
    sum += term;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  return sum;
}

}  // namespace qmem::testing
