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

#include <cstdint>
#include <random>

#include "qmem/coefficients.hpp"
#include "qmem/structure.hpp"

namespace qmem::testing {

using Rng = std::mt19937_64;

Mat random_matrix(Rng& rng, Index rows, Index cols, double scale = 1.0);
Vec random_vector(Rng& rng, Index size, double scale = 1.0);
Mat random_spd(Rng& rng, Index size);

/// Full-rank mixed state of the given dimension.
CMat random_density(Rng& rng, Index dim);

struct ScenarioShape {
  int qubits = 1;
  Index m = 2;
  Index r = 2;
  double coupling_scale = 0.3;
  double energy_scale = 1.0;
  double control_scale = 0.5;
  bool with_rho0 = true;
};

/// Random admissible scenario; mu0 comes from a random density matrix.
SystemSpec random_spec(Rng& rng, const ScenarioShape& shape);

/// Worked single-qubit example: E* = e3, K = I, M = [[1,0,0],[0,0,0]], N = 0,
/// F = I, mu0 = e3.
SystemSpec single_qubit_demo();

/// Pauli basis and structure constants, computed once per qubit count.
const MatrixBasis& cached_basis(int qubits);
const StructureConstants& cached_structure(int qubits);

/// Truncated Taylor series with scaling and squaring; test oracle for expm.
Mat taylor_expm(const Mat& a);

}  // namespace qmem::testing
