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

#include <string>
#include <vector>

#include "qmem/kernels.hpp"
#include "qmem/tensor.hpp"

namespace qmem {

/// Hermitian, traceless, Hilbert-Schmidt orthogonal d x d matrices X_k(0)
/// with Tr(X_j X_k) = d delta_jk.
struct MatrixBasis {
  int qubits = 0;
  Index dim = 0;
  std::vector<CMat> matrices;
  std::vector<std::string> labels;

  Index size() const { return static_cast<Index>(matrices.size()); }
};

/// Algebra X X^T = alpha + beta . X of the system variables.
struct StructureConstants {
  Index n = 0;
  Mat alpha;            ///< real symmetric n x n
  ComplexArray3 beta;   ///< Hermitian sections beta_l
  RealArray3 theta;     ///< Im beta, antisymmetric sections (CCR array)
  RealArray3 gamma;     ///< Re beta, symmetric sections
};

inline constexpr int kDefaultMaxQubits = 3;

/// All non-identity q-fold tensor products of {I, X, Y, Z}, ordered
/// lexicographically by label (I < X < Y < Z). For q = 1 this is
/// (sigma_1, sigma_2, sigma_3).
MatrixBasis pauli_basis(int qubits, int max_qubits = kDefaultMaxQubits);

/// alpha_{jk} = Tr(X_j X_k)/d, beta_{jkl} = Tr(X_j X_k X_l)/d. Throws
/// ClosureViolation when the products are not reproduced to 1e-12.
StructureConstants derive_structure(const MatrixBasis& basis,
                                    kernels::Exec exec = kernels::kDefaultExec);

/// Residuals (max entrywise) of the three operator identities.
struct AlgebraResiduals {
  double closure = 0.0;          ///< X_j X_k = alpha_jk I + sum beta_jkl X_l
  double ccr = 0.0;              ///< [X_j, X_k] = 2i sum theta_jkl X_l
  double anticommutator = 0.0;   ///< (X_j X_k + X_k X_j)/2 = alpha_jk I + sum gamma_jkl X_l
  double theta_antisymmetry = 0.0;
  double gamma_symmetry = 0.0;
  double beta_hermiticity = 0.0;
};
AlgebraResiduals algebra_residuals(const MatrixBasis& basis,
                                   const StructureConstants& sc);

struct AdmissibilityReport {
  double min_eigenvalue = 0.0;
  bool admissible = false;
};

/// Minimum eigenvalue of the covariance alpha + beta . mu0 - mu0 mu0^T;
/// admissible iff >= -1e-10.
AdmissibilityReport check_admissible(const StructureConstants& sc,
                                     const Vec& mu0);

/// mu0_k = Tr(rho0 X_k). Throws StateValidationError for a rho0 that is not
/// Hermitian, unit-trace and PSD to 1e-10.
Vec mean_from_state(const MatrixBasis& basis, const CMat& rho0);

/// Throws StateValidationError if rho is not a density matrix.
void validate_density(const CMat& rho, Index dim);

}  // namespace qmem
