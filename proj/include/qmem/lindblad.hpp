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

// Independent check of the moment equations: the GKSL generator acting on
// dense d x d matrices, projected back onto span{I, X_1..X_n}.

#include <vector>

#include "qmem/coefficients.hpp"
#include "qmem/control.hpp"
#include "qmem/kernels.hpp"

namespace qmem {

/// Dense representation of the Hamiltonian H = (E* + K U)^T X and the
/// coupling operators L_k = (M X)_k + N_k I for one value of U.
struct MatrixRep {
  CMat H;
  std::vector<CMat> L;
  CMat Omega;
  CMat coupling_square;  ///< sum_{jk} Omega_jk L_j L_k
};

MatrixRep make_rep(const SystemSpec& spec, const Vec& u);

/// i[H, X] + 1/2 sum_{jk} Omega_jk (L_j [X, L_k] + [L_j, X] L_k).
CMat gksl_apply(const MatrixRep& rep, const CMat& x);

/// Predual: -i[H, rho] + sum_{jk} Omega_jk (L_k rho L_j - 1/2 {L_j L_k, rho}).
CMat gksl_predual(const MatrixRep& rep, const CMat& rho);

/// Coordinates of a matrix in {I, X_1..X_n}.
struct BasisExpansion {
  Complex identity;
  CVec coefficients;
  double residual = 0.0;  ///< max entrywise norm of the out-of-span part
};

BasisExpansion expand_in_basis(const MatrixBasis& basis, const CMat& x);

/// Per-entry differences between the generator expansion and (b | A(U)).
struct DriftReport {
  double max_error = 0.0;
  /// n x (n + 1): column 0 compares the identity coefficient with b, column
  /// l + 1 the X_l coefficient with A(U)_{jl}. Nonzero entries are reported,
  /// never corrected.
  Mat discrepancy;
  double span_residual = 0.0;
};

/// Throws ModelInconsistency if a generator image leaves the span by more
/// than 1e-10.
DriftReport drift_check(const SystemSpec& spec, const Coefficients& coeffs,
                        const Vec& u);

struct DiffusionReport {
  double max_error = 0.0;
  double span_residual = 0.0;
};

/// Compares -i[X_j, L_k] with the (j, k) entry of 2 (Theta . X) M^T.
DiffusionReport diffusion_check(const SystemSpec& spec,
                                const Coefficients& coeffs);

/// rho0 from the spec, or (I + sum mu0_k X_k) / d when only the means are
/// given. Throws StateValidationError if the result is not a state.
CMat initial_density(const SystemSpec& spec);

struct DensityPath {
  std::vector<double> times;
  std::vector<Vec> mu;
  double max_trace_drift = 0.0;
  double max_hermitian_defect = 0.0;
  double min_eigenvalue = 0.0;
};

/// RK4 on the predual master equation with H following the open-loop
/// control. Throws IntegratorError when |Tr rho - 1| exceeds 1e-8.
DensityPath propagate_density(const SystemSpec& spec,
                              const ControlSignal& control, const CMat& rho0,
                              double tau, double dt);

struct TwoPointPath {
  std::vector<double> times;
  std::vector<Mat> second;  ///< Re E[X_j(t) X_k(0)]
};

/// Propagates S_k(0) = X_k rho0 under the predual generator and pairs
/// E[X_j(t) X_k(0)] = Tr(S_k(t) X_j).
TwoPointPath regression_two_point(const SystemSpec& spec,
                                  const ControlSignal& control,
                                  const CMat& rho0, double tau, double dt,
                                  kernels::Exec exec = kernels::kDefaultExec);

struct OracleOptions {
  double tau = 1.0;
  double dt = 5e-4;
  /// Oracle runs are limited to two qubits unless this is set.
  bool allow_three_qubits = false;
};

struct OracleTolerances {
  double drift = 1e-10;
  double diffusion = 1e-12;
  double mean_path = 1e-6;
  double two_point = 1e-6;
};

struct OracleSummary {
  DriftReport drift;
  DiffusionReport diffusion;
  double mean_path_error = 0.0;   ///< sup |mu_oracle - z(t) e_0|
  double two_point_error = 0.0;   ///< sup |Re E[X(t) X0^T] - (P + Q(t))|
  DensityPath density;

  bool passes(const OracleTolerances& tol = {}) const;
};

/// Runs all four checks for an open-loop control; the drift check uses U(0).
OracleSummary run_oracle(const SystemSpec& spec, const Coefficients& coeffs,
                         const ControlSignal& control,
                         const OracleOptions& options = {});

}  // namespace qmem
