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

#include <optional>

#include "qmem/structure.hpp"
#include "qmem/tensor.hpp"

namespace qmem {

/// Physical data of one memory-control scenario.
struct SystemSpec {
  MatrixBasis basis;
  StructureConstants sc;
  Vec E_star;   ///< uncontrolled energy vector, length n
  Mat K;        ///< n x r control coupling, columns K_1..K_r
  Mat M;        ///< m x n field coupling, m even
  Vec N;        ///< length-m coupling offset
  Mat F;        ///< nu x n selection matrix of full row rank
  Vec mu0;      ///< initial means
  std::optional<CMat> rho0;

  Index n() const { return sc.n; }
  Index r() const { return K.cols(); }
  Index m() const { return M.rows(); }
};

/// Throws InvalidArgument (shapes, odd m, rank-deficient F) or
/// StateValidationError (inadmissible mu0, rho0/mu0 disagreement).
void validate_spec(const SystemSpec& spec);

struct ItoMatrix {
  CMat Omega;  ///< I_m + i J
  Mat J;       ///< I_{m/2} (x) [[0, 1], [-1, 0]]
};

ItoMatrix build_ito(Index m);

struct Drift {
  Mat A_star;
  Vec b;
};

/// A* = 2 Theta<>(E* + M^T J N) + 2 sum_l Theta_l M^T (M theta_{l..} + J M gamma_{l..}),
/// b = 2 [Theta_1 .. Theta_n] col(M^T J M alpha).
///
/// theta_{l..} and gamma_{l..} slice the first index of the arrays while
/// Theta_l slices the third. For the Levi-Civita array of one qubit the two
/// agree by total antisymmetry; for multiqubit Pauli strings they do not.
Drift build_drift(const SystemSpec& spec);

/// Sections A_k = 2 Theta<>K_k of the n x n x r control array.
RealArray3 build_control_sections(const SystemSpec& spec);

/// All per-scenario constants. Built once; never modified by controls.
struct Coefficients {
  Mat A_star;
  Vec b;
  RealArray3 A_sections;
  CMat Omega;
  Mat J;
  Mat Sigma;   ///< F^T F
  Mat P;       ///< alpha + gamma . mu0
  Mat R;       ///< [sigma, -2 Sigma]
  Vec sigma;   ///< Sigma * gamma
  double d = 0.0;
  Mat c;       ///< b [1, mu0^T]
  Mat z0;      ///< [mu0, P]
  // Kept for the diffusion coefficient B(x) = 2 (Theta . x) M^T.
  RealArray3 theta;
  Mat M;

  Index n() const { return A_star.rows(); }
  Index r() const { return A_sections.sections(); }
};

struct Targets {
  Mat Sigma;
  Mat P;
  Mat R;
  Vec sigma;
  double d = 0.0;
  Mat c;
  Mat z0;
};

/// Deviation-functional constants; needs the drift offset b for c.
Targets build_targets(const SystemSpec& spec, const Vec& b);

/// Full assembly (validates the spec first).
Coefficients build_coefficients(const SystemSpec& spec);

/// A = A* + sum_k U_k A_k.
Mat assemble_A(const Coefficients& coeffs, const Vec& u);

/// B(x) = 2 (Theta . x) M^T, n x m.
Mat diffusion_matrix(const Coefficients& coeffs, const Vec& x);

}  // namespace qmem
