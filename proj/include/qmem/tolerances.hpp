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

// Tolerances shared across modules.

namespace qmem::tol {

/// Algebraic identities on structure constants and tensor products.
inline constexpr double kStructural = 1e-12;
/// Cross-checks between two ODE integrations of the same quantity.
inline constexpr double kOde = 1e-6;
/// Coefficient comparison against the Lindblad generator expansion.
inline constexpr double kGenerator = 1e-10;
/// Minimum eigenvalue of the initial covariance for admissibility.
inline constexpr double kAdmissible = -1e-10;
/// Density-matrix checks (Hermitian, unit trace, PSD; mu0/rho0 agreement).
inline constexpr double kState = 1e-10;
/// Slack on non-negativity of the mean-square deviation.
inline constexpr double kDeltaSlack = 1e-9;
/// Trace drift allowed when propagating a density matrix.
inline constexpr double kTraceDrift = 1e-8;

}  // namespace qmem::tol
