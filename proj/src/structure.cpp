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

#include "qmem/structure.hpp"

#include <array>
#include <sstream>

#include "qmem/error.hpp"
#include "qmem/tolerances.hpp"

namespace qmem {

namespace {

std::array<CMat, 4> single_qubit_paulis() {
  const Complex i(0.0, 1.0);
  CMat id = CMat::Identity(2, 2);
  CMat x(2, 2), y(2, 2), z(2, 2);
  x << 0.0, 1.0, 1.0, 0.0;
  y << 0.0, -i, i, 0.0;  // -i J with J = [[0, 1], [-1, 0]]
  z << 1.0, 0.0, 0.0, -1.0;
  return {id, x, y, z};
}

CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

void validate_basis(const MatrixBasis& basis) {
  if (basis.matrices.empty()) {
    throw InvalidArgument("matrix basis is empty");
  }
  const Index d = basis.dim;
  const double dd = static_cast<double>(d);
  for (std::size_t j = 0; j < basis.matrices.size(); ++j) {
    const CMat& x = basis.matrices[j];
    if (x.rows() != d || x.cols() != d) {
      throw InvalidArgument("basis matrix " + std::to_string(j) +
                            " has the wrong shape");
    }
    if ((x - x.adjoint()).cwiseAbs().maxCoeff() > tol::kStructural) {
      throw InvalidArgument("basis matrix " + std::to_string(j) +
                            " is not Hermitian");
    }
    if (std::abs(x.trace()) > tol::kStructural * dd) {
      throw InvalidArgument("basis matrix " + std::to_string(j) +
                            " is not traceless");
    }
  }
  for (std::size_t j = 0; j < basis.matrices.size(); ++j) {
    for (std::size_t k = 0; k < basis.matrices.size(); ++k) {
      const Complex hs = (basis.matrices[j] * basis.matrices[k]).trace();
      const double expected = (j == k) ? dd : 0.0;
      if (std::abs(hs - expected) > tol::kStructural * dd) {
        throw InvalidArgument("basis is not Hilbert-Schmidt orthogonal at (" +
                              std::to_string(j) + ", " + std::to_string(k) +
                              ")");
      }
    }
  }
}

}  // namespace

MatrixBasis pauli_basis(int qubits, int max_qubits) {
  if (qubits < 1) throw InvalidArgument("pauli_basis: qubit count must be >= 1");
  if (qubits > max_qubits) {
    throw CapacityError("pauli_basis: " + std::to_string(qubits) +
                        " qubits exceeds the cap of " +
                        std::to_string(max_qubits));
  }
  static constexpr char kLetters[] = {'I', 'X', 'Y', 'Z'};
  const auto paulis = single_qubit_paulis();

  MatrixBasis basis;
  basis.qubits = qubits;
  basis.dim = Index{1} << qubits;
  const int count = 1 << (2 * qubits);
  // Base-4 digits of the index, most significant first, give the label in
  // lexicographic order; index 0 is the identity string and is skipped.
  for (int index = 1; index < count; ++index) {
    std::string label(static_cast<std::size_t>(qubits), 'I');
    CMat m = CMat::Identity(1, 1);
    for (int pos = 0; pos < qubits; ++pos) {
      const int digit = (index >> (2 * (qubits - 1 - pos))) & 3;
      label[static_cast<std::size_t>(pos)] = kLetters[digit];
      m = kron(m, paulis[static_cast<std::size_t>(digit)]);
    }
    basis.matrices.push_back(std::move(m));
    basis.labels.push_back(std::move(label));
  }
  return basis;
}

StructureConstants derive_structure(const MatrixBasis& basis,
                                    kernels::Exec exec) {
  validate_basis(basis);
  StructureConstants sc;
  sc.n = basis.size();
  kernels::structure_traces(basis.matrices, sc.alpha, sc.beta, exec);
  const double residual =
      kernels::closure_residual(basis.matrices, sc.alpha, sc.beta, exec);
  if (residual > tol::kStructural) {
    std::ostringstream msg;
    msg << "basis is not multiplicatively closed: residual " << residual;
    throw ClosureViolation(msg.str(), residual);
  }
  sc.theta = imag_part(sc.beta);
  sc.gamma = real_part(sc.beta);
  return sc;
}

AlgebraResiduals algebra_residuals(const MatrixBasis& basis,
                                   const StructureConstants& sc) {
  AlgebraResiduals out;
  const Index n = sc.n;
  const Index d = basis.dim;
  const Complex two_i(0.0, 2.0);
  const CMat id = CMat::Identity(d, d);
  out.closure = kernels::closure_residual(basis.matrices, sc.alpha, sc.beta);
  for (Index j = 0; j < n; ++j) {
    for (Index k = 0; k < n; ++k) {
      const CMat& xj = basis.matrices[static_cast<std::size_t>(j)];
      const CMat& xk = basis.matrices[static_cast<std::size_t>(k)];
      CMat comm = xj * xk - xk * xj;
      CMat anti = 0.5 * (xj * xk + xk * xj) - sc.alpha(j, k) * id;
      for (Index l = 0; l < n; ++l) {
        const CMat& xl = basis.matrices[static_cast<std::size_t>(l)];
        comm -= two_i * sc.theta(j, k, l) * xl;
        anti -= sc.gamma(j, k, l) * xl;
      }
      out.ccr = std::max(out.ccr, comm.cwiseAbs().maxCoeff());
      out.anticommutator = std::max(out.anticommutator, anti.cwiseAbs().maxCoeff());
    }
  }
  for (Index l = 0; l < n; ++l) {
    const auto th = sc.theta.section(l);
    const auto ga = sc.gamma.section(l);
    out.theta_antisymmetry =
        std::max(out.theta_antisymmetry, (th + th.transpose()).cwiseAbs().maxCoeff());
    out.gamma_symmetry =
        std::max(out.gamma_symmetry, (ga - ga.transpose()).cwiseAbs().maxCoeff());
  }
  out.beta_hermiticity = max_hermitian_defect(sc.beta);
  return out;
}

AdmissibilityReport check_admissible(const StructureConstants& sc,
                                     const Vec& mu0) {
  if (mu0.size() != sc.n) {
    throw InvalidArgument("check_admissible: mu0 has length " +
                          std::to_string(mu0.size()) + ", expected " +
                          std::to_string(sc.n));
  }
  CMat cov = sc.alpha.cast<Complex>() + dot(sc.beta, mu0) -
             (mu0 * mu0.transpose()).cast<Complex>();
  cov = 0.5 * (cov + cov.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<CMat> eig(cov, Eigen::EigenvaluesOnly);
  AdmissibilityReport report;
  report.min_eigenvalue = eig.eigenvalues().minCoeff();
  report.admissible = report.min_eigenvalue >= tol::kAdmissible;
  return report;
}

void validate_density(const CMat& rho, Index dim) {
  if (rho.rows() != dim || rho.cols() != dim) {
    throw StateValidationError("density matrix must be " + std::to_string(dim) +
                               " x " + std::to_string(dim));
  }
  if (!rho.allFinite()) throw StateValidationError("density matrix is not finite");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tol::kState) {
    throw StateValidationError("density matrix is not Hermitian");
  }
  if (std::abs(rho.trace() - 1.0) > tol::kState) {
    throw StateValidationError("density matrix does not have unit trace");
  }
  const CMat herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> eig(herm, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -tol::kState) {
    throw StateValidationError("density matrix is not positive semi-definite");
  }
}

Vec mean_from_state(const MatrixBasis& basis, const CMat& rho0) {
  validate_density(rho0, basis.dim);
  Vec mu(basis.size());
  for (Index k = 0; k < basis.size(); ++k) {
    mu(k) = (rho0 * basis.matrices[static_cast<std::size_t>(k)]).trace().real();
  }
  return mu;
}

}  // namespace qmem
