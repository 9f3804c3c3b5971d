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

#include "qmem/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>

#include "qmem/aux_system.hpp"
#include "qmem/error.hpp"
#include "qmem/linalg.hpp"

namespace qmem {

namespace {

constexpr double kSpanTolerance = 1e-10;
constexpr double kTraceTolerance = 1e-8;

const Complex kI(0.0, 1.0);

CMat combine(const MatrixBasis& basis, const Vec& coefficients) {
  CMat out = CMat::Zero(basis.dim, basis.dim);
  for (Index k = 0; k < basis.size(); ++k) {
    if (coefficients(k) != 0.0) {
      out += coefficients(k) * basis.matrices[static_cast<std::size_t>(k)];
    }
  }
  return out;
}

void require_oracle_size(const SystemSpec& spec, bool allow_three) {
  const int limit = allow_three ? 3 : 2;
  if (spec.basis.qubits > limit) {
    throw CapacityError("oracle runs are limited to " + std::to_string(limit) +
                        " qubits");
  }
}

void require_open_loop(const ControlSignal& control, Index r) {
  if (!control.open_loop()) {
    throw InvalidArgument("oracle propagation needs an open-loop control");
  }
  if (control.size() != r) {
    throw InvalidArgument("control dimension does not match K");
  }
}

double min_hermitian_eigenvalue(const CMat& rho) {
  const CMat h = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

}  // namespace

MatrixRep make_rep(const SystemSpec& spec, const Vec& u) {
  if (u.size() != spec.r()) {
    throw InvalidArgument("make_rep: control has length " +
                          std::to_string(u.size()) + ", expected " +
                          std::to_string(spec.r()));
  }
  const MatrixBasis& basis = spec.basis;
  MatrixRep rep;
  rep.H = combine(basis, spec.E_star + spec.K * u);
  const Index m = spec.m();
  rep.L.reserve(static_cast<std::size_t>(m));
  for (Index k = 0; k < m; ++k) {
    CMat l = combine(basis, spec.M.row(k).transpose());
    l.diagonal().array() += spec.N(k);
    rep.L.push_back(std::move(l));
  }
  rep.Omega = build_ito(m).Omega;
  rep.coupling_square = CMat::Zero(basis.dim, basis.dim);
  for (Index j = 0; j < m; ++j) {
    for (Index k = 0; k < m; ++k) {
      const Complex w = rep.Omega(j, k);
      if (w == Complex(0.0, 0.0)) continue;
      rep.coupling_square += w * rep.L[static_cast<std::size_t>(j)] *
                             rep.L[static_cast<std::size_t>(k)];
    }
  }
  return rep;
}

CMat gksl_apply(const MatrixRep& rep, const CMat& x) {
  CMat out = kI * (rep.H * x - x * rep.H);
  const auto m = static_cast<Index>(rep.L.size());
  for (Index j = 0; j < m; ++j) {
    const CMat& lj = rep.L[static_cast<std::size_t>(j)];
    for (Index k = 0; k < m; ++k) {
      const Complex w = rep.Omega(j, k);
      if (w == Complex(0.0, 0.0)) continue;
      const CMat& lk = rep.L[static_cast<std::size_t>(k)];
      out += (0.5 * w) * (lj * (x * lk - lk * x) + (lj * x - x * lj) * lk);
    }
  }
  return out;
}

CMat gksl_predual(const MatrixRep& rep, const CMat& rho) {
  CMat out = -kI * (rep.H * rho - rho * rep.H);
  const auto m = static_cast<Index>(rep.L.size());
  for (Index j = 0; j < m; ++j) {
    const CMat rho_lj = rho * rep.L[static_cast<std::size_t>(j)];
    for (Index k = 0; k < m; ++k) {
      const Complex w = rep.Omega(j, k);
      if (w == Complex(0.0, 0.0)) continue;
      out += w * (rep.L[static_cast<std::size_t>(k)] * rho_lj);
    }
  }
  out -= 0.5 * (rho * rep.coupling_square + rep.coupling_square * rho);
  return out;
}

BasisExpansion expand_in_basis(const MatrixBasis& basis, const CMat& x) {
  const double d = static_cast<double>(basis.dim);
  BasisExpansion out;
  out.identity = x.trace() / d;
  out.coefficients.resize(basis.size());
  CMat rest = x;
  rest.diagonal().array() -= out.identity;
  for (Index k = 0; k < basis.size(); ++k) {
    const CMat& xk = basis.matrices[static_cast<std::size_t>(k)];
    // Tr(x X_k) / d.
    out.coefficients(k) = (xk.transpose().cwiseProduct(x)).sum() / d;
    rest -= out.coefficients(k) * xk;
  }
  out.residual = rest.cwiseAbs().maxCoeff();
  return out;
}

DriftReport drift_check(const SystemSpec& spec, const Coefficients& coeffs,
                        const Vec& u) {
  const MatrixRep rep = make_rep(spec, u);
  const Mat a = assemble_A(coeffs, u);
  const Index n = spec.n();
  DriftReport report;
  report.discrepancy = Mat::Zero(n, n + 1);
  for (Index j = 0; j < n; ++j) {
    const CMat image =
        gksl_apply(rep, spec.basis.matrices[static_cast<std::size_t>(j)]);
    const BasisExpansion e = expand_in_basis(spec.basis, image);
    report.span_residual = std::max(report.span_residual, e.residual);
    double imaginary = std::abs(e.identity.imag());
    report.discrepancy(j, 0) = e.identity.real() - coeffs.b(j);
    for (Index l = 0; l < n; ++l) {
      report.discrepancy(j, l + 1) = e.coefficients(l).real() - a(j, l);
      imaginary = std::max(imaginary, std::abs(e.coefficients(l).imag()));
    }
    report.span_residual = std::max(report.span_residual, imaginary);
  }
  if (report.span_residual > kSpanTolerance) {
    throw ModelInconsistency(
        "drift_check: generator image leaves span{I, X} by " +
        std::to_string(report.span_residual));
  }
  report.max_error = report.discrepancy.cwiseAbs().maxCoeff();
  return report;
}

DiffusionReport diffusion_check(const SystemSpec& spec,
                                const Coefficients& coeffs) {
  const MatrixRep rep = make_rep(spec, Vec::Zero(spec.r()));
  const Index n = spec.n();
  const Index m = spec.m();
  // coefficient of X_l in B(X)_{jk} is B(e_l)_{jk}
  std::vector<Mat> by_variable;
  by_variable.reserve(static_cast<std::size_t>(n));
  for (Index l = 0; l < n; ++l) {
    by_variable.push_back(diffusion_matrix(coeffs, Vec::Unit(n, l)));
  }
  DiffusionReport report;
  for (Index j = 0; j < n; ++j) {
    const CMat& xj = spec.basis.matrices[static_cast<std::size_t>(j)];
    for (Index k = 0; k < m; ++k) {
      const CMat& lk = rep.L[static_cast<std::size_t>(k)];
      const CMat image = -kI * (xj * lk - lk * xj);
      const BasisExpansion e = expand_in_basis(spec.basis, image);
      double span = std::max(e.residual, std::abs(e.identity));
      double err = 0.0;
      for (Index l = 0; l < n; ++l) {
        span = std::max(span, std::abs(e.coefficients(l).imag()));
        err = std::max(err, std::abs(e.coefficients(l).real() -
                                     by_variable[static_cast<std::size_t>(l)](j, k)));
      }
      report.span_residual = std::max(report.span_residual, span);
      report.max_error = std::max(report.max_error, err);
    }
  }
  if (report.span_residual > kSpanTolerance) {
    throw ModelInconsistency(
        "diffusion_check: commutator leaves span{X} by " +
        std::to_string(report.span_residual));
  }
  return report;
}

CMat initial_density(const SystemSpec& spec) {
  if (spec.rho0) {
    validate_density(*spec.rho0, spec.basis.dim);
    return *spec.rho0;
  }
  CMat rho = combine(spec.basis, spec.mu0);
  rho.diagonal().array() += 1.0;
  rho /= static_cast<double>(spec.basis.dim);
  validate_density(rho, spec.basis.dim);
  return rho;
}

DensityPath propagate_density(const SystemSpec& spec,
                              const ControlSignal& control, const CMat& rho0,
                              double tau, double dt) {
  require_open_loop(control, spec.r());
  validate_density(rho0, spec.basis.dim);
  auto rhs = [&](double t, const CMat& rho) {
    return gksl_predual(make_rep(spec, control.at(t)), rho);
  };
  const Index n = spec.n();
  DensityPath path;
  path.min_eigenvalue = std::numeric_limits<double>::infinity();
  auto observe = [&](int, double t, const CMat& rho) {
    const double drift = std::abs(rho.trace() - Complex(1.0, 0.0));
    if (drift > kTraceTolerance) {
      throw IntegratorError("propagate_density: trace drifted by " +
                            std::to_string(drift) + " at t = " +
                            std::to_string(t));
    }
    path.max_trace_drift = std::max(path.max_trace_drift, drift);
    path.max_hermitian_defect = std::max(
        path.max_hermitian_defect, (rho - rho.adjoint()).cwiseAbs().maxCoeff());
    path.min_eigenvalue = std::min(path.min_eigenvalue, min_hermitian_eigenvalue(rho));
    Vec mu(n);
    for (Index k = 0; k < n; ++k) {
      mu(k) = (rho * spec.basis.matrices[static_cast<std::size_t>(k)])
                  .trace()
                  .real();
    }
    path.times.push_back(t);
    path.mu.push_back(std::move(mu));
  };
  rk4_integrate(rhs, rho0, 0.0, tau, dt, observe);
  return path;
}

TwoPointPath regression_two_point(const SystemSpec& spec,
                                  const ControlSignal& control,
                                  const CMat& rho0, double tau, double dt,
                                  kernels::Exec exec) {
  require_open_loop(control, spec.r());
  validate_density(rho0, spec.basis.dim);
  const Index n = spec.n();
  std::vector<CMat> initial;
  initial.reserve(static_cast<std::size_t>(n));
  for (const CMat& xk : spec.basis.matrices) initial.push_back(xk * rho0);
  const kernels::ComplexRhs rhs = [&](double t, const CMat& s) {
    return gksl_predual(make_rep(spec, control.at(t)), s);
  };
  const auto paths = kernels::propagate_many(rhs, initial, 0.0, tau, dt, exec);
  const int steps = grid_steps(0.0, tau, dt);
  const double h = steps > 0 ? tau / steps : 0.0;

  TwoPointPath out;
  for (int i = 0; i <= steps; ++i) {
    Mat second(n, n);
    for (Index k = 0; k < n; ++k) {
      const CMat& sk = paths[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
      for (Index j = 0; j < n; ++j) {
        second(j, k) =
            (sk * spec.basis.matrices[static_cast<std::size_t>(j)]).trace().real();
      }
    }
    out.times.push_back(i == steps ? tau : i * h);
    out.second.push_back(std::move(second));
  }
  return out;
}

bool OracleSummary::passes(const OracleTolerances& tol) const {
  return drift.max_error <= tol.drift && diffusion.max_error <= tol.diffusion &&
         mean_path_error <= tol.mean_path && two_point_error <= tol.two_point;
}

OracleSummary run_oracle(const SystemSpec& spec, const Coefficients& coeffs,
                         const ControlSignal& control,
                         const OracleOptions& options) {
  require_oracle_size(spec, options.allow_three_qubits);
  require_open_loop(control, spec.r());
  OracleSummary summary;
  summary.drift = drift_check(spec, coeffs, control.at(0.0));
  summary.diffusion = diffusion_check(spec, coeffs);

  const CMat rho0 = initial_density(spec);
  summary.density = propagate_density(spec, control, rho0, options.tau, options.dt);
  const TwoPointPath two_point =
      regression_two_point(spec, control, rho0, options.tau, options.dt);

  SimulationOptions sim;
  sim.tau = options.tau;
  sim.dt = options.dt;
  const Trajectory traj = simulate(coeffs, control, sim);
  const Index n = spec.n();
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const Mat& z = traj.z[i];
    summary.mean_path_error = std::max(
        summary.mean_path_error,
        (summary.density.mu[i] - z.col(0)).cwiseAbs().maxCoeff());
    summary.two_point_error = std::max(
        summary.two_point_error,
        (two_point.second[i] - z.rightCols(n)).cwiseAbs().maxCoeff());
  }
  return summary;
}

}  // namespace qmem
