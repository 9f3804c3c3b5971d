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

#include "qmem/coefficients.hpp"

#include <string>

#include "qmem/error.hpp"
#include "qmem/tolerances.hpp"

namespace qmem {

namespace {

void require_shape(const Mat& m, Index rows, Index cols, const char* name) {
  if (m.rows() != rows || m.cols() != cols) {
    throw InvalidArgument(std::string(name) + " must be " + std::to_string(rows) +
                          " x " + std::to_string(cols) + ", got " +
                          std::to_string(m.rows()) + " x " +
                          std::to_string(m.cols()));
  }
}

void require_length(const Vec& v, Index size, const char* name) {
  if (v.size() != size) {
    throw InvalidArgument(std::string(name) + " must have length " +
                          std::to_string(size) + ", got " +
                          std::to_string(v.size()));
  }
}

}  // namespace

void validate_spec(const SystemSpec& spec) {
  const Index n = spec.n();
  if (n <= 0 || spec.basis.size() != n) {
    throw InvalidArgument("structure constants and basis disagree on n");
  }
  require_length(spec.E_star, n, "E_star");
  if (spec.K.rows() != n || spec.K.cols() < 1) {
    throw InvalidArgument("K must be n x r with r >= 1");
  }
  const Index m = spec.M.rows();
  if (m < 2 || m % 2 != 0) {
    throw InvalidArgument("M must have an even number (>= 2) of rows, got " +
                          std::to_string(m));
  }
  require_shape(spec.M, m, n, "M");
  require_length(spec.N, m, "N");
  if (spec.F.cols() != n || spec.F.rows() < 1 || spec.F.rows() > n) {
    throw InvalidArgument("F must be nu x n with 1 <= nu <= n");
  }
  Eigen::FullPivLU<Mat> lu(spec.F);
  if (lu.rank() != spec.F.rows()) {
    throw SelectionRankError("F does not have full row rank (selection-rank)");
  }
  require_length(spec.mu0, n, "mu0");
  if (!spec.E_star.allFinite() || !spec.K.allFinite() || !spec.M.allFinite() ||
      !spec.N.allFinite() || !spec.F.allFinite() || !spec.mu0.allFinite()) {
    throw InvalidArgument("scenario contains non-finite values");
  }
  if (spec.rho0) {
    const Vec from_rho = mean_from_state(spec.basis, *spec.rho0);
    if ((from_rho - spec.mu0).cwiseAbs().maxCoeff() > tol::kState) {
      throw StateValidationError("mu0 disagrees with Tr(rho0 X)");
    }
  }
  const auto adm = check_admissible(spec.sc, spec.mu0);
  if (!adm.admissible) {
    throw StateValidationError("mu0 is not admissible: covariance eigenvalue " +
                               std::to_string(adm.min_eigenvalue));
  }
}

ItoMatrix build_ito(Index m) {
  if (m < 2 || m % 2 != 0) {
    throw InvalidArgument("build_ito: channel count must be even and >= 2");
  }
  ItoMatrix ito;
  ito.J = Mat::Zero(m, m);
  for (Index k = 0; k < m; k += 2) {
    ito.J(k, k + 1) = 1.0;
    ito.J(k + 1, k) = -1.0;
  }
  ito.Omega = Mat::Identity(m, m).cast<Complex>() + Complex(0.0, 1.0) * ito.J.cast<Complex>();
  return ito;
}

Drift build_drift(const SystemSpec& spec) {
  const Index n = spec.n();
  const auto& theta = spec.sc.theta;
  const auto& gamma = spec.sc.gamma;
  const Mat J = build_ito(spec.m()).J;
  const Mat& M = spec.M;

  Drift out;
  out.A_star = 2.0 * diam(theta, spec.E_star + M.transpose() * J * spec.N);
  for (Index l = 0; l < n; ++l) {
    out.A_star += 2.0 * theta.section(l) * M.transpose() *
                  (M * theta.first_slice(l) + J * M * gamma.first_slice(l));
  }
  // [Theta_1 .. Theta_n] col(Y) = sum_l Theta_l Y e_l.
  const Mat y = M.transpose() * J * M * spec.sc.alpha;
  out.b = Vec::Zero(n);
  for (Index l = 0; l < n; ++l) out.b += 2.0 * theta.section(l) * y.col(l);
  return out;
}

RealArray3 build_control_sections(const SystemSpec& spec) {
  const Index n = spec.n();
  const Index r = spec.r();
  if (spec.K.rows() != n || r < 1) {
    throw InvalidArgument("build_control_sections: K must be n x r, r >= 1");
  }
  RealArray3 sections(n, n, r);
  for (Index k = 0; k < r; ++k) {
    sections.section(k) = 2.0 * diam(spec.sc.theta, spec.K.col(k));
  }
  return sections;
}

Targets build_targets(const SystemSpec& spec, const Vec& b) {
  const Index n = spec.n();
  Eigen::FullPivLU<Mat> lu(spec.F);
  if (spec.F.cols() != n || lu.rank() != spec.F.rows()) {
    throw InvalidArgument("build_targets: F must have full row rank");
  }
  require_length(b, n, "b");
  Targets t;
  t.Sigma = spec.F.transpose() * spec.F;
  t.P = spec.sc.alpha + dot(spec.sc.gamma, spec.mu0);
  t.sigma = star(t.Sigma, spec.sc.gamma);
  t.R.resize(n, n + 1);
  t.R.col(0) = t.sigma;
  t.R.rightCols(n) = -2.0 * t.Sigma;
  t.d = 2.0 * frobenius(t.Sigma, t.P) - t.sigma.dot(spec.mu0);
  Vec row(n + 1);
  row(0) = 1.0;
  row.tail(n) = spec.mu0;
  t.c = b * row.transpose();
  t.z0.resize(n, n + 1);
  t.z0.col(0) = spec.mu0;
  t.z0.rightCols(n) = t.P;
  return t;
}

Coefficients build_coefficients(const SystemSpec& spec) {
  validate_spec(spec);
  const Drift drift = build_drift(spec);
  const ItoMatrix ito = build_ito(spec.m());
  Targets targets = build_targets(spec, drift.b);

  Coefficients c;
  c.A_star = drift.A_star;
  c.b = drift.b;
  c.A_sections = build_control_sections(spec);
  c.Omega = ito.Omega;
  c.J = ito.J;
  c.Sigma = std::move(targets.Sigma);
  c.P = std::move(targets.P);
  c.R = std::move(targets.R);
  c.sigma = std::move(targets.sigma);
  c.d = targets.d;
  c.c = std::move(targets.c);
  c.z0 = std::move(targets.z0);
  c.theta = spec.sc.theta;
  c.M = spec.M;
  return c;
}

Mat assemble_A(const Coefficients& coeffs, const Vec& u) {
  if (u.size() != coeffs.r()) {
    throw InvalidArgument("assemble_A: control has length " +
                          std::to_string(u.size()) + ", expected " +
                          std::to_string(coeffs.r()));
  }
  return coeffs.A_star + dot(coeffs.A_sections, u);
}

Mat diffusion_matrix(const Coefficients& coeffs, const Vec& x) {
  return 2.0 * dot(coeffs.theta, x) * coeffs.M.transpose();
}

}  // namespace qmem
