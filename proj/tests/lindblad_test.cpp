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

#include <cmath>

#include "gtest/gtest.h"
#include "qmem/aux_system.hpp"
#include "qmem/lindblad.hpp"
#include "support.hpp"

namespace qmem {
namespace {

using testing::random_spec;
using testing::random_vector;
using testing::Rng;
using testing::ScenarioShape;

const Complex kI(0.0, 1.0);

CMat pauli(int k) { return testing::cached_basis(1).matrices[static_cast<std::size_t>(k)]; }

// q = 1 scenario with H = e3 . sigma, no coupling and a single dummy control.
SystemSpec closed_qubit() {
  SystemSpec spec = testing::single_qubit_demo();
  spec.K = Mat::Zero(3, 1);
  spec.M.setZero();
  spec.mu0 = Vec::Unit(3, 0);
  return spec;
}

TEST(Gksl, ClosedSystemLimit) {
  Rng rng(90);
  SystemSpec spec = random_spec(rng, ScenarioShape{1, 2, 2});
  spec.M.setZero();
  spec.N.setZero();
  const Vec u = random_vector(rng, 2);
  const MatrixRep rep = make_rep(spec, u);
  for (int k = 0; k < 3; ++k) {
    const CMat x = pauli(k);
    const CMat expected = kI * (rep.H * x - x * rep.H);
    EXPECT_LE((gksl_apply(rep, x) - expected).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(Gksl, PauliCommutator) {
  const MatrixRep rep = make_rep(closed_qubit(), Vec::Zero(1));
  EXPECT_LE((rep.H - pauli(2)).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_LE((gksl_apply(rep, pauli(0)) + 2.0 * pauli(1)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Gksl, DecoherenceFreeDirection) {
  // One channel L = sigma_1 with H = 0: the coupling part annihilates sigma_1.
  SystemSpec spec = testing::single_qubit_demo();
  spec.E_star.setZero();
  spec.K = Mat::Zero(3, 1);
  const MatrixRep rep = make_rep(spec, Vec::Zero(1));
  EXPECT_LE(gksl_apply(rep, pauli(0)).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_GT(gksl_apply(rep, pauli(2)).cwiseAbs().maxCoeff(), 0.1);
}

TEST(Gksl, OutputHermitianAndPredualDual) {
  Rng rng(91);
  for (int trial = 0; trial < 20; ++trial) {
    const SystemSpec spec = random_spec(rng, ScenarioShape{1 + trial % 2, 4, 2});
    const MatrixRep rep = make_rep(spec, random_vector(rng, 2));
    EXPECT_LE((rep.H - rep.H.adjoint()).cwiseAbs().maxCoeff(), 0.0);
    for (const CMat& l : rep.L) EXPECT_LE((l - l.adjoint()).cwiseAbs().maxCoeff(), 0.0);
    const CMat rho = testing::random_density(rng, spec.basis.dim);
    for (const CMat& x : spec.basis.matrices) {
      const CMat gx = gksl_apply(rep, x);
      EXPECT_LE((gx - gx.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
      // Tr(rho G(X)) = Tr(G*(rho) X)
      const Complex lhs = (rho * gx).trace();
      const Complex rhs = (gksl_predual(rep, rho) * x).trace();
      EXPECT_LE(std::abs(lhs - rhs), 1e-12);
    }
    EXPECT_LE(std::abs(gksl_predual(rep, rho).trace()), 1e-13);
  }
}

TEST(ExpandInBasis, RecoversCoordinates) {
  Rng rng(92);
  const MatrixBasis& basis = testing::cached_basis(2);
  const Vec coords = random_vector(rng, 15);
  CMat x = CMat::Identity(4, 4) * Complex(0.7, 0.0);
  for (Index k = 0; k < 15; ++k) x += coords(k) * basis.matrices[static_cast<std::size_t>(k)];
  const BasisExpansion e = expand_in_basis(basis, x);
  EXPECT_NEAR(e.identity.real(), 0.7, 1e-15);
  EXPECT_LE((e.coefficients.real() - coords).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LE(e.residual, 1e-14);
}

TEST(DriftCheck, RandomScenarios) {
  Rng rng(93);
  for (int trial = 0; trial < 50; ++trial) {
    const SystemSpec spec = random_spec(rng, ScenarioShape{1 + trial % 2, 2 + 2 * (trial % 3), 2});
    const Coefficients c = build_coefficients(spec);
    const DriftReport report = drift_check(spec, c, random_vector(rng, 2));
    EXPECT_LE(report.max_error, 1e-10) << trial;
    EXPECT_LE(report.span_residual, 1e-10) << trial;
    EXPECT_LE(diffusion_check(spec, c).max_error, 1e-12) << trial;
  }
}

TEST(DriftCheck, UncoupledMatchesCommutator) {
  Rng rng(94);
  SystemSpec spec = random_spec(rng, ScenarioShape{2, 2, 2});
  spec.M.setZero();
  const Coefficients c = build_coefficients(spec);
  EXPECT_LE(drift_check(spec, c, Vec::Zero(2)).max_error, 1e-10);
  EXPECT_LE(c.b.cwiseAbs().maxCoeff(), 0.0);
}

TEST(DriftCheck, ControlDirectionIsAffine) {
  Rng rng(95);
  const SystemSpec spec = random_spec(rng, ScenarioShape{1, 2, 3});
  const Coefficients c = build_coefficients(spec);
  const MatrixRep zero = make_rep(spec, Vec::Zero(3));
  for (Index k = 0; k < 3; ++k) {
    const MatrixRep unit = make_rep(spec, Vec::Unit(3, k));
    for (Index j = 0; j < 3; ++j) {
      const CMat& xj = spec.basis.matrices[static_cast<std::size_t>(j)];
      const BasisExpansion diff =
          expand_in_basis(spec.basis, gksl_apply(unit, xj) - gksl_apply(zero, xj));
      EXPECT_LE(std::abs(diff.identity), 1e-14);
      const Vec row = c.A_sections.section(k).row(j).transpose();
      EXPECT_LE((diff.coefficients.real() - row).cwiseAbs().maxCoeff(), 1e-13);
    }
  }
}

TEST(DriftCheck, LeavingTheSpanIsReported) {
  // sigma_1 (x) I, sigma_2 (x) I and sigma_3 (x) sigma_1 are not closed under
  // products, so the generator leaves their span.
  SystemSpec spec = testing::single_qubit_demo();
  const MatrixBasis& two = testing::cached_basis(2);
  spec.basis.qubits = 2;
  spec.basis.dim = 4;
  spec.basis.matrices = {two.matrices[3], two.matrices[7], two.matrices[12]};
  spec.basis.labels = {two.labels[3], two.labels[7], two.labels[12]};
  ASSERT_EQ(spec.basis.labels[2], "ZX");
  const Coefficients c = build_coefficients(testing::single_qubit_demo());
  EXPECT_THROW(drift_check(spec, c, Vec::Zero(3)), ModelInconsistency);
}

TEST(DiffusionCheck, VanishesWithoutFieldCoupling) {
  Rng rng(96);
  SystemSpec spec = random_spec(rng, ScenarioShape{1, 2, 2});
  spec.M.setZero();
  const Coefficients c = build_coefficients(spec);
  EXPECT_LE(diffusion_check(spec, c).max_error, 1e-15);
  EXPECT_LE(diffusion_matrix(c, random_vector(rng, 3)).cwiseAbs().maxCoeff(), 0.0);
}

TEST(InitialDensity, FromMeansOrGiven) {
  SystemSpec spec = testing::single_qubit_demo();
  const CMat rho = initial_density(spec);
  CMat expected = CMat::Zero(2, 2);
  expected(0, 0) = 1.0;
  EXPECT_LE((rho - expected).cwiseAbs().maxCoeff(), 1e-15);
  spec.mu0 = Vec::Constant(3, 0.9);
  EXPECT_THROW(initial_density(spec), StateValidationError);
}

TEST(PropagateDensity, ClosedSystemRotation) {
  const SystemSpec spec = closed_qubit();
  const DensityPath path =
      propagate_density(spec, ControlSignal::zero(1), initial_density(spec), 1.0, 1e-3);
  ASSERT_EQ(path.times.size(), 1001u);
  double err = 0.0;
  for (std::size_t i = 0; i < path.times.size(); ++i) {
    const double t = path.times[i];
    const Vec expected = Eigen::Vector3d(std::cos(2 * t), std::sin(2 * t), 0.0);
    err = std::max(err, (path.mu[i] - expected).cwiseAbs().maxCoeff());
  }
  EXPECT_LE(err, 1e-10);
}

TEST(PropagateDensity, FrozenGenerator) {
  Rng rng(97);
  SystemSpec spec = random_spec(rng, ScenarioShape{2, 2, 2});
  spec.E_star.setZero();
  spec.K.setZero();
  spec.M.setZero();
  const CMat rho0 = initial_density(spec);
  const DensityPath path = propagate_density(spec, ControlSignal::zero(2), rho0, 1.0, 1e-2);
  for (const Vec& mu : path.mu) EXPECT_LE((mu - spec.mu0).cwiseAbs().maxCoeff(), 1e-14);
  const TwoPointPath two = regression_two_point(spec, ControlSignal::zero(2), rho0, 1.0, 1e-2);
  for (const Mat& s : two.second) EXPECT_LE((s - two.second.front()).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Regression, InitialValueIsSymmetrisedSecondMoment) {
  Rng rng(98);
  for (int trial = 0; trial < 10; ++trial) {
    const SystemSpec spec = random_spec(rng, ScenarioShape{1 + trial % 2, 2, 2});
    const Coefficients c = build_coefficients(spec);
    const TwoPointPath two =
        regression_two_point(spec, ControlSignal::zero(2), initial_density(spec), 0.1, 1e-2);
    EXPECT_LE((two.second.front() - c.P).cwiseAbs().maxCoeff(), 1e-13);
  }
}

TEST(Regression, SerialAndParallelAgree) {
  Rng rng(99);
  const SystemSpec spec = random_spec(rng, ScenarioShape{2, 2, 2});
  const CMat rho0 = initial_density(spec);
  const ControlSignal u = ControlSignal::zero(2);
  const TwoPointPath a = regression_two_point(spec, u, rho0, 0.5, 1e-2, kernels::Exec::serial);
  const TwoPointPath b = regression_two_point(spec, u, rho0, 0.5, 1e-2, kernels::Exec::parallel);
  for (std::size_t i = 0; i < a.second.size(); ++i) EXPECT_EQ(a.second[i], b.second[i]);
}

TEST(Oracle, MatchesAuxiliarySystemPaths) {
  Rng rng(100);
  for (int trial = 0; trial < 8; ++trial) {
    const SystemSpec spec = random_spec(rng, ScenarioShape{1 + trial % 2, 2, 2});
    const Coefficients c = build_coefficients(spec);
    ControlSignal control = ControlSignal::zero(2);
    if (trial % 4 == 1) {
      control = ControlSignal::time_function(2, [](double t) {
        return Vec(Eigen::Vector2d(0.4 * std::sin(3.0 * t), 0.3 * std::cos(2.0 * t)));
      });
    } else if (trial % 4 == 2) {
      control = ControlSignal::sampled(0.0, 0.05, testing::random_matrix(rng, 2, 21, 0.5));
    } else if (trial % 4 == 3) {
      const Vec u = random_vector(rng, 2);
      control = ControlSignal::time_function(2, [u](double) { return u; });
    }
    const OracleSummary summary = run_oracle(spec, c, control);
    EXPECT_LE(summary.mean_path_error, 1e-6) << trial;
    EXPECT_LE(summary.two_point_error, 1e-6) << trial;
    EXPECT_LE(summary.density.max_trace_drift, 1e-8) << trial;
    EXPECT_LE(summary.density.max_hermitian_defect, 1e-10) << trial;
    EXPECT_GE(summary.density.min_eigenvalue, -1e-6) << trial;
    EXPECT_TRUE(summary.passes()) << trial;
  }
}

TEST(Oracle, RejectsFeedbackAndLargeBases) {
  Rng rng(101);
  const SystemSpec spec = random_spec(rng, ScenarioShape{1, 2, 2});
  const Coefficients c = build_coefficients(spec);
  const ControlSignal feedback =
      ControlSignal::state_feedback(2, [](double, const Mat&) { return Vec(Vec::Zero(2)); });
  EXPECT_THROW(run_oracle(spec, c, feedback), InvalidArgument);
  EXPECT_THROW(run_oracle(spec, c, ControlSignal::zero(3)), InvalidArgument);

  ScenarioShape big{3, 2, 1};
  big.with_rho0 = false;
  const SystemSpec large = random_spec(rng, big);
  EXPECT_THROW(run_oracle(large, build_coefficients(large), ControlSignal::zero(1)),
               CapacityError);
}

}  // namespace
}  // namespace qmem
