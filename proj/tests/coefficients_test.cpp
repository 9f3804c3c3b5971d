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

#include <Eigen/Eigenvalues>

#include "gtest/gtest.h"
#include "qmem/coefficients.hpp"
#include "support.hpp"

namespace qmem {
namespace {

using testing::random_spec;
using testing::Rng;
using testing::ScenarioShape;
using testing::single_qubit_demo;

Mat rotation_generator() {
  Mat a = Mat::Zero(3, 3);
  a(0, 1) = -2.0;
  a(1, 0) = 2.0;
  return a;
}

TEST(BuildIto, TwoChannels) {
  const ItoMatrix ito = build_ito(2);
  Mat j(2, 2);
  j << 0, 1, -1, 0;
  EXPECT_EQ(ito.J, j);
  EXPECT_EQ(ito.Omega(0, 1), Complex(0.0, 1.0));
  EXPECT_EQ(ito.Omega(1, 0), Complex(0.0, -1.0));
  EXPECT_EQ(ito.Omega(0, 0), Complex(1.0, 0.0));
  EXPECT_EQ(Mat(ito.J * ito.J), Mat(-Mat::Identity(2, 2)));
}

TEST(BuildIto, FourChannelSpectrum) {
  const ItoMatrix ito = build_ito(4);
  Eigen::SelfAdjointEigenSolver<CMat> solver(ito.Omega);
  const Vec ev = solver.eigenvalues();
  EXPECT_NEAR(ev(0), 0.0, 1e-14);
  EXPECT_NEAR(ev(1), 0.0, 1e-14);
  EXPECT_NEAR(ev(2), 2.0, 1e-14);
  EXPECT_NEAR(ev(3), 2.0, 1e-14);
  EXPECT_THROW(build_ito(3), InvalidArgument);
  EXPECT_THROW(build_ito(0), InvalidArgument);
}

TEST(BuildDrift, IsolatedQubitRotates) {
  SystemSpec spec = single_qubit_demo();
  spec.M.setZero();
  const Drift drift = build_drift(spec);
  EXPECT_EQ(drift.A_star, rotation_generator());
  EXPECT_EQ(drift.b, Vec(Vec::Zero(3)));
}

TEST(BuildDrift, ZeroCouplingGivesZeroOffset) {
  Rng rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    SystemSpec spec = random_spec(rng, ScenarioShape{2, 4, 2});
    spec.M.setZero();
    EXPECT_EQ(build_drift(spec).b, Vec(Vec::Zero(spec.n())));
  }
}

TEST(ControlSections, Examples) {
  SystemSpec spec = single_qubit_demo();
  const RealArray3 sections = build_control_sections(spec);
  EXPECT_EQ(Mat(sections.section(2)), rotation_generator());
  spec.K.col(0).setZero();
  EXPECT_EQ(Mat(build_control_sections(spec).section(0)), Mat(Mat::Zero(3, 3)));
}

TEST(ControlSections, ZeroDiagonalAndColumns) {
  Rng rng(42);
  const SystemSpec spec = random_spec(rng, ScenarioShape{2, 2, 3});
  const RealArray3 sections = build_control_sections(spec);
  for (Index k = 0; k < 3; ++k) {
    EXPECT_LE(sections.section(k).diagonal().cwiseAbs().maxCoeff(), 1e-14);
    for (Index j = 0; j < spec.n(); ++j) {
      const Vec expected = 2.0 * spec.sc.theta.section(j) * spec.K.col(k);
      EXPECT_LE((sections.section(k).col(j) - expected).cwiseAbs().maxCoeff(), 1e-14);
    }
  }
}

TEST(AssembleA, ControlAffine) {
  Rng rng(43);
  const SystemSpec spec = random_spec(rng, ScenarioShape{1, 2, 2});
  const Coefficients c = build_coefficients(spec);
  EXPECT_EQ(assemble_A(c, Vec::Zero(2)), c.A_star);
  EXPECT_LE((assemble_A(c, Vec::Unit(2, 1)) - c.A_star - c.A_sections.section(1))
                .cwiseAbs()
                .maxCoeff(),
            1e-15);
  const Vec u1 = testing::random_vector(rng, 2);
  const Vec u2 = testing::random_vector(rng, 2);
  const Mat lhs = assemble_A(c, u1 + u2) - c.A_star;
  const Mat rhs = (assemble_A(c, u1) - c.A_star) + (assemble_A(c, u2) - c.A_star);
  EXPECT_LE((lhs - rhs).cwiseAbs().maxCoeff(), 1e-13);
  EXPECT_THROW(assemble_A(c, Vec::Zero(3)), InvalidArgument);
}

TEST(DiffusionMatrix, LinearAndVanishing) {
  Rng rng(44);
  SystemSpec spec = random_spec(rng, ScenarioShape{2, 2, 1});
  Coefficients c = build_coefficients(spec);
  EXPECT_EQ(diffusion_matrix(c, Vec::Zero(spec.n())), Mat(Mat::Zero(spec.n(), 2)));
  const Vec x = testing::random_vector(rng, spec.n());
  const Vec y = testing::random_vector(rng, spec.n());
  EXPECT_LE((diffusion_matrix(c, x + y) - diffusion_matrix(c, x) - diffusion_matrix(c, y))
                .cwiseAbs()
                .maxCoeff(),
            1e-13);
  spec.M.setZero();
  c = build_coefficients(spec);
  EXPECT_EQ(diffusion_matrix(c, x), Mat(Mat::Zero(spec.n(), 2)));
}

TEST(BuildTargets, MaximallyMixedQubit) {
  SystemSpec spec = single_qubit_demo();
  spec.mu0 = Vec::Zero(3);
  const Coefficients c = build_coefficients(spec);
  EXPECT_EQ(c.P, Mat(Mat::Identity(3, 3)));
  EXPECT_EQ(c.sigma, Vec(Vec::Zero(3)));
  EXPECT_EQ(c.d, 6.0);
  Mat z0 = Mat::Zero(3, 4);
  z0.rightCols(3) = Mat::Identity(3, 3);
  EXPECT_EQ(c.z0, z0);
}

TEST(BuildTargets, OffsetMatchesInitialPoint) {
  Rng rng(45);
  for (int trial = 0; trial < 20; ++trial) {
    const SystemSpec spec = random_spec(rng, ScenarioShape{1 + trial % 2, 2, 1});
    const Coefficients c = build_coefficients(spec);
    EXPECT_LE(std::abs(c.d + frobenius(c.R, c.z0)), 1e-12 * std::max(1.0, std::abs(c.d)));
  }
}

TEST(BuildTargets, SingleSelectedVariable) {
  SystemSpec spec = single_qubit_demo();
  spec.F = Mat::Zero(1, 3);
  spec.F(0, 0) = 1.0;
  const Coefficients c = build_coefficients(spec);
  Mat expected = Mat::Zero(3, 3);
  expected(0, 0) = 1.0;
  EXPECT_EQ(c.Sigma, expected);
}

TEST(ValidateSpec, RejectsBadScenarios) {
  SystemSpec odd = single_qubit_demo();
  odd.M = Mat::Zero(3, 3);
  odd.N = Vec::Zero(3);
  EXPECT_THROW(validate_spec(odd), InvalidArgument);

  SystemSpec rank = single_qubit_demo();
  rank.F = Mat::Ones(2, 3);
  EXPECT_THROW(validate_spec(rank), SelectionRankError);

  SystemSpec state = single_qubit_demo();
  state.mu0 = 1.5 * Vec::Unit(3, 2);
  EXPECT_THROW(validate_spec(state), StateValidationError);

  SystemSpec shape = single_qubit_demo();
  shape.E_star = Vec::Zero(2);
  EXPECT_THROW(validate_spec(shape), InvalidArgument);

  SystemSpec mismatch = single_qubit_demo();
  CMat rho = CMat::Identity(2, 2) / 2.0;
  mismatch.rho0 = rho;
  EXPECT_THROW(validate_spec(mismatch), StateValidationError);
}

TEST(Coefficients, InvariantsOnRandomScenarios) {
  Rng rng(46);
  for (int trial = 0; trial < 20; ++trial) {
    const SystemSpec spec = random_spec(rng, ScenarioShape{1 + trial % 2, 2 + 2 * (trial % 2), 2});
    const Coefficients c = build_coefficients(spec);
    EXPECT_EQ(c.Sigma, Mat(c.Sigma.transpose()));
    Eigen::SelfAdjointEigenSolver<Mat> solver(c.Sigma);
    EXPECT_GE(solver.eigenvalues().minCoeff(), -1e-12);
    Eigen::FullPivLU<Mat> lu(c.Sigma);
    EXPECT_EQ(lu.rank(), spec.F.rows());
  }
}

}  // namespace
}  // namespace qmem
