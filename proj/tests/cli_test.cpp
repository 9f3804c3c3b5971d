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
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "qmem/cli.hpp"
#include "support.hpp"

namespace qmem::cli {
namespace {

namespace fs = std::filesystem;

const fs::path kGoldenDir = QMEM_GOLDEN_DIR;

std::string read_file(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

void write_file(const fs::path& file, const std::string& text) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  out << text;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() /
           (std::string("qmem_cli_") + info->test_suite_name() + "_" + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path config_file(const std::string& name, const std::string& json) {
    const fs::path file = dir_ / (name + ".json");
    write_file(file, json);
    return file;
  }

  int run(const std::string& command, const fs::path& config, const fs::path& out,
          std::string* report = nullptr) {
    CommandOptions options;
    options.out_dir = out;
    std::ostringstream rep, diag;
    const int code = run_command(command, config, options, rep, diag);
    if (report) *report = rep.str() + diag.str();
    return code;
  }

  fs::path dir_;
};

// Rows of a CSV file keyed by the first column.
std::map<std::string, std::vector<std::string>> csv_rows(const fs::path& file) {
  std::map<std::string, std::vector<std::string>> rows;
  std::istringstream in(read_file(file));
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> fields;
    std::istringstream fs_line(line);
    std::string field;
    while (std::getline(fs_line, field, ',')) fields.push_back(field);
    if (!fields.empty()) rows[fields.front()] = fields;
  }
  return rows;
}

ScenarioConfig config_from_spec(const SystemSpec& spec, int qubits) {
  ScenarioConfig c;
  c.qubits = qubits;
  c.E_star = spec.E_star;
  c.K = spec.K;
  c.M = spec.M;
  c.N = spec.N;
  c.F = spec.F;
  c.mu0 = spec.mu0;
  c.Gamma = Mat::Identity(spec.r(), spec.r());
  c.epsilon = 0.05;
  return c;
}

TEST(Config, PresetValues) {
  const ScenarioConfig c = parse_config(R"({"preset": "single-qubit-demo"})");
  EXPECT_EQ(c.qubits, 1);
  EXPECT_EQ(c.E_star, Vec(Vec::Unit(3, 2)));
  EXPECT_EQ(c.K, Mat(Mat::Identity(3, 3)));
  Mat m = Mat::Zero(2, 3);
  m(0, 0) = 1.0;
  EXPECT_EQ(c.M, m);
  EXPECT_EQ(c.N, Vec(Vec::Zero(2)));
  EXPECT_EQ(c.F, Mat(Mat::Identity(3, 3)));
  EXPECT_EQ(*c.mu0, Vec(Vec::Unit(3, 2)));
  EXPECT_EQ(c.horizon, 1.0);
  EXPECT_EQ(*c.Gamma, Mat(Mat::Identity(3, 3)));
  EXPECT_EQ(*c.epsilon, 0.05);
  EXPECT_EQ(c.dt(), 5e-4);
  EXPECT_EQ(c.control, "zero");

  const ScenarioConfig o =
      parse_config(R"({"preset": "single-qubit-demo", "control": "pointwise", "horizon": 2})");
  EXPECT_EQ(o.control, "pointwise");
  EXPECT_EQ(o.dt(), 1e-3);
}

TEST(Config, RoundTripIsIdempotent) {
  testing::Rng rng(110);
  for (int trial = 0; trial < 20; ++trial) {
    testing::ScenarioShape shape{1 + trial % 2, 2, 2};
    shape.with_rho0 = trial % 3 == 0;
    const SystemSpec spec = testing::random_spec(rng, shape);
    ScenarioConfig c = config_from_spec(spec, shape.qubits);
    if (spec.rho0) c.rho0 = spec.rho0;
    c.step = 1.0 / (10 + trial);
    const std::string once = serialize_config(c);
    const std::string twice = serialize_config(parse_config(once));
    EXPECT_EQ(once, twice) << trial;
    const ScenarioConfig back = parse_config(once);
    EXPECT_EQ(back.M, c.M);
    EXPECT_EQ(back.E_star, c.E_star);
    EXPECT_EQ(*back.mu0, *c.mu0);
    EXPECT_EQ(back.dt(), c.dt());
  }
  const std::string preset_text = serialize_config(parse_config(R"({"preset": "single-qubit-demo"})"));
  EXPECT_EQ(serialize_config(parse_config(preset_text)), preset_text);
  EXPECT_EQ(preset_text.find("preset"), std::string::npos);
}

std::string error_path(const std::string& json) {
  try {
    (void)parse_config(json);
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "<no error>";
}

TEST(Config, ErrorsNameTheField) {
  const std::string p = R"("preset": "single-qubit-demo")";
  EXPECT_EQ(error_path("{" + p + R"(, "M": [[1, 0, 0], [0, "x", 0]]})"), "M[1][1]");
  EXPECT_EQ(error_path("{" + p + R"(, "M": [[1, 0, 0], [0, 0]]})"), "M[1]");
  EXPECT_EQ(error_path("{" + p + R"(, "E_star": [0, 0, true]})"), "E_star[2]");
  EXPECT_EQ(error_path("{" + p + R"(, "colour": 1})"), "colour");
  EXPECT_EQ(error_path("{" + p + R"(, "penalty": {"Gamma": [[1]]}})"), "penalty");
  EXPECT_EQ(error_path("{" + p + R"(, "penalty": {"Gamma": [[1]], "epsilon": 0}})"),
            "penalty.epsilon");
  EXPECT_EQ(error_path("{" + p + R"(, "initial_state": {"mu": [0, 0, 1]}})"),
            "initial_state.mu");
  EXPECT_EQ(error_path("{" + p + R"(, "step": 0.2})"), "step");
  EXPECT_EQ(error_path("{" + p + R"(, "horizon": -1})"), "horizon");
  EXPECT_EQ(error_path("{" + p + R"(, "control": "bang-bang"})"), "control");
  EXPECT_EQ(error_path("{" + p + R"(, "qubits": 1.5})"), "qubits");
  EXPECT_EQ(error_path(R"({"qubits": 1})"), "E_star");
  EXPECT_EQ(error_path("[1, 2]"), "<root>");
  EXPECT_EQ(error_path("{"), "<root>");
  EXPECT_EQ(error_path(R"({"preset": "two-qubit"})"), "preset");
}

TEST(Config, OverridesRecheckTheStep) {
  const ScenarioConfig c = parse_config(R"({"preset": "single-qubit-demo"})");
  CommandOptions o;
  o.dt = 0.01;
  o.eps = 0.2;
  const ScenarioConfig d = apply_overrides(c, o);
  EXPECT_EQ(d.dt(), 0.01);
  EXPECT_EQ(*d.epsilon, 0.2);
  o.dt = 0.5;
  EXPECT_THROW(apply_overrides(c, o), ConfigError);
}

TEST(Csv, NumberFormatting) {
  EXPECT_EQ(format_number(0.0), "0");
  EXPECT_EQ(format_number(-0.0), "0");
  EXPECT_EQ(format_number(0.1), "0.10000000000000001");
  EXPECT_EQ(format_number(-2.5), "-2.5");
  testing::Rng rng(111);
  std::uniform_real_distribution<double> dist(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double x = dist(rng) * std::pow(10.0, i % 40 - 20);
    EXPECT_EQ(std::strtod(format_number(x).c_str(), nullptr), x);
  }
}

TEST_F(CliTest, ControlCsvValidation) {
  const fs::path good = dir_ / "good.csv";
  write_file(good, "t,U_1,U_2\n0,1,2\n0.5,3,4\n1,5,6\n");
  const ControlSignal u = load_control_csv(good, 2);
  EXPECT_EQ(u.at(0.25), Vec(Eigen::Vector2d(2.0, 3.0)));
  const fs::path uneven = dir_ / "uneven.csv";
  write_file(uneven, "t,U_1\n0,1\n0.5,3\n0.7,5\n");
  EXPECT_THROW(load_control_csv(uneven, 1), ConfigError);
  const fs::path header = dir_ / "header.csv";
  write_file(header, "time,U_1\n0,1\n1,2\n");
  EXPECT_THROW(load_control_csv(header, 1), ConfigError);
  EXPECT_THROW(load_control_csv(good, 3), ConfigError);
}

TEST_F(CliTest, ValidatePreset) {
  std::string report;
  EXPECT_EQ(run("validate", config_file("demo", R"({"preset": "single-qubit-demo"})"),
                dir_ / "out", &report),
            kExitOk);
  for (const char* name : {"shape", "selection-rank", "state-admissibility", "closure", "ccr",
                           "g(z0)=0", "f(z0)>=0", "oracle-drift", "oracle-diffusion"}) {
    EXPECT_NE(report.find(name), std::string::npos) << name;
  }
  EXPECT_EQ(report.find("FAIL"), std::string::npos) << report;
}

TEST_F(CliTest, ValidateUncoupledQubit) {
  const std::string json = R"({"preset": "single-qubit-demo", "M": [[0, 0, 0], [0, 0, 0]]})";
  EXPECT_EQ(run("validate", config_file("uncoupled", json), dir_ / "out"), kExitOk);
}

TEST_F(CliTest, ValidateNamesFailedCheck) {
  std::string report;
  const std::string bad_state =
      R"({"preset": "single-qubit-demo", "initial_state": {"mu0": [0, 0, 1.5]}})";
  EXPECT_EQ(run("validate", config_file("state", bad_state), dir_ / "out", &report),
            kExitValidation);
  EXPECT_NE(report.find("state-admissibility"), std::string::npos);
  EXPECT_NE(report.find("FAIL"), std::string::npos);

  const std::string bad_f =
      R"({"preset": "single-qubit-demo", "F": [[1, 0, 0], [2, 0, 0]]})";
  EXPECT_EQ(run("validate", config_file("rank", bad_f), dir_ / "out", &report),
            kExitValidation);
  EXPECT_NE(report.find("selection-rank"), std::string::npos);
  EXPECT_NE(report.find("FAIL"), std::string::npos);
}

TEST_F(CliTest, SimulateMatchesGolden) {
  for (const char* name : {"preset_zero", "preset_pointwise"}) {
    const fs::path out = dir_ / name;
    ASSERT_EQ(run("simulate", kGoldenDir / (std::string(name) + ".json"), out), kExitOk);
    EXPECT_EQ(read_file(out / "trajectory.csv"),
              read_file(kGoldenDir / (std::string(name) + "_trajectory.csv")))
        << name;
  }
}

TEST_F(CliTest, SimulateIsDeterministic) {
  const fs::path config = config_file(
      "hjb", R"({"preset": "single-qubit-demo", "control": "hjb1", "step": 0.002, "emit_z": true})");
  ASSERT_EQ(run("simulate", config, dir_ / "a"), kExitOk);
  ASSERT_EQ(run("simulate", config, dir_ / "b"), kExitOk);
  const std::string a = read_file(dir_ / "a" / "trajectory.csv");
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, read_file(dir_ / "b" / "trajectory.csv"));
}

TEST_F(CliTest, ZeroControlFileMatchesZeroControl) {
  std::ostringstream csv;
  csv << "t,U_1,U_2,U_3\n";
  for (int i = 0; i <= 100; ++i) csv << format_number(i / 100.0) << ",0,0,0\n";
  write_file(dir_ / "zeros.csv", csv.str());
  ASSERT_EQ(run("simulate", config_file("zero", R"({"preset": "single-qubit-demo"})"),
                dir_ / "zero"),
            kExitOk);
  ASSERT_EQ(run("simulate",
                config_file("file", R"({"preset": "single-qubit-demo", "control": "file:zeros.csv"})"),
                dir_ / "file"),
            kExitOk);
  EXPECT_EQ(read_file(dir_ / "zero" / "trajectory.csv"),
            read_file(dir_ / "file" / "trajectory.csv"));
}

TEST_F(CliTest, FrozenScenarioHasNoDeviation) {
  const std::string json =
      R"({"preset": "single-qubit-demo", "E_star": [0, 0, 0], "M": [[0, 0, 0], [0, 0, 0]]})";
  ASSERT_EQ(run("simulate", config_file("frozen", json), dir_ / "out"), kExitOk);
  std::istringstream in(read_file(dir_ / "out" / "trajectory.csv"));
  std::string line;
  std::getline(in, line);
  int rows = 0;
  while (std::getline(in, line)) {
    const auto first = line.find(',');
    const auto second = line.find(',', first + 1);
    EXPECT_LE(std::abs(std::stod(line.substr(first + 1, second - first - 1))), 1e-12);
    ++rows;
  }
  EXPECT_EQ(rows, 2001);
}

TEST_F(CliTest, BlowUpLeavesPartialFile) {
  const std::string json =
      R"({"preset": "single-qubit-demo", "M": [[3000, 0, 0], [0, 0, 0]], "step": 0.01})";
  std::string report;
  EXPECT_EQ(run("simulate", config_file("stiff", json), dir_ / "out", &report), kExitNumeric);
  EXPECT_NE(report.find("blow-up"), std::string::npos) << report;
  const std::string partial = read_file(dir_ / "out" / "trajectory.csv");
  EXPECT_EQ(partial.rfind("t,Delta,penalty,Phi,U_1,U_2,U_3\n", 0), 0u);
  EXPECT_LT(std::count(partial.begin(), partial.end(), '\n'), 101);
}

TEST_F(CliTest, CompareAccountingAndReferences) {
  ASSERT_EQ(run("compare", config_file("demo", R"({"preset": "single-qubit-demo", "step": 0.001})"),
                dir_ / "out"),
            kExitOk);
  const auto rows = csv_rows(dir_ / "out" / "compare.csv");
  for (const char* name : {"zero", "pointwise", "hjb1"}) {
    ASSERT_TRUE(rows.count(name)) << name;
    const auto& row = rows.at(name);
    const double delta = std::stod(row[1]), penalty = std::stod(row[2]), phi = std::stod(row[3]);
    EXPECT_LE(std::abs(phi - delta - penalty), 1e-10 * std::max(1.0, std::abs(phi))) << name;
  }
  ASSERT_TRUE(rows.count("psi0_reference"));
  ASSERT_TRUE(rows.count("first_order_reference"));
  const double zero_phi = std::stod(rows.at("zero")[3]);
  const double psi0 = std::stod(rows.at("psi0_reference")[3]);
  EXPECT_LE(std::abs(zero_phi - psi0), 1e-6 * std::abs(psi0));
  // Controls lower the cost below the uncontrolled value.
  EXPECT_LT(std::stod(rows.at("pointwise")[3]), zero_phi);
  EXPECT_LT(std::stod(rows.at("hjb1")[3]), zero_phi);
  EXPECT_TRUE(fs::exists(dir_ / "out" / "eps_sweep.csv"));
}

TEST_F(CliTest, CompareWithoutControlAuthority) {
  const std::string json =
      R"({"preset": "single-qubit-demo", "K": [[0, 0, 0], [0, 0, 0], [0, 0, 0]], "step": 0.001})";
  ASSERT_EQ(run("compare", config_file("inert", json), dir_ / "out"), kExitOk);
  const auto rows = csv_rows(dir_ / "out" / "compare.csv");
  const double psi0 = std::stod(rows.at("psi0_reference")[3]);
  for (const char* name : {"zero", "pointwise", "hjb1"}) {
    EXPECT_LE(std::abs(std::stod(rows.at(name)[3]) - psi0), 1e-6 * std::abs(psi0)) << name;
  }
}

TEST_F(CliTest, CompareNeedsShapeScalePenalty) {
  const std::string json =
      R"({"preset": "single-qubit-demo", "penalty": {"Pi": [[1, 0, 0], [0, 1, 0], [0, 0, 1]]}})";
  EXPECT_EQ(run("compare", config_file("pi", json), dir_ / "out"), kExitValidation);
}

TEST_F(CliTest, HjbResidualTable) {
  std::string report;
  ASSERT_EQ(run("hjb", config_file("demo", R"({"preset": "single-qubit-demo", "step": 0.002})"),
                dir_ / "out", &report),
            kExitOk)
      << report;
  EXPECT_NE(report.find("psi0(0,z0)"), std::string::npos);
  EXPECT_NE(report.find("psi1(0,z0)"), std::string::npos);
  const auto rows = csv_rows(dir_ / "out" / "hjb_residuals.csv");
  ASSERT_EQ(rows.size(), 4u);
  int ratios = 0;
  for (const auto& [key, row] : rows) {
    if (key == "eps" || row.size() < 4) continue;
    const double ratio = std::stod(row[3]);
    EXPECT_GE(ratio, 3.5);
    EXPECT_LE(ratio, 4.5);
    ++ratios;
  }
  EXPECT_EQ(ratios, 2);
}

TEST_F(CliTest, HjbWithoutControlAuthority) {
  const std::string json =
      R"({"preset": "single-qubit-demo", "K": [[0, 0, 0], [0, 0, 0], [0, 0, 0]], "step": 0.002})";
  ASSERT_EQ(run("hjb", config_file("inert", json), dir_ / "out"), kExitOk);
  const auto rows = csv_rows(dir_ / "out" / "hjb_residuals.csv");
  for (const auto& [key, row] : rows) {
    if (key == "eps") continue;
    EXPECT_LE(std::stod(row[1]), 1e-8);
  }
}

TEST_F(CliTest, OracleRows) {
  for (const char* control : {"zero", "pointwise"}) {
    std::string report;
    const std::string json = std::string(R"({"preset": "single-qubit-demo", "control": ")") +
                             control + R"(", "step": 0.001})";
    EXPECT_EQ(run("oracle", config_file(control, json), dir_ / "out", &report), kExitOk)
        << report;
    for (const char* name : {"drift", "diffusion", "mean-path", "two-point-path"}) {
      EXPECT_NE(report.find(name), std::string::npos) << name;
    }
    EXPECT_EQ(report.find("FAIL"), std::string::npos) << report;
  }
}

TEST_F(CliTest, ExitCodes) {
  const fs::path demo = config_file("demo", R"({"preset": "single-qubit-demo"})");
  EXPECT_EQ(run("launch", demo, dir_ / "out"), kExitUsage);
  EXPECT_EQ(run("simulate", dir_ / "missing.json", dir_ / "out"), kExitValidation);
  EXPECT_EQ(run("simulate", config_file("broken", "{\"preset\": 3}"), dir_ / "out"),
            kExitValidation);
  const fs::path missing_file = config_file(
      "nofile", R"({"preset": "single-qubit-demo", "control": "file:absent.csv"})");
  EXPECT_EQ(run("simulate", missing_file, dir_ / "out"), kExitValidation);
}

}  // namespace
}  // namespace qmem::cli
