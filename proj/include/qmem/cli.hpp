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

// Batch front end: JSON scenario configs, the five commands and their CSV
// output. Each command returns a process exit code.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qmem/coefficients.hpp"
#include "qmem/control.hpp"
#include "qmem/error.hpp"
#include "qmem/pointwise.hpp"

namespace qmem::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumeric = 3;
inline constexpr int kExitUsage = 64;

/// Malformed config; `path()` names the offending field, e.g. "M[1][0]".
class ConfigError : public InvalidArgument {
 public:
  ConfigError(const std::string& path, const std::string& what)
      : InvalidArgument(path + ": " + what), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct ScenarioConfig {
  int qubits = 1;
  Vec E_star;
  Mat K;
  Mat M;
  Vec N;
  Mat F;
  std::optional<Vec> mu0;
  std::optional<CMat> rho0;
  std::optional<Mat> Pi;
  std::optional<Mat> Gamma;
  std::optional<double> epsilon;
  double horizon = 1.0;
  std::optional<double> step;
  std::string control = "zero";
  std::string output = "qmem-out";
  std::uint64_t seed = 0;
  bool emit_z = false;
  /// Directory that relative `file:` controls are resolved against.
  std::filesystem::path base_dir;

  /// step, or horizon / 2000 when absent.
  double dt() const;
};

inline constexpr std::string_view kSingleQubitPreset = "single-qubit-demo";

ScenarioConfig preset(std::string_view name);

/// Parses JSON text. A "preset" key expands first; other keys override it.
ScenarioConfig parse_config(const std::string& text,
                            const std::filesystem::path& base_dir = {});
ScenarioConfig load_config(const std::filesystem::path& file);

/// Canonical JSON: fixed key order, preset expanded, default step resolved.
std::string serialize_config(const ScenarioConfig& config);

/// Basis, structure constants and physical data; runs validate_spec.
SystemSpec build_system(const ScenarioConfig& config);

/// Throws ConfigError when no penalty is configured.
PenaltyWeights penalty_weights(const ScenarioConfig& config);

/// Reads `t,U_1..U_r` rows with uniform t spacing.
ControlSignal load_control_csv(const std::filesystem::path& file, Index r);

/// %.17g with negative zero printed as 0.
std::string format_number(double x);

struct CommandOptions {
  std::optional<std::filesystem::path> out_dir;
  std::optional<double> dt;
  std::optional<double> eps;
};

/// Applies --dt / --eps overrides and re-checks the step bounds.
ScenarioConfig apply_overrides(ScenarioConfig config,
                               const CommandOptions& options);

int cmd_validate(const ScenarioConfig& config, std::ostream& report);
int cmd_simulate(const ScenarioConfig& config, const CommandOptions& options,
                 std::ostream& report);
int cmd_compare(const ScenarioConfig& config, const CommandOptions& options,
                std::ostream& report);
int cmd_hjb(const ScenarioConfig& config, const CommandOptions& options,
            std::ostream& report);
int cmd_oracle(const ScenarioConfig& config, const CommandOptions& options,
               std::ostream& report);

/// Loads the config, dispatches by name and maps errors to exit codes.
int run_command(std::string_view command,
                const std::filesystem::path& config_file,
                const CommandOptions& options, std::ostream& report,
                std::ostream& diagnostics);

}  // namespace qmem::cli
