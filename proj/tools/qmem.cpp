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

#include <cstdlib>
#include <iostream>
#include <string>
#include <utility>

#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "qmem/cli.hpp"

namespace {

void configure_logging() {
  auto logger = spdlog::stderr_logger_st("qmem");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  const char* level = std::getenv("QMEM_LOG");
  spdlog::set_level(level ? spdlog::level::from_str(level) : spdlog::level::warn);
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();

  CLI::App app{"Quantum memory control: simulation, synthesis and checks"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_dir;
  double dt = 0.0;
  double eps = 0.0;

  const std::pair<const char*, const char*> commands[] = {
      {"validate", "check the algebra, initial state and generator expansions"},
      {"simulate", "integrate the deviation for the configured control"},
      {"compare", "zero, pointwise and first-order HJB controls side by side"},
      {"hjb", "Bellman expansion residual and Pontryagin drift scaling"},
      {"oracle", "compare moments against the density-matrix master equation"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("config", config_path, "scenario JSON")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--dt", dt, "integration step");
    sub->add_option("--eps", eps, "penalty scale epsilon");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return qmem::cli::kExitUsage;
  }

  CLI::App* chosen = app.get_subcommands().front();
  qmem::cli::CommandOptions options;
  if (chosen->count("--out") > 0) options.out_dir = out_dir;
  if (chosen->count("--dt") > 0) options.dt = dt;
  if (chosen->count("--eps") > 0) options.eps = eps;
  return qmem::cli::run_command(chosen->get_name(), config_path, options,
                                std::cout, std::cerr);
}
