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

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "qmem/aux_system.hpp"
#include "qmem/cli.hpp"
#include "qmem/hjb.hpp"
#include "qmem/linalg.hpp"
#include "qmem/lindblad.hpp"
#include "qmem/structure.hpp"
#include "qmem/tolerances.hpp"

namespace qmem::cli {

namespace {

namespace fs = std::filesystem;

struct Scenario {
  SystemSpec spec;
  Coefficients coeffs;
};

Scenario load_scenario(const ScenarioConfig& config) {
  Scenario s;
  s.spec = build_system(config);
  s.coeffs = build_coefficients(s.spec);
  spdlog::info("scenario: q = {}, n = {}, m = {}, r = {}", config.qubits,
               s.spec.n(), s.spec.m(), s.spec.r());
  return s;
}

fs::path output_dir(const ScenarioConfig& config, const CommandOptions& options) {
  const fs::path dir = options.out_dir ? *options.out_dir : fs::path(config.output);
  fs::create_directories(dir);
  return dir;
}

std::ofstream open_output(const fs::path& file) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + file.string());
  return out;
}

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out << ',';
    out << fields[i];
  }
  out << '\n';
}

void write_trajectory(const fs::path& file, const Trajectory& traj, Index r,
                      Index n, bool emit_z) {
  std::ofstream out = open_output(file);
  std::vector<std::string> header = {"t", "Delta", "penalty", "Phi"};
  for (Index k = 1; k <= r; ++k) header.push_back("U_" + std::to_string(k));
  if (emit_z) {
    for (Index j = 1; j <= n + 1; ++j) {
      for (Index i = 1; i <= n; ++i) {
        header.push_back("z_" + std::to_string(i) + "_" + std::to_string(j));
      }
    }
  }
  write_row(out, header);
  for (std::size_t s = 0; s < traj.size(); ++s) {
    std::vector<std::string> row = {
        format_number(traj.times[s]), format_number(traj.delta[s]),
        format_number(traj.penalty[s]), format_number(traj.phi[s])};
    for (Index k = 0; k < r; ++k) row.push_back(format_number(traj.U[s](k)));
    if (emit_z) {
      const Mat& z = traj.z[s];
      for (Index j = 0; j <= n; ++j) {
        for (Index i = 0; i < n; ++i) row.push_back(format_number(z(i, j)));
      }
    }
    write_row(out, row);
  }
}

/// Knot step for the first-order coefficients: the simulation step unless the
/// knot storage cap forces a coarser grid.
double first_order_step(Index n, double tau, double dt) {
  const double size = static_cast<double>(n * (n + 1));
  const double per_knot = size * size;
  const auto max_knots =
      static_cast<int>(static_cast<double>(kMaxFirstOrderDoubles) / per_knot);
  const int steps = std::min(grid_steps(0.0, tau, dt), std::max(1, max_knots - 1));
  return tau / steps;
}

struct HjbSetup {
  Mat gamma;
  double eps = 0.0;
  ValueExpansion expansion;
};

HjbSetup prepare_hjb(const ScenarioConfig& config, const Coefficients& coeffs) {
  if (!config.Gamma || !config.epsilon) {
    throw ConfigError("penalty", "this command needs a (Gamma, epsilon) penalty");
  }
  const double tau = config.horizon;
  HjbSetup setup{*config.Gamma, *config.epsilon,
                 ValueExpansion(coeffs, *config.Gamma, tau)};
  const double step = first_order_step(coeffs.n(), tau, config.dt());
  spdlog::info("solving first-order coefficients with step {}", step);
  setup.expansion.set_first_order(solve_psi1(coeffs, setup.gamma, tau, step));
  return setup;
}

ControlSignal open_loop_control(const ScenarioConfig& config, Index r) {
  if (config.control == "zero") return ControlSignal::zero(r);
  if (config.control.rfind("file:", 0) == 0) {
    fs::path file = config.control.substr(5);
    if (file.is_relative()) file = config.base_dir / file;
    return load_control_csv(file, r);
  }
  throw ConfigError("control", "\"" + config.control + "\" is not open-loop");
}

/// Trajectory for any control kind; blow-up is reported through
/// Trajectory::blowup_time.
Trajectory run_control(const ScenarioConfig& config, const Scenario& s,
                       bool record_z) {
  const Index r = s.spec.r();
  SimulationOptions options;
  options.tau = config.horizon;
  options.dt = config.dt();
  options.record_z = record_z;
  options.throw_on_blowup = false;
  if (config.control == "pointwise") {
    const PenaltyWeights weights = penalty_weights(config);
    options.penalty_weight = weights.pi();
    return simulate(s.coeffs, pointwise_control(s.coeffs, weights), options);
  }
  if (config.control == "hjb1") {
    const HjbSetup setup = prepare_hjb(config, s.coeffs);
    const double eps = setup.eps;
    options.penalty_weight = setup.gamma / (2.0 * eps);
    const double tau = config.horizon;
    const auto law = ControlSignal::state_feedback(
        r, [&](double t, const Mat& z) {
          return first_order_control(setup.expansion, s.coeffs, eps,
                                     std::min(t, tau), z);
        });
    return simulate(s.coeffs, law, options);
  }
  if (config.Pi || config.Gamma) options.penalty_weight = penalty_weights(config).pi();
  return simulate(s.coeffs, open_loop_control(config, r), options);
}

std::string pass_fail(bool ok) { return ok ? "PASS" : "FAIL"; }

}  // namespace

int cmd_validate(const ScenarioConfig& config, std::ostream& report) {
  bool ok = true;
  auto line = [&](const std::string& name, bool pass, const std::string& detail) {
    report << fmt::format("{:<22} {}  {}\n", name, pass_fail(pass), detail);
    ok = ok && pass;
  };

  Scenario s;
  try {
    s.spec = build_system(config);
  } catch (const SelectionRankError& e) {
    line("selection-rank", false, e.what());
    return kExitValidation;
  } catch (const StateValidationError& e) {
    line("state-admissibility", false, e.what());
    return kExitValidation;
  } catch (const CapacityError& e) {
    line("basis-size", false, e.what());
    return kExitValidation;
  } catch (const InvalidArgument& e) {
    line("shape", false, e.what());
    return kExitValidation;
  }
  line("shape", true, "");
  line("selection-rank", true, "");
  const AdmissibilityReport adm = check_admissible(s.spec.sc, s.spec.mu0);
  line("state-admissibility", adm.admissible,
       fmt::format("min covariance eigenvalue {:.3e}", adm.min_eigenvalue));

  const AlgebraResiduals alg = algebra_residuals(s.spec.basis, s.spec.sc);
  line("closure", alg.closure <= tol::kStructural,
       fmt::format("max error {:.3e}", alg.closure));
  line("ccr", alg.ccr <= tol::kStructural, fmt::format("max error {:.3e}", alg.ccr));

  if (config.Pi || config.Gamma) {
    try {
      (void)penalty_weights(config);
      line("penalty", true, "");
    } catch (const InvalidArgument& e) {
      line("penalty", false, e.what());
    }
  }

  s.coeffs = build_coefficients(s.spec);
  const FG fg = eval_fg(s.coeffs, s.coeffs.z0);
  const double g_max = fg.g.size() > 0 ? fg.g.cwiseAbs().maxCoeff() : 0.0;
  line("g(z0)=0", g_max <= tol::kGenerator, fmt::format("max |g| {:.3e}", g_max));
  line("f(z0)>=0", fg.f >= tol::kAdmissible, fmt::format("f {:.3e}", fg.f));

  if (config.qubits <= 2) {
    try {
      const DriftReport drift = drift_check(s.spec, s.coeffs, Vec::Zero(s.spec.r()));
      line("oracle-drift", drift.max_error <= 1e-10,
           fmt::format("max error {:.3e}", drift.max_error));
      const DiffusionReport diff = diffusion_check(s.spec, s.coeffs);
      line("oracle-diffusion", diff.max_error <= 1e-12,
           fmt::format("max error {:.3e}", diff.max_error));
    } catch (const ModelInconsistency& e) {
      line("oracle-span", false, e.what());
    }
  } else {
    report << fmt::format("{:<22} SKIP  oracle limited to two qubits\n", "oracle-drift");
  }
  return ok ? kExitOk : kExitValidation;
}

int cmd_simulate(const ScenarioConfig& config, const CommandOptions& options,
                 std::ostream& report) {
  const Scenario s = load_scenario(config);
  const fs::path dir = output_dir(config, options);
  const Trajectory traj = run_control(config, s, config.emit_z);
  const fs::path file = dir / "trajectory.csv";
  write_trajectory(file, traj, s.spec.r(), s.spec.n(), config.emit_z);
  if (!traj.complete()) {
    report << fmt::format("blow-up at t = {} ; partial trajectory in {}\n",
                          format_number(*traj.blowup_time), file.string());
    return kExitNumeric;
  }
  report << fmt::format("control   {}\nDelta(tau) {}\npenalty   {}\nPhi       {}\nwrote     {}\n",
                        config.control, format_number(traj.delta.back()),
                        format_number(traj.penalty.back()),
                        format_number(traj.phi.back()), file.string());
  return kExitOk;
}

int cmd_compare(const ScenarioConfig& config, const CommandOptions& options,
                std::ostream& report) {
  const Scenario s = load_scenario(config);
  const HjbSetup setup = prepare_hjb(config, s.coeffs);
  const double tau = config.horizon;
  const double dt = config.dt();
  const PenaltyWeights weights = PenaltyWeights::from_shape_scale(setup.gamma, setup.eps);

  struct Row {
    std::string name;
    double delta = 0.0, penalty = 0.0, phi = 0.0;
  };
  std::vector<Row> rows;

  SimulationOptions zero_options;
  zero_options.tau = tau;
  zero_options.dt = dt;
  zero_options.record_z = false;
  zero_options.penalty_weight = weights.pi();
  const Trajectory zero = simulate(s.coeffs, ControlSignal::zero(s.spec.r()), zero_options);
  rows.push_back({"zero", zero.delta.back(), zero.penalty.back(), zero.phi.back()});

  const PointwiseResult pw = simulate_pointwise(s.coeffs, weights, tau, dt, false);
  rows.push_back({"pointwise", pw.delta_tau, pw.trajectory.penalty.back(), pw.objective});

  const HjbRun hjb = simulate_hjb(setup.expansion, s.coeffs, setup.eps, tau, dt, false);
  rows.push_back({"hjb1", hjb.delta_tau, hjb.penalty, hjb.phi});

  const fs::path dir = output_dir(config, options);
  {
    std::ofstream out = open_output(dir / "compare.csv");
    write_row(out, {"row", "Delta_tau", "penalty", "Phi"});
    for (const Row& row : rows) {
      write_row(out, {row.name, format_number(row.delta), format_number(row.penalty),
                      format_number(row.phi)});
    }
    write_row(out, {"psi0_reference", "", "", format_number(hjb.psi0_at_start)});
    write_row(out, {"first_order_reference", "", "", format_number(hjb.reference)});
  }

  bool accounting_ok = true;
  report << fmt::format("{:<12} {:>24} {:>24} {:>24}\n", "control", "Delta(tau)",
                        "penalty", "Phi");
  for (const Row& row : rows) {
    accounting_ok = accounting_ok &&
                    std::abs(row.phi - row.delta - row.penalty) <= 1e-10 *
                        std::max(1.0, std::abs(row.phi));
    report << fmt::format("{:<12} {:>24} {:>24} {:>24}\n", row.name,
                          format_number(row.delta), format_number(row.penalty),
                          format_number(row.phi));
  }
  report << fmt::format("Psi0(0, z0)              {}\n", format_number(hjb.psi0_at_start));
  report << fmt::format("(Psi0 + eps Psi1)(0, z0) {}\n", format_number(hjb.reference));

  // First-order closed loop at eps, eps/2, eps/4 against its own reference.
  std::ofstream sweep = open_output(dir / "eps_sweep.csv");
  write_row(sweep, {"eps", "Phi_hjb1", "reference", "defect", "ratio"});
  report << "eps sweep (defect = |Phi_hjb1 - reference|):\n";
  double previous = std::nan("");
  for (int i = 0; i < 3; ++i) {
    const double eps = setup.eps / static_cast<double>(1 << i);
    const HjbRun run = simulate_hjb(setup.expansion, s.coeffs, eps, tau, dt, false);
    const double defect = std::abs(run.phi - run.reference);
    const double ratio = previous / defect;
    write_row(sweep, {format_number(eps), format_number(run.phi),
                      format_number(run.reference), format_number(defect),
                      std::isnan(ratio) ? "" : format_number(ratio)});
    report << fmt::format("  eps {:<10} defect {:<12.4e} ratio {}\n", eps, defect,
                          std::isnan(ratio) ? "-" : fmt::format("{:.3f}", ratio));
    previous = defect;
  }
  if (!accounting_ok) {
    report << "accounting identity Phi = Delta(tau) + penalty violated\n";
    return kExitValidation;
  }
  return kExitOk;
}

int cmd_hjb(const ScenarioConfig& config, const CommandOptions& options,
            std::ostream& report) {
  const Scenario s = load_scenario(config);
  const HjbSetup setup = prepare_hjb(config, s.coeffs);
  const double tau = config.horizon;
  const double dt = config.dt();

  // Residuals are sampled on the uncontrolled path at interior times.
  SimulationOptions zero_options;
  zero_options.tau = tau;
  zero_options.dt = dt;
  const Trajectory zero = simulate(s.coeffs, ControlSignal::zero(s.spec.r()), zero_options);
  std::vector<std::size_t> picks;
  for (const double frac : {0.25, 0.5, 0.75}) {
    picks.push_back(static_cast<std::size_t>(
        std::lround(frac * static_cast<double>(zero.size() - 1))));
  }

  const fs::path dir = output_dir(config, options);
  std::ofstream residuals = open_output(dir / "hjb_residuals.csv");
  std::ofstream pontryagin = open_output(dir / "hjb_pontryagin.csv");
  write_row(residuals, {"eps", "residual", "residual_exact_dt", "ratio"});
  write_row(pontryagin, {"eps", "drift", "ratio"});

  std::array<double, 3> eps_values{};
  std::array<double, 3> residual{};
  std::array<double, 3> exact{};
  std::array<double, 3> drift{};
  for (int i = 0; i < 3; ++i) {
    const double eps = setup.eps / static_cast<double>(1 << i);
    eps_values[i] = eps;
    for (const std::size_t k : picks) {
      const HjbResidual res =
          hjb_residual(setup.expansion, s.coeffs, zero.times[k], zero.z[k], eps);
      residual[i] = std::max(residual[i], res.value);
      exact[i] = std::max(exact[i], res.value_exact_dt);
    }
    const HjbRun run = simulate_hjb(setup.expansion, s.coeffs, eps, tau, dt, true);
    drift[i] = pontryagin_diagnostic(setup.expansion, s.coeffs, eps, run.trajectory);
  }

  const bool trivial = residual[0] <= 1e-8;
  bool ok = true;
  report << fmt::format("psi0(0,z0) {}\npsi1(0,z0) {}\n",
                        format_number(setup.expansion.psi0(0.0, s.coeffs.z0).value),
                        format_number(setup.expansion.psi1(0.0, s.coeffs.z0).value));
  report << fmt::format("{:<10} {:>14} {:>14} {:>8} {:>14} {:>8}\n", "eps", "residual",
                        "exact-dt", "ratio", "pontryagin", "ratio");
  for (int i = 0; i < 3; ++i) {
    const double ratio = i > 0 ? residual[i - 1] / residual[i] : std::nan("");
    const double p_ratio = i > 0 ? drift[i - 1] / drift[i] : std::nan("");
    if (i > 0 && !trivial) ok = ok && ratio >= 3.5 && ratio <= 4.5;
    write_row(residuals, {format_number(eps_values[i]), format_number(residual[i]),
                          format_number(exact[i]),
                          i > 0 ? format_number(ratio) : ""});
    write_row(pontryagin, {format_number(eps_values[i]), format_number(drift[i]),
                           i > 0 ? format_number(p_ratio) : ""});
    report << fmt::format("{:<10} {:>14.4e} {:>14.4e} {:>8} {:>14.4e} {:>8}\n",
                          eps_values[i], residual[i], exact[i],
                          i > 0 ? fmt::format("{:.3f}", ratio) : "-", drift[i],
                          i > 0 ? fmt::format("{:.3f}", p_ratio) : "-");
  }
  if (trivial) {
    report << "residual below 1e-8 at every eps: no control authority\n";
  }
  report << fmt::format("residual scaling {}\n", pass_fail(ok));
  return ok ? kExitOk : kExitValidation;
}

int cmd_oracle(const ScenarioConfig& config, const CommandOptions&,
               std::ostream& report) {
  const Scenario s = load_scenario(config);
  const double tau = config.horizon;
  const double dt = config.dt();
  ControlSignal control = ControlSignal::zero(s.spec.r());
  if (config.control == "pointwise" || config.control == "hjb1") {
    // Replay the closed-loop control as an open-loop sampled signal.
    const Trajectory traj = run_control(config, s, false);
    if (!traj.complete()) {
      throw NumericOverflow("closed-loop run blew up", *traj.blowup_time);
    }
    Mat values(s.spec.r(), static_cast<Index>(traj.size()));
    for (std::size_t i = 0; i < traj.size(); ++i) {
      values.col(static_cast<Index>(i)) = traj.U[i];
    }
    control = ControlSignal::sampled(0.0, tau / static_cast<double>(traj.size() - 1),
                                     std::move(values));
  } else {
    control = open_loop_control(config, s.spec.r());
  }
  OracleOptions oracle_options;
  oracle_options.tau = tau;
  oracle_options.dt = dt;
  const OracleSummary summary = run_oracle(s.spec, s.coeffs, control, oracle_options);
  const OracleTolerances tol;
  auto row = [&](const char* name, double value, double limit) {
    report << fmt::format("{:<16} {:>12.4e}  (tol {:.0e})  {}\n", name, value, limit,
                          pass_fail(value <= limit));
  };
  row("drift", summary.drift.max_error, tol.drift);
  row("diffusion", summary.diffusion.max_error, tol.diffusion);
  row("mean-path", summary.mean_path_error, tol.mean_path);
  row("two-point-path", summary.two_point_error, tol.two_point);
  return summary.passes(tol) ? kExitOk : kExitValidation;
}

int run_command(std::string_view command, const fs::path& config_file,
                const CommandOptions& options, std::ostream& report,
                std::ostream& diagnostics) {
  using Command = int (*)(const ScenarioConfig&, const CommandOptions&, std::ostream&);
  Command fn = nullptr;
  if (command == "simulate") fn = &cmd_simulate;
  else if (command == "compare") fn = &cmd_compare;
  else if (command == "hjb") fn = &cmd_hjb;
  else if (command == "oracle") fn = &cmd_oracle;
  else if (command != "validate") {
    diagnostics << "unknown command \"" << command << "\"\n";
    return kExitUsage;
  }
  try {
    const ScenarioConfig config = apply_overrides(load_config(config_file), options);
    if (!fn) return cmd_validate(config, report);
    return fn(config, options, report);
  } catch (const NumericOverflow& e) {
    diagnostics << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const IntegratorError& e) {
    diagnostics << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const ConfigError& e) {
    diagnostics << "config error at " << e.what() << '\n';
    return kExitValidation;
  } catch (const Error& e) {
    diagnostics << "validation failure: " << e.what() << '\n';
    return kExitValidation;
  } catch (const fs::filesystem_error& e) {
    diagnostics << "i/o failure: " << e.what() << '\n';
    return kExitValidation;
  }
}

}  // namespace qmem::cli
