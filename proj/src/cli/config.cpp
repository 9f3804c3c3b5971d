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
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "qmem/cli.hpp"
#include "qmem/structure.hpp"

namespace qmem::cli {

namespace {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

double to_number(const Json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) throw ConfigError(path, "expected a finite number");
  return x;
}

Vec to_vector(const Json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path, "expected an array of numbers");
  Vec v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Index>(i)) = to_number(j[i], path + "[" + std::to_string(i) + "]");
  }
  return v;
}

Mat to_matrix(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) {
    throw ConfigError(path, "expected a non-empty array of rows");
  }
  const std::size_t rows = j.size();
  std::size_t cols = 0;
  for (std::size_t i = 0; i < rows; ++i) {
    const std::string row_path = path + "[" + std::to_string(i) + "]";
    if (!j[i].is_array()) throw ConfigError(row_path, "expected a row array");
    if (i == 0) cols = j[i].size();
    if (j[i].size() != cols || cols == 0) {
      throw ConfigError(row_path, "rows must be non-empty and of equal length");
    }
  }
  Mat m(static_cast<Index>(rows), static_cast<Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t k = 0; k < cols; ++k) {
      m(static_cast<Index>(i), static_cast<Index>(k)) = to_number(
          j[i][k], path + "[" + std::to_string(i) + "][" + std::to_string(k) + "]");
    }
  }
  return m;
}

OrderedJson vector_json(const Vec& v) {
  OrderedJson out = OrderedJson::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

OrderedJson matrix_json(const Mat& m) {
  OrderedJson out = OrderedJson::array();
  for (Index i = 0; i < m.rows(); ++i) {
    OrderedJson row = OrderedJson::array();
    for (Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    out.push_back(std::move(row));
  }
  return out;
}

void check_keys(const Json& j, const std::string& path,
                std::initializer_list<const char*> allowed) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* key : allowed) known = known || it.key() == key;
    if (!known) throw ConfigError(path + it.key(), "unknown key");
  }
}

void parse_initial_state(const Json& j, ScenarioConfig& config) {
  if (!j.is_object()) throw ConfigError("initial_state", "expected an object");
  check_keys(j, "initial_state.", {"mu0", "rho0"});
  config.mu0.reset();
  config.rho0.reset();
  if (j.contains("mu0")) config.mu0 = to_vector(j["mu0"], "initial_state.mu0");
  if (j.contains("rho0")) {
    const Json& rho = j["rho0"];
    if (!rho.is_object() || !rho.contains("re")) {
      throw ConfigError("initial_state.rho0", "expected {\"re\": [[..]], \"im\": [[..]]}");
    }
    check_keys(rho, "initial_state.rho0.", {"re", "im"});
    const Mat re = to_matrix(rho["re"], "initial_state.rho0.re");
    Mat im = Mat::Zero(re.rows(), re.cols());
    if (rho.contains("im")) im = to_matrix(rho["im"], "initial_state.rho0.im");
    if (im.rows() != re.rows() || im.cols() != re.cols()) {
      throw ConfigError("initial_state.rho0.im", "shape differs from re");
    }
    CMat m(re.rows(), re.cols());
    m.real() = re;
    m.imag() = im;
    config.rho0 = m;
  }
  if (!config.mu0 && !config.rho0) {
    throw ConfigError("initial_state", "needs mu0 or rho0");
  }
}

void parse_penalty(const Json& j, ScenarioConfig& config) {
  if (!j.is_object()) throw ConfigError("penalty", "expected an object");
  check_keys(j, "penalty.", {"Pi", "Gamma", "epsilon"});
  config.Pi.reset();
  config.Gamma.reset();
  config.epsilon.reset();
  if (j.contains("Pi")) {
    if (j.contains("Gamma") || j.contains("epsilon")) {
      throw ConfigError("penalty", "give either Pi or (Gamma, epsilon)");
    }
    config.Pi = to_matrix(j["Pi"], "penalty.Pi");
    return;
  }
  if (!j.contains("Gamma") || !j.contains("epsilon")) {
    throw ConfigError("penalty", "needs Pi or both Gamma and epsilon");
  }
  config.Gamma = to_matrix(j["Gamma"], "penalty.Gamma");
  config.epsilon = to_number(j["epsilon"], "penalty.epsilon");
  if (!(*config.epsilon > 0.0)) {
    throw ConfigError("penalty.epsilon", "must be positive");
  }
}

void check_step(const ScenarioConfig& config) {
  if (!(config.horizon > 0.0)) throw ConfigError("horizon", "must be positive");
  const double dt = config.dt();
  if (!(dt > 0.0) || dt > config.horizon / 10.0 * (1.0 + 1e-12)) {
    throw ConfigError("step", "must lie in (0, horizon / 10]");
  }
}

void check_control(const std::string& control) {
  if (control == "zero" || control == "pointwise" || control == "hjb1") return;
  if (control.rfind("file:", 0) == 0 && control.size() > 5) return;
  throw ConfigError("control", "expected zero, pointwise, hjb1 or file:<path>");
}

}  // namespace

double ScenarioConfig::dt() const {
  return step ? *step : horizon / 2000.0;
}

ScenarioConfig preset(std::string_view name) {
  if (name != kSingleQubitPreset) {
    throw ConfigError("preset", "unknown preset \"" + std::string(name) + "\"");
  }
  ScenarioConfig c;
  c.qubits = 1;
  c.E_star = Vec::Unit(3, 2);
  c.K = Mat::Identity(3, 3);
  c.M = Mat::Zero(2, 3);
  c.M(0, 0) = 1.0;
  c.N = Vec::Zero(2);
  c.F = Mat::Identity(3, 3);
  c.mu0 = Vec::Unit(3, 2);
  c.horizon = 1.0;
  c.Gamma = Mat::Identity(3, 3);
  c.epsilon = 0.05;
  return c;
}

ScenarioConfig parse_config(const std::string& text,
                            const std::filesystem::path& base_dir) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError("<root>", std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("<root>", "expected a JSON object");
  check_keys(j, "", {"preset", "qubits", "E_star", "K", "M", "N", "F",
                     "initial_state", "penalty", "horizon", "step", "control",
                     "output", "seed", "emit_z"});

  ScenarioConfig c;
  bool from_preset = false;
  if (j.contains("preset")) {
    if (!j["preset"].is_string()) throw ConfigError("preset", "expected a string");
    c = preset(j["preset"].get<std::string>());
    from_preset = true;
  }
  c.base_dir = base_dir;

  auto require = [&](const char* key) {
    if (!from_preset && !j.contains(key)) throw ConfigError(key, "missing");
  };
  require("qubits");
  require("E_star");
  require("K");
  require("M");
  require("N");
  require("F");
  require("initial_state");

  if (j.contains("qubits")) {
    const Json& q = j["qubits"];
    if (!q.is_number_integer() || q.get<long long>() < 1) {
      throw ConfigError("qubits", "expected a positive integer");
    }
    c.qubits = static_cast<int>(q.get<long long>());
  }
  if (j.contains("E_star")) c.E_star = to_vector(j["E_star"], "E_star");
  if (j.contains("K")) c.K = to_matrix(j["K"], "K");
  if (j.contains("M")) c.M = to_matrix(j["M"], "M");
  if (j.contains("N")) c.N = to_vector(j["N"], "N");
  if (j.contains("F")) c.F = to_matrix(j["F"], "F");
  if (j.contains("initial_state")) parse_initial_state(j["initial_state"], c);
  if (j.contains("penalty")) parse_penalty(j["penalty"], c);
  if (j.contains("horizon")) c.horizon = to_number(j["horizon"], "horizon");
  if (j.contains("step")) c.step = to_number(j["step"], "step");
  if (j.contains("control")) {
    if (!j["control"].is_string()) throw ConfigError("control", "expected a string");
    c.control = j["control"].get<std::string>();
  }
  if (j.contains("output")) {
    if (!j["output"].is_string()) throw ConfigError("output", "expected a string");
    c.output = j["output"].get<std::string>();
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) {
      throw ConfigError("seed", "expected a non-negative integer");
    }
    c.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("emit_z")) {
    if (!j["emit_z"].is_boolean()) throw ConfigError("emit_z", "expected a boolean");
    c.emit_z = j["emit_z"].get<bool>();
  }
  check_step(c);
  check_control(c.control);
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("<file>", "cannot read " + file.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), file.parent_path());
}

std::string serialize_config(const ScenarioConfig& c) {
  OrderedJson j;
  j["qubits"] = c.qubits;
  j["E_star"] = vector_json(c.E_star);
  j["K"] = matrix_json(c.K);
  j["M"] = matrix_json(c.M);
  j["N"] = vector_json(c.N);
  j["F"] = matrix_json(c.F);
  OrderedJson state = OrderedJson::object();
  if (c.mu0) state["mu0"] = vector_json(*c.mu0);
  if (c.rho0) {
    state["rho0"]["re"] = matrix_json(c.rho0->real());
    state["rho0"]["im"] = matrix_json(c.rho0->imag());
  }
  j["initial_state"] = state;
  if (c.Pi) {
    j["penalty"]["Pi"] = matrix_json(*c.Pi);
  } else if (c.Gamma && c.epsilon) {
    j["penalty"]["Gamma"] = matrix_json(*c.Gamma);
    j["penalty"]["epsilon"] = *c.epsilon;
  }
  j["horizon"] = c.horizon;
  j["step"] = c.dt();
  j["control"] = c.control;
  j["output"] = c.output;
  j["seed"] = c.seed;
  j["emit_z"] = c.emit_z;
  return j.dump(2) + "\n";
}

SystemSpec build_system(const ScenarioConfig& c) {
  SystemSpec spec;
  spec.basis = pauli_basis(c.qubits);
  spec.sc = derive_structure(spec.basis);
  spec.E_star = c.E_star;
  spec.K = c.K;
  spec.M = c.M;
  spec.N = c.N;
  spec.F = c.F;
  if (c.rho0) {
    validate_density(*c.rho0, spec.basis.dim);
    spec.rho0 = *c.rho0;
    spec.mu0 = c.mu0 ? *c.mu0 : mean_from_state(spec.basis, *c.rho0);
  } else {
    spec.mu0 = *c.mu0;
  }
  validate_spec(spec);
  return spec;
}

PenaltyWeights penalty_weights(const ScenarioConfig& c) {
  if (c.Pi) return PenaltyWeights::from_matrix(*c.Pi);
  if (c.Gamma && c.epsilon) {
    return PenaltyWeights::from_shape_scale(*c.Gamma, *c.epsilon);
  }
  throw ConfigError("penalty", "this command needs a penalty");
}

ScenarioConfig apply_overrides(ScenarioConfig config,
                               const CommandOptions& options) {
  if (options.dt) config.step = *options.dt;
  if (options.eps) {
    if (!config.Gamma) {
      throw ConfigError("penalty", "--eps needs a (Gamma, epsilon) penalty");
    }
    if (!(*options.eps > 0.0)) throw ConfigError("--eps", "must be positive");
    config.epsilon = *options.eps;
  }
  check_step(config);
  return config;
}

}  // namespace qmem::cli
