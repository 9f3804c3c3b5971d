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
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "qmem/cli.hpp"

namespace qmem::cli {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) {
    while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) {
      field.pop_back();
    }
    while (!field.empty() && field.front() == ' ') field.erase(0, 1);
    fields.push_back(field);
  }
  return fields;
}

double parse_double(const std::string& text, const std::string& where) {
  char* end = nullptr;
  const double x = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || !std::isfinite(x)) {
    throw ConfigError(where, "expected a finite number, got \"" + text + "\"");
  }
  return x;
}

}  // namespace

std::string format_number(double x) {
  if (x == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

ControlSignal load_control_csv(const std::filesystem::path& file, Index r) {
  std::ifstream in(file);
  const std::string name = "control file " + file.string();
  if (!in) throw ConfigError("control", "cannot read " + file.string());
  std::string line;
  if (!std::getline(in, line)) throw ConfigError(name, "empty file");
  const auto header = split_csv_line(line);
  if (header.size() != static_cast<std::size_t>(r) + 1 || header[0] != "t") {
    throw ConfigError(name, "header must be t,U_1..U_" + std::to_string(r));
  }
  std::vector<double> times;
  std::vector<Vec> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv_line(line);
    const std::string where = name + ":" + std::to_string(line_no);
    if (fields.size() != header.size()) {
      throw ConfigError(where, "expected " + std::to_string(header.size()) +
                                   " fields");
    }
    times.push_back(parse_double(fields[0], where));
    Vec u(r);
    for (Index k = 0; k < r; ++k) {
      u(k) = parse_double(fields[static_cast<std::size_t>(k) + 1], where);
    }
    rows.push_back(std::move(u));
  }
  if (times.size() < 2) throw ConfigError(name, "needs at least two samples");
  const double step = times[1] - times[0];
  if (!(step > 0.0)) throw ConfigError(name, "times must increase");
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double expected = times[0] + static_cast<double>(i) * step;
    if (std::abs(times[i] - expected) > 1e-9 * std::max(1.0, std::abs(expected))) {
      throw ConfigError(name, "times must be uniformly spaced");
    }
  }
  Mat values(r, static_cast<Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    values.col(static_cast<Index>(i)) = rows[i];
  }
  return ControlSignal::sampled(times[0], step, std::move(values));
}

}  // namespace qmem::cli
