// Copyright 2026 The ChromaCycle Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "chromacycle/error.hpp"
#include "chromacycle/training.hpp"

namespace chromacycle {

namespace fs = std::filesystem;

void LossLog::append(int iteration, const std::string& name, double value) {
  if (!std::isfinite(value)) throw DivergenceError(iteration, name);
  for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
    if (it->name == name) {
      if (iteration <= it->iteration) {
        throw InvalidArgument("loss '" + name + "' logged out of order at iteration " +
                              std::to_string(iteration));
      }
      break;
    }
  }
  rows.push_back({iteration, name, value});
}

std::vector<double> LossLog::series(const std::string& name) const {
  std::vector<double> out;
  for (const auto& r : rows) {
    if (r.name == name) out.push_back(r.value);
  }
  return out;
}

std::vector<std::string> LossLog::names() const {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& r : rows) {
    if (seen.insert(r.name).second) out.push_back(r.name);
  }
  return out;
}

void write_loss_log(const LossLog& log, const fs::path& path) {
  std::vector<LossRow> rows = log.rows;
  std::stable_sort(rows.begin(), rows.end(),
                   [](const LossRow& a, const LossRow& b) { return a.iteration < b.iteration; });
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write loss log " + path.string());
  out << "iteration,name,value\n";
  char buf[64];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%.17g", r.value);
    out << r.iteration << ',' << r.name << ',' << buf << '\n';
  }
  if (!out) throw IoError("cannot write loss log " + path.string());
}

LossLog read_loss_log(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw FileNotFound("loss log not found: " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "iteration,name,value") {
    throw FormatError("loss log " + path.string() + " lacks the 'iteration,name,value' header");
  }
  LossLog log;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string::npos) {
      throw FormatError("loss log " + path.string() + ": malformed line " + std::to_string(line_no));
    }
    try {
      std::size_t used = 0;
      const std::string it_text = line.substr(0, c1);
      const int iteration = std::stoi(it_text, &used);
      if (used != it_text.size()) throw std::invalid_argument("iteration");
      const std::string value_text = line.substr(c2 + 1);
      const double value = std::stod(value_text, &used);
      if (used != value_text.size()) throw std::invalid_argument("value");
      log.rows.push_back({iteration, line.substr(c1 + 1, c2 - c1 - 1), value});
    } catch (const std::logic_error&) {
      throw FormatError("loss log " + path.string() + ": bad number on line " +
                        std::to_string(line_no));
    }
  }
  return log;
}

}  // namespace chromacycle
