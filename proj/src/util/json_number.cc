// Copyright 2026 The safearm Authors
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

#include "safearm/util/json_number.h"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace safearm::util {
namespace {

double ParseAtom(const std::string& s) {
  if (s == "pi") return std::numbers::pi;
  if (s == "inf") return std::numeric_limits<double>::infinity();
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw std::invalid_argument("cannot parse number '" + s + "'");
  }
  return v;
}

}  // namespace

double ParseNumberString(const std::string& raw) {
  std::string s;
  for (char c : raw) {
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  }
  double sign = 1.0;
  std::size_t pos = 0;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    sign = s[0] == '-' ? -1.0 : 1.0;
    pos = 1;
  }
  double value = 1.0;
  char op = '*';
  while (pos <= s.size()) {
    std::size_t next = s.find_first_of("*/", pos);
    if (next == std::string::npos) next = s.size();
    const double atom = ParseAtom(s.substr(pos, next - pos));
    value = op == '*' ? value * atom : value / atom;
    if (next == s.size()) break;
    op = s[next];
    pos = next + 1;
  }
  return sign * value;
}

double ParseNumber(const nlohmann::json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return ParseNumberString(j.get<std::string>());
  throw std::invalid_argument("expected a number, got " + j.dump());
}

Eigen::VectorXd ParseVector(const nlohmann::json& j) {
  if (!j.is_array()) throw std::invalid_argument("expected an array, got " + j.dump());
  Eigen::VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v(i) = ParseNumber(j[i]);
  return v;
}

Eigen::VectorXd ParseVector(const nlohmann::json& j, int expected_size) {
  Eigen::VectorXd v = ParseVector(j);
  if (v.size() != expected_size) {
    throw std::invalid_argument("expected " + std::to_string(expected_size) +
                                " entries, got " + j.dump());
  }
  return v;
}

std::string HexDouble(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%a", v);
  return buf;
}

}  // namespace safearm::util
