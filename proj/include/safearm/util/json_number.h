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

#ifndef SAFEARM_UTIL_JSON_NUMBER_H_
#define SAFEARM_UTIL_JSON_NUMBER_H_

#include <string>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

namespace safearm::util {

// Parses a JSON number or a string holding a product/quotient of numbers,
// "pi" and "inf", optionally negated: "pi/24", "-inf", "2*pi/3", "0x1p-3".
// Throws std::invalid_argument on anything else.
double ParseNumber(const nlohmann::json& j);
double ParseNumberString(const std::string& s);

Eigen::VectorXd ParseVector(const nlohmann::json& j);
Eigen::VectorXd ParseVector(const nlohmann::json& j, int expected_size);

// Bit-exact text form of a double.
std::string HexDouble(double v);

}  // namespace safearm::util

#endif  // SAFEARM_UTIL_JSON_NUMBER_H_
