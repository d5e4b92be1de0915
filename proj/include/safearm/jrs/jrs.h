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

// Per-joint reachable sets of (cos q, sin q, k_v, k_a) over the time grid,
// for every trajectory with parameters in a JointParamBox and q(0) = 0.

#ifndef SAFEARM_JRS_JRS_H_
#define SAFEARM_JRS_JRS_H_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "safearm/geom/zonotope.h"
#include "safearm/traj/trajectory.h"

namespace safearm::jrs {

// Generator layout of every JRS zonotope.
inline constexpr int kVelGen = 0;       // id Kv(0); only nonzero k_v entry
inline constexpr int kAccGen = 1;       // id Ka(0); only nonzero k_a entry
inline constexpr int kCosErrGen = 2;    // id Generic(2n)
inline constexpr int kSinErrGen = 3;    // id Generic(2n + 1)
inline constexpr int kJrsDim = 4;

struct JrsSequence {
  traj::TimingConfig timing;
  traj::JointParamBox box;
  // zonos[n] encloses the interval [n dt, (n + 1) dt].
  std::vector<geom::Zonotope> zonos;
  // Remainder radius of the error generators, per time index.
  std::vector<double> error_radius;

  bool operator==(const JrsSequence&) const = default;
};

struct BankParams {
  int n_jrs = 400;
  double dq_lim = 0.0;
  double ddq_lim = 0.0;
  double r_a1 = 0.0;
  double r_a2 = 0.0;
  traj::TimingConfig timing;

  bool operator==(const BankParams&) const = default;
};

struct JrsBank {
  BankParams params;
  // boundaries[i], boundaries[i + 1] delimit the k_v interval of sequence i.
  std::vector<double> boundaries;
  std::vector<JrsSequence> sequences;

  int IntervalIndex(double dq0) const;
  bool operator==(const JrsBank&) const = default;
};

JrsSequence ComputeJrs(const traj::JointParamBox& box,
                       const traj::TimingConfig& timing);

struct ContainmentReport {
  std::int64_t samples = 0;
  std::int64_t violations = 0;
  // Largest gauge minus one over all samples; positive means outside.
  double max_margin = -1.0;
};

ContainmentReport ValidateContainment(const JrsSequence& seq, int n_samples,
                                      std::uint64_t rng_seed);

// validation_samples > 0 runs ValidateContainment on every sequence and
// throws std::runtime_error naming the first failing interval.
JrsBank BuildBank(const BankParams& params, int validation_samples = 1000,
                  int num_threads = 0);

// Lower-indexed interval on ties; throws if |dq0| > dq_lim.
const JrsSequence& SelectJrs(const JrsBank& bank, double dq0);

void SaveBank(const JrsBank& bank, const std::string& path);
JrsBank LoadBank(const std::string& path);

class BankFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace safearm::jrs

#endif  // SAFEARM_JRS_JRS_H_
