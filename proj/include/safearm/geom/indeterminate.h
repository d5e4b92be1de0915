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

#ifndef SAFEARM_GEOM_INDETERMINATE_H_
#define SAFEARM_GEOM_INDETERMINATE_H_

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace safearm::geom {

enum class FactorKind : std::uint8_t { kKv = 0, kKa = 1, kGeneric = 2 };

// Label of a symbolic coefficient ranging over [-1, 1].
//
// Velocity and acceleration parameter labels are keyed by joint alone, so a
// slice at one joint's parameter value acts on every time step at once.
// Generic labels (error terms, link volumes, obstacles, reduction boxes) are
// keyed by uid alone.
struct IndeterminateId {
  FactorKind kind = FactorKind::kGeneric;
  int joint = -1;
  std::uint64_t uid = 0;

  static IndeterminateId Kv(int joint) { return {FactorKind::kKv, joint, 0}; }
  static IndeterminateId Ka(int joint) { return {FactorKind::kKa, joint, 0}; }
  static IndeterminateId Generic(std::uint64_t uid) {
    return {FactorKind::kGeneric, -1, uid};
  }

  bool is_parameter() const { return kind != FactorKind::kGeneric; }

  friend auto operator<=>(const IndeterminateId&,
                          const IndeterminateId&) = default;
  friend bool operator==(const IndeterminateId&,
                         const IndeterminateId&) = default;

  std::string ToString() const;
};

// Multiset of factors of one generator, kept sorted.
using FactorSet = std::vector<IndeterminateId>;

FactorSet MakeFactorSet(std::span<const IndeterminateId> ids);
FactorSet UnionFactors(const FactorSet& a, const FactorSet& b);

// True iff at least one factor is a trajectory-parameter label.
bool IsKSliceable(const FactorSet& factors);
// True iff every factor is a trajectory-parameter label.
bool IsFullyKSliceable(const FactorSet& factors);

}  // namespace safearm::geom

#endif  // SAFEARM_GEOM_INDETERMINATE_H_
