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

// Conservative set arithmetic on zonotopes, matrix zonotopes and
// rotatotopes. All functions are pure; inputs are never modified.

#ifndef SAFEARM_GEOM_SET_OPS_H_
#define SAFEARM_GEOM_SET_OPS_H_

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "safearm/geom/indeterminate.h"
#include "safearm/geom/zonotope.h"

namespace safearm::geom {

// Boundary tolerance for membership and intersection, in workspace meters.
inline constexpr double kMembershipTol = 1e-9;
// Magnitude of the axis-aligned generators added to rank-deficient
// zonotopes before halfspace conversion.
inline constexpr double kDegenerateInflation = 1e-8;
// Relative threshold below which two generators count as parallel.
inline constexpr double kParallelTol = 1e-12;

class DegenerateZonotopeError : public std::runtime_error {
 public:
  explicit DegenerateZonotopeError(const std::string& what)
      : std::runtime_error(what) {}
};

Zonotope MinkowskiSum(const Zonotope& x, const Zonotope& y);
Rotatotope MinkowskiSum(const Rotatotope& x, const Rotatotope& y);

Zonotope LinearMap(const Eigen::MatrixXd& a, const Zonotope& z);
Rotatotope LinearMap(const Eigen::MatrixXd& a, const Rotatotope& z);

// Center and generators multiplied by -1; factors preserved.
Rotatotope Negate(const Rotatotope& z);

// Evaluates the listed indeterminates. Every value must lie in [-1, 1]
// (std::invalid_argument otherwise). Generators left without factors are
// folded into the center.
Zonotope Slice(const Zonotope& z, std::span<const IndeterminateId> ids,
               std::span<const double> values);
Rotatotope Slice(const Rotatotope& z, std::span<const IndeterminateId> ids,
                 std::span<const double> values);

// Set of products {A z : A in m, z in r}; r must be 3-dimensional.
Rotatotope Product(const MatrixZonotope& m, const Rotatotope& r);
Rotatotope Product(const MatrixZonotope& m, const Zonotope& z);

// Same center and generators, each factor multiset relaxed to a fresh id.
Zonotope OverapproxAsZonotope(const Rotatotope& r);

enum class ReducePolicy {
  // Keep the n_red largest generators by Euclidean norm.
  kByNorm,
  // Keep fully k-sliceable generators first, then the largest others.
  kPreserveSliceable,
};

// Keeps n_red generators and encloses the rest in an axis-aligned box of
// fresh-id generators. Returns the input unchanged when it already has at
// most n_red generators.
Zonotope Reduce(const Zonotope& z, int n_red);
Rotatotope Reduce(const Rotatotope& z, int n_red,
                  ReducePolicy policy = ReducePolicy::kByNorm);

// Drops zero generators and merges fully k-sliceable generators with
// identical factor multisets (their coefficients are the same parameter
// monomial). The represented set is unchanged.
Rotatotope MergeParameterMonomials(const Rotatotope& z);
// Drops zero generators and merges pairwise parallel ones. The represented
// set is unchanged; ids of merged generators are those of the first.
Zonotope MergeParallel(const Zonotope& z);

// Exact halfspace form of a full-dimensional 3-D zonotope. Throws
// DegenerateZonotopeError when the generators span fewer than 3 dimensions.
HalfspaceRep ComputeHalfspaceRep(const Zonotope& z);
// As above, but rank-deficient inputs are first grown by
// kDegenerateInflation along each axis (result.inflated is set).
HalfspaceRep ComputeHalfspaceRepInflated(const Zonotope& z);
bool IsFullDimensional(const Zonotope& z);

// Intersection test: true iff y's center lies in x buffered by
// y's generators. Both must be 3-D.
bool ZonoIntersect(const Zonotope& x, const Zonotope& y);

// Linear-feasibility membership: exists beta in [-1,1]^p with
// c + G beta = p, up to `tol`.
bool ContainsPoint(const Zonotope& z, const Eigen::VectorXd& p,
                   double tol = kMembershipTol);
// Smallest s >= 0 with p in c + s * (G [-1,1]^p); +inf if unreachable.
double Gauge(const Zonotope& z, const Eigen::VectorXd& p);

double SupportFunction(const Zonotope& z, const Eigen::VectorXd& d);
double SupportFunction(const Rotatotope& z, const Eigen::VectorXd& d);

// Largest generic uid present, or -1 cast to int64 if there is none.
std::int64_t MaxGenericUid(const Zonotope& z);
std::int64_t MaxGenericUid(const Rotatotope& z);

nlohmann::json ToJson(const IndeterminateId& id);
IndeterminateId IdFromJson(const nlohmann::json& j);
nlohmann::json ToJson(const Zonotope& z);
nlohmann::json ToJson(const Rotatotope& z);
nlohmann::json ToJson(const MatrixZonotope& m);

}  // namespace safearm::geom

#endif  // SAFEARM_GEOM_SET_OPS_H_
