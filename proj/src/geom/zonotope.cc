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

#include "safearm/geom/zonotope.h"

#include <algorithm>
#include <iterator>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "safearm/geom/indeterminate.h"

namespace safearm::geom {

std::string IndeterminateId::ToString() const {
  switch (kind) {
    case FactorKind::kKv:
      return "kv" + std::to_string(joint);
    case FactorKind::kKa:
      return "ka" + std::to_string(joint);
    case FactorKind::kGeneric:
      break;
  }
  return "g" + std::to_string(uid);
}

FactorSet MakeFactorSet(std::span<const IndeterminateId> ids) {
  FactorSet out(ids.begin(), ids.end());
  std::sort(out.begin(), out.end());
  return out;
}

FactorSet UnionFactors(const FactorSet& a, const FactorSet& b) {
  FactorSet out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool IsKSliceable(const FactorSet& factors) {
  return std::any_of(factors.begin(), factors.end(),
                     [](const IndeterminateId& id) { return id.is_parameter(); });
}

bool IsFullyKSliceable(const FactorSet& factors) {
  return !factors.empty() &&
         std::all_of(factors.begin(), factors.end(),
                     [](const IndeterminateId& id) { return id.is_parameter(); });
}

Zonotope::Zonotope(Eigen::VectorXd center, Eigen::MatrixXd generators,
                   std::vector<IndeterminateId> ids)
    : center_(std::move(center)),
      generators_(std::move(generators)),
      ids_(std::move(ids)) {
  if (generators_.cols() == 0) generators_.resize(center_.size(), 0);
  if (generators_.rows() != center_.size()) {
    throw std::invalid_argument("Zonotope: generator dimension mismatch");
  }
  if (static_cast<Eigen::Index>(ids_.size()) != generators_.cols()) {
    throw std::invalid_argument("Zonotope: one id per generator required");
  }
}

Zonotope Zonotope::Point(Eigen::VectorXd center) {
  const auto dim = center.size();
  return Zonotope(std::move(center), Eigen::MatrixXd(dim, 0), {});
}

Zonotope Zonotope::Box(const Eigen::VectorXd& center,
                       const Eigen::VectorXd& half_extents,
                       std::uint64_t uid_base) {
  if (center.size() != half_extents.size()) {
    throw std::invalid_argument("Zonotope::Box: dimension mismatch");
  }
  const auto dim = center.size();
  Eigen::MatrixXd gens = Eigen::MatrixXd::Zero(dim, dim);
  std::vector<IndeterminateId> ids;
  for (Eigen::Index i = 0; i < dim; ++i) {
    gens(i, i) = half_extents(i);
    ids.push_back(IndeterminateId::Generic(uid_base + i));
  }
  return Zonotope(center, std::move(gens), std::move(ids));
}

bool Zonotope::operator==(const Zonotope& other) const {
  return center_.size() == other.center_.size() &&
         generators_.cols() == other.generators_.cols() &&
         center_ == other.center_ && generators_ == other.generators_ &&
         ids_ == other.ids_;
}

Rotatotope::Rotatotope(Eigen::VectorXd center, Eigen::MatrixXd generators,
                       std::vector<FactorSet> factors)
    : center_(std::move(center)),
      generators_(std::move(generators)),
      factors_(std::move(factors)) {
  if (generators_.cols() == 0) generators_.resize(center_.size(), 0);
  if (generators_.rows() != center_.size()) {
    throw std::invalid_argument("Rotatotope: generator dimension mismatch");
  }
  if (static_cast<Eigen::Index>(factors_.size()) != generators_.cols()) {
    throw std::invalid_argument("Rotatotope: one factor set per generator");
  }
  k_sliceable_.resize(factors_.size());
  fully_k_sliceable_.resize(factors_.size());
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (factors_[i].empty()) {
      throw std::invalid_argument("Rotatotope: empty factor set");
    }
    std::sort(factors_[i].begin(), factors_[i].end());
    k_sliceable_[i] = IsKSliceable(factors_[i]);
    fully_k_sliceable_[i] = IsFullyKSliceable(factors_[i]);
  }
}

Rotatotope::Rotatotope(const Zonotope& z)
    : Rotatotope(z.center(), z.generators(), [&z] {
        std::vector<FactorSet> f;
        f.reserve(z.ids().size());
        for (const auto& id : z.ids()) f.push_back({id});
        return f;
      }()) {}

bool Rotatotope::operator==(const Rotatotope& other) const {
  return center_.size() == other.center_.size() &&
         generators_.cols() == other.generators_.cols() &&
         center_ == other.center_ && generators_ == other.generators_ &&
         factors_ == other.factors_;
}

double HalfspaceRep::MaxViolation(const Eigen::Vector3d& y) const {
  if (b.size() == 0) return -std::numeric_limits<double>::infinity();
  return (A * y - b).maxCoeff();
}

}  // namespace safearm::geom
