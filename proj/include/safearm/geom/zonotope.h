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

#ifndef SAFEARM_GEOM_ZONOTOPE_H_
#define SAFEARM_GEOM_ZONOTOPE_H_

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "safearm/geom/indeterminate.h"

namespace safearm::geom {

// Zonotope {c + sum_i beta_i g_i : beta_i in [-1, 1]} with one labeled
// coefficient per generator. Generators are the columns of `generators()`.
class Zonotope {
 public:
  Zonotope() = default;
  // Throws std::invalid_argument if shapes disagree.
  Zonotope(Eigen::VectorXd center, Eigen::MatrixXd generators,
           std::vector<IndeterminateId> ids);

  // Zero-generator zonotope.
  static Zonotope Point(Eigen::VectorXd center);
  // Axis-aligned box with generic ids uid_base, uid_base + 1, ...
  static Zonotope Box(const Eigen::VectorXd& center,
                      const Eigen::VectorXd& half_extents,
                      std::uint64_t uid_base);

  int dim() const { return static_cast<int>(center_.size()); }
  int num_generators() const { return static_cast<int>(generators_.cols()); }
  const Eigen::VectorXd& center() const { return center_; }
  const Eigen::MatrixXd& generators() const { return generators_; }
  Eigen::VectorXd generator(int i) const { return generators_.col(i); }
  const std::vector<IndeterminateId>& ids() const { return ids_; }

  bool operator==(const Zonotope& other) const;

 private:
  Eigen::VectorXd center_;
  Eigen::MatrixXd generators_;
  std::vector<IndeterminateId> ids_;
};

// Rotatotope: a zonotope-like set whose generators carry multisets of
// factors; generator i is scaled by the product of its factors.
class Rotatotope {
 public:
  Rotatotope() = default;
  Rotatotope(Eigen::VectorXd center, Eigen::MatrixXd generators,
             std::vector<FactorSet> factors);
  // Every generator keeps its single id as a one-element factor set.
  explicit Rotatotope(const Zonotope& z);

  int dim() const { return static_cast<int>(center_.size()); }
  int num_generators() const { return static_cast<int>(generators_.cols()); }
  const Eigen::VectorXd& center() const { return center_; }
  const Eigen::MatrixXd& generators() const { return generators_; }
  Eigen::VectorXd generator(int i) const { return generators_.col(i); }
  const std::vector<FactorSet>& factors() const { return factors_; }
  const FactorSet& factors(int i) const { return factors_[i]; }
  bool k_sliceable(int i) const { return k_sliceable_[i] != 0; }
  bool fully_k_sliceable(int i) const { return fully_k_sliceable_[i] != 0; }

  bool operator==(const Rotatotope& other) const;

 private:
  Eigen::VectorXd center_;
  Eigen::MatrixXd generators_;
  std::vector<FactorSet> factors_;
  std::vector<std::uint8_t> k_sliceable_;
  std::vector<std::uint8_t> fully_k_sliceable_;
};

// Set of 3x3 matrices {C + sum_j lambda_j G_j : lambda_j in [-1, 1]}.
struct MatrixZonotope {
  Eigen::Matrix3d center = Eigen::Matrix3d::Identity();
  std::vector<Eigen::Matrix3d> generators;
  std::vector<IndeterminateId> ids;

  int num_generators() const { return static_cast<int>(generators.size()); }
};

// {y : A y <= b}, rows of A are unit normals.
struct HalfspaceRep {
  Eigen::Matrix<double, Eigen::Dynamic, 3, Eigen::RowMajor> A;
  Eigen::VectorXd b;
  // Set when the input had to be grown to become full-dimensional.
  bool inflated = false;

  int rows() const { return static_cast<int>(b.size()); }
  // max_i (A_i y - b_i); non-positive iff y is inside.
  double MaxViolation(const Eigen::Vector3d& y) const;
};

}  // namespace safearm::geom

#endif  // SAFEARM_GEOM_ZONOTOPE_H_
