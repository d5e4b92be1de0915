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

#include "safearm/rs/compose.h"

#include <cmath>
#include <stdexcept>
#include <string>

#include "safearm/geom/set_ops.h"
#include "safearm/util/parallel.h"

namespace safearm::rs {
namespace {

using geom::FactorKind;
using geom::IndeterminateId;
using geom::MatrixZonotope;
using geom::ReducePolicy;
using geom::Rotatotope;
using geom::Zonotope;

constexpr int kJointUidShift = 32;
// Rounding slack when mapping dq0 into the k_v interval.
constexpr double kLambdaSlack = 1e-12;

// M_0 ... M_upto applied to x, innermost first, reducing after each product.
Rotatotope RotateThrough(const std::vector<MatrixZonotope>& mats, int upto,
                         Rotatotope x, int n_red) {
  for (int n = upto; n >= 0; --n) {
    x = geom::MergeParameterMonomials(geom::Product(mats[n], x));
    x = geom::Reduce(x, n_red, ReducePolicy::kPreserveSliceable);
  }
  return x;
}

}  // namespace

Zonotope SliceByInitVel(const Zonotope& z, int joint, double dq0,
                        const traj::JointParamBox& box) {
  double lambda = 0.0;
  if (box.kv_halfwidth > 0.0) {
    lambda = (dq0 - box.kv_center) / box.kv_halfwidth;
  } else if (dq0 != box.kv_center) {
    throw std::invalid_argument("SliceByInitVel: dq0 outside degenerate box");
  }
  if (std::abs(lambda) > 1.0 + kLambdaSlack) {
    throw std::invalid_argument("SliceByInitVel: dq0 outside k_v interval");
  }
  lambda = std::clamp(lambda, -1.0, 1.0);
  const IndeterminateId id = IndeterminateId::Kv(joint);
  return geom::Slice(z, std::span(&id, 1), std::span(&lambda, 1));
}

MatrixZonotope MakeMatZono(const Zonotope& z_sliced, double q0,
                           const Eigen::Vector3d& axis) {
  if (z_sliced.dim() != jrs::kJrsDim) {
    throw std::invalid_argument("MakeMatZono: expected a 4-D JRS zonotope");
  }
  const Eigen::Matrix3d r0 = arm::RotationMatrix(axis, q0);
  const Eigen::Matrix3d k = arm::Skew(axis);
  const Eigen::Matrix3d k2 = k * k;
  const double c = z_sliced.center()(0);
  const double s = z_sliced.center()(1);
  MatrixZonotope m;
  m.center = r0 * (Eigen::Matrix3d::Identity() + k * s + k2 * (1.0 - c));
  for (int g = 0; g < z_sliced.num_generators(); ++g) {
    const double cg = z_sliced.generators()(0, g);
    const double sg = z_sliced.generators()(1, g);
    if (cg == 0.0 && sg == 0.0) continue;
    m.generators.push_back(r0 * (k * sg - k2 * cg));
    m.ids.push_back(z_sliced.ids()[g]);
  }
  return m;
}

std::pair<Rotatotope, Rotatotope> SplitSliceBuf(const Rotatotope& v) {
  std::vector<int> slc, buf;
  for (int i = 0; i < v.num_generators(); ++i) {
    (v.fully_k_sliceable(i) ? slc : buf).push_back(i);
  }
  auto pick = [&v](const std::vector<int>& cols, Eigen::VectorXd center) {
    Eigen::MatrixXd g(v.dim(), cols.size());
    std::vector<geom::FactorSet> f;
    for (std::size_t k = 0; k < cols.size(); ++k) {
      g.col(k) = v.generators().col(cols[k]);
      f.push_back(v.factors(cols[k]));
    }
    return Rotatotope(std::move(center), std::move(g), std::move(f));
  };
  return {pick(slc, v.center()), pick(buf, Eigen::VectorXd::Zero(v.dim()))};
}

Zonotope RelabelForJoint(const Zonotope& z, int joint, int n_q) {
  const std::uint64_t block = static_cast<std::uint64_t>(n_q - joint)
                              << kJointUidShift;
  std::vector<IndeterminateId> ids = z.ids();
  for (auto& id : ids) {
    switch (id.kind) {
      case FactorKind::kKv:
        id = IndeterminateId::Kv(joint);
        break;
      case FactorKind::kKa:
        id = IndeterminateId::Ka(joint);
        break;
      case FactorKind::kGeneric:
        id = IndeterminateId::Generic(block + id.uid);
        break;
    }
  }
  return Zonotope(z.center(), z.generators(), std::move(ids));
}

ComposedRS ComposeRS(const arm::ArmModel& arm, const Eigen::VectorXd& q0,
                     const Eigen::VectorXd& dq0, const jrs::JrsBank& bank,
                     const ComposeOptions& options) {
  const int n_q = arm.n_q();
  if (q0.size() != n_q || dq0.size() != n_q) {
    throw std::invalid_argument("ComposeRS: state size does not match arm");
  }
  if (bank.sequences.empty()) throw std::invalid_argument("ComposeRS: empty bank");
  ComposedRS rs;
  rs.q0 = q0;
  rs.dq0 = dq0;
  rs.timing = bank.params.timing;
  const int steps = rs.timing.num_steps();
  std::vector<const jrs::JrsSequence*> seqs;
  for (int i = 0; i < n_q; ++i) {
    rs.jrs_index.push_back(bank.IntervalIndex(dq0(i)));
    seqs.push_back(&bank.sequences[rs.jrs_index.back()]);
    rs.boxes.push_back(seqs.back()->box);
  }

  std::vector<Rotatotope> links;
  for (int i = 0; i < n_q; ++i) {
    links.emplace_back(arm.joints[i].link_volume);
  }

  rs.cells.assign(steps, std::vector<RsCell>(n_q));
  util::ParallelFor(steps, options.num_threads, [&](int n) {
    std::vector<MatrixZonotope> mats;
    mats.reserve(n_q);
    for (int i = 0; i < n_q; ++i) {
      const Zonotope z = SliceByInitVel(RelabelForJoint(seqs[i]->zonos[n], i, n_q),
                                        i, dq0(i), seqs[i]->box);
      mats.push_back(MakeMatZono(z, q0(i), arm.joints[i].axis));
    }
    // Rotated joint displacements, shared by all distal links.
    Rotatotope stacked(Zonotope::Point(Eigen::Vector3d::Zero()));
    for (int i = 0; i < n_q; ++i) {
      const Rotatotope link = RotateThrough(mats, i, links[i], options.n_red);
      const Rotatotope v =
          geom::MergeParameterMonomials(geom::MinkowskiSum(stacked, link));
      auto [slc, buf] = SplitSliceBuf(v);
      rs.cells[n][i] = RsCell{std::move(slc), std::move(buf)};
      if (i + 1 < n_q) {
        const Rotatotope disp(Zonotope::Point(arm.joints[i].displacement));
        stacked = geom::MinkowskiSum(
            stacked, RotateThrough(mats, i, disp, options.n_red));
      }
    }
  });
  return rs;
}

nlohmann::json ToJson(const ComposedRS& rs) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& row : rs.cells) {
    nlohmann::json links = nlohmann::json::array();
    for (const auto& c : row) {
      links.push_back({{"slc", geom::ToJson(c.slc)}, {"buf", geom::ToJson(c.buf)}});
    }
    steps.push_back(links);
  }
  return {{"q0", std::vector<double>(rs.q0.data(), rs.q0.data() + rs.q0.size())},
          {"dq0", std::vector<double>(rs.dq0.data(), rs.dq0.data() + rs.dq0.size())},
          {"jrs_index", rs.jrs_index},
          {"cells", steps}};
}

}  // namespace safearm::rs
