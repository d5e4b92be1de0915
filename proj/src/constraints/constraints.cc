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

#include "safearm/constraints/constraints.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "safearm/geom/set_ops.h"
#include "safearm/util/parallel.h"

namespace safearm::constraints {
namespace {

using geom::FactorKind;
using geom::HalfspaceRep;
using geom::Rotatotope;
using geom::Zonotope;

// Interval hull and bounding ball of a set, used for pruning.
struct Bounds {
  Eigen::Vector3d center;
  Eigen::Vector3d half;
  double radius = 0.0;
};

Bounds BoundsOf(const Eigen::VectorXd& center, const Eigen::MatrixXd& gens) {
  Bounds b;
  b.center = center;
  b.half = gens.cwiseAbs().rowwise().sum();
  b.radius = gens.colwise().norm().sum();
  return b;
}

// True when the sets are provably disjoint.
bool Separated(const Bounds& x, const Bounds& y) {
  const Eigen::Vector3d gap = (x.center - y.center).cwiseAbs() - x.half - y.half;
  if (gap.maxCoeff() > 1e-9) return true;
  return (x.center - y.center).norm() > x.radius + y.radius + 1e-9;
}

Zonotope BufferZonotope(const Rotatotope& buf, int n_buf) {
  Zonotope z = geom::OverapproxAsZonotope(buf);
  if (n_buf > 0 && z.num_generators() > n_buf) z = geom::Reduce(z, n_buf);
  return z;
}

// Normalized coordinates for evaluation; k_a must lie in the box up to
// rounding.
Eigen::VectorXd CheckedLambda(const traj::ParamBox& boxes, const Eigen::VectorXd& k_a) {
  Eigen::VectorXd lambda = NormalizeKa(boxes, k_a);
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (!(std::abs(lambda(i)) <= 1.0 + 1e-9)) {
      throw std::out_of_range("k_a outside its parameter box at joint " +
                              std::to_string(i));
    }
  }
  return lambda;
}

}  // namespace

PolynomialPoint ToPolynomialPoint(const Rotatotope& slc) {
  if (slc.dim() != 3) {
    throw std::invalid_argument("ToPolynomialPoint: expected a 3-D set");
  }
  PolynomialPoint p;
  p.constant = slc.center();
  for (int g = 0; g < slc.num_generators(); ++g) {
    PolynomialTerm term;
    term.coef = slc.generators().col(g);
    for (const auto& id : slc.factors(g)) {
      if (id.kind != FactorKind::kKa) {
        throw std::invalid_argument(
            "ToPolynomialPoint: generator depends on " + id.ToString());
      }
      term.joints.push_back(id.joint);
    }
    p.terms.push_back(std::move(term));
  }
  return p;
}

Eigen::VectorXd NormalizeKa(const traj::ParamBox& boxes, const Eigen::VectorXd& k_a) {
  if (static_cast<Eigen::Index>(boxes.size()) != k_a.size()) {
    throw std::invalid_argument("NormalizeKa: dimension mismatch");
  }
  Eigen::VectorXd lambda(k_a.size());
  for (Eigen::Index i = 0; i < k_a.size(); ++i) {
    const auto& b = boxes[i];
    lambda(i) = b.ka_halfwidth > 0.0 ? (k_a(i) - b.ka_center) / b.ka_halfwidth : 0.0;
  }
  return lambda;
}

bool InBox(const traj::ParamBox& boxes, const Eigen::VectorXd& k_a) {
  if (static_cast<Eigen::Index>(boxes.size()) != k_a.size()) return false;
  for (Eigen::Index i = 0; i < k_a.size(); ++i) {
    if (!(k_a(i) >= boxes[i].ka_lo() && k_a(i) <= boxes[i].ka_hi())) return false;
  }
  return true;
}

Eigen::Vector3d EvalPoint(const PolynomialPoint& p, const traj::ParamBox& boxes,
                          const Eigen::VectorXd& k_a) {
  const Eigen::VectorXd lambda = CheckedLambda(boxes, k_a);
  Eigen::Vector3d y = p.constant;
  for (const auto& t : p.terms) {
    double m = 1.0;
    for (int j : t.joints) m *= lambda(j);
    y += m * t.coef;
  }
  return y;
}

Eigen::Vector3d EvalPoint(const PolynomialPoint& p, const traj::ParamBox& boxes,
                          const Eigen::VectorXd& k_a, Eigen::Matrix3Xd* jacobian) {
  const Eigen::VectorXd lambda = CheckedLambda(boxes, k_a);
  const int n = static_cast<int>(k_a.size());
  Eigen::Vector3d y = p.constant;
  jacobian->setZero(3, n);
  for (const auto& t : p.terms) {
    double m = 1.0;
    for (int j : t.joints) m *= lambda(j);
    y += m * t.coef;
    // Product rule over occurrences, so repeated joints get powers right.
    for (std::size_t a = 0; a < t.joints.size(); ++a) {
      const int j = t.joints[a];
      if (boxes[j].ka_halfwidth <= 0.0) continue;
      double rest = 1.0;
      for (std::size_t b = 0; b < t.joints.size(); ++b) {
        if (b != a) rest *= lambda(t.joints[b]);
      }
      jacobian->col(j) += (rest / boxes[j].ka_halfwidth) * t.coef;
    }
  }
  return y;
}

double HalfspaceValue(const HalfspaceRep& rep, const Eigen::Vector3d& y, int* row) {
  if (rep.rows() == 0) {
    throw std::invalid_argument("HalfspaceValue: empty halfspace representation");
  }
  int best = 0;
  double best_v = -std::numeric_limits<double>::infinity();
  for (int r = 0; r < rep.rows(); ++r) {
    const double v = rep.A.row(r).dot(y) - rep.b(r);
    if (v > best_v) {
      best_v = v;
      best = r;
    }
  }
  if (row != nullptr) *row = best;
  return -best_v;
}

std::vector<PolynomialPoint> ExtractPoints(const rs::ComposedRS& rs) {
  std::vector<PolynomialPoint> out;
  out.reserve(static_cast<std::size_t>(rs.num_steps()) * rs.n_q());
  for (int n = 0; n < rs.num_steps(); ++n) {
    for (int i = 0; i < rs.n_q(); ++i) out.push_back(ToPolynomialPoint(rs.cell(i, n).slc));
  }
  return out;
}

std::vector<ObstacleConstraint> BuildObstacleConstraints(
    const rs::ComposedRS& rs, const std::vector<Zonotope>& obstacles,
    const ConstraintOptions& options) {
  for (const auto& o : obstacles) {
    if (o.dim() != 3) throw std::invalid_argument("obstacle must be 3-D");
  }
  const int n_q = rs.n_q();
  const int cells = rs.num_steps() * n_q;
  std::vector<std::vector<ObstacleConstraint>> per_cell(cells);
  std::vector<Bounds> obs_bounds;
  for (const auto& o : obstacles) obs_bounds.push_back(BoundsOf(o.center(), o.generators()));

  util::ParallelFor(cells, options.num_threads, [&](int c) {
    const int n = c / n_q;
    const int i = c % n_q;
    const auto& cell = rs.cell(i, n);
    const Bounds slc = BoundsOf(cell.slc.center(), cell.slc.generators());
    const Zonotope buf = BufferZonotope(cell.buf, options.n_buf);
    const Bounds buf_b = BoundsOf(buf.center(), buf.generators());
    for (std::size_t k = 0; k < obstacles.size(); ++k) {
      if (options.prune) {
        Bounds sum = obs_bounds[k];
        sum.center += buf_b.center;
        sum.half += buf_b.half;
        sum.radius += buf_b.radius;
        if (Separated(slc, sum)) continue;
      }
      ObstacleConstraint oc;
      oc.link = i;
      oc.step = n;
      oc.obstacle = static_cast<int>(k);
      oc.point = c;
      oc.rep = geom::ComputeHalfspaceRepInflated(
          geom::MergeParallel(geom::MinkowskiSum(obstacles[k], buf)));
      per_cell[c].push_back(std::move(oc));
    }
  });

  std::vector<ObstacleConstraint> out;
  for (auto& v : per_cell) {
    for (auto& oc : v) out.push_back(std::move(oc));
  }
  return out;
}

std::vector<SelfConstraint> BuildSelfIntersectionConstraints(
    const rs::ComposedRS& rs, const std::vector<std::pair<int, int>>& pairs,
    const ConstraintOptions& options) {
  const int n_q = rs.n_q();
  for (const auto& [a, b] : pairs) {
    if (a < 0 || b < 0 || a >= n_q || b >= n_q || a == b) {
      throw std::invalid_argument("self pair out of range");
    }
  }
  const int steps = rs.num_steps();
  std::vector<std::vector<SelfConstraint>> per_step(steps);
  const Eigen::Matrix3d neg = -Eigen::Matrix3d::Identity();

  util::ParallelFor(steps, options.num_threads, [&](int n) {
    for (const auto& [a, b] : pairs) {
      const auto& ca = rs.cell(a, n);
      const auto& cb = rs.cell(b, n);
      // p_a - p_b must avoid buf_b (+) (-buf_a).
      const Zonotope buf = geom::MinkowskiSum(
          BufferZonotope(cb.buf, options.n_buf),
          geom::LinearMap(neg, BufferZonotope(ca.buf, options.n_buf)));
      if (options.prune) {
        Eigen::MatrixXd diff_gens(3, ca.slc.num_generators() + cb.slc.num_generators());
        diff_gens << ca.slc.generators(), cb.slc.generators();
        const Bounds diff = BoundsOf(ca.slc.center() - cb.slc.center(), diff_gens);
        if (Separated(diff, BoundsOf(buf.center(), buf.generators()))) continue;
      }
      SelfConstraint sc;
      sc.link_a = a;
      sc.link_b = b;
      sc.step = n;
      sc.point_a = n * n_q + a;
      sc.point_b = n * n_q + b;
      sc.rep = geom::ComputeHalfspaceRepInflated(geom::MergeParallel(buf));
      per_step[n].push_back(std::move(sc));
    }
  });

  std::vector<SelfConstraint> out;
  for (auto& v : per_step) {
    for (auto& sc : v) out.push_back(std::move(sc));
  }
  return out;
}

JointLimits BuildJointLimitConstraints(const Eigen::VectorXd& q0,
                                       const Eigen::VectorXd& dq0,
                                       const arm::ArmModel& arm,
                                       const traj::TimingConfig& timing) {
  const int n_q = arm.n_q();
  if (q0.size() != n_q || dq0.size() != n_q) {
    throw std::invalid_argument("BuildJointLimitConstraints: dimension mismatch");
  }
  JointLimits lim;
  lim.q0 = q0;
  lim.dq0 = dq0;
  lim.q_min = arm.q_min();
  lim.q_max = arm.q_max();
  lim.dq_lim = arm.dq_lim();
  lim.timing = timing;
  for (int j = 0; j < n_q; ++j) {
    if (std::isfinite(lim.q_max(j))) lim.components.push_back({j, LimitKind::kPositionMax});
    if (std::isfinite(lim.q_min(j))) lim.components.push_back({j, LimitKind::kPositionMin});
    if (std::isfinite(lim.dq_lim(j))) lim.components.push_back({j, LimitKind::kSpeed});
  }
  return lim;
}

double EvalLimit(const JointLimits& limits, const LimitComponent& c, double k_a,
                 double* derivative) {
  const double kv = limits.dq0(c.joint);
  const double q0 = limits.q0(c.joint);
  const double tp = limits.timing.t_plan;
  const double tf = limits.timing.t_f;
  double value = 0.0;
  double slope = 0.0;

  if (c.kind == LimitKind::kSpeed) {
    const double end = kv + k_a * tp;
    if (std::abs(end) > std::abs(kv)) {
      value = std::abs(end);
      slope = end > 0.0 ? tp : -tp;
    } else {
      value = std::abs(kv);
    }
    value -= limits.dq_lim(c.joint);
  } else {
    // Candidates in a fixed order; ties resolve to the earliest.
    struct Candidate {
      double q;
      double dq;
    };
    std::vector<Candidate> cand = {
        {q0, 0.0},
        {traj::JointPosition(kv, k_a, q0, tp, limits.timing), 0.5 * tp * tp},
        {traj::JointPosition(kv, k_a, q0, tf, limits.timing), 0.5 * tp * tf},
    };
    if (k_a != 0.0) {
      const double t_star = -kv / k_a;
      if (t_star > 0.0 && t_star < tp) {
        cand.push_back({traj::JointPosition(kv, k_a, q0, t_star, limits.timing),
                        kv * kv / (2.0 * k_a * k_a)});
      }
    }
    const bool max_side = c.kind == LimitKind::kPositionMax;
    std::size_t best = 0;
    for (std::size_t k = 1; k < cand.size(); ++k) {
      if (max_side ? cand[k].q > cand[best].q : cand[k].q < cand[best].q) best = k;
    }
    if (max_side) {
      value = cand[best].q - limits.q_max(c.joint);
      slope = cand[best].dq;
    } else {
      value = limits.q_min(c.joint) - cand[best].q;
      slope = -cand[best].dq;
    }
  }
  if (derivative != nullptr) *derivative = slope;
  return value;
}

ConstraintSet BuildConstraints(const rs::ComposedRS& rs, const arm::ArmModel& arm,
                               const std::vector<Zonotope>& obstacles,
                               const ConstraintOptions& options) {
  if (arm.n_q() != rs.n_q()) {
    throw std::invalid_argument("BuildConstraints: arm and reachable set disagree");
  }
  ConstraintSet cs;
  cs.boxes = rs.boxes;
  cs.margin = options.margin;
  cs.n_q = rs.n_q();
  cs.points = ExtractPoints(rs);
  cs.obstacle = BuildObstacleConstraints(rs, obstacles, options);
  cs.self = BuildSelfIntersectionConstraints(rs, arm.self_pairs, options);
  cs.limits = BuildJointLimitConstraints(rs.q0, rs.dq0, arm, rs.timing);
  return cs;
}

ConstraintValues EvalConstraints(const ConstraintSet& cs, const Eigen::VectorXd& k_a,
                                 bool with_subgradients) {
  if (k_a.size() != cs.n_q) {
    throw std::invalid_argument("EvalConstraints: k_a has wrong dimension");
  }
  const int total = cs.size();
  ConstraintValues out;
  out.values.resize(total);
  if (with_subgradients) out.subgradients.setZero(total, cs.n_q);

  std::vector<char> ready(cs.points.size(), 0);
  std::vector<Eigen::Vector3d> pos(cs.points.size());
  std::vector<Eigen::Matrix3Xd> jac(with_subgradients ? cs.points.size() : 0);
  auto point = [&](int idx) {
    if (!ready[idx]) {
      pos[idx] = with_subgradients ? EvalPoint(cs.points[idx], cs.boxes, k_a, &jac[idx])
                                   : EvalPoint(cs.points[idx], cs.boxes, k_a);
      ready[idx] = 1;
    }
  };

  int r = 0;
  for (const auto& oc : cs.obstacle) {
    point(oc.point);
    int row = 0;
    out.values(r) = HalfspaceValue(oc.rep, pos[oc.point], &row);
    if (with_subgradients) {
      out.subgradients.row(r) = -(oc.rep.A.row(row) * jac[oc.point]);
    }
    ++r;
  }
  for (const auto& sc : cs.self) {
    point(sc.point_a);
    point(sc.point_b);
    int row = 0;
    out.values(r) = HalfspaceValue(sc.rep, pos[sc.point_a] - pos[sc.point_b], &row);
    if (with_subgradients) {
      out.subgradients.row(r) =
          -(sc.rep.A.row(row) * (jac[sc.point_a] - jac[sc.point_b]));
    }
    ++r;
  }
  for (const auto& c : cs.limits.components) {
    double d = 0.0;
    out.values(r) = EvalLimit(cs.limits, c, k_a(c.joint), &d);
    if (with_subgradients) out.subgradients(r, c.joint) = d;
    ++r;
  }
  return out;
}

nlohmann::json MetadataJson(const ConstraintSet& cs) {
  std::size_t rows = 0;
  for (const auto& oc : cs.obstacle) rows += oc.rep.rows();
  for (const auto& sc : cs.self) rows += sc.rep.rows();
  return {{"n_q", cs.n_q},
          {"margin", cs.margin},
          {"obstacle_constraints", cs.obstacle.size()},
          {"self_constraints", cs.self.size()},
          {"limit_constraints", cs.limits.components.size()},
          {"halfspace_rows", rows}};
}

}  // namespace safearm::constraints
