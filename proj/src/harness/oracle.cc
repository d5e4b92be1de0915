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

#include "safearm/harness/oracle.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <Eigen/Geometry>

namespace safearm::harness {

std::string OracleReport::ToString() const {
  if (!collision) return "ok";
  std::ostringstream os;
  os << "t=" << time << " link=" << link;
  switch (kind) {
    case ViolationKind::kObstacle:
      os << " obstacle=" << other;
      break;
    case ViolationKind::kSelf:
      os << " self-contact with link " << other;
      break;
    case ViolationKind::kPositionLimit:
      os << " position limit";
      break;
    case ViolationKind::kSpeedLimit:
      os << " speed limit";
      break;
    case ViolationKind::kNone:
      break;
  }
  return os.str();
}

std::vector<Eigen::Vector3d> OracleSkeleton(const arm::ArmModel& arm,
                                            const Eigen::VectorXd& q) {
  if (q.size() != arm.n_q()) throw std::invalid_argument("oracle: q has wrong size");
  std::vector<Eigen::Vector3d> pts{Eigen::Vector3d::Zero()};
  Eigen::Quaterniond rot = Eigen::Quaterniond::Identity();
  for (int i = 0; i < arm.n_q(); ++i) {
    const auto& j = arm.joints[i];
    rot = rot * Eigen::Quaterniond(Eigen::AngleAxisd(q(i), j.axis.normalized()));
    pts.push_back(pts.back() + rot * j.displacement);
  }
  return pts;
}

double PointBoxDistance(const Eigen::Vector3d& p, const Box& box) {
  const Eigen::Vector3d d =
      ((p - box.center).cwiseAbs() - box.half).cwiseMax(0.0);
  return d.norm();
}

double SegmentBoxDistance(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                          const Box& box) {
  const Eigen::Vector3d lo = box.center - box.half;
  const Eigen::Vector3d hi = box.center + box.half;
  const Eigen::Vector3d d = b - a;

  // Squared distance is piecewise quadratic in t with kinks where a
  // coordinate crosses a face plane.
  std::vector<double> ts{0.0, 1.0};
  for (int k = 0; k < 3; ++k) {
    if (d(k) == 0.0) continue;
    for (double face : {lo(k), hi(k)}) {
      const double t = (face - a(k)) / d(k);
      if (t > 0.0 && t < 1.0) ts.push_back(t);
    }
  }
  std::sort(ts.begin(), ts.end());

  double best = std::numeric_limits<double>::infinity();
  auto dist2_at = [&](double t) {
    const Eigen::Vector3d p = a + t * d;
    return ((p - lo).cwiseMin(0.0) + (p - hi).cwiseMax(0.0)).squaredNorm();
  };
  for (std::size_t s = 0; s + 1 < ts.size(); ++s) {
    const double t0 = ts[s];
    const double t1 = ts[s + 1];
    const double mid = 0.5 * (t0 + t1);
    const Eigen::Vector3d pm = a + mid * d;
    // f(t) = sum (alpha_k + beta_k t)^2 over the axes outside the slab.
    double num = 0.0;
    double den = 0.0;
    for (int k = 0; k < 3; ++k) {
      double alpha = 0.0;
      if (pm(k) < lo(k)) {
        alpha = a(k) - lo(k);
      } else if (pm(k) > hi(k)) {
        alpha = a(k) - hi(k);
      } else {
        continue;
      }
      num += alpha * d(k);
      den += d(k) * d(k);
    }
    double t_star = den > 0.0 ? std::clamp(-num / den, t0, t1) : t0;
    best = std::min({best, dist2_at(t_star), dist2_at(t0), dist2_at(t1)});
  }
  return std::sqrt(best);
}

double SegmentSegmentDistance(const Eigen::Vector3d& p1, const Eigen::Vector3d& q1,
                              const Eigen::Vector3d& p2, const Eigen::Vector3d& q2) {
  const Eigen::Vector3d d1 = q1 - p1;
  const Eigen::Vector3d d2 = q2 - p2;
  const Eigen::Vector3d r = p1 - p2;
  const double a = d1.squaredNorm();
  const double e = d2.squaredNorm();
  const double f = d2.dot(r);
  constexpr double kEps = 1e-300;
  double s = 0.0;
  double t = 0.0;
  if (a <= kEps && e <= kEps) return r.norm();
  if (a <= kEps) {
    t = std::clamp(f / e, 0.0, 1.0);
  } else {
    const double c = d1.dot(r);
    if (e <= kEps) {
      s = std::clamp(-c / a, 0.0, 1.0);
    } else {
      const double b = d1.dot(d2);
      const double denom = a * e - b * b;
      s = denom > 0.0 ? std::clamp((b * f - c * e) / denom, 0.0, 1.0) : 0.0;
      t = (b * s + f) / e;
      if (t < 0.0) {
        t = 0.0;
        s = std::clamp(-c / a, 0.0, 1.0);
      } else if (t > 1.0) {
        t = 1.0;
        s = std::clamp((b - c) / a, 0.0, 1.0);
      }
    }
  }
  return ((p1 + s * d1) - (p2 + t * d2)).norm();
}

OracleReport CheckState(const arm::ArmModel& arm, const std::vector<Box>& obstacles,
                        const Eigen::VectorXd& q, const Eigen::VectorXd& dq,
                        double time, const OracleOptions& options) {
  OracleReport rep;
  rep.time = time;
  auto flag = [&rep](ViolationKind kind, int link, int other) {
    rep.collision = true;
    rep.kind = kind;
    rep.link = link;
    rep.other = other;
    return rep;
  };
  const int n = arm.n_q();
  if (options.check_limits) {
    for (int i = 0; i < n; ++i) {
      const auto& j = arm.joints[i];
      if (q(i) > j.q_max + options.limit_tol || q(i) < j.q_min - options.limit_tol) {
        return flag(ViolationKind::kPositionLimit, i, -1);
      }
      if (dq.size() == n && std::abs(dq(i)) > j.dq_lim + options.limit_tol) {
        return flag(ViolationKind::kSpeedLimit, i, -1);
      }
    }
  }
  const auto pts = OracleSkeleton(arm, q);
  for (int i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < obstacles.size(); ++k) {
      if (SegmentBoxDistance(pts[i], pts[i + 1], obstacles[k]) <=
          arm.joints[i].capsule_radius) {
        return flag(ViolationKind::kObstacle, i, static_cast<int>(k));
      }
    }
  }
  if (options.check_self) {
    for (const auto& [a, b] : arm.self_pairs) {
      const double d = SegmentSegmentDistance(pts[a], pts[a + 1], pts[b], pts[b + 1]);
      if (d <= arm.joints[a].capsule_radius + arm.joints[b].capsule_radius) {
        return flag(ViolationKind::kSelf, a, b);
      }
    }
  }
  return rep;
}

OracleReport CheckTrajectory(const arm::ArmModel& arm, const std::vector<Box>& obstacles,
                             const StateSampler& sampler, double t0, double t1,
                             double dt, const OracleOptions& options) {
  if (!(dt > 0.0)) throw std::invalid_argument("CheckTrajectory: dt must be > 0");
  const long steps = static_cast<long>(std::ceil((t1 - t0) / dt - 1e-9));
  Eigen::VectorXd q, dq;
  for (long s = 0; s <= std::max(steps, 0L); ++s) {
    const double t = s == steps ? t1 : t0 + s * dt;
    sampler(t, &q, &dq);
    OracleReport rep = CheckState(arm, obstacles, q, dq, t, options);
    if (rep.collision) return rep;
  }
  OracleReport ok;
  ok.time = t1;
  return ok;
}

}  // namespace safearm::harness
