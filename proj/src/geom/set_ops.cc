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

#include "safearm/geom/set_ops.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "safearm/geom/box_lp.h"

namespace safearm::geom {
namespace {

void CheckSameDim(int a, int b, const char* op) {
  if (a != b) {
    throw std::invalid_argument(std::string(op) + ": dimension mismatch (" +
                                std::to_string(a) + " vs " +
                                std::to_string(b) + ")");
  }
}

void CheckSliceValues(std::span<const IndeterminateId> ids,
                      std::span<const double> values) {
  if (ids.size() != values.size()) {
    throw std::invalid_argument("Slice: ids and values differ in length");
  }
  for (double v : values) {
    if (!(v >= -1.0 && v <= 1.0)) {
      throw std::invalid_argument("Slice: value " + std::to_string(v) +
                                  " outside [-1, 1]");
    }
  }
}

std::uint64_t FreshUidBase(std::int64_t max_uid) {
  return static_cast<std::uint64_t>(max_uid + 1);
}

// Indices sorted by descending Euclidean norm; ties keep input order.
std::vector<int> OrderByNorm(const Eigen::MatrixXd& gens,
                             const std::vector<int>& candidates) {
  std::vector<int> order = candidates;
  std::vector<double> norms(gens.cols());
  for (int i : candidates) norms[i] = gens.col(i).norm();
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return norms[a] > norms[b]; });
  return order;
}

// Interval hull of the listed generators as nonzero axis-aligned columns.
Eigen::MatrixXd BoxOf(const Eigen::MatrixXd& gens,
                      const std::vector<int>& cols) {
  const int dim = static_cast<int>(gens.rows());
  Eigen::VectorXd radius = Eigen::VectorXd::Zero(dim);
  for (int i : cols) radius += gens.col(i).cwiseAbs();
  int nonzero = 0;
  for (int d = 0; d < dim; ++d) nonzero += radius(d) > 0.0;
  Eigen::MatrixXd box = Eigen::MatrixXd::Zero(dim, nonzero);
  for (int d = 0, k = 0; d < dim; ++d) {
    if (radius(d) > 0.0) box(d, k++) = radius(d);
  }
  return box;
}

// Split of generator indices into kept and boxed parts.
struct ReduceSplit {
  std::vector<int> kept;
  std::vector<int> boxed;
};

ReduceSplit SplitForReduce(const Eigen::MatrixXd& gens, int n_red,
                           const std::vector<int>& priority,
                           const std::vector<int>& rest) {
  ReduceSplit split;
  std::vector<int> ordered = OrderByNorm(gens, priority);
  const std::vector<int> ordered_rest = OrderByNorm(gens, rest);
  ordered.insert(ordered.end(), ordered_rest.begin(), ordered_rest.end());
  for (std::size_t k = 0; k < ordered.size(); ++k) {
    (static_cast<int>(k) < n_red ? split.kept : split.boxed)
        .push_back(ordered[k]);
  }
  std::sort(split.kept.begin(), split.kept.end());
  return split;
}

Zonotope WithInflation(const Zonotope& z) {
  const int dim = z.dim();
  Eigen::MatrixXd gens(dim, z.num_generators() + dim);
  gens << z.generators(),
      Eigen::MatrixXd::Identity(dim, dim) * kDegenerateInflation;
  std::vector<IndeterminateId> ids = z.ids();
  const std::uint64_t base = FreshUidBase(MaxGenericUid(z));
  for (int d = 0; d < dim; ++d) ids.push_back(IndeterminateId::Generic(base + d));
  return Zonotope(z.center(), std::move(gens), std::move(ids));
}

HalfspaceRep HalfspaceFromFullDim(const Zonotope& z) {
  const Eigen::MatrixXd& g = z.generators();
  const int p = z.num_generators();
  std::vector<int> cols;
  for (int i = 0; i < p; ++i) {
    if (g.col(i).squaredNorm() > 0.0) cols.push_back(i);
  }
  const Eigen::Vector3d center = z.center();
  std::vector<Eigen::Vector3d> normals;
  normals.reserve(cols.size() * (cols.size() - 1) / 2);
  for (std::size_t a = 0; a < cols.size(); ++a) {
    const Eigen::Vector3d ga = g.col(cols[a]);
    for (std::size_t b = a + 1; b < cols.size(); ++b) {
      const Eigen::Vector3d gb = g.col(cols[b]);
      const Eigen::Vector3d n = ga.cross(gb);
      const double norm = n.norm();
      if (norm <= kParallelTol * ga.norm() * gb.norm()) continue;
      normals.push_back(n / norm);
    }
  }
  HalfspaceRep rep;
  rep.A.resize(2 * normals.size(), 3);
  rep.b.resize(2 * normals.size());
  const Eigen::Matrix<double, 3, Eigen::Dynamic> gmat = g;
  for (std::size_t k = 0; k < normals.size(); ++k) {
    const Eigen::Vector3d& n = normals[k];
    const double spread = (n.transpose() * gmat).cwiseAbs().sum();
    const double offset = n.dot(center);
    rep.A.row(2 * k) = n.transpose();
    rep.b(2 * k) = offset + spread;
    rep.A.row(2 * k + 1) = -n.transpose();
    rep.b(2 * k + 1) = -offset + spread;
  }
  return rep;
}

}  // namespace

Zonotope MinkowskiSum(const Zonotope& x, const Zonotope& y) {
  CheckSameDim(x.dim(), y.dim(), "MinkowskiSum");
  Eigen::MatrixXd gens(x.dim(), x.num_generators() + y.num_generators());
  gens << x.generators(), y.generators();
  std::vector<IndeterminateId> ids = x.ids();
  ids.insert(ids.end(), y.ids().begin(), y.ids().end());
  return Zonotope(x.center() + y.center(), std::move(gens), std::move(ids));
}

Rotatotope MinkowskiSum(const Rotatotope& x, const Rotatotope& y) {
  CheckSameDim(x.dim(), y.dim(), "MinkowskiSum");
  Eigen::MatrixXd gens(x.dim(), x.num_generators() + y.num_generators());
  gens << x.generators(), y.generators();
  std::vector<FactorSet> factors = x.factors();
  factors.insert(factors.end(), y.factors().begin(), y.factors().end());
  return Rotatotope(x.center() + y.center(), std::move(gens),
                    std::move(factors));
}

Zonotope LinearMap(const Eigen::MatrixXd& a, const Zonotope& z) {
  CheckSameDim(static_cast<int>(a.cols()), z.dim(), "LinearMap");
  return Zonotope(a * z.center(), a * z.generators(), z.ids());
}

Rotatotope LinearMap(const Eigen::MatrixXd& a, const Rotatotope& z) {
  CheckSameDim(static_cast<int>(a.cols()), z.dim(), "LinearMap");
  return Rotatotope(a * z.center(), a * z.generators(), z.factors());
}

Rotatotope Negate(const Rotatotope& z) {
  return Rotatotope(-z.center(), -z.generators(), z.factors());
}

Zonotope Slice(const Zonotope& z, std::span<const IndeterminateId> ids,
               std::span<const double> values) {
  CheckSliceValues(ids, values);
  Eigen::VectorXd center = z.center();
  std::vector<int> kept;
  for (int i = 0; i < z.num_generators(); ++i) {
    const auto it = std::find(ids.begin(), ids.end(), z.ids()[i]);
    if (it == ids.end()) {
      kept.push_back(i);
    } else {
      center += values[it - ids.begin()] * z.generators().col(i);
    }
  }
  Eigen::MatrixXd gens(z.dim(), kept.size());
  std::vector<IndeterminateId> kept_ids;
  for (std::size_t k = 0; k < kept.size(); ++k) {
    gens.col(k) = z.generators().col(kept[k]);
    kept_ids.push_back(z.ids()[kept[k]]);
  }
  return Zonotope(std::move(center), std::move(gens), std::move(kept_ids));
}

Rotatotope Slice(const Rotatotope& z, std::span<const IndeterminateId> ids,
                 std::span<const double> values) {
  CheckSliceValues(ids, values);
  Eigen::VectorXd center = z.center();
  std::vector<Eigen::VectorXd> cols;
  std::vector<FactorSet> factors;
  for (int i = 0; i < z.num_generators(); ++i) {
    double scale = 1.0;
    FactorSet remaining;
    for (const IndeterminateId& f : z.factors(i)) {
      const auto it = std::find(ids.begin(), ids.end(), f);
      if (it == ids.end()) {
        remaining.push_back(f);
      } else {
        scale *= values[it - ids.begin()];
      }
    }
    if (remaining.empty()) {
      center += scale * z.generators().col(i);
    } else {
      cols.push_back(scale * z.generators().col(i));
      factors.push_back(std::move(remaining));
    }
  }
  Eigen::MatrixXd gens(z.dim(), cols.size());
  for (std::size_t k = 0; k < cols.size(); ++k) gens.col(k) = cols[k];
  return Rotatotope(std::move(center), std::move(gens), std::move(factors));
}

Rotatotope Product(const MatrixZonotope& m, const Rotatotope& r) {
  CheckSameDim(r.dim(), 3, "Product");
  if (m.generators.size() != m.ids.size()) {
    throw std::invalid_argument("Product: one id per matrix generator");
  }
  const int p = r.num_generators();
  const int nm = m.num_generators();
  const int total = (p + 1) * (nm + 1) - 1;
  Eigen::MatrixXd gens(3, total);
  std::vector<FactorSet> factors;
  factors.reserve(total);
  const Eigen::Vector3d c = r.center();
  const Eigen::Matrix<double, 3, Eigen::Dynamic> g = r.generators();

  int k = 0;
  if (p > 0) gens.leftCols(p) = m.center * g;
  for (int i = 0; i < p; ++i) factors.push_back(r.factors(i));
  k = p;
  for (int j = 0; j < nm; ++j) {
    gens.col(k++) = m.generators[j] * c;
    factors.push_back({m.ids[j]});
  }
  for (int j = 0; j < nm; ++j) {
    if (p > 0) gens.middleCols(k, p) = m.generators[j] * g;
    k += p;
    const FactorSet single{m.ids[j]};
    for (int i = 0; i < p; ++i) {
      factors.push_back(UnionFactors(r.factors(i), single));
    }
  }
  return Rotatotope(m.center * c, std::move(gens), std::move(factors));
}

Rotatotope Product(const MatrixZonotope& m, const Zonotope& z) {
  return Product(m, Rotatotope(z));
}

Zonotope OverapproxAsZonotope(const Rotatotope& r) {
  std::uint64_t next = FreshUidBase(MaxGenericUid(r));
  std::vector<IndeterminateId> ids;
  ids.reserve(r.num_generators());
  for (int i = 0; i < r.num_generators(); ++i) {
    const FactorSet& f = r.factors(i);
    if (f.size() == 1) {
      ids.push_back(f.front());
    } else {
      ids.push_back(IndeterminateId::Generic(next++));
    }
  }
  return Zonotope(r.center(), r.generators(), std::move(ids));
}

Zonotope Reduce(const Zonotope& z, int n_red) {
  if (n_red < 0) throw std::invalid_argument("Reduce: n_red < 0");
  if (z.num_generators() <= n_red) return z;
  std::vector<int> all(z.num_generators());
  std::iota(all.begin(), all.end(), 0);
  const ReduceSplit split = SplitForReduce(z.generators(), n_red, all, {});
  const Eigen::MatrixXd box = BoxOf(z.generators(), split.boxed);
  Eigen::MatrixXd gens(z.dim(), split.kept.size() + box.cols());
  std::vector<IndeterminateId> ids;
  for (std::size_t k = 0; k < split.kept.size(); ++k) {
    gens.col(k) = z.generators().col(split.kept[k]);
    ids.push_back(z.ids()[split.kept[k]]);
  }
  gens.rightCols(box.cols()) = box;
  const std::uint64_t base = FreshUidBase(MaxGenericUid(z));
  for (Eigen::Index d = 0; d < box.cols(); ++d) {
    ids.push_back(IndeterminateId::Generic(base + d));
  }
  return Zonotope(z.center(), std::move(gens), std::move(ids));
}

Rotatotope Reduce(const Rotatotope& z, int n_red, ReducePolicy policy) {
  if (n_red < 0) throw std::invalid_argument("Reduce: n_red < 0");
  if (z.num_generators() <= n_red) return z;
  std::vector<int> priority;
  std::vector<int> rest;
  for (int i = 0; i < z.num_generators(); ++i) {
    const bool preferred = policy == ReducePolicy::kPreserveSliceable &&
                           z.fully_k_sliceable(i);
    (preferred ? priority : rest).push_back(i);
  }
  const ReduceSplit split =
      SplitForReduce(z.generators(), n_red, priority, rest);
  const Eigen::MatrixXd box = BoxOf(z.generators(), split.boxed);
  Eigen::MatrixXd gens(z.dim(), split.kept.size() + box.cols());
  std::vector<FactorSet> factors;
  for (std::size_t k = 0; k < split.kept.size(); ++k) {
    gens.col(k) = z.generators().col(split.kept[k]);
    factors.push_back(z.factors(split.kept[k]));
  }
  gens.rightCols(box.cols()) = box;
  const std::uint64_t base = FreshUidBase(MaxGenericUid(z));
  for (Eigen::Index d = 0; d < box.cols(); ++d) {
    factors.push_back({IndeterminateId::Generic(base + d)});
  }
  return Rotatotope(z.center(), std::move(gens), std::move(factors));
}

Rotatotope MergeParameterMonomials(const Rotatotope& z) {
  std::vector<Eigen::VectorXd> cols;
  std::vector<FactorSet> factors;
  std::map<FactorSet, std::size_t> monomial_slot;
  for (int i = 0; i < z.num_generators(); ++i) {
    const Eigen::VectorXd g = z.generators().col(i);
    if (g.squaredNorm() == 0.0) continue;
    if (z.fully_k_sliceable(i)) {
      const auto [it, inserted] =
          monomial_slot.emplace(z.factors(i), cols.size());
      if (!inserted) {
        cols[it->second] += g;
        continue;
      }
    }
    cols.push_back(g);
    factors.push_back(z.factors(i));
  }
  Eigen::MatrixXd gens(z.dim(), cols.size());
  for (std::size_t k = 0; k < cols.size(); ++k) gens.col(k) = cols[k];
  return Rotatotope(z.center(), std::move(gens), std::move(factors));
}

Zonotope MergeParallel(const Zonotope& z) {
  std::vector<Eigen::VectorXd> cols;
  std::vector<IndeterminateId> ids;
  for (int i = 0; i < z.num_generators(); ++i) {
    const Eigen::VectorXd g = z.generators().col(i);
    const double gn2 = g.squaredNorm();
    if (gn2 == 0.0) continue;
    bool merged = false;
    for (auto& c : cols) {
      const double dot = c.dot(g);
      const double cn2 = c.squaredNorm();
      // |c x g|^2 = |c|^2 |g|^2 - (c.g)^2, compared relative to |c|^2 |g|^2.
      const double cross2 = std::max(0.0, cn2 * gn2 - dot * dot);
      if (cross2 <= kParallelTol * kParallelTol * cn2 * gn2) {
        c += dot >= 0.0 ? g : Eigen::VectorXd(-g);
        merged = true;
        break;
      }
    }
    if (!merged) {
      cols.push_back(g);
      ids.push_back(z.ids()[i]);
    }
  }
  Eigen::MatrixXd gens(z.dim(), cols.size());
  for (std::size_t k = 0; k < cols.size(); ++k) gens.col(k) = cols[k];
  return Zonotope(z.center(), std::move(gens), std::move(ids));
}

bool IsFullDimensional(const Zonotope& z) {
  if (z.num_generators() < z.dim()) return false;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(z.generators());
  const Eigen::VectorXd& s = svd.singularValues();
  if (s.size() < z.dim() || s(0) <= 0.0) return false;
  return s(z.dim() - 1) > 1e-10 * s(0);
}

HalfspaceRep ComputeHalfspaceRep(const Zonotope& z) {
  CheckSameDim(z.dim(), 3, "ComputeHalfspaceRep");
  if (!IsFullDimensional(z)) {
    throw DegenerateZonotopeError(
        "ComputeHalfspaceRep: generators do not span 3 dimensions");
  }
  return HalfspaceFromFullDim(z);
}

HalfspaceRep ComputeHalfspaceRepInflated(const Zonotope& z) {
  CheckSameDim(z.dim(), 3, "ComputeHalfspaceRepInflated");
  if (IsFullDimensional(z)) return HalfspaceFromFullDim(z);
  HalfspaceRep rep = HalfspaceFromFullDim(WithInflation(z));
  rep.inflated = true;
  return rep;
}

bool ZonoIntersect(const Zonotope& x, const Zonotope& y) {
  CheckSameDim(x.dim(), 3, "ZonoIntersect");
  CheckSameDim(y.dim(), 3, "ZonoIntersect");
  const Zonotope buffered =
      MinkowskiSum(x, Zonotope(Eigen::VectorXd::Zero(3), y.generators(),
                               y.ids()));
  const HalfspaceRep rep = ComputeHalfspaceRep(buffered);
  return rep.MaxViolation(y.center()) <= kMembershipTol;
}

bool ContainsPoint(const Zonotope& z, const Eigen::VectorXd& p, double tol) {
  CheckSameDim(z.dim(), static_cast<int>(p.size()), "ContainsPoint");
  const Eigen::VectorXd offset = p - z.center();
  const int n = z.num_generators();
  if (n == 0) return offset.lpNorm<1>() <= tol;
  const BoxLpResult lp =
      SolveBoxLp(z.generators(), offset, Eigen::VectorXd::Constant(n, -1.0),
                 Eigen::VectorXd::Ones(n), Eigen::VectorXd::Zero(n), tol);
  return lp.feasible;
}

double Gauge(const Zonotope& z, const Eigen::VectorXd& p) {
  CheckSameDim(z.dim(), static_cast<int>(p.size()), "Gauge");
  constexpr double kMaxScale = 1e12;
  const Eigen::VectorXd offset = p - z.center();
  if (offset.squaredNorm() == 0.0) return 0.0;
  const int n = z.num_generators();
  if (n == 0) return std::numeric_limits<double>::infinity();
  // Largest s with G beta = s * offset, |beta| <= 1; the gauge is 1/s.
  Eigen::MatrixXd a(z.dim(), n + 1);
  a << z.generators(), -offset;
  Eigen::VectorXd lo = Eigen::VectorXd::Constant(n + 1, -1.0);
  Eigen::VectorXd hi = Eigen::VectorXd::Ones(n + 1);
  lo(n) = 0.0;
  hi(n) = kMaxScale;
  Eigen::VectorXd cost = Eigen::VectorXd::Zero(n + 1);
  cost(n) = -1.0;
  const double tol = 1e-12 * (1.0 + z.generators().cwiseAbs().maxCoeff());
  const BoxLpResult lp =
      SolveBoxLp(a, Eigen::VectorXd::Zero(z.dim()), lo, hi, cost, tol);
  const double scale = lp.x(n);
  if (!(scale > 0.0)) return std::numeric_limits<double>::infinity();
  return scale >= kMaxScale ? 0.0 : 1.0 / scale;
}

double SupportFunction(const Zonotope& z, const Eigen::VectorXd& d) {
  CheckSameDim(z.dim(), static_cast<int>(d.size()), "SupportFunction");
  if (std::abs(d.norm() - 1.0) > 1e-9) {
    throw std::invalid_argument("SupportFunction: direction must be unit");
  }
  return d.dot(z.center()) + (d.transpose() * z.generators()).cwiseAbs().sum();
}

double SupportFunction(const Rotatotope& z, const Eigen::VectorXd& d) {
  CheckSameDim(z.dim(), static_cast<int>(d.size()), "SupportFunction");
  if (std::abs(d.norm() - 1.0) > 1e-9) {
    throw std::invalid_argument("SupportFunction: direction must be unit");
  }
  return d.dot(z.center()) + (d.transpose() * z.generators()).cwiseAbs().sum();
}

std::int64_t MaxGenericUid(const Zonotope& z) {
  std::int64_t best = -1;
  for (const auto& id : z.ids()) {
    if (id.kind == FactorKind::kGeneric) {
      best = std::max(best, static_cast<std::int64_t>(id.uid));
    }
  }
  return best;
}

std::int64_t MaxGenericUid(const Rotatotope& z) {
  std::int64_t best = -1;
  for (const auto& f : z.factors()) {
    for (const auto& id : f) {
      if (id.kind == FactorKind::kGeneric) {
        best = std::max(best, static_cast<std::int64_t>(id.uid));
      }
    }
  }
  return best;
}

nlohmann::json ToJson(const IndeterminateId& id) {
  switch (id.kind) {
    case FactorKind::kKv:
      return {{"kind", "KV"}, {"joint", id.joint}};
    case FactorKind::kKa:
      return {{"kind", "KA"}, {"joint", id.joint}};
    case FactorKind::kGeneric:
      break;
  }
  return {{"kind", "GENERIC"}, {"uid", id.uid}};
}

IndeterminateId IdFromJson(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "KV") return IndeterminateId::Kv(j.at("joint").get<int>());
  if (kind == "KA") return IndeterminateId::Ka(j.at("joint").get<int>());
  if (kind == "GENERIC") {
    return IndeterminateId::Generic(j.at("uid").get<std::uint64_t>());
  }
  throw std::invalid_argument("unknown indeterminate kind '" + kind + "'");
}

namespace {
nlohmann::json VecJson(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}
}  // namespace

nlohmann::json ToJson(const Zonotope& z) {
  nlohmann::json gens = nlohmann::json::array();
  for (int i = 0; i < z.num_generators(); ++i) {
    gens.push_back({{"vec", VecJson(z.generators().col(i))},
                    {"id", ToJson(z.ids()[i])}});
  }
  return {{"center", VecJson(z.center())}, {"generators", gens}};
}

nlohmann::json ToJson(const Rotatotope& z) {
  nlohmann::json gens = nlohmann::json::array();
  for (int i = 0; i < z.num_generators(); ++i) {
    nlohmann::json factors = nlohmann::json::array();
    for (const auto& id : z.factors(i)) factors.push_back(ToJson(id));
    gens.push_back({{"vec", VecJson(z.generators().col(i))},
                    {"factors", factors},
                    {"fully_k_sliceable", z.fully_k_sliceable(i)}});
  }
  return {{"center", VecJson(z.center())}, {"generators", gens}};
}

nlohmann::json ToJson(const MatrixZonotope& m) {
  auto mat = [](const Eigen::Matrix3d& a) {
    nlohmann::json rows = nlohmann::json::array();
    for (int r = 0; r < 3; ++r) rows.push_back({a(r, 0), a(r, 1), a(r, 2)});
    return rows;
  };
  nlohmann::json gens = nlohmann::json::array();
  for (int j = 0; j < m.num_generators(); ++j) {
    gens.push_back({{"mat", mat(m.generators[j])}, {"id", ToJson(m.ids[j])}});
  }
  return {{"center", mat(m.center)}, {"generators", gens}};
}

}  // namespace safearm::geom
