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

#include <cmath>
#include <random>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "safearm/geom/box_lp.h"
#include "safearm/geom/set_ops.h"

namespace safearm::geom {
namespace {

using Eigen::MatrixXd;
using Eigen::Vector3d;
using Eigen::VectorXd;

Zonotope RandomZono(std::mt19937_64& rng, int dim, int n_gens,
                    std::uint64_t uid_base = 0) {
  std::normal_distribution<double> normal(0.0, 1.0);
  VectorXd c(dim);
  for (int d = 0; d < dim; ++d) c(d) = normal(rng);
  MatrixXd g(dim, n_gens);
  for (int i = 0; i < n_gens; ++i) {
    for (int d = 0; d < dim; ++d) g(d, i) = 0.5 * normal(rng);
  }
  std::vector<IndeterminateId> ids;
  for (int i = 0; i < n_gens; ++i) ids.push_back(IndeterminateId::Generic(uid_base + i));
  return Zonotope(c, g, ids);
}

VectorXd RandomUnit(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> normal(0.0, 1.0);
  VectorXd d(dim);
  for (int k = 0; k < dim; ++k) d(k) = normal(rng);
  return d.normalized();
}

VectorXd SamplePoint(std::mt19937_64& rng, const Zonotope& z) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  VectorXd p = z.center();
  for (int i = 0; i < z.num_generators(); ++i) p += u(rng) * z.generators().col(i);
  return p;
}

Zonotope UnitCube() {
  return Zonotope::Box(Vector3d::Zero(), Vector3d::Ones(), 0);
}

TEST(BoxLpTest, SimpleFeasibility) {
  MatrixXd a(1, 2);
  a << 1.0, 1.0;
  VectorXd b(1);
  b << 1.5;
  const VectorXd lo = VectorXd::Constant(2, -1.0), hi = VectorXd::Ones(2);
  EXPECT_TRUE(SolveBoxLp(a, b, lo, hi, VectorXd::Zero(2), 1e-9).feasible);
  b << 2.5;
  EXPECT_FALSE(SolveBoxLp(a, b, lo, hi, VectorXd::Zero(2), 1e-9).feasible);
}

TEST(BoxLpTest, OptimizesLinearObjective) {
  MatrixXd a(1, 2);
  a << 1.0, -1.0;
  VectorXd b(1);
  b << 0.0;
  VectorXd c(2);
  c << -1.0, -2.0;
  const BoxLpResult r = SolveBoxLp(a, b, VectorXd::Constant(2, -1.0),
                                   VectorXd::Ones(2), c, 1e-9);
  ASSERT_TRUE(r.feasible);
  EXPECT_NEAR(r.objective, -3.0, 1e-12);
}

TEST(MinkowskiSumTest, ConcatenatesGenerators) {
  const Zonotope x(VectorXd::Unit(2, 0), MatrixXd(VectorXd::Unit(2, 1)),
                   {IndeterminateId::Generic(1)});
  const Zonotope y(VectorXd::Constant(2, 2.0), MatrixXd(VectorXd::Unit(2, 0)),
                   {IndeterminateId::Generic(2)});
  const Zonotope s = MinkowskiSum(x, y);
  EXPECT_EQ(s.center(), (VectorXd(2) << 3, 2).finished());
  ASSERT_EQ(s.num_generators(), 2);
  EXPECT_EQ(s.generators().col(0), VectorXd::Unit(2, 1));
  EXPECT_EQ(s.ids()[1], IndeterminateId::Generic(2));
  EXPECT_EQ(MinkowskiSum(x, Zonotope::Point(VectorXd::Zero(2))), x);
  EXPECT_THROW(MinkowskiSum(x, UnitCube()), std::invalid_argument);
}

TEST(MinkowskiSumTest, SupportAdditivity) {
  std::mt19937_64 rng(1);
  const Zonotope x = RandomZono(rng, 3, 4), y = RandomZono(rng, 3, 6, 10);
  const Zonotope s = MinkowskiSum(x, y);
  for (int k = 0; k < 100; ++k) {
    const VectorXd d = RandomUnit(rng, 3);
    EXPECT_NEAR(SupportFunction(s, d),
                SupportFunction(x, d) + SupportFunction(y, d), 1e-12);
  }
}

TEST(LinearMapTest, RotationAndContainment) {
  Eigen::Matrix3d rz;
  rz << 0, -1, 0, 1, 0, 0, 0, 0, 1;
  const Zonotope p = LinearMap(rz, Zonotope::Point(Vector3d::UnitX()));
  EXPECT_TRUE(p.center().isApprox(Vector3d::UnitY()));
  std::mt19937_64 rng(2);
  const Zonotope z = RandomZono(rng, 3, 5);
  const MatrixXd a = MatrixXd::Random(3, 3);
  const Zonotope az = LinearMap(a, z);
  for (int k = 0; k < 1000; ++k) {
    EXPECT_TRUE(ContainsPoint(az, a * SamplePoint(rng, z)));
  }
}

TEST(SliceTest, FoldsEvaluatedGenerators) {
  const IndeterminateId s = IndeterminateId::Kv(0);
  const Zonotope z(Vector3d::Zero(), MatrixXd(Vector3d(1, 2, 3)), {s});
  const double one = 1.0, zero = 0.0;
  const Zonotope a = Slice(z, std::span(&s, 1), std::span(&one, 1));
  EXPECT_EQ(a.num_generators(), 0);
  EXPECT_EQ(a.center(), Vector3d(1, 2, 3));
  const Zonotope b = Slice(z, std::span(&s, 1), std::span(&zero, 1));
  EXPECT_EQ(b.center(), Vector3d::Zero());
  const double bad = 1.5;
  EXPECT_THROW(Slice(z, std::span(&s, 1), std::span(&bad, 1)),
               std::invalid_argument);
  const IndeterminateId absent = IndeterminateId::Ka(3);
  EXPECT_EQ(Slice(z, std::span(&absent, 1), std::span(&one, 1)), z);
}

TEST(SliceTest, RotatotopePartialEvaluation) {
  // c + g1 * ka0 * b + g2 * b: slicing ka0 = 0.5 halves g1 only.
  const IndeterminateId ka = IndeterminateId::Ka(0);
  const IndeterminateId b = IndeterminateId::Generic(7);
  MatrixXd g(3, 2);
  g << 2, 0, 0, 1, 0, 0;
  const Rotatotope r(Vector3d::Zero(), g, {{ka, b}, {b}});
  ASSERT_TRUE(r.k_sliceable(0));
  ASSERT_FALSE(r.fully_k_sliceable(0));
  const double half = 0.5;
  const Rotatotope s = Slice(r, std::span(&ka, 1), std::span(&half, 1));
  ASSERT_EQ(s.num_generators(), 2);
  EXPECT_EQ(s.generators().col(0), Vector3d(1, 0, 0));
  EXPECT_EQ(s.factors(0), FactorSet{b});
  EXPECT_FALSE(s.k_sliceable(0));
}

TEST(SliceTest, RepeatedFactorMultipliesPerOccurrence) {
  const IndeterminateId ka = IndeterminateId::Ka(1);
  const Rotatotope r(Vector3d::Zero(), MatrixXd(Vector3d(4, 0, 0)), {{ka, ka}});
  const double v = 0.5;
  const Rotatotope s = Slice(r, std::span(&ka, 1), std::span(&v, 1));
  EXPECT_EQ(s.num_generators(), 0);
  EXPECT_EQ(s.center(), Vector3d(1, 0, 0));
}

TEST(SliceTest, CompositionAndContainment) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  MatrixXd g = MatrixXd::Random(3, 4);
  const std::vector<IndeterminateId> ids = {
      IndeterminateId::Kv(0), IndeterminateId::Ka(0), IndeterminateId::Ka(1),
      IndeterminateId::Generic(0)};
  const Zonotope z(Vector3d::Random(), g, ids);
  const std::vector<IndeterminateId> a = {ids[0]}, bset = {ids[1], ids[2]};
  const std::vector<double> va = {u(rng)}, vb = {u(rng), u(rng)};
  const Zonotope twice = Slice(Slice(z, a, va), bset, vb);
  const std::vector<IndeterminateId> all = {ids[0], ids[1], ids[2]};
  const std::vector<double> vall = {va[0], vb[0], vb[1]};
  const Zonotope once = Slice(z, all, vall);
  EXPECT_TRUE(twice.center().isApprox(once.center(), 1e-15));
  EXPECT_EQ(twice.ids(), once.ids());
  for (int k = 0; k < 1000; ++k) {
    EXPECT_TRUE(ContainsPoint(z, SamplePoint(rng, once)));
  }
}

TEST(ProductTest, IdentityAndGeneratorCount) {
  std::mt19937_64 rng(4);
  const Zonotope z = RandomZono(rng, 3, 1);
  const Rotatotope id_prod = Product(MatrixZonotope{}, z);
  EXPECT_EQ(id_prod, Rotatotope(z));
  MatrixZonotope m;
  m.generators.push_back(Eigen::Matrix3d::Random());
  m.ids.push_back(IndeterminateId::Ka(0));
  EXPECT_EQ(Product(m, z).num_generators(), 3);
}

TEST(ProductTest, SampledProductsContained) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  MatrixZonotope m;
  m.center = Eigen::Matrix3d::Random();
  for (int j = 0; j < 2; ++j) {
    m.generators.push_back(0.3 * Eigen::Matrix3d::Random());
    m.ids.push_back(IndeterminateId::Generic(100 + j));
  }
  const Zonotope z = RandomZono(rng, 3, 3);
  const Zonotope out = OverapproxAsZonotope(Product(m, z));
  for (int k = 0; k < 1000; ++k) {
    Eigen::Matrix3d a = m.center;
    for (int j = 0; j < 2; ++j) a += u(rng) * m.generators[j];
    EXPECT_TRUE(ContainsPoint(out, a * SamplePoint(rng, z)));
  }
}

TEST(OverapproxTest, FreshIdsAndContainment) {
  const IndeterminateId b = IndeterminateId::Generic(5);
  const IndeterminateId l = IndeterminateId::Ka(0);
  MatrixXd g(3, 3);
  g << 1, 0, 0, 0, 1, 0, 0, 0, 1;
  const Rotatotope r(Vector3d::Zero(), g, {{b}, {b, l}, {l, l}});
  const Zonotope z = OverapproxAsZonotope(r);
  EXPECT_EQ(z.ids()[0], b);
  std::set<IndeterminateId> input_ids = {b, l};
  EXPECT_FALSE(input_ids.count(z.ids()[1]));
  EXPECT_FALSE(input_ids.count(z.ids()[2]));
  EXPECT_NE(z.ids()[1], z.ids()[2]);
  // b * l over [-1,1]^2 and l * l over [0,1].
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 1000; ++k) {
    const double bv = u(rng), lv = u(rng);
    EXPECT_TRUE(ContainsPoint(z, Vector3d(bv, bv * lv, lv * lv)));
  }
  const Zonotope single(Vector3d::Zero(), g, {b, l, IndeterminateId::Kv(1)});
  EXPECT_EQ(OverapproxAsZonotope(Rotatotope(single)), single);
}

TEST(ReduceTest, UnchangedAndIntervalHull) {
  std::mt19937_64 rng(7);
  const Zonotope z = RandomZono(rng, 3, 4);
  EXPECT_EQ(Reduce(z, 4), z);
  const Zonotope line(VectorXd::Zero(1), MatrixXd::Ones(1, 3),
                      {IndeterminateId::Generic(0), IndeterminateId::Generic(1),
                       IndeterminateId::Generic(2)});
  const Zonotope r = Reduce(line, 0);
  ASSERT_EQ(r.num_generators(), 1);
  EXPECT_DOUBLE_EQ(r.generators()(0, 0), 3.0);
  EXPECT_EQ(r.ids()[0], IndeterminateId::Generic(3));
}

TEST(ReduceTest, SupportMonotoneAndFreshIds) {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> count(1, 15);
  for (int trial = 0; trial < 50; ++trial) {
    const Zonotope z = RandomZono(rng, 3, count(rng));
    const int n_red = std::uniform_int_distribution<int>(0, z.num_generators())(rng);
    const Zonotope r = Reduce(z, n_red);
    EXPECT_LE(r.num_generators(), n_red + 3);
    for (int k = 0; k < 200; ++k) {
      const VectorXd d = RandomUnit(rng, 3);
      EXPECT_GE(SupportFunction(r, d), SupportFunction(z, d) - 1e-12);
    }
    const std::set<IndeterminateId> in(z.ids().begin(), z.ids().end());
    if (n_red < z.num_generators()) {
      for (int i = n_red; i < r.num_generators(); ++i) {
        EXPECT_FALSE(in.count(r.ids()[i]));
      }
    }
  }
}

TEST(ReduceTest, PreserveSliceablePolicy) {
  MatrixXd g(3, 3);
  g << 0.1, 5, 0, 0, 0, 4, 0, 0, 0;
  const Rotatotope r(Vector3d::Zero(), g,
                     {{IndeterminateId::Ka(0)}, {IndeterminateId::Generic(0)},
                      {IndeterminateId::Generic(1)}});
  const Rotatotope by_norm = Reduce(r, 1);
  EXPECT_FALSE(by_norm.fully_k_sliceable(0));
  const Rotatotope kept = Reduce(r, 1, ReducePolicy::kPreserveSliceable);
  EXPECT_TRUE(kept.fully_k_sliceable(0));
  EXPECT_EQ(kept.generators().col(0), Vector3d(0.1, 0, 0));
}

TEST(HalfspaceTest, UnitCube) {
  const HalfspaceRep rep = ComputeHalfspaceRep(UnitCube());
  ASSERT_EQ(rep.rows(), 6);
  for (int i = 0; i < 6; ++i) EXPECT_NEAR(rep.b(i), 1.0, 1e-15);
}

TEST(HalfspaceTest, AgreesWithMembershipOracle) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> normal(0.0, 1.0);
  const Zonotope z = RandomZono(rng, 3, 5);
  const HalfspaceRep rep = ComputeHalfspaceRep(z);
  int decided = 0;
  for (int k = 0; k < 10000; ++k) {
    Vector3d y = z.center();
    for (int d = 0; d < 3; ++d) y(d) += 1.2 * normal(rng);
    const double v = rep.MaxViolation(y);
    if (std::abs(v) <= kMembershipTol) continue;
    ++decided;
    EXPECT_EQ(v < 0, ContainsPoint(z, y)) << "k=" << k;
  }
  EXPECT_GT(decided, 9000);
}

TEST(HalfspaceTest, ParallelPairSkipped) {
  MatrixXd g(3, 4);
  g << 1, 2, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1;
  const Zonotope z(Vector3d::Zero(), g,
                   {IndeterminateId::Generic(0), IndeterminateId::Generic(1),
                    IndeterminateId::Generic(2), IndeterminateId::Generic(3)});
  const HalfspaceRep rep = ComputeHalfspaceRep(z);
  EXPECT_EQ(rep.rows(), 2 * 5);
  EXPECT_LE(rep.MaxViolation(Vector3d(3, 1, 1)), 1e-12);
  EXPECT_GT(rep.MaxViolation(Vector3d(3.1, 0, 0)), 0.0);
}

TEST(HalfspaceTest, DegenerateThrowsAndInflates) {
  MatrixXd g(3, 2);
  g << 1, 0, 0, 1, 0, 0;
  const Zonotope flat(Vector3d::Zero(), g,
                      {IndeterminateId::Generic(0), IndeterminateId::Generic(1)});
  EXPECT_THROW(ComputeHalfspaceRep(flat), DegenerateZonotopeError);
  const HalfspaceRep rep = ComputeHalfspaceRepInflated(flat);
  EXPECT_TRUE(rep.inflated);
  EXPECT_LE(rep.MaxViolation(Vector3d(1, 1, 0)), 0.0);
  EXPECT_GT(rep.MaxViolation(Vector3d(0, 0, 1e-6)), 0.0);
}

TEST(IntersectTest, Boxes) {
  EXPECT_TRUE(ZonoIntersect(UnitCube(), Zonotope::Point(Vector3d(0.5, 0, 0))));
  EXPECT_FALSE(ZonoIntersect(
      UnitCube(), Zonotope::Box(Vector3d(3, 0, 0), Vector3d::Ones(), 10)));
}

TEST(IntersectTest, AgreesWithPairFeasibility) {
  std::mt19937_64 rng(10);
  std::uniform_int_distribution<int> count(1, 6);
  int disagreements = 0;
  for (int k = 0; k < 2000; ++k) {
    const Zonotope x = RandomZono(rng, 3, 3 + count(rng));
    Zonotope y = RandomZono(rng, 3, count(rng), 50);
    // x + G b = y + H g  <=>  [G, -H] (b, g) = y.c - x.c.
    MatrixXd a(3, x.num_generators() + y.num_generators());
    a << x.generators(), -y.generators();
    const int n = static_cast<int>(a.cols());
    const bool oracle = SolveBoxLp(a, y.center() - x.center(),
                                   VectorXd::Constant(n, -1.0),
                                   VectorXd::Ones(n), VectorXd::Zero(n), 1e-9)
                            .feasible;
    const HalfspaceRep rep = ComputeHalfspaceRep(MinkowskiSum(
        x, Zonotope(Vector3d::Zero(), y.generators(), y.ids())));
    if (std::abs(rep.MaxViolation(y.center())) <= kMembershipTol) continue;
    disagreements += ZonoIntersect(x, y) != oracle;
  }
  EXPECT_EQ(disagreements, 0);
}

TEST(ContainsPointTest, Basics) {
  std::mt19937_64 rng(11);
  const Zonotope z = RandomZono(rng, 3, 6);
  EXPECT_TRUE(ContainsPoint(z, z.center()));
  const Zonotope unit(VectorXd::Zero(1), MatrixXd::Ones(1, 1),
                      {IndeterminateId::Generic(0)});
  EXPECT_FALSE(ContainsPoint(unit, VectorXd::Constant(1, 1.5)));
  for (int k = 0; k < 1000; ++k) EXPECT_TRUE(ContainsPoint(z, SamplePoint(rng, z)));
}

TEST(GaugeTest, MatchesBoxScaling) {
  const Zonotope cube = UnitCube();
  EXPECT_NEAR(Gauge(cube, Vector3d(0.5, 0.2, -0.1)), 0.5, 1e-12);
  EXPECT_NEAR(Gauge(cube, Vector3d(0, -3, 1)), 3.0, 1e-12);
  EXPECT_EQ(Gauge(cube, Vector3d::Zero()), 0.0);
  MatrixXd g(3, 1);
  g << 1, 0, 0;
  const Zonotope seg(Vector3d::Zero(), g, {IndeterminateId::Generic(0)});
  EXPECT_TRUE(std::isinf(Gauge(seg, Vector3d(0, 1, 0))));
}

TEST(SupportTest, CubeTranslationAndSampling) {
  EXPECT_DOUBLE_EQ(SupportFunction(UnitCube(), Vector3d::UnitX()), 1.0);
  std::mt19937_64 rng(12);
  const Zonotope z = RandomZono(rng, 3, 4);
  const Vector3d v(0.3, -1.0, 2.0);
  const Zonotope shifted(z.center() + v, z.generators(), z.ids());
  const VectorXd d = RandomUnit(rng, 3);
  EXPECT_NEAR(SupportFunction(shifted, d), SupportFunction(z, d) + d.dot(v), 1e-12);
  double best = -1e300;
  std::bernoulli_distribution coin(0.5);
  for (int k = 0; k < 100000; ++k) {
    VectorXd p = z.center();
    for (int i = 0; i < z.num_generators(); ++i) {
      p += (coin(rng) ? 1.0 : -1.0) * z.generators().col(i);
    }
    best = std::max(best, d.dot(p));
  }
  EXPECT_NEAR(best, SupportFunction(z, d), 1e-12);
  EXPECT_THROW(SupportFunction(z, Vector3d(2, 0, 0)), std::invalid_argument);
}

TEST(MergeTest, ParameterMonomialsAndParallel) {
  const IndeterminateId ka = IndeterminateId::Ka(0);
  const IndeterminateId b = IndeterminateId::Generic(0);
  MatrixXd g(3, 4);
  g << 1, 2, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0;
  const Rotatotope r(Vector3d::Zero(), g, {{ka}, {ka}, {b}, {b}});
  const Rotatotope m = MergeParameterMonomials(r);
  ASSERT_EQ(m.num_generators(), 2);
  EXPECT_EQ(m.generators().col(0), Vector3d(3, 0, 0));
  EXPECT_EQ(m.factors(1), FactorSet{b});

  MatrixXd h(3, 3);
  h << 1, -2, 0, 0, 0, 1, 0, 0, 0;
  const Zonotope z(Vector3d::Zero(), h,
                   {IndeterminateId::Generic(0), IndeterminateId::Generic(1),
                    IndeterminateId::Generic(2)});
  const Zonotope p = MergeParallel(z);
  ASSERT_EQ(p.num_generators(), 2);
  EXPECT_EQ(p.generators().col(0), Vector3d(3, 0, 0));
}

TEST(JsonTest, IdRoundTrip) {
  for (const auto& id : {IndeterminateId::Kv(2), IndeterminateId::Ka(0),
                         IndeterminateId::Generic(99)}) {
    EXPECT_EQ(IdFromJson(ToJson(id)), id);
  }
  EXPECT_EQ(ToJson(UnitCube())["generators"].size(), 3u);
}

}  // namespace
}  // namespace safearm::geom
