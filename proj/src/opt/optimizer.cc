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

#include "safearm/opt/optimizer.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "safearm/util/parallel.h"

namespace safearm::opt {
namespace {

using Clock = std::chrono::steady_clock;
using constraints::ConstraintSet;

constexpr double kMinStep = 1e-12;

Eigen::VectorXd ToKa(const ConstraintSet& cs, const Eigen::VectorXd& x) {
  Eigen::VectorXd k(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const auto& b = cs.boxes[i];
    k(i) = std::clamp(b.ka_center + b.ka_halfwidth * x(i), b.ka_lo(), b.ka_hi());
  }
  return k;
}

}  // namespace

std::string ToString(OptStatus s) {
  return s == OptStatus::kFeasible ? "FEASIBLE" : "INFEASIBLE_TIMEOUT";
}

CostFunction GoalCost(const Eigen::VectorXd& q0, const Eigen::VectorXd& dq0,
                      const Eigen::VectorXd& q_des, const traj::TimingConfig& timing) {
  if (q0.size() != dq0.size() || q0.size() != q_des.size()) {
    throw std::invalid_argument("GoalCost: dimension mismatch");
  }
  // q(t_f) is affine in k_a.
  const double slope = 0.5 * timing.t_plan * timing.t_f;
  return [=](const Eigen::VectorXd& k_a, Eigen::VectorXd* grad) {
    Eigen::VectorXd r(q0.size());
    for (Eigen::Index i = 0; i < q0.size(); ++i) {
      r(i) = traj::JointPosition(dq0(i), k_a(i), q0(i), timing.t_f, timing) - q_des(i);
    }
    if (grad != nullptr) *grad = 2.0 * slope * r;
    return r.squaredNorm();
  };
}

bool VerifyFeasible(const ConstraintSet& cs, const Eigen::VectorXd& k_a, double margin) {
  if (!constraints::InBox(cs.boxes, k_a)) return false;
  for (Eigen::Index i = 0; i < k_a.size(); ++i) {
    if (!std::isfinite(k_a(i))) return false;
  }
  const auto v = constraints::EvalConstraints(cs, k_a, false);
  for (Eigen::Index r = 0; r < v.values.size(); ++r) {
    if (!(v.values(r) <= -margin)) return false;
  }
  return true;
}

std::vector<Eigen::VectorXd> DefaultSeeds(const ConstraintSet& cs, const Eigen::VectorXd& k_v,
                                          double t_plan, int n_rand, std::uint64_t rng_seed) {
  const int n = cs.n_q;
  std::vector<Eigen::VectorXd> seeds;
  Eigen::VectorXd center(n), brake(n);
  for (int i = 0; i < n; ++i) {
    const auto& b = cs.boxes[i];
    center(i) = b.ka_center;
    brake(i) = std::clamp(-k_v(i) / t_plan, b.ka_lo(), b.ka_hi());
  }
  seeds.push_back(center);
  seeds.push_back(brake);
  std::mt19937_64 rng(rng_seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int s = 0; s < n_rand; ++s) {
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x(i) = u(rng);
    seeds.push_back(ToKa(cs, x));
  }
  return seeds;
}

Eigen::VectorXd PenaltySubgradientSolver::Search(const CostFunction& cost,
                                                 const ConstraintSet& cs,
                                                 const Eigen::VectorXd& seed,
                                                 const std::function<bool()>& out_of_time,
                                                 int* iterations) const {
  const int n = cs.n_q;
  Eigen::VectorXd hw(n);
  for (int i = 0; i < n; ++i) hw(i) = cs.boxes[i].ka_halfwidth;
  const double target = cs.margin + options_.internal_margin;
  double mu = options_.mu_initial;

  struct Eval {
    double penalized = 0.0;
    double cost = 0.0;
    bool feasible = false;
    Eigen::VectorXd grad;  // in normalized coordinates
  };
  auto evaluate = [&](const Eigen::VectorXd& x) {
    Eval e;
    const Eigen::VectorXd k = ToKa(cs, x);
    Eigen::VectorXd gk;
    e.cost = cost(k, &gk);
    const auto v = constraints::EvalConstraints(cs, k, true);
    double violation = 0.0;
    for (Eigen::Index r = 0; r < v.values.size(); ++r) {
      const double excess = v.values(r) + target;
      if (excess > 0.0) {
        violation += excess;
        gk += mu * v.subgradients.row(r).transpose();
      }
    }
    e.feasible = violation == 0.0;
    e.penalized = e.cost + mu * violation;
    e.grad = gk.cwiseProduct(hw);
    return e;
  };

  Eigen::VectorXd x = constraints::NormalizeKa(cs.boxes, seed).cwiseMax(-1.0).cwiseMin(1.0);
  Eval cur = evaluate(x);
  Eigen::VectorXd best;
  double best_cost = std::numeric_limits<double>::infinity();
  double step = 1.0;
  int slow = 0;
  int since_best = 0;
  int it = 0;
  for (; it < options_.max_iterations; ++it) {
    if (cur.feasible && cur.cost < best_cost) {
      const bool significant =
          best.size() == 0 ||
          best_cost - cur.cost > options_.rel_tolerance * (1.0 + std::abs(best_cost));
      since_best = significant ? 0 : since_best + 1;
      best_cost = cur.cost;
      best = x;
    } else if (best.size() > 0) {
      ++since_best;
    }
    // Zigzagging along an active constraint gains little per step.
    if (since_best >= options_.patience) break;
    if (out_of_time()) break;
    bool moved = false;
    if (cur.grad.squaredNorm() > 0.0) {
      for (double a = step; a >= kMinStep; a *= 0.5) {
        const Eigen::VectorXd trial = (x - a * cur.grad).cwiseMax(-1.0).cwiseMin(1.0);
        if (trial == x) break;
        Eval next = evaluate(trial);
        if (next.penalized < cur.penalized) {
          const double gain = cur.penalized - next.penalized;
          slow = gain <= options_.rel_tolerance * (1.0 + std::abs(cur.penalized)) ? slow + 1 : 0;
          x = trial;
          cur = std::move(next);
          step = std::min(2.0 * a, 1e6);
          moved = true;
          break;
        }
      }
    }
    if (moved && !(cur.feasible && slow >= 3)) continue;
    // Stationary for the current penalty weight.
    if (cur.feasible || mu >= options_.mu_max) break;
    mu *= options_.mu_growth;
    step = 1.0;
    cur = evaluate(x);
  }
  if (cur.feasible && cur.cost < best_cost) best = x;
  if (iterations != nullptr) *iterations = it;
  if (best.size() == 0) return best;
  return ToKa(cs, best);
}

OptResult OptTraj(const CostFunction& cost, const ConstraintSet& cs, double budget,
                  const std::vector<Eigen::VectorXd>& seeds, const SolverOptions& options,
                  const Solver* solver) {
  const auto start = Clock::now();
  OptResult result;
  auto elapsed = [&start] {
    return std::chrono::duration<double>(Clock::now() - start).count();
  };
  if (!(budget > 0.0)) {
    result.wall_time = elapsed();
    return result;
  }
  PenaltySubgradientSolver fallback(options);
  const Solver& s = solver != nullptr ? *solver : fallback;
  auto out_of_time = [&] { return !options.deterministic && elapsed() > budget; };

  const int count = static_cast<int>(seeds.size());
  std::vector<Eigen::VectorXd> candidates(count);
  std::vector<int> iters(count, 0);
  util::ParallelFor(count, options.num_threads, [&](int i) {
    if (out_of_time()) return;
    candidates[i] = s.Search(cost, cs, seeds[i], out_of_time, &iters[i]);
  });

  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < count; ++i) {
    result.iterations += iters[i];
    if (candidates[i].size() == 0) continue;
    if (!VerifyFeasible(cs, candidates[i], cs.margin)) continue;
    const double c = cost(candidates[i], nullptr);
    if (c < best) {
      best = c;
      result.status = OptStatus::kFeasible;
      result.k_a = candidates[i];
      result.cost = c;
      result.seed_index = i;
    }
  }
  result.wall_time = elapsed();
  return result;
}

}  // namespace safearm::opt
