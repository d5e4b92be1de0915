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

// Time-boxed search for a safe acceleration parameter. Whatever the solver
// does internally, a FEASIBLE result has passed VerifyFeasible on the exact
// returned k_a.

#ifndef SAFEARM_OPT_OPTIMIZER_H_
#define SAFEARM_OPT_OPTIMIZER_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "safearm/constraints/constraints.h"
#include "safearm/traj/trajectory.h"

namespace safearm::opt {

enum class OptStatus { kFeasible, kInfeasibleTimeout };

std::string ToString(OptStatus s);

struct OptResult {
  OptStatus status = OptStatus::kInfeasibleTimeout;
  Eigen::VectorXd k_a;  // empty unless feasible
  double cost = 0.0;
  int iterations = 0;
  double wall_time = 0.0;
  int seed_index = -1;
};

// Value and, when grad is non-null, gradient with respect to k_a.
using CostFunction = std::function<double(const Eigen::VectorXd& k_a, Eigen::VectorXd* grad)>;

// ||q(t_f; k) - q_des||^2 with k_v = dq0.
CostFunction GoalCost(const Eigen::VectorXd& q0, const Eigen::VectorXd& dq0,
                      const Eigen::VectorXd& q_des, const traj::TimingConfig& timing);

struct SolverOptions {
  int n_rand = 8;
  int max_iterations = 150;  // per start
  // A feasible start stops after three steps each gaining less than this
  // fraction of the objective.
  double rel_tolerance = 1e-6;
  // A start that found a feasible point stops after this many iterations
  // without a significant improvement of it.
  int patience = 10;
  // Constraints are driven below -(margin + internal_margin) inside the
  // solver, so candidates clear verification with room to spare.
  double internal_margin = 1e-4;
  double mu_initial = 1.0;
  double mu_growth = 10.0;
  double mu_max = 1e4;
  std::uint64_t rng_seed = 1;
  int num_threads = 1;
  // Ignore wall-clock time (iteration caps only); only a non-positive
  // budget still times out. Used for reproducible runs.
  bool deterministic = false;
};

// True iff k_a is in the box and every constraint is <= -margin.
bool VerifyFeasible(const constraints::ConstraintSet& cs, const Eigen::VectorXd& k_a,
                    double margin);

// Box center, full-brake clamp(-k_v / t_plan), then n_rand uniform samples.
std::vector<Eigen::VectorXd> DefaultSeeds(const constraints::ConstraintSet& cs,
                                          const Eigen::VectorXd& k_v, double t_plan,
                                          int n_rand, std::uint64_t rng_seed);

class Solver {
 public:
  virtual ~Solver() = default;
  // One local search from `seed`; returns the best candidate it believes
  // feasible, or an empty vector.
  virtual Eigen::VectorXd Search(const CostFunction& cost,
                                 const constraints::ConstraintSet& cs,
                                 const Eigen::VectorXd& seed,
                                 const std::function<bool()>& out_of_time,
                                 int* iterations) const = 0;
};

// Exact-penalty projected subgradient descent with backtracking, working
// in normalized coordinates.
class PenaltySubgradientSolver : public Solver {
 public:
  explicit PenaltySubgradientSolver(SolverOptions options) : options_(options) {}
  Eigen::VectorXd Search(const CostFunction& cost, const constraints::ConstraintSet& cs,
                         const Eigen::VectorXd& seed,
                         const std::function<bool()>& out_of_time,
                         int* iterations) const override;

 private:
  SolverOptions options_;
};

OptResult OptTraj(const CostFunction& cost, const constraints::ConstraintSet& cs,
                  double budget, const std::vector<Eigen::VectorXd>& seeds,
                  const SolverOptions& options = {}, const Solver* solver = nullptr);

}  // namespace safearm::opt

#endif  // SAFEARM_OPT_OPTIMIZER_H_
