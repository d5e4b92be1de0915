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

#include "safearm/geom/box_lp.h"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <tuple>
#include <utility>
#include <vector>

namespace safearm::geom {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPivotTol = 1e-11;
constexpr double kReducedCostTol = 1e-12;

enum class Status : unsigned char { kBasic, kLower, kUpper };

// Tableau over structural columns [0, n) and artificial columns [n, n + m).
class BoundedSimplex {
 public:
  BoundedSimplex(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                 const Eigen::VectorXd& lo, const Eigen::VectorXd& hi)
      : m_(static_cast<int>(a.rows())),
        n_(static_cast<int>(a.cols())),
        tableau_(m_, n_ + m_),
        lo_(n_ + m_),
        hi_(n_ + m_),
        xb_(m_),
        basis_(m_),
        status_(n_ + m_, Status::kLower) {
    lo_.head(n_) = lo;
    hi_.head(n_) = hi;
    lo_.tail(m_).setZero();
    hi_.tail(m_).setConstant(kInf);
    const Eigen::VectorXd residual = b - a * lo;
    tableau_.setZero();
    for (int i = 0; i < m_; ++i) {
      const double sign = residual(i) < 0.0 ? -1.0 : 1.0;
      tableau_.row(i).head(n_) = sign * a.row(i);
      tableau_(i, n_ + i) = 1.0;
      xb_(i) = sign * residual(i);
      basis_[i] = n_ + i;
      status_[n_ + i] = Status::kBasic;
    }
  }

  // Runs the simplex for the given full-length cost vector.
  void Optimize(const Eigen::VectorXd& cost) {
    const int total = n_ + m_;
    const int max_iterations = 200 * (total + m_) + 1000;
    Eigen::VectorXd reduced(total);
    for (int iter = 0; iter < max_iterations; ++iter) {
      Eigen::VectorXd cb(m_);
      for (int i = 0; i < m_; ++i) cb(i) = cost(basis_[i]);
      reduced = cost.transpose() - cb.transpose() * tableau_;

      int entering = -1;
      double direction = 0.0;
      for (int j = 0; j < total; ++j) {
        if (status_[j] == Status::kBasic || hi_(j) <= lo_(j)) continue;
        if (status_[j] == Status::kLower && reduced(j) < -kReducedCostTol) {
          entering = j;
          direction = 1.0;
          break;
        }
        if (status_[j] == Status::kUpper && reduced(j) > kReducedCostTol) {
          entering = j;
          direction = -1.0;
          break;
        }
      }
      if (entering < 0) return;

      double theta = hi_(entering) - lo_(entering);
      int leaving_row = -1;
      bool leaving_to_upper = false;
      for (int i = 0; i < m_; ++i) {
        const double alpha = direction * tableau_(i, entering);
        const int var = basis_[i];
        double limit;
        bool to_upper;
        if (alpha > kPivotTol) {
          limit = (xb_(i) - lo_(var)) / alpha;
          to_upper = false;
        } else if (alpha < -kPivotTol && std::isfinite(hi_(var))) {
          limit = (hi_(var) - xb_(i)) / (-alpha);
          to_upper = true;
        } else {
          continue;
        }
        limit = std::max(limit, 0.0);
        if (limit < theta ||
            (limit == theta && leaving_row >= 0 && var < basis_[leaving_row])) {
          theta = limit;
          leaving_row = i;
          leaving_to_upper = to_upper;
        }
      }
      if (!std::isfinite(theta)) return;  // unbounded ray; not reachable here

      xb_ -= theta * direction * tableau_.col(entering);
      if (leaving_row < 0) {
        status_[entering] =
            direction > 0 ? Status::kUpper : Status::kLower;
        continue;
      }
      const double entering_value = direction > 0
                                        ? lo_(entering) + theta
                                        : hi_(entering) - theta;
      const int leaving_var = basis_[leaving_row];
      status_[leaving_var] =
          leaving_to_upper ? Status::kUpper : Status::kLower;
      status_[entering] = Status::kBasic;
      basis_[leaving_row] = entering;
      xb_(leaving_row) = entering_value;

      const double pivot = tableau_(leaving_row, entering);
      tableau_.row(leaving_row) /= pivot;
      for (int i = 0; i < m_; ++i) {
        if (i == leaving_row) continue;
        const double factor = tableau_(i, entering);
        if (factor != 0.0) {
          tableau_.row(i) -= factor * tableau_.row(leaving_row);
        }
      }
    }
  }

  double ArtificialSum() const {
    double sum = 0.0;
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] >= n_) sum += std::abs(xb_(i));
    }
    return sum;
  }

  // Pins artificials to zero for the second phase.
  void FixArtificials() { hi_.tail(m_).setZero(); }

  Eigen::VectorXd Solution() const {
    Eigen::VectorXd x(n_);
    for (int j = 0; j < n_; ++j) {
      x(j) = status_[j] == Status::kUpper ? hi_(j) : lo_(j);
    }
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_) x(basis_[i]) = xb_(i);
    }
    return x;
  }

  int m() const { return m_; }
  int n() const { return n_; }

 private:
  int m_;
  int n_;
  Eigen::MatrixXd tableau_;
  Eigen::VectorXd lo_;
  Eigen::VectorXd hi_;
  Eigen::VectorXd xb_;
  std::vector<int> basis_;
  std::vector<Status> status_;
};

}  // namespace

BoxLpResult SolveBoxLp(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                       const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                       const Eigen::VectorXd& c, double feas_tol) {
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  if (b.size() != m || lo.size() != n || hi.size() != n || c.size() != n) {
    throw std::invalid_argument("SolveBoxLp: inconsistent dimensions");
  }
  for (int j = 0; j < n; ++j) {
    if (!std::isfinite(lo(j)) || !std::isfinite(hi(j)) || lo(j) > hi(j)) {
      throw std::invalid_argument("SolveBoxLp: bounds must be finite, lo<=hi");
    }
  }

  BoxLpResult result;
  BoundedSimplex simplex(a, b, lo, hi);
  Eigen::VectorXd phase_one = Eigen::VectorXd::Zero(n + m);
  phase_one.tail(m).setOnes();
  simplex.Optimize(phase_one);

  auto residual_of = [&](Eigen::VectorXd x) {
    x = x.cwiseMax(lo).cwiseMin(hi);
    return std::make_pair((a * x - b).lpNorm<1>(), x);
  };

  auto [residual, x] = residual_of(simplex.Solution());
  result.infeasibility = residual;
  result.feasible = residual <= feas_tol;
  if (!result.feasible) {
    result.x = x;
    result.objective = c.dot(x);
    return result;
  }
  if (c.squaredNorm() > 0.0) {
    simplex.FixArtificials();
    Eigen::VectorXd phase_two = Eigen::VectorXd::Zero(n + m);
    phase_two.head(n) = c;
    simplex.Optimize(phase_two);
    std::tie(residual, x) = residual_of(simplex.Solution());
    result.infeasibility = residual;
  }
  result.x = x;
  result.objective = c.dot(x);
  return result;
}

}  // namespace safearm::geom
