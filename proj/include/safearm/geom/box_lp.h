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

#ifndef SAFEARM_GEOM_BOX_LP_H_
#define SAFEARM_GEOM_BOX_LP_H_

#include <Eigen/Dense>

namespace safearm::geom {

struct BoxLpResult {
  bool feasible = false;
  // Phase-one residual sum |A x - b| at termination.
  double infeasibility = 0.0;
  double objective = 0.0;
  Eigen::VectorXd x;
};

// Dense two-phase bounded-variable simplex for
//
//   minimize c^T x  subject to  A x = b,  lo <= x <= hi,
//
// with finite bounds. Intended for the small programs used as membership
// oracles (a handful of rows, tens of columns). Bland's rule throughout.
BoxLpResult SolveBoxLp(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                       const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                       const Eigen::VectorXd& c, double feas_tol);

}  // namespace safearm::geom

#endif  // SAFEARM_GEOM_BOX_LP_H_
