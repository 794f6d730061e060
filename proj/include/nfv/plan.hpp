// Copyright 2026 The nfvscale Authors.
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

#ifndef NFV_PLAN_HPP_
#define NFV_PLAN_HPP_

#include <vector>

#include <Eigen/Dense>

#include "nfv/model.hpp"

namespace nfv {

// Routing of one flow in one slot, indexed by chain position s rather than
// VNF id (chains are simple paths, so the two are in bijection).
struct FlowRouting {
  Eigen::MatrixXd y;               // L x I: ingress rate to position s in datacenter i
  std::vector<Eigen::MatrixXd> x;  // L-1 hops, I x I: x[s](i, j) from (s, i) to (s+1, j)
};

struct Routing {
  std::vector<FlowRouting> flows;  // one per flow; absent flows are all zero
};

Routing zero_routing(const ProblemInstance& inst);

struct FractionalPlan {
  int t = 1;
  Eigen::MatrixXd q;    // M x I instance counts
  Eigen::MatrixXd rho;  // M x I new instances, max(0, q - prev_q)
  Routing routing;
};

struct IntegerPlan {
  int t = 1;
  Eigen::MatrixXi q;
  Eigen::MatrixXi rho;
  Routing routing;
};

// Residuals of the per-slot constraints of a plan; all values are absolute.
struct FeasibilityReport {
  double capacity = 0.0;        // max(0, sum_k y - q b)
  double demand = 0.0;          // |sum_i y - F_hat|
  double conservation_in = 0.0;   // |y - sum h x_in|
  double conservation_out = 0.0;  // |beta y - sum h x_out|
  double negativity = 0.0;      // max(0, -entry) over q, x, y
  double precedence = 0.0;      // max(0, q - prev_q - rho)

  double worst() const;
};

}  // namespace nfv

#endif  // NFV_PLAN_HPP_
