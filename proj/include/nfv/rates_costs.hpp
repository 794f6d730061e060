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

// Rate propagation along chains, delay-cost coefficients and the four cost
// components of a plan.

#ifndef NFV_RATES_COSTS_HPP_
#define NFV_RATES_COSTS_HPP_

#include <vector>

#include <Eigen/Dense>

#include "nfv/model.hpp"
#include "nfv/plan.hpp"

namespace nfv {

// Cumulative rate ratio before each chain position; 1 at the first VNF.
std::vector<double> compute_beta_bar(const ServiceChain& chain);

struct RateProfile {
  std::vector<std::vector<double>> beta_bar;  // per flow, per chain position
  std::vector<std::vector<double>> f_hat;     // per flow, per chain position

  // F_hat_{k,m}; zero when m is not on flow k's chain.
  double f_hat_vnf(const ProblemInstance& inst, int flow, int vnf) const;
};

RateProfile compute_rates(const ProblemInstance& inst, const SlotInput& slot);

// Sum_k F_hat_{k,m} for every VNF m.
Eigen::VectorXd vnf_demand(const ProblemInstance& inst, const RateProfile& rates);

struct DelayCoefficients {
  std::vector<bool> active;                    // flows with F > 0
  std::vector<Eigen::MatrixXd> xi;             // per flow: L x I endpoint coefficients
  std::vector<std::vector<Eigen::MatrixXd>> omega;  // per flow, per hop: I x I
};

// Closed-form xi and omega for every active flow. A zero-rate flow is left
// inactive (empty matrices) since its coefficients divide by F.
DelayCoefficients delay_coefficients(const ProblemInstance& inst, const SlotInput& slot,
                                     const RateProfile& rates);

struct CostBreakdown {
  double running = 0.0;   // C_R
  double deploy = 0.0;    // C_D
  double transfer = 0.0;  // C_T
  double delay = 0.0;     // C_E

  double total() const { return running + deploy + transfer + delay; }
  CostBreakdown& operator+=(const CostBreakdown& o) {
    running += o.running;
    deploy += o.deploy;
    transfer += o.transfer;
    delay += o.delay;
    return *this;
  }
};

// Cost of a slot decision (q, routing) given the previous slot's counts.
// Transfer cost uses the per-VNF form with the intra-datacenter deduction.
// Throws std::invalid_argument on negative entries or mismatched dimensions.
CostBreakdown cost_of_plan(const ProblemInstance& inst, const SlotInput& slot,
                           const Eigen::MatrixXd& q, const Eigen::MatrixXd& prev_q,
                           const Routing& routing);
CostBreakdown cost_of_plan(const ProblemInstance& inst, const SlotInput& slot,
                           const FractionalPlan& plan, const Eigen::MatrixXd& prev_q);
CostBreakdown cost_of_plan(const ProblemInstance& inst, const SlotInput& slot,
                           const IntegerPlan& plan, const Eigen::MatrixXi& prev_q);

// Absolute constraint residuals of (q, routing, rho) for one slot.
FeasibilityReport check_feasibility(const ProblemInstance& inst, const SlotInput& slot,
                                    const Eigen::MatrixXd& q, const Eigen::MatrixXd& rho,
                                    const Eigen::MatrixXd& prev_q, const Routing& routing);

}  // namespace nfv

#endif  // NFV_RATES_COSTS_HPP_
