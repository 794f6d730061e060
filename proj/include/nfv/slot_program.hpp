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

// Incremental construction of the per-slot placement and routing constraints
// (capacity, demand, both conservation rows, sign constraints). Shared by the
// online subproblem, the reroute LP and the offline multi-slot programs.

#ifndef NFV_SLOT_PROGRAM_HPP_
#define NFV_SLOT_PROGRAM_HPP_

#include <vector>

#include <Eigen/Dense>

#include "nfv/model.hpp"
#include "nfv/optimizer.hpp"
#include "nfv/plan.hpp"
#include "nfv/rates_costs.hpp"

namespace nfv {

class LpBuilder {
 public:
  int add_var(double cost, double lower = 0.0);
  int add_eq_row(double rhs);
  int add_in_row(double rhs);
  void eq(int row, int var, double value) { eq_.emplace_back(row, var, value); }
  void in(int row, int var, double value) { in_.emplace_back(row, var, value); }
  void add_cost(int var, double value) { cost_[static_cast<std::size_t>(var)] += value; }

  int num_vars() const { return static_cast<int>(cost_.size()); }
  LinearProgram build() const;

 private:
  std::vector<double> cost_, lower_, beq_, bin_;
  std::vector<Triplet> eq_, in_;
};

// Variable and row indices of one slot. Entries are -1 where a variable or
// row does not exist (inactive flow, first/last position, fixed q).
struct SlotBlock {
  Eigen::MatrixXi q;                            // M x I
  std::vector<Eigen::MatrixXi> y;               // per flow, L x I
  std::vector<std::vector<Eigen::MatrixXi>> x;  // per flow, per hop, I x I
  Eigen::MatrixXi capacity_row;                 // inequality rows, M x I
  std::vector<std::vector<int>> demand_row;     // equality rows, per flow per position
  std::vector<Eigen::MatrixXi> in_row;          // equality rows y - sum x_in = 0
  std::vector<Eigen::MatrixXi> out_row;         // equality rows beta y - sum x_out = 0
};

// Routing cost coefficients: per unit of y at (s, i) and per unit of x on a
// hop, following the intra-datacenter deduction form of the transfer cost.
double y_cost(const ProblemInstance& inst, const DelayCoefficients& coef, int flow, int pos, int dc);
double x_cost(const ProblemInstance& inst, const DelayCoefficients& coef, int flow, int hop, int from,
              int to);

// Appends slot variables and constraints. q variables carrying the running
// cost c are created where fixed_q is null or NaN; elsewhere the capacity row
// uses fixed_q * b as its right-hand side and no q variable exists.
SlotBlock add_slot(LpBuilder& lp, const ProblemInstance& inst, const SlotInput& slot,
                   const RateProfile& rates, const DelayCoefficients& coef,
                   const Eigen::MatrixXd* fixed_q);

Routing extract_routing(const ProblemInstance& inst, const SlotBlock& block, const Eigen::VectorXd& v);
Eigen::MatrixXd extract_q(const SlotBlock& block, const Eigen::VectorXd& v);

// Multipliers of one slot solve, in the sign convention of the offline dual:
// lambda on capacity, mu on demand, gamma on inbound conservation, tau on
// outbound conservation (written as sum x_out - beta y = 0).
struct SlotDuals {
  Eigen::MatrixXd lambda;                  // M x I, >= 0
  std::vector<std::vector<double>> mu;     // per flow, per position
  std::vector<Eigen::MatrixXd> gamma;      // per flow, L x I (row 0 unused)
  std::vector<Eigen::MatrixXd> tau;        // per flow, L x I (last row unused)
  Eigen::MatrixXd q_bound;                 // M x I, multiplier of q >= 0
  Eigen::MatrixXd q_cap;                   // M x I, multiplier of the c = 0 cap
};

// Reads lambda, mu, gamma and tau of one slot block from a solve; q_bound and
// q_cap are left zero.
SlotDuals read_slot_duals(const ProblemInstance& inst, const SlotBlock& block, const SolveResult& res);

// Removes solver round-off from a routing: the first position is rescaled to
// the demand, every hop row is rescaled to beta * y, later positions are
// recomputed from inbound hops, and q is raised to cover the resulting load.
// Demand and both conservation rows then hold to floating-point rounding.
void normalize_routing(const ProblemInstance& inst, const RateProfile& rates, Routing& routing,
                       Eigen::MatrixXd& q);

}  // namespace nfv

#endif  // NFV_SLOT_PROGRAM_HPP_
