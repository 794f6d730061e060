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

// Online regularized fractional algorithm: one entropy-regularized convex
// program per slot, solved as the slot is revealed.

#ifndef NFV_ORFA_HPP_
#define NFV_ORFA_HPP_

#include <iosfwd>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "nfv/model.hpp"
#include "nfv/optimizer.hpp"
#include "nfv/plan.hpp"
#include "nfv/rates_costs.hpp"
#include "nfv/slot_program.hpp"

namespace nfv {

struct Subproblem {
  EntropyRegularizedProgram program;
  SlotBlock block;
  // Inequality row of the q cap added where c = 0, else -1. M x I.
  Eigen::MatrixXi q_cap_row;
};

Subproblem build_subproblem(const ProblemInstance& inst, const SlotInput& slot,
                            const Eigen::MatrixXd& prev_q, const RateProfile& rates);

struct OrfaStep {
  FractionalPlan plan;
  SlotDuals duals;
  double objective = 0.0;  // regularized subproblem value
  KktResiduals kkt;
  int iterations = 0;
};

struct OrfaOptions {
  SolverOptions solver{1e-10, 1e-9, 1e-10, 200, true};
};

class SolveError : public std::runtime_error {
 public:
  SolveError(const std::string& what, SolveStatus status)
      : std::runtime_error(what), status_(status) {}
  SolveStatus status() const { return status_; }

 private:
  SolveStatus status_;
};

// Throws SolveError if the subproblem is not solved to optimality.
OrfaStep orfa_step(const ProblemInstance& inst, const SlotInput& slot, const Eigen::MatrixXd& prev_q,
                   const OrfaOptions& opts = {});

// Consumes slots in order; slot t only sees the decision of slot t-1.
std::vector<OrfaStep> run_orfa(const ProblemInstance& inst, const std::vector<SlotInput>& slots,
                               const OrfaOptions& opts = {});

std::vector<FractionalPlan> plans_of(const std::vector<OrfaStep>& steps);

// Smallest q above 1e-9 over all slots, or 0 if there is none.
double min_positive_instances(const std::vector<FractionalPlan>& plans);

// One CSV row per variable above 1e-12: t,kind,flow,pos,vnf,dc,dc_to,value.
void write_plan_csv(std::ostream& out, const ProblemInstance& inst,
                    const std::vector<FractionalPlan>& plans);

}  // namespace nfv

#endif  // NFV_ORFA_HPP_
