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

#include "nfv/orfa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace nfv {

Subproblem build_subproblem(const ProblemInstance& inst, const SlotInput& slot,
                            const Eigen::MatrixXd& prev_q, const RateProfile& rates) {
  const DelayCoefficients coef = delay_coefficients(inst, slot, rates);
  const int num_dc = inst.num_datacenters();
  const int num_vnf = inst.num_vnfs();
  if (prev_q.rows() != num_vnf || prev_q.cols() != num_dc) {
    throw std::invalid_argument("previous instance counts must be M x I");
  }
  LpBuilder lp;
  Subproblem sp;
  sp.block = add_slot(lp, inst, slot, rates, coef, nullptr);
  sp.q_cap_row = Eigen::MatrixXi::Constant(num_vnf, num_dc, -1);
  const Eigen::VectorXd demand = vnf_demand(inst, rates);
  for (int m = 0; m < num_vnf; ++m) {
    for (int i = 0; i < num_dc; ++i) {
      if (slot.running_cost(m, i) > 0.0) continue;
      const int row = lp.add_in_row(demand(m) / inst.capacity(m, i) + 1.0);
      lp.in(row, sp.block.q(m, i), 1.0);
      sp.q_cap_row(m, i) = row;
    }
  }
  sp.program.lp = lp.build();
  const double eta = inst.eta();
  const double shift = inst.entropy_shift();
  for (int m = 0; m < num_vnf; ++m) {
    for (int i = 0; i < num_dc; ++i) {
      const double w = inst.deploy_cost(m, i) / eta;
      if (w > 0.0) sp.program.terms.push_back({sp.block.q(m, i), w, prev_q(m, i), shift});
    }
  }
  return sp;
}

namespace {

SlotDuals read_duals(const ProblemInstance& inst, const Subproblem& sp, const SolveResult& res) {
  SlotDuals d = read_slot_duals(inst, sp.block, res);
  for (int m = 0; m < inst.num_vnfs(); ++m) {
    for (int i = 0; i < inst.num_datacenters(); ++i) {
      d.q_bound(m, i) = res.bound_duals(sp.block.q(m, i));
      if (sp.q_cap_row(m, i) >= 0) d.q_cap(m, i) = res.in_duals(sp.q_cap_row(m, i));
    }
  }
  return d;
}

}  // namespace

OrfaStep orfa_step(const ProblemInstance& inst, const SlotInput& slot, const Eigen::MatrixXd& prev_q,
                   const OrfaOptions& opts) {
  const RateProfile rates = compute_rates(inst, slot);
  const Subproblem sp = build_subproblem(inst, slot, prev_q, rates);
  const SolveResult res = solve_entropy(sp.program, opts.solver);
  if (!res.optimal()) {
    throw SolveError("slot " + std::to_string(slot.t) + " subproblem: " + to_string(res.status) +
                         (res.message.empty() ? "" : " (" + res.message + ")"),
                     res.status);
  }
  OrfaStep step;
  step.plan.t = slot.t;
  step.plan.q = extract_q(sp.block, res.x);
  step.plan.routing = extract_routing(inst, sp.block, res.x);
  normalize_routing(inst, rates, step.plan.routing, step.plan.q);
  step.plan.rho = (step.plan.q - prev_q).cwiseMax(0.0);
  step.duals = read_duals(inst, sp, res);
  step.objective = res.objective;
  step.kkt = res.kkt;
  step.iterations = res.iterations;
  return step;
}

std::vector<OrfaStep> run_orfa(const ProblemInstance& inst, const std::vector<SlotInput>& slots,
                               const OrfaOptions& opts) {
  std::vector<OrfaStep> steps;
  steps.reserve(slots.size());
  Eigen::MatrixXd prev = Eigen::MatrixXd::Zero(inst.num_vnfs(), inst.num_datacenters());
  for (const SlotInput& slot : slots) {
    steps.push_back(orfa_step(inst, slot, prev, opts));
    prev = steps.back().plan.q;
  }
  return steps;
}

std::vector<FractionalPlan> plans_of(const std::vector<OrfaStep>& steps) {
  std::vector<FractionalPlan> plans;
  plans.reserve(steps.size());
  for (const OrfaStep& s : steps) plans.push_back(s.plan);
  return plans;
}

double min_positive_instances(const std::vector<FractionalPlan>& plans) {
  double best = std::numeric_limits<double>::infinity();
  for (const FractionalPlan& p : plans) {
    for (Eigen::Index j = 0; j < p.q.size(); ++j) {
      const double v = p.q.data()[j];
      if (v >= 1e-9) best = std::min(best, v);
    }
  }
  return std::isinf(best) ? 0.0 : best;
}

void write_plan_csv(std::ostream& out, const ProblemInstance& inst,
                    const std::vector<FractionalPlan>& plans) {
  constexpr double kDust = 1e-12;
  const auto old_precision = out.precision(17);
  out << "t,kind,flow,pos,vnf,dc,dc_to,value\n";
  for (const FractionalPlan& p : plans) {
    for (Eigen::Index m = 0; m < p.q.rows(); ++m) {
      for (Eigen::Index i = 0; i < p.q.cols(); ++i) {
        if (p.q(m, i) > kDust) out << p.t << ",q,,," << m << ',' << i << ",," << p.q(m, i) << '\n';
        if (p.rho(m, i) > kDust) out << p.t << ",rho,,," << m << ',' << i << ",," << p.rho(m, i) << '\n';
      }
    }
    for (int k = 0; k < inst.num_flows(); ++k) {
      const ServiceChain& ch = inst.chain_of(k);
      const FlowRouting& fr = p.routing.flows[static_cast<std::size_t>(k)];
      for (Eigen::Index s = 0; s < fr.y.rows(); ++s) {
        const int m = ch.vnf_at(static_cast<std::size_t>(s));
        for (Eigen::Index i = 0; i < fr.y.cols(); ++i) {
          if (fr.y(s, i) > kDust) {
            out << p.t << ",y," << k << ',' << s << ',' << m << ',' << i << ",," << fr.y(s, i) << '\n';
          }
        }
      }
      for (std::size_t s = 0; s < fr.x.size(); ++s) {
        const int m = ch.vnf_at(s);
        const Eigen::MatrixXd& x = fr.x[s];
        for (Eigen::Index i = 0; i < x.rows(); ++i) {
          for (Eigen::Index j = 0; j < x.cols(); ++j) {
            if (x(i, j) > kDust) {
              out << p.t << ",x," << k << ',' << s << ',' << m << ',' << i << ',' << j << ','
                  << x(i, j) << '\n';
            }
          }
        }
      }
    }
  }
  out.precision(old_precision);
}

}  // namespace nfv
