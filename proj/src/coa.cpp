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


#include "nfv/coa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

#include "nfv/slot_program.hpp"

namespace nfv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double ratio(double num, double den) {
  if (den > 0.0) return num / den;
  return num > 0.0 ? kInf : 0.0;
}

// phi1..phi3 restricted to one slot.
BoundIngredients slot_phis(const ProblemInstance& inst, const SlotInput& slot, double radius) {
  BoundIngredients b;
  double max_bc = 0.0;
  for (int m = 0; m < inst.num_vnfs(); ++m) {
    for (int i = 0; i < inst.num_datacenters(); ++i) {
      const double c = slot.running_cost(m, i);
      const Datacenter& d = inst.datacenters[static_cast<std::size_t>(i)];
      b.phi1 = std::max(b.phi1, ratio(inst.deploy_cost(m, i), c));
      b.phi2 = std::max(b.phi2, ratio((d.ingress_cost + d.egress_cost) * inst.capacity(m, i), c));
      max_bc = std::max(max_bc, ratio(inst.capacity(m, i), c));
    }
  }
  double max_a = 0.0;
  for (double a : slot.delay_weight) max_a = std::max(max_a, a);
  const double num = inst.delay.alpha() * inst.delay.matrix().maxCoeff() * max_a;
  b.phi3 = num > 0.0 ? ratio(num * max_bc, radius) : 0.0;
  return b;
}

}  // namespace

bool has_aggregate_capacity(const ProblemInstance& inst, const RateProfile& rates,
                            const Eigen::MatrixXi& q) {
  const Eigen::VectorXd demand = vnf_demand(inst, rates);
  for (int m = 0; m < inst.num_vnfs(); ++m) {
    double cap = 0.0;
    for (int i = 0; i < inst.num_datacenters(); ++i) cap += q(m, i) * inst.capacity(m, i);
    if (cap < demand(m) * (1.0 - 1e-9)) return false;
  }
  return true;
}

RerouteResult reroute(const ProblemInstance& inst, const SlotInput& slot, const Eigen::MatrixXi& q,
                      const RateProfile& rates, const SolverOptions& opts) {
  if (q.rows() != inst.num_vnfs() || q.cols() != inst.num_datacenters()) {
    throw std::invalid_argument("instance counts must be M x I");
  }
  if (!has_aggregate_capacity(inst, rates, q)) {
    throw std::invalid_argument("slot " + std::to_string(slot.t) + ": rounded counts lack aggregate capacity");
  }
  const DelayCoefficients coef = delay_coefficients(inst, slot, rates);
  const Eigen::MatrixXd fixed = q.cast<double>();
  LpBuilder lp;
  const SlotBlock block = add_slot(lp, inst, slot, rates, coef, &fixed);
  const SolveResult res = solve_lp(lp.build(), opts);
  if (!res.optimal()) {
    throw SolveError("slot " + std::to_string(slot.t) + " reroute: " + to_string(res.status) +
                         (res.message.empty() ? "" : " (" + res.message + ")"),
                     res.status);
  }
  RerouteResult out;
  out.routing = extract_routing(inst, block, res.x);
  // Normalization may ask for capacity above q only at round-off level; the
  // counts themselves stay fixed.
  Eigen::MatrixXd load_q = fixed;
  normalize_routing(inst, rates, out.routing, load_q);
  out.objective = res.objective;
  out.iterations = res.iterations;
  return out;
}

CoaStep coa_step(const ProblemInstance& inst, const SlotInput& slot, const Eigen::MatrixXd& prev_frac,
                 const Eigen::MatrixXi& prev_int, const ClusterSet& clusters, std::uint64_t seed,
                 const CoaOptions& opts) {
  CoaStep step;
  step.fractional = orfa_step(inst, slot, prev_frac, opts.orfa);
  const FractionalPlan& fp = step.fractional.plan;
  const std::vector<Star> stars = init_stars(inst, slot, fp.q, clusters);
  RoundingResult rr = owdr(inst, stars, fp.q, prev_int, seed, slot.t);
  const RateProfile rates = compute_rates(inst, slot);
  step.integer.t = slot.t;
  step.integer.q = rr.q;
  step.integer.rho = rr.rho;
  step.integer.routing = reroute(inst, slot, rr.q, rates, opts.reroute).routing;
  step.stars = std::move(rr.stars);
  step.fractional_cost = cost_of_plan(inst, slot, fp, prev_frac);
  step.integer_cost = cost_of_plan(inst, slot, step.integer, prev_int);
  return step;
}

ClusterSet instance_clusters(const ProblemInstance& inst) {
  if (inst.num_datacenters() >= 2) return cluster(inst);
  ClusterSet cs;
  cs.clusters = {{0}};
  cs.pre_merge = cs.clusters;
  cs.assignment = {0};
  return cs;
}

BoundIngredients bound_ingredients(const ProblemInstance& inst, const std::vector<SlotInput>& slots,
                                   double radius, const std::vector<FractionalPlan>& plans) {
  BoundIngredients b;
  b.eta = inst.eta();
  b.phi = min_positive_instances(plans);
  for (const SlotInput& s : slots) {
    const BoundIngredients p = slot_phis(inst, s, radius);
    b.phi1 = std::max(b.phi1, p.phi1);
    b.phi2 = std::max(b.phi2, p.phi2);
    b.phi3 = std::max(b.phi3, p.phi3);
  }
  return b;
}

CoaRun run_coa(const ProblemInstance& inst, const std::vector<SlotInput>& slots, std::uint64_t seed,
               const CoaOptions& opts) {
  CoaRun run;
  run.clusters = instance_clusters(inst);
  Eigen::MatrixXd prev_frac = Eigen::MatrixXd::Zero(inst.num_vnfs(), inst.num_datacenters());
  Eigen::MatrixXi prev_int = Eigen::MatrixXi::Zero(inst.num_vnfs(), inst.num_datacenters());
  std::vector<FractionalPlan> plans;
  for (const SlotInput& slot : slots) {
    run.steps.push_back(coa_step(inst, slot, prev_frac, prev_int, run.clusters, seed, opts));
    const CoaStep& s = run.steps.back();
    prev_frac = s.fractional.plan.q;
    prev_int = s.integer.q;
    plans.push_back(s.fractional.plan);
    run.fractional_total += s.fractional_cost;
    run.integer_total += s.integer_cost;
  }
  run.bounds = bound_ingredients(inst, slots, run.clusters.radius, plans);
  return run;
}

void write_trajectory_csv(std::ostream& out, const ProblemInstance& inst,
                          const std::vector<SlotInput>& slots, const CoaRun& run) {
  const auto old_precision = out.precision(17);
  out << "t,frac_running,frac_deploy,frac_transfer,frac_delay,int_running,int_deploy,int_transfer,"
         "int_delay,buffers_raised,phi1,phi2,phi3,q_int\n";
  for (std::size_t n = 0; n < run.steps.size(); ++n) {
    const CoaStep& s = run.steps[n];
    const BoundIngredients p = slot_phis(inst, slots[n], run.clusters.radius);
    int raised = 0;
    for (const StarOutcome& o : s.stars) raised += o.buffer_raised ? 1 : 0;
    const CostBreakdown& f = s.fractional_cost;
    const CostBreakdown& g = s.integer_cost;
    out << s.integer.t << ',' << f.running << ',' << f.deploy << ',' << f.transfer << ',' << f.delay << ','
        << g.running << ',' << g.deploy << ',' << g.transfer << ',' << g.delay << ',' << raised << ','
        << p.phi1 << ',' << p.phi2 << ',' << p.phi3 << ',';
    for (Eigen::Index m = 0; m < s.integer.q.rows(); ++m) {
      for (Eigen::Index i = 0; i < s.integer.q.cols(); ++i) {
        if (m > 0 || i > 0) out << ';';
        out << s.integer.q(m, i);
      }
    }
    out << '\n';
  }
  out.precision(old_precision);
}

Eigen::MatrixXi round_nearest(const Eigen::MatrixXd& q) {
  return q.unaryExpr([](double v) { return static_cast<int>(std::floor(v + 0.5)); });
}

Eigen::MatrixXi round_up(const Eigen::MatrixXd& q) {
  return q.unaryExpr([](double v) { return ceil_tolerant(v); });
}

BaselineRun run_baseline(const ProblemInstance& inst, const std::vector<SlotInput>& slots,
                         const std::vector<FractionalPlan>& fractional, Baseline kind,
                         const SolverOptions& opts) {
  BaselineRun run;
  Eigen::MatrixXi prev = Eigen::MatrixXi::Zero(inst.num_vnfs(), inst.num_datacenters());
  for (std::size_t n = 0; n < slots.size(); ++n) {
    const SlotInput& slot = slots[n];
    const RateProfile rates = compute_rates(inst, slot);
    IntegerPlan p;
    p.t = slot.t;
    p.q = kind == Baseline::kNearest ? round_nearest(fractional[n].q) : round_up(fractional[n].q);
    if (!has_aggregate_capacity(inst, rates, p.q)) {
      run.feasible = false;
      run.infeasible_slot = slot.t;
      return run;
    }
    p.rho = (p.q - prev).cwiseMax(0);
    p.routing = reroute(inst, slot, p.q, rates, opts).routing;
    run.total += cost_of_plan(inst, slot, p, prev);
    prev = p.q;
    run.plans.push_back(std::move(p));
  }
  return run;
}

}  // namespace nfv
