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


// Complete online pipeline: fractional slot solve, star rounding and a
// routing LP over the rounded instance counts. Also the two rounding
// baselines (nearest integer and ceiling) that share the routing LP.

#ifndef NFV_COA_HPP_
#define NFV_COA_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "nfv/clustering.hpp"
#include "nfv/model.hpp"
#include "nfv/orfa.hpp"
#include "nfv/plan.hpp"
#include "nfv/rates_costs.hpp"
#include "nfv/rounding.hpp"

namespace nfv {

// True if sum_i q_{m,i} b_{m,i} covers sum_k F_hat_{k,m} for every VNF, up to
// a relative 1e-9.
bool has_aggregate_capacity(const ProblemInstance& inst, const RateProfile& rates,
                            const Eigen::MatrixXi& q);

struct RerouteResult {
  Routing routing;
  double objective = 0.0;  // transfer plus delay cost of the routing
  int iterations = 0;
};

// Cheapest routing with instance counts fixed at q. Throws
// std::invalid_argument if q lacks aggregate capacity and SolveError if the
// LP is not solved.
RerouteResult reroute(const ProblemInstance& inst, const SlotInput& slot, const Eigen::MatrixXi& q,
                      const RateProfile& rates, const SolverOptions& opts = {1e-10, 1e-9, 1e-10, 200, true});

struct CoaOptions {
  OrfaOptions orfa;
  SolverOptions reroute{1e-10, 1e-9, 1e-10, 200, true};
};

struct CoaStep {
  OrfaStep fractional;
  IntegerPlan integer;
  std::vector<StarOutcome> stars;
  CostBreakdown fractional_cost;
  CostBreakdown integer_cost;
};

// One slot. prev_frac feeds the fractional solve, prev_int the rounded
// increments. Stars draw from Rng(seed).split({t, m, cluster}).
CoaStep coa_step(const ProblemInstance& inst, const SlotInput& slot, const Eigen::MatrixXd& prev_frac,
                 const Eigen::MatrixXi& prev_int, const ClusterSet& clusters, std::uint64_t seed,
                 const CoaOptions& opts = {});

// Clusters of the instance; a single datacenter forms one cluster of radius 0.
ClusterSet instance_clusters(const ProblemInstance& inst);

// Ingredients of the two competitive bounds.
struct BoundIngredients {
  double eta = 0.0;   // ln(1 + M I / epsilon)
  double phi = 0.0;   // smallest positive fractional instance count
  double phi1 = 0.0;  // max delta / c
  double phi2 = 0.0;  // max (d_in + d_out) b / c
  double phi3 = 0.0;  // max alpha l a b / (R c)

  double fractional_bound() const { return eta + 1.0 + 1.0 / phi; }
  double integer_bound() const { return (eta + 2.0) * (2.0 + phi1 + phi2 + phi3); }
};

// phi1..phi3 over the given slots; phi from the fractional plans. A zero
// running cost or radius makes the affected ratio infinite.
BoundIngredients bound_ingredients(const ProblemInstance& inst, const std::vector<SlotInput>& slots,
                                   double radius, const std::vector<FractionalPlan>& plans);

struct CoaRun {
  ClusterSet clusters;
  std::vector<CoaStep> steps;
  CostBreakdown fractional_total;
  CostBreakdown integer_total;
  BoundIngredients bounds;
};

CoaRun run_coa(const ProblemInstance& inst, const std::vector<SlotInput>& slots, std::uint64_t seed,
               const CoaOptions& opts = {});

// Per-slot CSV: both cost breakdowns, raised buffers, per-slot phi values and
// the rounded counts (row-major, ';'-separated).
void write_trajectory_csv(std::ostream& out, const ProblemInstance& inst,
                          const std::vector<SlotInput>& slots, const CoaRun& run);

enum class Baseline { kNearest, kCeiling };

// Nearest integer, halves rounded up.
Eigen::MatrixXi round_nearest(const Eigen::MatrixXd& q);
// Ceiling that leaves integral values (within 1e-9) unchanged.
Eigen::MatrixXi round_up(const Eigen::MatrixXd& q);

struct BaselineRun {
  bool feasible = true;
  int infeasible_slot = 0;  // first slot without aggregate capacity, if any
  std::vector<IntegerPlan> plans;
  CostBreakdown total;
};

// Rounds every plan of a fractional trajectory and reroutes. The nearest
// baseline stops at the first slot missing aggregate capacity.
BaselineRun run_baseline(const ProblemInstance& inst, const std::vector<SlotInput>& slots,
                         const std::vector<FractionalPlan>& fractional, Baseline kind,
                         const SolverOptions& opts = {1e-10, 1e-9, 1e-10, 200, true});

}  // namespace nfv

#endif  // NFV_COA_HPP_
