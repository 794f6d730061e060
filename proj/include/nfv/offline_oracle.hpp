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


// Offline ground truth over a known horizon: the multi-slot relaxation, an
// exact branch-and-bound solve at desk scale, a dual lower-bound certificate
// built from the online duals, and competitive ratios.

#ifndef NFV_OFFLINE_ORACLE_HPP_
#define NFV_OFFLINE_ORACLE_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nfv/coa.hpp"
#include "nfv/model.hpp"
#include "nfv/optimizer.hpp"
#include "nfv/orfa.hpp"
#include "nfv/plan.hpp"

namespace nfv {

// Dual point of the offline relaxation. Per slot, lambda/mu/gamma/tau use the
// layout and signs of SlotDuals; nu[t] is the multiplier of
// q^t - q^(t-1) - rho^t <= 0.
struct OfflineDuals {
  std::vector<SlotDuals> slots;
  std::vector<Eigen::MatrixXd> nu;
};

// Sum over slots, flows and positions of F_hat * mu.
double dual_objective(const ProblemInstance& inst, const std::vector<SlotInput>& slots,
                      const OfflineDuals& duals);

struct RelaxationResult {
  SolveStatus status = SolveStatus::kNumericalError;
  double objective = 0.0;              // LP optimum
  std::vector<FractionalPlan> plans;   // routing normalized, rho = max(0, q - prev)
  OfflineDuals duals;
  std::string message;
};

RelaxationResult solve_relaxation(const ProblemInstance& inst, const std::vector<SlotInput>& slots,
                                  const SolverOptions& opts = {1e-10, 1e-9, 1e-10, 300, true});

struct ExactLimits {
  double time_limit_s = 60.0;
  long node_limit = 100000;
  // Nodes whose bound is within this fraction of the incumbent are pruned;
  // 0 asks for the exact optimum (up to 1e-7 relative round-off).
  double relative_gap = 1e-4;
};

struct ExactResult {
  bool optimal = false;    // search finished within the limits and the gap
  bool has_solution = false;
  double objective = 0.0;  // best integer cost found
  double bound = 0.0;      // proven lower bound
  double gap = 0.0;        // (objective - bound) / |objective|
  long nodes = 0;
  double seconds = 0.0;
  std::vector<IntegerPlan> plans;
};

// Branch-and-bound on the integer counts: best-bound node selection,
// most-fractional branching, LP bounds tightened by the per-slot cover cuts
// sum_i ceil(b_mi / b_max) q_mi >= ceil(demand_m / b_max). Each entry of
// starts (per-slot counts) is priced as an initial incumbent when feasible.
ExactResult solve_exact(const ProblemInstance& inst, const std::vector<SlotInput>& slots,
                        const ExactLimits& limits = {},
                        const std::vector<std::vector<Eigen::MatrixXi>>& starts = {});

// Cheapest completion with every count fixed: routing and increments by LP.
// Returns nullopt when the counts lack capacity in some slot.
std::optional<double> fixed_count_cost(const ProblemInstance& inst, const std::vector<SlotInput>& slots,
                                       const std::vector<Eigen::MatrixXi>& q,
                                       std::vector<IntegerPlan>* plans = nullptr);

// Largest violation of each dual constraint family; all values >= 0.
struct CertificateCheck {
  double q_column = 0.0;    // c - b lambda + nu^t - nu^(t+1) >= 0
  double rho_column = 0.0;  // delta - nu >= 0
  double y_column = 0.0;    // all three chain-position forms
  double x_column = 0.0;    // both hop forms, intra-datacenter deduction included
  double nu_sign = 0.0;     // nu >= 0
  double lambda_sign = 0.0; // lambda >= 0
  std::vector<std::string> violations;  // first entries above the tolerance

  double worst() const;
  bool feasible(double tol = 1e-6) const { return worst() <= tol; }
};

CertificateCheck check_dual(const ProblemInstance& inst, const std::vector<SlotInput>& slots,
                            const OfflineDuals& duals, double tol = 1e-6);

struct DualCertificate {
  OfflineDuals duals;
  double objective = 0.0;
  CertificateCheck check;
  // The copied online duals with the closed-form nu from the previous counts.
  OfflineDuals literal;
  double literal_objective = 0.0;
  CertificateCheck literal_check;
  // Per slot weight on the online duals; the rest goes to the capacity-free
  // routing duals.
  std::vector<double> theta;
};

// Capacity-free routing duals of one slot: lambda = 0 and mu, gamma, tau from
// the cheapest-path cost to go along each chain.
SlotDuals routing_duals(const ProblemInstance& inst, const SlotInput& slot);

// Certificate from the online duals. The literal construction is kept for
// reference; the returned duals mix online and routing duals per slot so that
// every constraint holds, then take the smallest feasible nu backwards in time.
DualCertificate build_dual_certificate(const ProblemInstance& inst, const std::vector<SlotInput>& slots,
                                       const std::vector<OrfaStep>& online);

struct RatioReport {
  double coa_cost = 0.0;
  double orfa_cost = 0.0;
  std::optional<double> exact;  // proven optimum
  std::optional<double> exact_bound;  // lower bound when the search stopped early
  double relaxation = 0.0;
  double certificate = 0.0;

  double coa_vs_exact = 0.0;        // NaN when exact is unknown or zero
  double coa_vs_relaxation = 0.0;
  double orfa_vs_relaxation = 0.0;
  double coa_vs_certificate = 0.0;
  // COA ratio against the best available denominator: exact, else the exact
  // search's lower bound, else the relaxation.
  double coa_ratio = 0.0;
  std::string denominator;

  double eta = 0.0;
  double phi = 0.0, phi1 = 0.0, phi2 = 0.0, phi3 = 0.0;
  double fractional_bound = 0.0;  // eta + 1 + 1/phi
  double integral_bound = 0.0;    // eta + 2
  double integer_bound = 0.0;     // (eta + 2)(2 + phi1 + phi2 + phi3)
};

// exact and certificate may be null.
RatioReport compute_ratios(const CoaRun& run, const RelaxationResult& relaxation, const ExactResult* exact,
                           const DualCertificate* certificate);

// Ratio num/den; NaN when den is not positive.
double safe_ratio(double num, double den);

// Header line and one row per report.
void write_ratio_csv(std::ostream& out, const std::vector<RatioReport>& rows);

}  // namespace nfv

#endif  // NFV_OFFLINE_ORACLE_HPP_
