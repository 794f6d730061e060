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


#include "nfv/offline_oracle.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "nfv/rates_costs.hpp"
#include "nfv/slot_program.hpp"

namespace nfv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Per-slot bounds on the counts; lo == hi fixes a count, hi may be infinite.
struct CountBounds {
  std::vector<Eigen::MatrixXd> lo, hi;
};

struct OfflineProgram {
  LinearProgram lp;
  double constant = 0.0;  // running cost of fixed counts
  std::vector<SlotBlock> blocks;
  std::vector<Eigen::MatrixXd> fixed;     // NaN where q is a variable
  std::vector<Eigen::MatrixXi> rho;       // variable indices
  std::vector<Eigen::MatrixXi> prec_row;  // q^t - q^(t-1) - rho^t <= 0
  std::vector<RateProfile> rates;

  Eigen::MatrixXd counts(std::size_t t, const Eigen::VectorXd& x) const {
    Eigen::MatrixXd q = fixed[t];
    for (Eigen::Index m = 0; m < q.rows(); ++m) {
      for (Eigen::Index i = 0; i < q.cols(); ++i) {
        if (blocks[t].q(m, i) >= 0) q(m, i) = x(blocks[t].q(m, i));
      }
    }
    return q;
  }
};

OfflineProgram build_offline(const ProblemInstance& inst, const std::vector<SlotInput>& slots,
                             const CountBounds* bounds) {
  const int num_vnf = inst.num_vnfs();
  const int num_dc = inst.num_datacenters();
  LpBuilder lp;
  OfflineProgram p;
  std::vector<std::pair<int, double>> lowers;
  for (std::size_t t = 0; t < slots.size(); ++t) {
    const SlotInput& slot = slots[t];
    p.rates.push_back(compute_rates(inst, slot));
    const DelayCoefficients coef = delay_coefficients(inst, slot, p.rates.back());
    Eigen::MatrixXd fixed = Eigen::MatrixXd::Constant(num_vnf, num_dc, kNaN);
    if (bounds != nullptr) {
      for (int m = 0; m < num_vnf; ++m) {
        for (int i = 0; i < num_dc; ++i) {
          if (bounds->lo[t](m, i) == bounds->hi[t](m, i)) {
            fixed(m, i) = bounds->lo[t](m, i);
            p.constant += slot.running_cost(m, i) * fixed(m, i);
          }
        }
      }
    }
    p.blocks.push_back(add_slot(lp, inst, slot, p.rates.back(), coef, &fixed));
    const SlotBlock& b = p.blocks.back();
    if (bounds != nullptr) {
      // Cover cuts; valid for integer counts only, so left out of the relaxation.
      const Eigen::VectorXd demand = vnf_demand(inst, p.rates.back());
      for (int m = 0; m < num_vnf; ++m) {
        double bmax = 0.0;
        for (int i = 0; i < num_dc; ++i) bmax = std::max(bmax, inst.capacity(m, i));
        const double need = std::ceil(demand(m) / bmax - 1e-9);
        if (need <= 0.0) continue;
        double rhs = -need;
        std::vector<std::pair<int, double>> terms;
        for (int i = 0; i < num_dc; ++i) {
          const double coeff = std::ceil(inst.capacity(m, i) / bmax - 1e-12);
          if (b.q(m, i) < 0) {
            rhs += coeff * fixed(m, i);
          } else {
            terms.emplace_back(b.q(m, i), -coeff);
          }
        }
        if (terms.empty()) continue;
        const int row = lp.add_in_row(rhs);
        for (const auto& [var, coeff] : terms) lp.in(row, var, coeff);
      }

      for (int m = 0; m < num_vnf; ++m) {
        for (int i = 0; i < num_dc; ++i) {
          if (b.q(m, i) < 0) continue;
          if (bounds->lo[t](m, i) > 0.0) lowers.emplace_back(b.q(m, i), bounds->lo[t](m, i));
          if (std::isfinite(bounds->hi[t](m, i))) {
            const int row = lp.add_in_row(bounds->hi[t](m, i));
            lp.in(row, b.q(m, i), 1.0);
          }
        }
      }
    }
    Eigen::MatrixXi rho(num_vnf, num_dc);
    Eigen::MatrixXi prec(num_vnf, num_dc);
    for (int m = 0; m < num_vnf; ++m) {
      for (int i = 0; i < num_dc; ++i) {
        double rhs = 0.0;
        if (b.q(m, i) < 0) rhs -= fixed(m, i);
        const bool prev_var = t > 0 && p.blocks[t - 1].q(m, i) >= 0;
        if (t > 0 && !prev_var) rhs += p.fixed[t - 1](m, i);
        rho(m, i) = lp.add_var(inst.deploy_cost(m, i));
        prec(m, i) = lp.add_in_row(rhs);
        if (b.q(m, i) >= 0) lp.in(prec(m, i), b.q(m, i), 1.0);
        if (prev_var) lp.in(prec(m, i), p.blocks[t - 1].q(m, i), -1.0);
        lp.in(prec(m, i), rho(m, i), -1.0);
      }
    }
    p.fixed.push_back(fixed);
    p.rho.push_back(rho);
    p.prec_row.push_back(prec);
  }
  p.lp = lp.build();
  for (const auto& [var, lo] : lowers) p.lp.lower(var) = lo;
  return p;
}

const SolverOptions kNodeOptions{1e-10, 1e-9, 1e-10, 300, true};

double slot_objective(const RateProfile& rates, const SlotDuals& d) {
  double v = 0.0;
  for (std::size_t k = 0; k < d.mu.size(); ++k) {
    for (std::size_t s = 0; s < d.mu[k].size(); ++s) v += rates.f_hat[k][s] * d.mu[k][s];
  }
  return v;
}

SlotDuals mix(const SlotDuals& a, const SlotDuals& b, double theta) {
  SlotDuals d = b;
  d.lambda = theta * a.lambda + (1.0 - theta) * b.lambda;
  for (std::size_t k = 0; k < d.mu.size(); ++k) {
    for (std::size_t s = 0; s < d.mu[k].size(); ++s) d.mu[k][s] = theta * a.mu[k][s] + (1.0 - theta) * b.mu[k][s];
    d.gamma[k] = theta * a.gamma[k] + (1.0 - theta) * b.gamma[k];
    d.tau[k] = theta * a.tau[k] + (1.0 - theta) * b.tau[k];
  }
  return d;
}

double elapsed_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

double dual_objective(const ProblemInstance& inst, const std::vector<SlotInput>& slots,
                      const OfflineDuals& duals) {
  double v = 0.0;
  for (std::size_t t = 0; t < slots.size(); ++t) v += slot_objective(compute_rates(inst, slots[t]), duals.slots[t]);
  return v;
}

RelaxationResult solve_relaxation(const ProblemInstance& inst, const std::vector<SlotInput>& slots,
                                  const SolverOptions& opts) {
  const OfflineProgram prog = build_offline(inst, slots, nullptr);
  const SolveResult res = solve_lp(prog.lp, opts);
  RelaxationResult out;
  out.status = res.status;
  out.message = res.message;
  if (!res.optimal()) return out;
  out.objective = res.objective;
  Eigen::MatrixXd prev = Eigen::MatrixXd::Zero(inst.num_vnfs(), inst.num_datacenters());
  for (std::size_t t = 0; t < slots.size(); ++t) {
    FractionalPlan p;
    p.t = slots[t].t;
    p.q = extract_q(prog.blocks[t], res.x);
    p.routing = extract_routing(inst, prog.blocks[t], res.x);
    normalize_routing(inst, prog.rates[t], p.routing, p.q);
    p.rho = (p.q - prev).cwiseMax(0.0);
    prev = p.q;
    out.plans.push_back(std::move(p));
    out.duals.slots.push_back(read_slot_duals(inst, prog.blocks[t], res));
    Eigen::MatrixXd nu(inst.num_vnfs(), inst.num_datacenters());
    for (Eigen::Index j = 0; j < nu.size(); ++j) nu.data()[j] = res.in_duals(prog.prec_row[t].data()[j]);
    out.duals.nu.push_back(nu);
  }
  return out;
}

std::optional<double> fixed_count_cost(const ProblemInstance& inst, const std::vector<SlotInput>& slots,
                                       const std::vector<Eigen::MatrixXi>& q, std::vector<IntegerPlan>* plans) {
  CountBounds b;
  for (std::size_t t = 0; t < slots.size(); ++t) {
    if (!has_aggregate_capacity(inst, compute_rates(inst, slots[t]), q[t])) return std::nullopt;
    b.lo.push_back(q[t].cast<double>());
    b.hi.push_back(q[t].cast<double>());
  }
  const OfflineProgram prog = build_offline(inst, slots, &b);
  const SolveResult res = solve_lp(prog.lp, kNodeOptions);
  if (!res.optimal()) {
    throw SolveError("fixed-count routing: " + to_string(res.status) + " (" + res.message + ")", res.status);
  }
  if (plans != nullptr) {
    plans->clear();
    Eigen::MatrixXi prev = Eigen::MatrixXi::Zero(inst.num_vnfs(), inst.num_datacenters());
    for (std::size_t t = 0; t < slots.size(); ++t) {
      IntegerPlan p;
      p.t = slots[t].t;
      p.q = q[t];
      p.rho = (q[t] - prev).cwiseMax(0);
      p.routing = extract_routing(inst, prog.blocks[t], res.x);
      Eigen::MatrixXd load_q = q[t].cast<double>();
      normalize_routing(inst, prog.rates[t], p.routing, load_q);
      prev = q[t];
      plans->push_back(std::move(p));
    }
  }
  return res.objective + prog.constant;
}

ExactResult solve_exact(const ProblemInstance& inst, const std::vector<SlotInput>& slots,
                        const ExactLimits& limits, const std::vector<std::vector<Eigen::MatrixXi>>& starts) {
  const auto start = std::chrono::steady_clock::now();
  const int num_vnf = inst.num_vnfs();
  const int num_dc = inst.num_datacenters();
  struct Node {
    CountBounds b;
    double parent = -kInf;
    long order = 0;
  };
  // Smallest parent bound first; among equals the newest node.
  auto worse = [](const Node& x, const Node& y) {
    return x.parent != y.parent ? x.parent > y.parent : x.order < y.order;
  };
  auto prune_margin = [&](double v) {
    return std::max(1e-7 * std::max(1.0, std::abs(v)), limits.relative_gap * std::abs(v));
  };

  ExactResult r;
  double incumbent = kInf;
  std::vector<Eigen::MatrixXi> best;
  auto try_counts = [&](const std::vector<Eigen::MatrixXi>& q) {
    const std::optional<double> c = fixed_count_cost(inst, slots, q);
    if (c && *c < incumbent) {
      incumbent = *c;
      best = q;
    }
    return c.has_value();
  };
  for (const auto& q : starts) {
    if (q.size() == slots.size()) try_counts(q);
  }

  std::vector<Node> heap(1);
  for (std::size_t t = 0; t < slots.size(); ++t) {
    heap[0].b.lo.push_back(Eigen::MatrixXd::Zero(num_vnf, num_dc));
    heap[0].b.hi.push_back(Eigen::MatrixXd::Constant(num_vnf, num_dc, kInf));
  }
  long created = 1;
  double lost = kInf;    // bounds of nodes whose LP failed
  double pruned = kInf;  // smallest bound of a node pruned against the incumbent
  bool root = true;
  while (!heap.empty()) {
    if (r.nodes >= limits.node_limit || elapsed_since(start) > limits.time_limit_s) break;
    std::pop_heap(heap.begin(), heap.end(), worse);
    Node node = std::move(heap.back());
    heap.pop_back();
    if (node.parent >= incumbent - prune_margin(incumbent)) {
      // Every remaining node is at least as bad.
      pruned = std::min(pruned, node.parent);
      heap.clear();
      break;
    }
    ++r.nodes;
    const OfflineProgram prog = build_offline(inst, slots, &node.b);
    const SolveResult res = solve_lp(prog.lp, kNodeOptions);
    if (res.status == SolveStatus::kInfeasible) continue;
    if (!res.optimal()) {
      lost = std::min(lost, node.parent);
      continue;
    }
    const double bound = res.objective + prog.constant;
    if (bound >= incumbent - prune_margin(incumbent)) {
      pruned = std::min(pruned, bound);
      continue;
    }

    std::vector<Eigen::MatrixXd> q;
    double worst = -1.0;
    std::size_t bt = 0;
    int bm = 0, bi = 0;
    for (std::size_t t = 0; t < slots.size(); ++t) {
      q.push_back(prog.counts(t, res.x).cwiseMax(0.0));
      for (int m = 0; m < num_vnf; ++m) {
        for (int i = 0; i < num_dc; ++i) {
          const double v = q[t](m, i);
          const double dist = std::abs(v - std::round(v));
          if (dist > worst) {
            worst = dist;
            bt = t;
            bm = m;
            bi = i;
          }
        }
      }
    }
    if (root) {
      std::vector<Eigen::MatrixXi> up;
      for (const auto& qt : q) up.push_back(qt.unaryExpr([](double v) { return static_cast<int>(std::ceil(v - 1e-9)); }));
      try_counts(up);
      root = false;
    }
    if (worst <= 1e-6) {
      std::vector<Eigen::MatrixXi> near;
      for (const auto& qt : q) near.push_back(qt.unaryExpr([](double v) { return static_cast<int>(std::round(v)); }));
      if (try_counts(near) || worst <= 1e-12) continue;
    }
    const double v = q[bt](bm, bi);
    for (int side = 0; side < 2; ++side) {
      Node child = node;
      child.parent = bound;
      child.order = created++;
      if (side == 0) {
        child.b.hi[bt](bm, bi) = std::floor(v);
      } else {
        child.b.lo[bt](bm, bi) = std::floor(v) + 1.0;
      }
      heap.push_back(std::move(child));
      std::push_heap(heap.begin(), heap.end(), worse);
    }
  }
  r.seconds = elapsed_since(start);
  r.optimal = heap.empty() && !std::isfinite(lost) && std::isfinite(incumbent);
  double open = std::min(lost, incumbent);
  for (const Node& n : heap) open = std::min(open, n.parent);
  r.has_solution = std::isfinite(incumbent);
  if (r.has_solution) {
    r.objective = incumbent;
    r.bound = r.optimal ? std::min(incumbent, pruned) : std::min(open, pruned);
    r.gap = (incumbent - r.bound) / std::max(std::abs(incumbent), 1e-300);
    fixed_count_cost(inst, slots, best, &r.plans);
  } else {
    r.bound = open;
    r.gap = kInf;
  }
  return r;
}

double CertificateCheck::worst() const {
  return std::max({q_column, rho_column, y_column, x_column, nu_sign, lambda_sign});
}

CertificateCheck check_dual(const ProblemInstance& inst, const std::vector<SlotInput>& slots,
                            const OfflineDuals& duals, double tol) {
  CertificateCheck c;
  auto note = [&](double& family, double violation, const std::string& what) {
    family = std::max(family, violation);
    if (violation > tol && c.violations.size() < 20) {
      std::ostringstream os;
      os << what << " violated by " << violation;
      c.violations.push_back(os.str());
    }
  };
  const int num_vnf = inst.num_vnfs();
  const int num_dc = inst.num_datacenters();
  for (std::size_t t = 0; t < slots.size(); ++t) {
    const SlotInput& slot = slots[t];
    const SlotDuals& d = duals.slots[t];
    const Eigen::MatrixXd& nu = duals.nu[t];
    const Eigen::MatrixXd nu_next = t + 1 < slots.size() ? duals.nu[t + 1] : Eigen::MatrixXd::Zero(num_vnf, num_dc);
    const std::string at = "t=" + std::to_string(slot.t);
    for (int m = 0; m < num_vnf; ++m) {
      for (int i = 0; i < num_dc; ++i) {
        const std::string mi = at + " m=" + std::to_string(m) + " i=" + std::to_string(i);
        const double qv = slot.running_cost(m, i) - inst.capacity(m, i) * d.lambda(m, i) + nu(m, i) - nu_next(m, i);
        note(c.q_column, -qv, "q column " + mi);
        note(c.rho_column, nu(m, i) - inst.deploy_cost(m, i), "rho column " + mi);
        note(c.nu_sign, -nu(m, i), "nu sign " + mi);
        note(c.lambda_sign, -d.lambda(m, i), "lambda sign " + mi);
      }
    }
    const RateProfile rates = compute_rates(inst, slot);
    const DelayCoefficients coef = delay_coefficients(inst, slot, rates);
    for (int k = 0; k < inst.num_flows(); ++k) {
      const auto ku = static_cast<std::size_t>(k);
      if (!coef.active[ku]) continue;
      const ServiceChain& ch = inst.chain_of(k);
      const auto len = static_cast<int>(ch.length());
      for (int s = 0; s < len; ++s) {
        const int m = ch.vnf_at(static_cast<std::size_t>(s));
        for (int i = 0; i < num_dc; ++i) {
          double v = y_cost(inst, coef, k, s, i) + d.lambda(m, i) - d.mu[ku][static_cast<std::size_t>(s)];
          if (s > 0) v -= d.gamma[ku](s, i);
          if (s + 1 < len) v += ch.beta_at(static_cast<std::size_t>(s)) * d.tau[ku](s, i);
          note(c.y_column, -v, "y column " + at + " k=" + std::to_string(k) + " s=" + std::to_string(s) + " i=" + std::to_string(i));
          if (s + 1 == len) continue;
          for (int j = 0; j < num_dc; ++j) {
            const double xv = x_cost(inst, coef, k, s, i, j) + d.gamma[ku](s + 1, j) - d.tau[ku](s, i);
            note(c.x_column, -xv,
                 "x column " + at + " k=" + std::to_string(k) + " s=" + std::to_string(s) + " i=" + std::to_string(i) +
                     " j=" + std::to_string(j));
          }
        }
      }
    }
  }
  return c;
}

SlotDuals routing_duals(const ProblemInstance& inst, const SlotInput& slot) {
  const RateProfile rates = compute_rates(inst, slot);
  const DelayCoefficients coef = delay_coefficients(inst, slot, rates);
  const int num_vnf = inst.num_vnfs();
  const int num_dc = inst.num_datacenters();
  SlotDuals d;
  d.lambda = Eigen::MatrixXd::Zero(num_vnf, num_dc);
  d.q_bound = Eigen::MatrixXd::Zero(num_vnf, num_dc);
  d.q_cap = Eigen::MatrixXd::Zero(num_vnf, num_dc);
  for (int k = 0; k < inst.num_flows(); ++k) {
    const auto ku = static_cast<std::size_t>(k);
    const ServiceChain& ch = inst.chain_of(k);
    const auto len = static_cast<int>(ch.length());
    d.mu.emplace_back(static_cast<std::size_t>(len), 0.0);
    d.gamma.push_back(Eigen::MatrixXd::Zero(len, num_dc));
    d.tau.push_back(Eigen::MatrixXd::Zero(len, num_dc));
    if (!coef.active[ku]) continue;
    // Cost to go from one unit entering position s in datacenter i.
    Eigen::MatrixXd go(len, num_dc);
    for (int i = 0; i < num_dc; ++i) go(len - 1, i) = y_cost(inst, coef, k, len - 1, i);
    for (int s = len - 2; s >= 0; --s) {
      for (int i = 0; i < num_dc; ++i) {
        double best = kInf;
        for (int j = 0; j < num_dc; ++j) best = std::min(best, x_cost(inst, coef, k, s, i, j) + go(s + 1, j));
        d.tau[ku](s, i) = best;
        go(s, i) = y_cost(inst, coef, k, s, i) + ch.beta_at(static_cast<std::size_t>(s)) * best;
      }
    }
    for (int s = 1; s < len; ++s) d.gamma[ku].row(s) = go.row(s);
    d.mu[ku][0] = go.row(0).minCoeff();
  }
  return d;
}

DualCertificate build_dual_certificate(const ProblemInstance& inst, const std::vector<SlotInput>& slots,
                                       const std::vector<OrfaStep>& online) {
  const int num_vnf = inst.num_vnfs();
  const int num_dc = inst.num_datacenters();
  const double eta = inst.eta();
  const double shift = inst.entropy_shift();
  DualCertificate cert;
  Eigen::MatrixXd prev = Eigen::MatrixXd::Zero(num_vnf, num_dc);
  for (std::size_t t = 0; t < slots.size(); ++t) {
    cert.literal.slots.push_back(online[t].duals);
    Eigen::MatrixXd nu(num_vnf, num_dc);
    for (int m = 0; m < num_vnf; ++m) {
      for (int i = 0; i < num_dc; ++i) {
        nu(m, i) = inst.deploy_cost(m, i) / eta * std::log((1.0 + shift) / (prev(m, i) + shift));
      }
    }
    cert.literal.nu.push_back(nu);
    prev = online[t].plan.q;
  }
  cert.literal_objective = dual_objective(inst, slots, cert.literal);
  cert.literal_check = check_dual(inst, slots, cert.literal);

  const std::size_t horizon = slots.size();
  cert.duals.slots.resize(horizon);
  cert.duals.nu.resize(horizon);
  cert.theta.assign(horizon, 0.0);
  Eigen::MatrixXd nu_next = Eigen::MatrixXd::Zero(num_vnf, num_dc);
  for (std::size_t n = horizon; n-- > 0;) {
    const SlotInput& slot = slots[n];
    SlotDuals online_d = online[n].duals;
    online_d.lambda = online_d.lambda.cwiseMax(0.0);
    const SlotDuals free_d = routing_duals(inst, slot);
    const RateProfile rates = compute_rates(inst, slot);
    // nu^t = max(0, nu^(t+1) - c + theta b lambda) stays below delta while
    // theta b lambda <= delta + c - nu^(t+1).
    double theta_max = 1.0;
    for (int m = 0; m < num_vnf; ++m) {
      for (int i = 0; i < num_dc; ++i) {
        const double bl = inst.capacity(m, i) * online_d.lambda(m, i);
        if (bl > 0.0) {
          theta_max = std::min(theta_max, (inst.deploy_cost(m, i) + slot.running_cost(m, i) - nu_next(m, i)) / bl);
        }
      }
    }
    theta_max = std::max(0.0, theta_max);
    const double theta = slot_objective(rates, online_d) > slot_objective(rates, free_d) ? theta_max : 0.0;
    cert.theta[n] = theta;
    cert.duals.slots[n] = mix(online_d, free_d, theta);
    Eigen::MatrixXd nu(num_vnf, num_dc);
    for (int m = 0; m < num_vnf; ++m) {
      for (int i = 0; i < num_dc; ++i) {
        const double need = nu_next(m, i) - slot.running_cost(m, i) + theta * inst.capacity(m, i) * online_d.lambda(m, i);
        nu(m, i) = std::clamp(need, 0.0, inst.deploy_cost(m, i));
      }
    }
    cert.duals.nu[n] = nu;
    nu_next = nu;
  }
  cert.objective = dual_objective(inst, slots, cert.duals);
  cert.check = check_dual(inst, slots, cert.duals);
  return cert;
}

double safe_ratio(double num, double den) { return den > 0.0 ? num / den : kNaN; }

RatioReport compute_ratios(const CoaRun& run, const RelaxationResult& relaxation, const ExactResult* exact,
                           const DualCertificate* certificate) {
  RatioReport r;
  r.coa_cost = run.integer_total.total();
  r.orfa_cost = run.fractional_total.total();
  r.relaxation = relaxation.status == SolveStatus::kOptimal ? relaxation.objective : kNaN;
  r.certificate = certificate != nullptr ? certificate->objective : kNaN;
  if (exact != nullptr && exact->has_solution && exact->optimal) r.exact = exact->objective;
  if (exact != nullptr && !exact->optimal && std::isfinite(exact->bound)) r.exact_bound = exact->bound;
  r.coa_vs_exact = r.exact ? safe_ratio(r.coa_cost, *r.exact) : kNaN;
  r.coa_vs_relaxation = safe_ratio(r.coa_cost, r.relaxation);
  r.orfa_vs_relaxation = safe_ratio(r.orfa_cost, r.relaxation);
  r.coa_vs_certificate = safe_ratio(r.coa_cost, r.certificate);
  if (r.exact) {
    r.coa_ratio = r.coa_vs_exact;
    r.denominator = "exact";
  } else if (!std::isnan(r.relaxation)) {
    const double lower = r.exact_bound ? std::max(*r.exact_bound, r.relaxation) : r.relaxation;
    r.coa_ratio = safe_ratio(r.coa_cost, lower);
    r.denominator = "lower_bound";
  } else {
    r.coa_ratio = r.coa_vs_certificate;
    r.denominator = "certificate";
  }
  const BoundIngredients& b = run.bounds;
  r.eta = b.eta;
  r.phi = b.phi;
  r.phi1 = b.phi1;
  r.phi2 = b.phi2;
  r.phi3 = b.phi3;
  r.fractional_bound = b.fractional_bound();
  r.integral_bound = b.eta + 2.0;
  r.integer_bound = b.integer_bound();
  return r;
}

void write_ratio_csv(std::ostream& out, const std::vector<RatioReport>& rows) {
  const auto old_precision = out.precision(12);
  auto num = [&](double v) {
    if (std::isnan(v)) {
      out << "undefined";
    } else {
      out << v;
    }
  };
  out << "coa_cost,orfa_cost,exact,exact_bound,relaxation,certificate,coa_vs_exact,coa_vs_relaxation,"
         "orfa_vs_relaxation,coa_vs_certificate,coa_ratio,denominator,eta,phi,phi1,phi2,phi3,fractional_bound,"
         "integral_bound,integer_bound\n";
  for (const RatioReport& r : rows) {
    for (double v : {r.coa_cost, r.orfa_cost, r.exact.value_or(kNaN), r.exact_bound.value_or(kNaN), r.relaxation,
                     r.certificate, r.coa_vs_exact, r.coa_vs_relaxation, r.orfa_vs_relaxation, r.coa_vs_certificate,
                     r.coa_ratio}) {
      num(v);
      out << ',';
    }
    out << r.denominator;
    for (double v : {r.eta, r.phi, r.phi1, r.phi2, r.phi3, r.fractional_bound, r.integral_bound, r.integer_bound}) {
      out << ',';
      num(v);
    }
    out << '\n';
  }
  out.precision(old_precision);
}

}  // namespace nfv
