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

#include "nfv/rates_costs.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nfv {

Routing zero_routing(const ProblemInstance& inst) {
  const int num_dc = inst.num_datacenters();
  Routing r;
  r.flows.resize(static_cast<std::size_t>(inst.num_flows()));
  for (int k = 0; k < inst.num_flows(); ++k) {
    const auto len = static_cast<int>(inst.chain_of(k).length());
    FlowRouting& fr = r.flows[static_cast<std::size_t>(k)];
    fr.y = Eigen::MatrixXd::Zero(len, num_dc);
    fr.x.assign(static_cast<std::size_t>(std::max(0, len - 1)),
                Eigen::MatrixXd::Zero(num_dc, num_dc));
  }
  return r;
}

double FeasibilityReport::worst() const {
  return std::max({capacity, demand, conservation_in, conservation_out, negativity, precedence});
}

std::vector<double> compute_beta_bar(const ServiceChain& chain) {
  std::vector<double> bar(chain.length(), 1.0);
  for (std::size_t s = 1; s < chain.length(); ++s) bar[s] = bar[s - 1] * chain.beta_at(s - 1);
  return bar;
}

double RateProfile::f_hat_vnf(const ProblemInstance& inst, int flow, int vnf) const {
  const int pos = inst.chain_of(flow).position_of(vnf);
  return pos < 0 ? 0.0 : f_hat[static_cast<std::size_t>(flow)][static_cast<std::size_t>(pos)];
}

RateProfile compute_rates(const ProblemInstance& inst, const SlotInput& slot) {
  RateProfile r;
  const auto k = static_cast<std::size_t>(inst.num_flows());
  r.beta_bar.resize(k);
  r.f_hat.resize(k);
  for (std::size_t f = 0; f < k; ++f) {
    r.beta_bar[f] = compute_beta_bar(inst.chain_of(static_cast<int>(f)));
    r.f_hat[f].resize(r.beta_bar[f].size());
    for (std::size_t s = 0; s < r.beta_bar[f].size(); ++s) {
      r.f_hat[f][s] = slot.rate[f] * r.beta_bar[f][s];
    }
  }
  return r;
}

Eigen::VectorXd vnf_demand(const ProblemInstance& inst, const RateProfile& rates) {
  Eigen::VectorXd d = Eigen::VectorXd::Zero(inst.num_vnfs());
  for (int k = 0; k < inst.num_flows(); ++k) {
    const ServiceChain& ch = inst.chain_of(k);
    for (std::size_t s = 0; s < ch.length(); ++s) {
      d(ch.vnf_at(s)) += rates.f_hat[static_cast<std::size_t>(k)][s];
    }
  }
  return d;
}

DelayCoefficients delay_coefficients(const ProblemInstance& inst, const SlotInput& slot,
                                     const RateProfile& rates) {
  const int num_dc = inst.num_datacenters();
  DelayCoefficients dc;
  const auto num_flows = static_cast<std::size_t>(inst.num_flows());
  dc.active.assign(num_flows, false);
  dc.xi.resize(num_flows);
  dc.omega.resize(num_flows);
  for (std::size_t k = 0; k < num_flows; ++k) {
    const double rate = slot.rate[k];
    if (!(rate > 0.0)) continue;
    dc.active[k] = true;
    const FlowSpec& flow = inst.flows[k];
    const ServiceChain& ch = inst.chain_of(static_cast<int>(k));
    const double a = slot.delay_weight[k];
    const auto len = static_cast<int>(ch.length());
    const std::vector<double>& bar = rates.beta_bar[k];
    dc.xi[k] = Eigen::MatrixXd::Zero(len, num_dc);
    for (int i = 0; i < num_dc; ++i) {
      // First VNF: h_{k,0,m} l_{s_k,i} / F; last VNF: h_{k,m,0'} l_{i,z_k} / (beta_bar F).
      dc.xi[k](0, i) += a * inst.delay(flow.source, i) / rate;
      dc.xi[k](len - 1, i) += a * inst.delay(i, flow.destination) / (bar[static_cast<std::size_t>(len - 1)] * rate);
    }
    dc.omega[k].resize(static_cast<std::size_t>(std::max(0, len - 1)));
    for (int s = 0; s + 1 < len; ++s) {
      const double denom = ch.beta_at(static_cast<std::size_t>(s)) * bar[static_cast<std::size_t>(s)] * rate;
      Eigen::MatrixXd& om = dc.omega[k][static_cast<std::size_t>(s)];
      om.resize(num_dc, num_dc);
      for (int i = 0; i < num_dc; ++i) {
        for (int j = 0; j < num_dc; ++j) om(i, j) = a * inst.delay(i, j) / denom;
      }
    }
  }
  return dc;
}

namespace {

void check_shapes(const ProblemInstance& inst, const Eigen::MatrixXd& q,
                  const Eigen::MatrixXd& prev_q, const Routing& routing) {
  const int num_dc = inst.num_datacenters();
  if (q.rows() != inst.num_vnfs() || q.cols() != num_dc || prev_q.rows() != q.rows() ||
      prev_q.cols() != q.cols()) {
    throw std::invalid_argument("instance counts must be M x I");
  }
  if (routing.flows.size() != static_cast<std::size_t>(inst.num_flows())) {
    throw std::invalid_argument("routing needs one entry per flow");
  }
  if ((q.array() < 0.0).any()) throw std::invalid_argument("negative instance count in plan");
  for (int k = 0; k < inst.num_flows(); ++k) {
    const FlowRouting& fr = routing.flows[static_cast<std::size_t>(k)];
    const auto len = static_cast<int>(inst.chain_of(k).length());
    if (fr.y.rows() != len || fr.y.cols() != num_dc ||
        fr.x.size() != static_cast<std::size_t>(len - 1)) {
      throw std::invalid_argument("routing of flow " + std::to_string(k) + " has the wrong shape");
    }
    if ((fr.y.array() < 0.0).any()) throw std::invalid_argument("negative ingress rate in plan");
    for (const auto& x : fr.x) {
      if (x.rows() != num_dc || x.cols() != num_dc) {
        throw std::invalid_argument("hop matrix has the wrong shape");
      }
      if ((x.array() < 0.0).any()) throw std::invalid_argument("negative hop rate in plan");
    }
  }
}

}  // namespace

CostBreakdown cost_of_plan(const ProblemInstance& inst, const SlotInput& slot,
                           const Eigen::MatrixXd& q, const Eigen::MatrixXd& prev_q,
                           const Routing& routing) {
  check_shapes(inst, q, prev_q, routing);
  const int num_dc = inst.num_datacenters();
  CostBreakdown c;
  for (int m = 0; m < inst.num_vnfs(); ++m) {
    for (int i = 0; i < num_dc; ++i) {
      c.running += slot.running_cost(m, i) * q(m, i);
      c.deploy += inst.deploy_cost(m, i) * std::max(0.0, q(m, i) - prev_q(m, i));
    }
  }
  const RateProfile rates = compute_rates(inst, slot);
  const DelayCoefficients coef = delay_coefficients(inst, slot, rates);
  for (int k = 0; k < inst.num_flows(); ++k) {
    const auto ku = static_cast<std::size_t>(k);
    const ServiceChain& ch = inst.chain_of(k);
    const FlowRouting& fr = routing.flows[ku];
    for (int s = 0; s < static_cast<int>(ch.length()); ++s) {
      const double beta = ch.beta_at(static_cast<std::size_t>(s));
      for (int i = 0; i < num_dc; ++i) {
        const Datacenter& d = inst.datacenters[static_cast<std::size_t>(i)];
        c.transfer += (d.ingress_cost + d.egress_cost * beta) * fr.y(s, i);
      }
    }
    for (std::size_t s = 0; s < fr.x.size(); ++s) {
      for (int i = 0; i < num_dc; ++i) {
        const Datacenter& d = inst.datacenters[static_cast<std::size_t>(i)];
        c.transfer -= (d.ingress_cost + d.egress_cost) * fr.x[s](i, i);
      }
    }
    if (!coef.active[ku]) continue;
    c.delay += (coef.xi[ku].array() * fr.y.array()).sum();
    for (std::size_t s = 0; s < fr.x.size(); ++s) {
      c.delay += (coef.omega[ku][s].array() * fr.x[s].array()).sum();
    }
  }
  return c;
}

CostBreakdown cost_of_plan(const ProblemInstance& inst, const SlotInput& slot,
                           const FractionalPlan& plan, const Eigen::MatrixXd& prev_q) {
  return cost_of_plan(inst, slot, plan.q, prev_q, plan.routing);
}

CostBreakdown cost_of_plan(const ProblemInstance& inst, const SlotInput& slot,
                           const IntegerPlan& plan, const Eigen::MatrixXi& prev_q) {
  return cost_of_plan(inst, slot, plan.q.cast<double>(), prev_q.cast<double>(), plan.routing);
}

FeasibilityReport check_feasibility(const ProblemInstance& inst, const SlotInput& slot,
                                    const Eigen::MatrixXd& q, const Eigen::MatrixXd& rho,
                                    const Eigen::MatrixXd& prev_q, const Routing& routing) {
  const int num_dc = inst.num_datacenters();
  const int num_vnf = inst.num_vnfs();
  FeasibilityReport rep;
  const RateProfile rates = compute_rates(inst, slot);
  Eigen::MatrixXd load = Eigen::MatrixXd::Zero(num_vnf, num_dc);
  auto neg = [&](double v) { rep.negativity = std::max(rep.negativity, -v); };
  for (int m = 0; m < num_vnf; ++m) {
    for (int i = 0; i < num_dc; ++i) {
      neg(q(m, i));
      neg(rho(m, i));
      rep.precedence = std::max(rep.precedence, q(m, i) - prev_q(m, i) - rho(m, i));
    }
  }
  for (int k = 0; k < inst.num_flows(); ++k) {
    const auto ku = static_cast<std::size_t>(k);
    const ServiceChain& ch = inst.chain_of(k);
    const FlowRouting& fr = routing.flows[ku];
    const auto len = static_cast<int>(ch.length());
    for (int s = 0; s < len; ++s) {
      double total = 0.0;
      for (int i = 0; i < num_dc; ++i) {
        neg(fr.y(s, i));
        total += fr.y(s, i);
        load(ch.vnf_at(static_cast<std::size_t>(s)), i) += fr.y(s, i);
      }
      rep.demand = std::max(rep.demand, std::abs(total - rates.f_hat[ku][static_cast<std::size_t>(s)]));
    }
    for (int s = 0; s < len; ++s) {
      for (int i = 0; i < num_dc; ++i) {
        if (s > 0) {
          const double in = fr.x[static_cast<std::size_t>(s - 1)].col(i).sum();
          rep.conservation_in = std::max(rep.conservation_in, std::abs(fr.y(s, i) - in));
        }
        if (s + 1 < len) {
          const Eigen::MatrixXd& x = fr.x[static_cast<std::size_t>(s)];
          for (int j = 0; j < num_dc; ++j) neg(x(i, j));
          const double out = x.row(i).sum();
          rep.conservation_out = std::max(
              rep.conservation_out,
              std::abs(ch.beta_at(static_cast<std::size_t>(s)) * fr.y(s, i) - out));
        }
      }
    }
  }
  for (int m = 0; m < num_vnf; ++m) {
    for (int i = 0; i < num_dc; ++i) {
      rep.capacity = std::max(rep.capacity, load(m, i) - q(m, i) * inst.capacity(m, i));
    }
  }
  return rep;
}

}  // namespace nfv
