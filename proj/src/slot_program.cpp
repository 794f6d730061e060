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

#include "nfv/slot_program.hpp"

#include <cmath>

namespace nfv {

int LpBuilder::add_var(double cost, double lower) {
  cost_.push_back(cost);
  lower_.push_back(lower);
  return static_cast<int>(cost_.size()) - 1;
}

int LpBuilder::add_eq_row(double rhs) {
  beq_.push_back(rhs);
  return static_cast<int>(beq_.size()) - 1;
}

int LpBuilder::add_in_row(double rhs) {
  bin_.push_back(rhs);
  return static_cast<int>(bin_.size()) - 1;
}

LinearProgram LpBuilder::build() const {
  const auto n = static_cast<int>(cost_.size());
  LinearProgram lp;
  lp.objective = Eigen::Map<const Eigen::VectorXd>(cost_.data(), n);
  lp.lower = Eigen::Map<const Eigen::VectorXd>(lower_.data(), n);
  lp.b_eq = Eigen::Map<const Eigen::VectorXd>(beq_.data(), static_cast<Eigen::Index>(beq_.size()));
  lp.b_in = Eigen::Map<const Eigen::VectorXd>(bin_.data(), static_cast<Eigen::Index>(bin_.size()));
  lp.a_eq.resize(static_cast<Eigen::Index>(beq_.size()), n);
  lp.a_eq.setFromTriplets(eq_.begin(), eq_.end());
  lp.a_in.resize(static_cast<Eigen::Index>(bin_.size()), n);
  lp.a_in.setFromTriplets(in_.begin(), in_.end());
  return lp;
}

double y_cost(const ProblemInstance& inst, const DelayCoefficients& coef, int flow, int pos, int dc) {
  const Datacenter& d = inst.datacenters[static_cast<std::size_t>(dc)];
  const double beta = inst.chain_of(flow).beta_at(static_cast<std::size_t>(pos));
  return d.ingress_cost + d.egress_cost * beta + coef.xi[static_cast<std::size_t>(flow)](pos, dc);
}

double x_cost(const ProblemInstance& inst, const DelayCoefficients& coef, int flow, int hop, int from,
              int to) {
  double c = coef.omega[static_cast<std::size_t>(flow)][static_cast<std::size_t>(hop)](from, to);
  if (from == to) {
    const Datacenter& d = inst.datacenters[static_cast<std::size_t>(from)];
    c -= d.ingress_cost + d.egress_cost;
  }
  return c;
}

SlotBlock add_slot(LpBuilder& lp, const ProblemInstance& inst, const SlotInput& slot,
                   const RateProfile& rates, const DelayCoefficients& coef,
                   const Eigen::MatrixXd* fixed_q) {
  const int num_dc = inst.num_datacenters();
  const int num_vnf = inst.num_vnfs();
  const int num_flows = inst.num_flows();
  SlotBlock b;
  b.q = Eigen::MatrixXi::Constant(num_vnf, num_dc, -1);
  b.capacity_row = Eigen::MatrixXi::Constant(num_vnf, num_dc, -1);
  for (int m = 0; m < num_vnf; ++m) {
    for (int i = 0; i < num_dc; ++i) {
      if (fixed_q == nullptr || std::isnan((*fixed_q)(m, i))) {
        b.q(m, i) = lp.add_var(slot.running_cost(m, i));
        b.capacity_row(m, i) = lp.add_in_row(0.0);
        lp.in(b.capacity_row(m, i), b.q(m, i), -inst.capacity(m, i));
      } else {
        b.capacity_row(m, i) = lp.add_in_row((*fixed_q)(m, i) * inst.capacity(m, i));
      }
    }
  }
  b.y.resize(static_cast<std::size_t>(num_flows));
  b.x.resize(static_cast<std::size_t>(num_flows));
  b.demand_row.resize(static_cast<std::size_t>(num_flows));
  b.in_row.resize(static_cast<std::size_t>(num_flows));
  b.out_row.resize(static_cast<std::size_t>(num_flows));
  for (int k = 0; k < num_flows; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    const ServiceChain& ch = inst.chain_of(k);
    const auto len = static_cast<int>(ch.length());
    b.y[ku] = Eigen::MatrixXi::Constant(len, num_dc, -1);
    b.x[ku].assign(static_cast<std::size_t>(std::max(0, len - 1)), Eigen::MatrixXi::Constant(num_dc, num_dc, -1));
    b.demand_row[ku].assign(static_cast<std::size_t>(len), -1);
    b.in_row[ku] = Eigen::MatrixXi::Constant(len, num_dc, -1);
    b.out_row[ku] = Eigen::MatrixXi::Constant(len, num_dc, -1);
    if (!coef.active[ku]) continue;
    for (int s = 0; s < len; ++s) {
      const int m = ch.vnf_at(static_cast<std::size_t>(s));
      b.demand_row[ku][static_cast<std::size_t>(s)] = lp.add_eq_row(rates.f_hat[ku][static_cast<std::size_t>(s)]);
      for (int i = 0; i < num_dc; ++i) {
        const int v = lp.add_var(y_cost(inst, coef, k, s, i));
        b.y[ku](s, i) = v;
        lp.in(b.capacity_row(m, i), v, 1.0);
        lp.eq(b.demand_row[ku][static_cast<std::size_t>(s)], v, 1.0);
        if (s > 0) {
          b.in_row[ku](s, i) = lp.add_eq_row(0.0);
          lp.eq(b.in_row[ku](s, i), v, 1.0);
        }
        if (s + 1 < len) {
          b.out_row[ku](s, i) = lp.add_eq_row(0.0);
          lp.eq(b.out_row[ku](s, i), v, ch.beta_at(static_cast<std::size_t>(s)));
        }
      }
    }
    for (int s = 0; s + 1 < len; ++s) {
      Eigen::MatrixXi& xs = b.x[ku][static_cast<std::size_t>(s)];
      for (int i = 0; i < num_dc; ++i) {
        for (int j = 0; j < num_dc; ++j) {
          const int v = lp.add_var(x_cost(inst, coef, k, s, i, j));
          xs(i, j) = v;
          lp.eq(b.out_row[ku](s, i), v, -1.0);
          lp.eq(b.in_row[ku](s + 1, j), v, -1.0);
        }
      }
    }
  }
  return b;
}

Routing extract_routing(const ProblemInstance& inst, const SlotBlock& block, const Eigen::VectorXd& v) {
  Routing r = zero_routing(inst);
  for (std::size_t k = 0; k < block.y.size(); ++k) {
    FlowRouting& fr = r.flows[k];
    for (Eigen::Index s = 0; s < block.y[k].rows(); ++s) {
      for (Eigen::Index i = 0; i < block.y[k].cols(); ++i) {
        const int idx = block.y[k](s, i);
        if (idx >= 0) fr.y(s, i) = std::max(0.0, v(idx));
      }
    }
    for (std::size_t s = 0; s < block.x[k].size(); ++s) {
      const Eigen::MatrixXi& xs = block.x[k][s];
      for (Eigen::Index i = 0; i < xs.rows(); ++i) {
        for (Eigen::Index j = 0; j < xs.cols(); ++j) {
          if (xs(i, j) >= 0) fr.x[s](i, j) = std::max(0.0, v(xs(i, j)));
        }
      }
    }
  }
  return r;
}

Eigen::MatrixXd extract_q(const SlotBlock& block, const Eigen::VectorXd& v) {
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(block.q.rows(), block.q.cols());
  for (Eigen::Index m = 0; m < q.rows(); ++m) {
    for (Eigen::Index i = 0; i < q.cols(); ++i) {
      if (block.q(m, i) >= 0) q(m, i) = std::max(0.0, v(block.q(m, i)));
    }
  }
  return q;
}

SlotDuals read_slot_duals(const ProblemInstance& inst, const SlotBlock& b, const SolveResult& res) {
  SlotDuals d;
  const int num_vnf = inst.num_vnfs();
  const int num_dc = inst.num_datacenters();
  d.lambda = Eigen::MatrixXd::Zero(num_vnf, num_dc);
  d.q_bound = Eigen::MatrixXd::Zero(num_vnf, num_dc);
  d.q_cap = Eigen::MatrixXd::Zero(num_vnf, num_dc);
  for (int m = 0; m < num_vnf; ++m) {
    for (int i = 0; i < num_dc; ++i) d.lambda(m, i) = res.in_duals(b.capacity_row(m, i));
  }
  const auto num_flows = static_cast<std::size_t>(inst.num_flows());
  d.mu.resize(num_flows);
  d.gamma.resize(num_flows);
  d.tau.resize(num_flows);
  for (std::size_t k = 0; k < num_flows; ++k) {
    const auto len = static_cast<Eigen::Index>(b.demand_row[k].size());
    d.mu[k].assign(b.demand_row[k].size(), 0.0);
    d.gamma[k] = Eigen::MatrixXd::Zero(len, num_dc);
    d.tau[k] = Eigen::MatrixXd::Zero(len, num_dc);
    for (Eigen::Index s = 0; s < len; ++s) {
      const int row = b.demand_row[k][static_cast<std::size_t>(s)];
      if (row >= 0) d.mu[k][static_cast<std::size_t>(s)] = res.eq_duals(row);
      for (int i = 0; i < num_dc; ++i) {
        if (b.in_row[k](s, i) >= 0) d.gamma[k](s, i) = res.eq_duals(b.in_row[k](s, i));
        if (b.out_row[k](s, i) >= 0) d.tau[k](s, i) = -res.eq_duals(b.out_row[k](s, i));
      }
    }
  }
  return d;
}

void normalize_routing(const ProblemInstance& inst, const RateProfile& rates, Routing& routing,
                       Eigen::MatrixXd& q) {
  const int num_dc = inst.num_datacenters();
  Eigen::MatrixXd load = Eigen::MatrixXd::Zero(inst.num_vnfs(), num_dc);
  for (int k = 0; k < inst.num_flows(); ++k) {
    const auto ku = static_cast<std::size_t>(k);
    FlowRouting& fr = routing.flows[ku];
    const ServiceChain& ch = inst.chain_of(k);
    const double f = rates.f_hat[ku][0];
    if (!(f > 0.0)) {
      fr.y.setZero();
      for (auto& x : fr.x) x.setZero();
      continue;
    }
    fr.y = fr.y.cwiseMax(0.0);
    const double total = fr.y.row(0).sum();
    if (total > 0.0) {
      fr.y.row(0) *= f / total;
    } else {
      fr.y.row(0).setConstant(f / num_dc);
    }
    for (std::size_t s = 0; s < fr.x.size(); ++s) {
      Eigen::MatrixXd& x = fr.x[s];
      x = x.cwiseMax(0.0);
      for (int i = 0; i < num_dc; ++i) {
        const double target = ch.beta_at(s) * fr.y(static_cast<Eigen::Index>(s), i);
        const double row = x.row(i).sum();
        if (row > 0.0) {
          x.row(i) *= target / row;
        } else {
          x.row(i).setZero();
          x(i, i) = target;
        }
      }
      fr.y.row(static_cast<Eigen::Index>(s + 1)) = x.colwise().sum();
    }
    for (std::size_t s = 0; s < ch.length(); ++s) {
      load.row(ch.vnf_at(s)) += fr.y.row(static_cast<Eigen::Index>(s));
    }
  }
  for (int m = 0; m < inst.num_vnfs(); ++m) {
    for (int i = 0; i < num_dc; ++i) q(m, i) = std::max(q(m, i), load(m, i) / inst.capacity(m, i));
  }
}

}  // namespace nfv
