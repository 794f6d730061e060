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

#include "nfv/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace nfv {

namespace {

constexpr double kTriangleSlack = 1e-9;

std::string triple_name(int a, int b, int c) {
  std::ostringstream os;
  os << "(" << a << "," << b << "," << c << ")";
  return os.str();
}

}  // namespace

ServiceChain ServiceChain::from_sequence(int id, std::vector<int> vnfs,
                                         std::vector<double> beta) {
  if (vnfs.empty()) throw std::invalid_argument("service chain is empty");
  if (beta.size() != vnfs.size()) {
    throw std::invalid_argument("service chain needs one rate ratio per VNF");
  }
  std::set<int> seen;
  for (int m : vnfs) {
    if (m < 0) throw std::invalid_argument("service chain VNF ids must be >= 0");
    if (!seen.insert(m).second) {
      throw std::invalid_argument("service chain visits a VNF twice");
    }
  }
  for (double b : beta) {
    if (!(b > 0.0)) throw std::invalid_argument("rate ratio beta must be > 0");
  }
  ServiceChain chain;
  chain.id_ = id;
  chain.vnfs_ = std::move(vnfs);
  chain.beta_ = std::move(beta);
  return chain;
}

ServiceChain ServiceChain::from_hops(int id, const std::vector<Hop>& hops,
                                     const std::vector<std::pair<int, double>>& beta) {
  std::map<int, int> next;
  std::map<int, int> indegree;
  for (const Hop& h : hops) {
    if (h.from == kChainTail || h.to == kChainHead) {
      throw std::invalid_argument("hop runs against the chain direction");
    }
    if (!next.emplace(h.from, h.to).second) {
      throw std::invalid_argument("VNF has more than one successor");
    }
    if (++indegree[h.to] > 1) {
      throw std::invalid_argument("VNF has more than one predecessor");
    }
  }
  std::vector<int> order;
  int cur = kChainHead;
  std::set<int> visited;
  while (true) {
    auto it = next.find(cur);
    if (it == next.end()) {
      throw std::invalid_argument("hops do not reach the chain tail");
    }
    cur = it->second;
    if (cur == kChainTail) break;
    if (!visited.insert(cur).second) {
      throw std::invalid_argument("hops contain a cycle");
    }
    order.push_back(cur);
  }
  if (order.size() + 1 != hops.size()) {
    // Some hops are not on the head-to-tail path; they close a cycle.
    throw std::invalid_argument("hops contain a cycle detached from the path");
  }
  std::map<int, double> ratio(beta.begin(), beta.end());
  std::vector<double> b;
  b.reserve(order.size());
  for (int m : order) {
    auto it = ratio.find(m);
    b.push_back(it == ratio.end() ? 1.0 : it->second);
  }
  return from_sequence(id, std::move(order), std::move(b));
}

int ServiceChain::position_of(int vnf) const {
  auto it = std::find(vnfs_.begin(), vnfs_.end(), vnf);
  return it == vnfs_.end() ? -1 : static_cast<int>(it - vnfs_.begin());
}

bool ServiceChain::hop(int from, int to) const {
  if (vnfs_.empty()) return false;
  if (from == kChainHead) return to == vnfs_.front();
  if (to == kChainTail) return from == vnfs_.back();
  int p = position_of(from);
  return p >= 0 && static_cast<std::size_t>(p) + 1 < vnfs_.size() &&
         vnfs_[static_cast<std::size_t>(p) + 1] == to;
}

std::vector<Hop> ServiceChain::hops() const {
  std::vector<Hop> out;
  if (vnfs_.empty()) return out;
  out.push_back({kChainHead, vnfs_.front()});
  for (std::size_t s = 0; s + 1 < vnfs_.size(); ++s) out.push_back({vnfs_[s], vnfs_[s + 1]});
  out.push_back({vnfs_.back(), kChainTail});
  return out;
}

double ProblemInstance::eta() const {
  return std::log(1.0 + static_cast<double>(num_vnfs()) * num_datacenters() / epsilon);
}

double ProblemInstance::entropy_shift() const {
  return epsilon / (static_cast<double>(num_vnfs()) * num_datacenters());
}

bool ValidationReport::has(const std::string& kind) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.kind == kind; });
}

double estimate_alpha(const Eigen::MatrixXd& l) {
  const int n = static_cast<int>(l.rows());
  double alpha = 0.0;
  for (int a = 0; a < n; ++a) {
    for (int c = 0; c < n; ++c) {
      if (a == c) continue;
      const double lac = l(a, c);
      for (int b = 0; b < n; ++b) {
        if (b == a || b == c) continue;
        const double num = std::abs(l(a, b) - l(b, c));
        if (lac == 0.0) {
          if (num > 0.0) {
            throw std::domain_error("zero delay " + triple_name(a, b, c) +
                                    " admits no finite alpha");
          }
          continue;
        }
        alpha = std::max(alpha, num / lac);
      }
    }
  }
  return alpha;
}

ValidationReport validate_instance(const ProblemInstance& inst) {
  ValidationReport rep;
  auto add = [&](std::string kind, std::string detail) {
    rep.violations.push_back({std::move(kind), std::move(detail)});
  };
  const int num_dc = inst.num_datacenters();
  const int num_vnf = inst.num_vnfs();

  if (num_dc < 1) add("dimension", "no datacenters");
  if (num_vnf < 1) add("dimension", "no VNF types");
  if (inst.horizon < 1) add("horizon", "horizon T must be >= 1");
  if (!(inst.epsilon > 0.0)) add("epsilon", "epsilon must be > 0");
  if (num_dc >= 1 && num_vnf >= 1 && inst.epsilon > 0.0) {
    const double eta = inst.eta();
    if (!std::isfinite(eta) || !(eta > 0.0)) add("epsilon", "eta is not finite and positive");
  }

  for (int i = 0; i < num_dc; ++i) {
    const Datacenter& d = inst.datacenters[static_cast<std::size_t>(i)];
    if (d.id != i) add("reference", "datacenter " + std::to_string(i) + " has id " + std::to_string(d.id));
    if (!(d.ingress_cost >= 0.0) || !(d.egress_cost >= 0.0)) {
      add("cost", "datacenter " + std::to_string(i) + " has a negative transfer cost");
    }
  }

  const Eigen::MatrixXd& l = inst.delay.matrix();
  const int n = static_cast<int>(l.rows());
  if (l.rows() != l.cols()) add("dimension", "delay matrix is not square");
  if (n < num_dc) add("dimension", "delay matrix does not cover every datacenter");
  bool delays_sane = l.rows() == l.cols();
  for (int a = 0; delays_sane && a < n; ++a) {
    if (l(a, a) != 0.0) {
      add("diagonal", "l[" + std::to_string(a) + "][" + std::to_string(a) + "] != 0");
    }
    for (int b = a + 1; b < n; ++b) {
      if (!(l(a, b) >= 0.0) || !std::isfinite(l(a, b))) {
        add("delay", "l[" + std::to_string(a) + "][" + std::to_string(b) + "] is negative or not finite");
      }
      if (l(a, b) != l(b, a)) {
        add("symmetry", "l[" + std::to_string(a) + "][" + std::to_string(b) + "] != l[" +
                            std::to_string(b) + "][" + std::to_string(a) + "]");
      }
    }
  }
  if (delays_sane) {
    const double alpha = inst.delay.alpha();
    for (int a = 0; a < n; ++a) {
      for (int c = 0; c < n; ++c) {
        if (a == c) continue;
        for (int b = 0; b < n; ++b) {
          if (b == a || b == c) continue;
          const double lhs = std::abs(l(a, b) - l(b, c));
          const double rhs = alpha * l(a, c);
          if (lhs > rhs + kTriangleSlack * (1.0 + rhs)) {
            std::ostringstream os;
            os << "triple " << triple_name(a, b, c) << ": |l_ab - l_bc| = " << lhs
               << " > alpha * l_ac = " << rhs;
            add("triangle", os.str());
          }
        }
      }
    }
  }

  for (int m = 0; m < num_vnf; ++m) {
    const VnfType& v = inst.vnfs[static_cast<std::size_t>(m)];
    const std::string who = "VNF " + std::to_string(m);
    if (v.id != m) add("reference", who + " has id " + std::to_string(v.id));
    if (v.capacity.size() != static_cast<std::size_t>(num_dc) ||
        v.deploy_cost.size() != static_cast<std::size_t>(num_dc)) {
      add("dimension", who + " needs one capacity and deploy cost per datacenter");
      continue;
    }
    if (!v.running_cost.empty() && v.running_cost.size() != static_cast<std::size_t>(num_dc)) {
      add("dimension", who + " running costs do not match the datacenter count");
    }
    for (int i = 0; i < num_dc; ++i) {
      if (!(v.capacity[static_cast<std::size_t>(i)] > 0.0)) {
        add("capacity", who + " has non-positive capacity in datacenter " + std::to_string(i));
      }
      if (!(v.deploy_cost[static_cast<std::size_t>(i)] >= 0.0)) {
        add("cost", who + " has a negative deploy cost in datacenter " + std::to_string(i));
      }
      if (!v.running_cost.empty() && !(v.running_cost[static_cast<std::size_t>(i)] >= 0.0)) {
        add("cost", who + " has a negative running cost in datacenter " + std::to_string(i));
      }
    }
  }

  for (std::size_t c = 0; c < inst.chains.size(); ++c) {
    const ServiceChain& ch = inst.chains[c];
    const std::string who = "chain " + std::to_string(c);
    if (ch.length() == 0) add("chain", who + " is empty");
    std::set<int> seen;
    for (std::size_t s = 0; s < ch.length(); ++s) {
      const int m = ch.vnf_at(s);
      if (m < 0 || m >= num_vnf) add("reference", who + " names unknown VNF " + std::to_string(m));
      if (!seen.insert(m).second) add("chain", who + " is not a simple path");
      if (!(ch.beta_at(s) > 0.0)) add("chain", who + " has a non-positive rate ratio");
    }
  }

  for (std::size_t k = 0; k < inst.flows.size(); ++k) {
    const FlowSpec& f = inst.flows[k];
    const std::string who = "flow " + std::to_string(k);
    if (f.id != static_cast<int>(k)) add("reference", who + " has id " + std::to_string(f.id));
    if (f.source < 0 || f.source >= n) add("reference", who + " source is not a delay node");
    if (f.destination < 0 || f.destination >= n) {
      add("reference", who + " destination is not a delay node");
    }
    if (f.chain < 0 || f.chain >= static_cast<int>(inst.chains.size())) {
      add("reference", who + " names an unknown chain");
    }
  }
  return rep;
}

ValidationReport validate_slot(const ProblemInstance& inst, const SlotInput& slot) {
  ValidationReport rep;
  auto add = [&](std::string kind, std::string detail) {
    rep.violations.push_back({std::move(kind), std::move(detail)});
  };
  const auto k = static_cast<std::size_t>(inst.num_flows());
  if (slot.rate.size() != k || slot.delay_weight.size() != k) {
    add("dimension", "slot " + std::to_string(slot.t) + " needs one rate and weight per flow");
  }
  if (slot.running_cost.rows() != inst.num_vnfs() ||
      slot.running_cost.cols() != inst.num_datacenters()) {
    add("dimension", "slot " + std::to_string(slot.t) + " running costs must be M x I");
  }
  for (double r : slot.rate) {
    if (!(r >= 0.0) || !std::isfinite(r)) add("rate", "negative or non-finite flow rate");
  }
  for (double a : slot.delay_weight) {
    if (!(a >= 0.0)) add("weight", "negative delay weight");
  }
  if (slot.running_cost.size() > 0 && !(slot.running_cost.minCoeff() >= 0.0)) {
    add("cost", "negative running cost");
  }
  return rep;
}

SlotInput make_slot(const ProblemInstance& inst, int t, std::vector<double> rates) {
  SlotInput s;
  s.t = t;
  s.rate = std::move(rates);
  s.delay_weight.assign(s.rate.size(), 1.0);
  s.running_cost = Eigen::MatrixXd::Zero(inst.num_vnfs(), inst.num_datacenters());
  for (int m = 0; m < inst.num_vnfs(); ++m) {
    const auto& rc = inst.vnfs[static_cast<std::size_t>(m)].running_cost;
    for (int i = 0; i < inst.num_datacenters() && !rc.empty(); ++i) {
      s.running_cost(m, i) = rc[static_cast<std::size_t>(i)];
    }
  }
  return s;
}

}  // namespace nfv
