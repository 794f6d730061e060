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

// Static description of a geo-distributed NFV deployment problem: the
// datacenters, the delay space over datacenters and flow endpoints, the VNF
// catalog, the service chains and the flows that traverse them.

#ifndef NFV_MODEL_HPP_
#define NFV_MODEL_HPP_

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace nfv {

// Dummy chain endpoints. A hop (kChainHead, m) marks m as the first VNF of a
// chain, (m, kChainTail) marks it as the last one.
inline constexpr int kChainHead = -1;
inline constexpr int kChainTail = -2;

struct Datacenter {
  int id = 0;
  double ingress_cost = 0.0;  // money per flow-unit sent into the datacenter
  double egress_cost = 0.0;   // money per flow-unit sent out of it
};

// Symmetric delay matrix over the unified node space: datacenters take ids
// [0, I), flow sources and destinations take the ids after that.
class DelayMatrix {
 public:
  DelayMatrix() = default;
  DelayMatrix(Eigen::MatrixXd delays, double alpha)
      : delays_(std::move(delays)), alpha_(alpha) {}

  int num_nodes() const { return static_cast<int>(delays_.rows()); }
  double operator()(int a, int b) const { return delays_(a, b); }
  const Eigen::MatrixXd& matrix() const { return delays_; }

  // Coefficient of the relaxed triangle inequality |l_ab - l_bc| <= alpha l_ac.
  double alpha() const { return alpha_; }
  void set_alpha(double alpha) { alpha_ = alpha; }

 private:
  Eigen::MatrixXd delays_;
  double alpha_ = 1.0;
};

struct VnfType {
  int id = 0;
  std::string name;
  std::vector<double> capacity;     // b_{m,i}, flow-units per slot per instance
  std::vector<double> deploy_cost;  // delta_{m,i}, money per new instance
  // Nominal c_{m,i}; used to fill slot inputs when a trace carries rates only.
  // May be empty.
  std::vector<double> running_cost;
};

struct Hop {
  int from = kChainHead;
  int to = kChainTail;
  friend bool operator==(const Hop&, const Hop&) = default;
};

// An ordered chain of distinct VNFs, p_k in the model, together with the
// per-VNF rate change ratios beta. The hop indicators h_{k,m,m'} include the
// dummy head and tail.
class ServiceChain {
 public:
  ServiceChain() = default;

  // Throws std::invalid_argument on repeated VNFs, empty chains or a ratio
  // vector of the wrong length or with non-positive entries.
  static ServiceChain from_sequence(int id, std::vector<int> vnfs,
                                    std::vector<double> beta);

  // Rebuilds the ordering from a hop list; the hops must form one simple path
  // from kChainHead to kChainTail. beta is given per VNF as (vnf, ratio).
  // Throws std::invalid_argument for cycles, branches or dangling hops.
  static ServiceChain from_hops(int id, const std::vector<Hop>& hops,
                                const std::vector<std::pair<int, double>>& beta);

  int id() const { return id_; }
  std::size_t length() const { return vnfs_.size(); }
  const std::vector<int>& vnfs() const { return vnfs_; }
  int vnf_at(std::size_t pos) const { return vnfs_[pos]; }
  double beta_at(std::size_t pos) const { return beta_[pos]; }
  const std::vector<double>& beta() const { return beta_; }

  // Position of VNF m in the chain, or -1.
  int position_of(int vnf) const;
  bool contains(int vnf) const { return position_of(vnf) >= 0; }

  // h_{k,from,to}, dummies included.
  bool hop(int from, int to) const;
  std::vector<Hop> hops() const;

 private:
  int id_ = 0;
  std::vector<int> vnfs_;
  std::vector<double> beta_;
};

struct FlowSpec {
  int id = 0;
  int source = 0;       // node id in the delay matrix
  int destination = 0;  // node id in the delay matrix
  int chain = 0;        // index into ProblemInstance::chains
};

struct ProblemInstance {
  std::vector<Datacenter> datacenters;
  DelayMatrix delay;
  std::vector<VnfType> vnfs;
  std::vector<ServiceChain> chains;
  std::vector<FlowSpec> flows;
  int horizon = 1;
  double epsilon = 0.1;

  int num_datacenters() const { return static_cast<int>(datacenters.size()); }
  int num_vnfs() const { return static_cast<int>(vnfs.size()); }
  int num_flows() const { return static_cast<int>(flows.size()); }
  const ServiceChain& chain_of(int flow) const {
    return chains[static_cast<std::size_t>(flows[static_cast<std::size_t>(flow)].chain)];
  }
  double capacity(int vnf, int dc) const {
    return vnfs[static_cast<std::size_t>(vnf)].capacity[static_cast<std::size_t>(dc)];
  }
  double deploy_cost(int vnf, int dc) const {
    return vnfs[static_cast<std::size_t>(vnf)].deploy_cost[static_cast<std::size_t>(dc)];
  }

  // eta = ln(1 + M I / epsilon).
  double eta() const;
  // Entropy shift epsilon / (M I).
  double entropy_shift() const;
};

// Observables revealed at the start of slot t.
struct SlotInput {
  int t = 1;
  std::vector<double> rate;          // F_k^(t) per flow; zero means absent
  std::vector<double> delay_weight;  // a_k^(t) per flow
  Eigen::MatrixXd running_cost;      // c_{m,i}^(t), M x I

  bool active(int flow) const { return rate[static_cast<std::size_t>(flow)] > 0.0; }
};

struct Violation {
  std::string kind;  // e.g. "symmetry", "triangle", "reference"
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(const std::string& kind) const;
};

// Checks every structural invariant of the instance, including the relaxed
// triangle inequality over all node triples. Never throws.
ValidationReport validate_instance(const ProblemInstance& inst);

// Checks a slot input against the instance dimensions and sign constraints.
ValidationReport validate_slot(const ProblemInstance& inst, const SlotInput& slot);

// Smallest alpha for which |l_ab - l_bc| <= alpha l_ac holds over all triples.
// Triples with l_ac = 0 and a zero numerator are skipped; a positive numerator
// over l_ac = 0 has no finite alpha and throws std::domain_error.
double estimate_alpha(const Eigen::MatrixXd& delays);

// Slot input with the instance's nominal running costs, unit delay weights and
// the given rates.
SlotInput make_slot(const ProblemInstance& inst, int t, std::vector<double> rates);

}  // namespace nfv

#endif  // NFV_MODEL_HPP_
