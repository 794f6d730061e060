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

// Small random instances for tests. Independent of the workload generator.

#ifndef NFV_TESTS_FIXTURES_HPP_
#define NFV_TESTS_FIXTURES_HPP_

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "nfv/model.hpp"

namespace testing_support {

struct TinySpec {
  int dcs = 2;
  int vnfs = 2;
  int flows = 2;
  int horizon = 3;
  double epsilon = 0.1;
  double rate_lo = 2.0;
  double rate_hi = 20.0;
  double zero_rate_prob = 0.1;
};

// Delays are Euclidean distances between random points in the unit square
// scaled to [0, 10], so alpha = 1 holds.
inline nfv::ProblemInstance tiny_instance(unsigned seed, const TinySpec& spec) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  nfv::ProblemInstance inst;
  inst.horizon = spec.horizon;
  inst.epsilon = spec.epsilon;
  for (int i = 0; i < spec.dcs; ++i) inst.datacenters.push_back({i, 0.05 * u(rng), 0.05 * u(rng)});
  const int nodes = spec.dcs + 2 * spec.flows;
  std::vector<double> px(static_cast<std::size_t>(nodes)), py(static_cast<std::size_t>(nodes));
  for (int a = 0; a < nodes; ++a) {
    px[static_cast<std::size_t>(a)] = u(rng);
    py[static_cast<std::size_t>(a)] = u(rng);
  }
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(nodes, nodes);
  for (int a = 0; a < nodes; ++a) {
    for (int b = 0; b < nodes; ++b) {
      l(a, b) = 10.0 * std::hypot(px[static_cast<std::size_t>(a)] - px[static_cast<std::size_t>(b)],
                                  py[static_cast<std::size_t>(a)] - py[static_cast<std::size_t>(b)]);
    }
  }
  inst.delay = nfv::DelayMatrix(l, 1.0);
  for (int m = 0; m < spec.vnfs; ++m) {
    nfv::VnfType v;
    v.id = m;
    v.name = "vnf" + std::to_string(m);
    for (int i = 0; i < spec.dcs; ++i) {
      v.capacity.push_back(5.0 + 10.0 * u(rng));
      v.deploy_cost.push_back(0.5 + 1.5 * u(rng));
      v.running_cost.push_back(1.0 + 2.0 * u(rng));
    }
    inst.vnfs.push_back(v);
  }
  for (int k = 0; k < spec.flows; ++k) {
    std::vector<int> order(static_cast<std::size_t>(spec.vnfs));
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    const int len = std::uniform_int_distribution<int>(1, spec.vnfs)(rng);
    order.resize(static_cast<std::size_t>(len));
    std::vector<double> beta;
    for (int s = 0; s < len; ++s) beta.push_back(u(rng) < 0.5 ? 1.0 : 0.7 + 0.6 * u(rng));
    inst.chains.push_back(nfv::ServiceChain::from_sequence(k, order, beta));
    inst.flows.push_back({k, spec.dcs + 2 * k, spec.dcs + 2 * k + 1, k});
  }
  return inst;
}

inline std::vector<nfv::SlotInput> tiny_slots(const nfv::ProblemInstance& inst, unsigned seed,
                                              const TinySpec& spec) {
  std::mt19937_64 rng(seed * 7919u + 1u);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<nfv::SlotInput> slots;
  for (int t = 1; t <= inst.horizon; ++t) {
    std::vector<double> rates;
    for (int k = 0; k < inst.num_flows(); ++k) {
      rates.push_back(u(rng) < spec.zero_rate_prob ? 0.0 : spec.rate_lo + (spec.rate_hi - spec.rate_lo) * u(rng));
    }
    nfv::SlotInput s = nfv::make_slot(inst, t, rates);
    for (int k = 0; k < inst.num_flows(); ++k) s.delay_weight[static_cast<std::size_t>(k)] = 0.5 + u(rng);
    for (int m = 0; m < inst.num_vnfs(); ++m) {
      for (int i = 0; i < inst.num_datacenters(); ++i) s.running_cost(m, i) *= 0.8 + 0.4 * u(rng);
    }
    slots.push_back(s);
  }
  return slots;
}

}  // namespace testing_support

#endif  // NFV_TESTS_FIXTURES_HPP_
