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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "fixtures.hpp"

namespace nfv {
namespace {

ProblemInstance three_node_instance() {
  ProblemInstance inst;
  inst.datacenters = {{0, 0.1, 0.2}};
  Eigen::MatrixXd l(3, 3);
  l << 0, 2, 3,
       2, 0, 4,
       3, 4, 0;
  inst.delay = DelayMatrix(l, 1.0);
  inst.vnfs = {{0, "fw", {10.0}, {1.0}, {2.0}}};
  inst.chains = {ServiceChain::from_sequence(0, {0}, {1.0})};
  inst.flows = {{0, 1, 2, 0}};
  inst.horizon = 2;
  return inst;
}

double brute_alpha(const Eigen::MatrixXd& l) {
  double best = 0.0;
  const auto n = l.rows();
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b)
      for (Eigen::Index c = 0; c < n; ++c)
        if (a != b && b != c && a != c && l(a, c) > 0) best = std::max(best, std::abs(l(a, b) - l(b, c)) / l(a, c));
  return best;
}

TEST(ServiceChain, FromSequence) {
  const ServiceChain ch = ServiceChain::from_sequence(3, {2, 0, 1}, {0.5, 1.0, 2.0});
  EXPECT_EQ(ch.length(), 3u);
  EXPECT_EQ(ch.position_of(0), 1);
  EXPECT_EQ(ch.position_of(5), -1);
  EXPECT_TRUE(ch.hop(kChainHead, 2));
  EXPECT_TRUE(ch.hop(2, 0));
  EXPECT_TRUE(ch.hop(1, kChainTail));
  EXPECT_FALSE(ch.hop(0, 2));
  EXPECT_FALSE(ch.hop(kChainHead, 0));
  const std::vector<Hop> hops = ch.hops();
  ASSERT_EQ(hops.size(), 4u);
  EXPECT_EQ(hops.front(), (Hop{kChainHead, 2}));
  EXPECT_EQ(hops.back(), (Hop{1, kChainTail}));
}

TEST(ServiceChain, RejectsBadSequences) {
  EXPECT_THROW(ServiceChain::from_sequence(0, {}, {}), std::invalid_argument);
  EXPECT_THROW(ServiceChain::from_sequence(0, {1, 1}, {1.0, 1.0}), std::invalid_argument);
  EXPECT_THROW(ServiceChain::from_sequence(0, {0, 1}, {1.0}), std::invalid_argument);
  EXPECT_THROW(ServiceChain::from_sequence(0, {0}, {0.0}), std::invalid_argument);
  EXPECT_THROW(ServiceChain::from_sequence(0, {-1}, {1.0}), std::invalid_argument);
}

TEST(ServiceChain, FromHopsRoundTrip) {
  const ServiceChain a = ServiceChain::from_sequence(0, {1, 3, 0}, {0.8, 1.0, 0.9});
  const ServiceChain b = ServiceChain::from_hops(0, a.hops(), {{0, 0.9}, {1, 0.8}, {3, 1.0}});
  EXPECT_EQ(a.vnfs(), b.vnfs());
  EXPECT_EQ(a.beta(), b.beta());
}

TEST(ServiceChain, FromHopsRejectsCyclesAndBranches) {
  // 0 -> 1 -> 0 cycle detached from the head.
  EXPECT_THROW(ServiceChain::from_hops(0, {{kChainHead, 2}, {2, kChainTail}, {0, 1}, {1, 0}}, {}),
               std::invalid_argument);
  // Branch at the head.
  EXPECT_THROW(ServiceChain::from_hops(0, {{kChainHead, 0}, {kChainHead, 1}, {0, kChainTail}}, {}),
               std::invalid_argument);
  // Never reaches the tail.
  EXPECT_THROW(ServiceChain::from_hops(0, {{kChainHead, 0}, {0, 1}}, {}), std::invalid_argument);
}

TEST(ValidateInstance, AcceptsSymmetricMetric) {
  const ValidationReport rep = validate_instance(three_node_instance());
  EXPECT_TRUE(rep.ok()) << (rep.ok() ? "" : rep.violations.front().detail);
}

TEST(ValidateInstance, FlagsAsymmetry) {
  ProblemInstance inst = three_node_instance();
  Eigen::MatrixXd l = inst.delay.matrix();
  l(0, 1) = 2.5;
  inst.delay = DelayMatrix(l, 1.0);
  EXPECT_TRUE(validate_instance(inst).has("symmetry"));
}

TEST(ValidateInstance, FlagsTriangleWithTriple) {
  ProblemInstance inst = three_node_instance();
  Eigen::MatrixXd l(3, 3);
  l << 0, 10, 3,
       10, 0, 2,
       3, 2, 0;
  inst.delay = DelayMatrix(l, 2.0);
  const ValidationReport rep = validate_instance(inst);
  ASSERT_TRUE(rep.has("triangle"));
  // The triple through the short edge needs (10 - 3) / 2.
  inst.delay.set_alpha(3.5);
  EXPECT_FALSE(validate_instance(inst).has("triangle"));
}

TEST(ValidateInstance, FlagsBadReferencesAndCosts) {
  ProblemInstance inst = three_node_instance();
  inst.flows[0].destination = 7;
  inst.vnfs[0].capacity[0] = 0.0;
  inst.datacenters[0].egress_cost = -1.0;
  inst.epsilon = 0.0;
  const ValidationReport rep = validate_instance(inst);
  EXPECT_TRUE(rep.has("reference"));
  EXPECT_TRUE(rep.has("capacity"));
  EXPECT_TRUE(rep.has("cost"));
  EXPECT_TRUE(rep.has("epsilon"));
}

TEST(ValidateInstance, Idempotent) {
  ProblemInstance inst = three_node_instance();
  inst.horizon = 0;
  const ValidationReport a = validate_instance(inst);
  const ValidationReport b = validate_instance(inst);
  ASSERT_EQ(a.violations.size(), b.violations.size());
  for (std::size_t i = 0; i < a.violations.size(); ++i) EXPECT_EQ(a.violations[i].detail, b.violations[i].detail);
}

TEST(ValidateSlot, FlagsNegativeEntries) {
  const ProblemInstance inst = three_node_instance();
  SlotInput s = make_slot(inst, 1, {-1.0});
  EXPECT_FALSE(validate_slot(inst, s).ok());
  s = make_slot(inst, 1, {1.0, 2.0});
  EXPECT_TRUE(validate_slot(inst, s).has("dimension"));
  s = make_slot(inst, 1, {3.0});
  EXPECT_TRUE(validate_slot(inst, s).ok());
  EXPECT_DOUBLE_EQ(s.running_cost(0, 0), 2.0);
}

TEST(EstimateAlpha, PointsOnALine) {
  Eigen::MatrixXd l(4, 4);
  const double x[4] = {0.0, 1.5, 4.0, 7.0};
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) l(a, b) = std::abs(x[a] - x[b]);
  EXPECT_NEAR(estimate_alpha(l), 1.0, 1e-12);
}

TEST(EstimateAlpha, TwoNodesIsZero) {
  Eigen::MatrixXd l(2, 2);
  l << 0, 5, 5, 0;
  EXPECT_EQ(estimate_alpha(l), 0.0);
}

TEST(EstimateAlpha, HandTriple) {
  Eigen::MatrixXd l(3, 3);
  l << 0, 10, 3,
       10, 0, 2,
       3, 2, 0;
  // (a,b,c) gives 8/3; the maximum comes from |l_ab - l_ac| / l_bc = 7/2.
  EXPECT_NEAR(estimate_alpha(l), 3.5, 1e-12);
  EXPECT_NEAR(brute_alpha(l), 3.5, 1e-12);
}

TEST(EstimateAlpha, ZeroDelayWithPositiveNumeratorThrows) {
  Eigen::MatrixXd l(3, 3);
  l << 0, 0, 1,
       0, 0, 2,
       1, 2, 0;
  EXPECT_THROW(estimate_alpha(l), std::domain_error);
}

TEST(EstimateAlpha, MinimalOnRandomMatrices) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.5, 10.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 3 + trial % 6;
    Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) l(a, b) = l(b, a) = u(rng);
    const double alpha = estimate_alpha(l);
    EXPECT_NEAR(alpha, brute_alpha(l), 1e-12);
    bool tight = false;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) {
          if (a == b || b == c || a == c) continue;
          const double num = std::abs(l(a, b) - l(b, c));
          EXPECT_LE(num, alpha * l(a, c) * (1 + 1e-12));
          if (num > (alpha - 1e-9) * l(a, c)) tight = true;
        }
    EXPECT_TRUE(tight);
  }
}

TEST(ProblemInstance, EtaAndShift) {
  ProblemInstance inst;
  inst.epsilon = 0.1;
  inst.datacenters.resize(50);
  inst.vnfs.resize(4);
  EXPECT_NEAR(inst.eta(), std::log(2001.0), 1e-12);
  EXPECT_NEAR(inst.eta(), 7.601, 1e-3);
  EXPECT_NEAR(inst.entropy_shift(), 0.1 / 200.0, 1e-15);
}

TEST(Fixtures, TinyInstancesValidate) {
  for (unsigned seed = 0; seed < 20; ++seed) {
    testing_support::TinySpec spec;
    spec.dcs = 1 + static_cast<int>(seed % 4);
    spec.vnfs = 1 + static_cast<int>(seed % 3);
    const ProblemInstance inst = testing_support::tiny_instance(seed, spec);
    const ValidationReport rep = validate_instance(inst);
    EXPECT_TRUE(rep.ok()) << seed << " " << (rep.ok() ? "" : rep.violations.front().detail);
  }
}

}  // namespace
}  // namespace nfv
