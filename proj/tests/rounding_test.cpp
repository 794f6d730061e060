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

#include "nfv/rounding.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "fixtures.hpp"

namespace {

using testing_support::TinySpec;

struct Fixture {
  nfv::ProblemInstance inst;
  nfv::SlotInput slot;
  Eigen::MatrixXd q;
  nfv::ClusterSet clusters;
};

Fixture make_fixture(unsigned seed) {
  TinySpec spec;
  spec.dcs = 3 + static_cast<int>(seed % 5);
  spec.vnfs = 1 + static_cast<int>(seed % 3);
  Fixture f;
  f.inst = testing_support::tiny_instance(seed, spec);
  f.slot = testing_support::tiny_slots(f.inst, seed, spec)[0];
  std::mt19937_64 rng(seed + 101);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  f.q.resize(spec.vnfs, spec.dcs);
  for (Eigen::Index j = 0; j < f.q.size(); ++j) {
    const double r = u(rng);
    f.q.data()[j] = r < 0.2 ? std::floor(4.0 * u(rng)) : 4.0 * u(rng);
  }
  f.clusters = nfv::cluster(f.inst);
  return f;
}

nfv::ProblemInstance equal_capacity_instance(int dcs, double cap) {
  nfv::ProblemInstance inst;
  for (int i = 0; i < dcs; ++i) inst.datacenters.push_back({i, 0.0, 0.0});
  Eigen::MatrixXd l = Eigen::MatrixXd::Constant(dcs, dcs, 1.0);
  l.diagonal().setZero();
  inst.delay = nfv::DelayMatrix(l, 1.0);
  nfv::VnfType v{0, "v", std::vector<double>(static_cast<std::size_t>(dcs), cap),
                 std::vector<double>(static_cast<std::size_t>(dcs), 1.0),
                 std::vector<double>(static_cast<std::size_t>(dcs), 1.0)};
  inst.vnfs.push_back(v);
  inst.chains.push_back(nfv::ServiceChain::from_sequence(0, {0}, {1.0}));
  return inst;
}

nfv::ClusterSet one_cluster(int dcs) {
  nfv::ClusterSet cs;
  cs.clusters.push_back({});
  for (int i = 0; i < dcs; ++i) {
    cs.clusters[0].push_back(i);
    cs.assignment.push_back(0);
  }
  return cs;
}

TEST(RoundingInit, AllIntegralMeansNoEdges) {
  Fixture f = make_fixture(3);
  f.q = f.q.array().floor();
  const auto stars = nfv::init_stars(f.inst, f.slot, f.q, f.clusters);
  for (const auto& s : stars) EXPECT_TRUE(s.edges.empty());
  const auto prev = Eigen::MatrixXi::Zero(f.q.rows(), f.q.cols());
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto r = nfv::owdr(f.inst, stars, f.q, prev, seed, 1);
    EXPECT_EQ(r.q, f.q.cast<int>());
  }
}

TEST(RoundingInit, WeightFromFractionAndCapacityRatio) {
  const nfv::ProblemInstance inst = equal_capacity_instance(2, 5.0);
  nfv::SlotInput slot = nfv::make_slot(inst, 1, {});
  Eigen::MatrixXd q(1, 2);
  q << 0.2, 1.5;
  const auto stars = nfv::init_stars(inst, slot, q, one_cluster(2));
  ASSERT_EQ(stars.size(), 1u);
  EXPECT_EQ(stars[0].buffer, 0);  // equal c/b: lower id
  ASSERT_EQ(stars[0].edges.size(), 1u);
  EXPECT_DOUBLE_EQ(stars[0].edges[0].w, 0.5);
  EXPECT_DOUBLE_EQ(stars[0].edges[0].p, 0.5);
}

TEST(RoundingInit, BufferHasLowestCostPerCapacity) {
  nfv::ProblemInstance inst = equal_capacity_instance(3, 5.0);
  inst.vnfs[0].capacity = {5.0, 10.0, 4.0};
  nfv::SlotInput slot = nfv::make_slot(inst, 1, {});
  slot.running_cost << 1.0, 1.5, 0.7;  // ratios 0.2, 0.15, 0.175
  Eigen::MatrixXd q(1, 3);
  q << 0.3, 0.4, 0.6;
  const auto stars = nfv::init_stars(inst, slot, q, one_cluster(3));
  EXPECT_EQ(stars[0].buffer, 1);
  ASSERT_EQ(stars[0].edges.size(), 2u);
  EXPECT_NEAR(stars[0].edges[0].w, 0.3 * 5.0 / 10.0, 1e-15);
  EXPECT_NEAR(stars[0].edges[1].w, 0.6 * 4.0 / 10.0, 1e-15);
}

TEST(RoundingStar, SingleFractionalLeafMarginal) {
  const nfv::ProblemInstance inst = equal_capacity_instance(2, 5.0);
  const nfv::SlotInput slot = nfv::make_slot(inst, 1, {});
  Eigen::MatrixXd q(1, 2);
  q << 1.0, 2.3;
  const auto stars = nfv::init_stars(inst, slot, q, one_cluster(2));
  const int n = 10000;
  int up = 0;
  for (int trial = 0; trial < n; ++trial) {
    const auto r = nfv::owdr(inst, stars, q, Eigen::MatrixXi::Zero(1, 2), static_cast<std::uint64_t>(trial), 1);
    ASSERT_TRUE(r.q(0, 1) == 2 || r.q(0, 1) == 3);
    up += r.q(0, 1) == 3;
    // Capacity never drops below the fractional total.
    EXPECT_GE(5.0 * r.q.sum(), 5.0 * q.sum() - 1e-9);
  }
  const double se = std::sqrt(0.3 * 0.7 / n);
  EXPECT_NEAR(static_cast<double>(up) / n, 0.3, 3.0 * se);
}

TEST(RoundingStar, TwoEqualHalfEdgesResolveInOneStep) {
  const nfv::ProblemInstance inst = equal_capacity_instance(3, 5.0);
  nfv::Star s;
  s.buffer = 0;
  s.edges = {{1, 0.5, 0.5, 0.5}, {2, 0.5, 0.5, 0.5}};
  int first_up = 0;
  const int n = 4000;
  for (int trial = 0; trial < n; ++trial) {
    nfv::Rng rng(static_cast<std::uint64_t>(trial));
    const nfv::StarRounding r = nfv::round_star(inst, s, rng);
    EXPECT_EQ(r.outcome.iterations, 1);
    EXPECT_FALSE(r.outcome.terminal);
    ASSERT_EQ(r.leaf_count.size(), 2u);
    EXPECT_EQ(r.leaf_count[0] + r.leaf_count[1], 1);
    // w (1 - p1) + w (1 - p2) = 0.5 before and after.
    EXPECT_DOUBLE_EQ(r.outcome.initial_degree, 0.5);
    EXPECT_DOUBLE_EQ(r.outcome.final_degree, 0.5);
    first_up += r.leaf_count[0];
  }
  EXPECT_NEAR(static_cast<double>(first_up) / n, 0.5, 3.0 * std::sqrt(0.25 / n));
}

TEST(RoundingStar, SingleStepIsMeanNeutral) {
  const nfv::ProblemInstance inst = equal_capacity_instance(3, 5.0);
  nfv::Star s;
  s.buffer = 0;
  // w ratio 0.7/0.4; step sizes k1 = min(0.8, 0.6/1.75), k2 = min(0.2, 0.4/1.75).
  s.edges = {{1, 0.2, 0.2, 0.7}, {2, 0.6, 0.6, 0.4}};
  const double r = 0.7 / 0.4;
  const double k1 = std::min(0.8, 0.6 / r);
  const double k2 = std::min(0.2, 0.4 / r);
  const int n = 20000;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int trial = 0; trial < n; ++trial) {
    nfv::Rng rng(static_cast<std::uint64_t>(trial) + 7);
    const double u = rng.uniform();
    const double dp = u * (k1 + k2) < k2 ? k1 : -k2;
    sum += dp;
    sum_sq += dp * dp;
  }
  // Branch mean is zero by construction: k1 * k2/(k1+k2) - k2 * k1/(k1+k2).
  EXPECT_NEAR(k1 * k2 / (k1 + k2) - k2 * k1 / (k1 + k2), 0.0, 1e-15);
  const double mean = sum / n;
  const double sd = std::sqrt(sum_sq / n - mean * mean);
  EXPECT_NEAR(mean, 0.0, 3.0 * sd / std::sqrt(n));

  // round_star takes the same branch as the draw above.
  nfv::Rng a(9), b(9);
  const nfv::StarRounding rs = nfv::round_star(inst, s, a);
  const bool first_up = b.uniform() * (k1 + k2) < k2;
  EXPECT_EQ(rs.degree_trace.size() >= 2, true);
  if (first_up) {
    EXPECT_EQ(rs.leaf_count[1], 0);  // 0.6 - r * k1 = 0 binds first
  } else {
    EXPECT_EQ(rs.leaf_count[0], 0);  // 0.2 - k2 = 0 binds first
  }
}

TEST(RoundingStar, RejectsProbabilityOutsideUnitInterval) {
  const nfv::ProblemInstance inst = equal_capacity_instance(3, 5.0);
  nfv::Star s;
  s.buffer = 0;
  s.edges = {{1, 0.5, 1.3, 0.5}, {2, 0.5, 0.5, 0.5}};
  nfv::Rng rng(1);
  EXPECT_THROW(nfv::round_star(inst, s, rng), std::logic_error);
}

TEST(RoundingProperties, MarginalsDegreeAndCapacity) {
  const int n = 4000;
  for (unsigned fx = 1; fx <= 6; ++fx) {
    const Fixture f = make_fixture(fx);
    const auto stars = nfv::init_stars(f.inst, f.slot, f.q, f.clusters);
    const Eigen::MatrixXi prev = Eigen::MatrixXi::Zero(f.q.rows(), f.q.cols());
    Eigen::MatrixXd up = Eigen::MatrixXd::Zero(f.q.rows(), f.q.cols());
    for (int trial = 0; trial < n; ++trial) {
      const auto r = nfv::owdr(f.inst, stars, f.q, prev, static_cast<std::uint64_t>(trial), 1);
      ASSERT_GE(r.q.minCoeff(), 0);
      for (const nfv::StarOutcome& so : r.stars) {
        EXPECT_LE(so.max_pair_drift, 1e-9);
        if (!so.buffer_raised) {
          EXPECT_EQ(so.buffer_count, nfv::ceil_tolerant(f.q(so.vnf, so.buffer) + so.initial_degree));
        } else {
          EXPECT_TRUE(so.terminal);
        }
      }
      for (int m = 0; m < f.inst.num_vnfs(); ++m) {
        double frac_cap = 0.0;
        double int_cap = 0.0;
        for (int i = 0; i < f.inst.num_datacenters(); ++i) {
          frac_cap += f.q(m, i) * f.inst.capacity(m, i);
          int_cap += r.q(m, i) * f.inst.capacity(m, i);
          if (r.q(m, i) > std::floor(f.q(m, i))) up(m, i) += 1.0;
        }
        EXPECT_GE(int_cap, frac_cap - 1e-6);
      }
    }
    for (const nfv::Star& s : stars) {
      for (const nfv::StarEdge& e : s.edges) {
        const double emp = up(s.vnf, e.dc) / n;
        EXPECT_NEAR(emp, e.p, 3.0 * std::sqrt(e.p * (1.0 - e.p) / n)) << "fixture " << fx << " dc " << e.dc;
      }
    }
  }
}

TEST(RoundingProperties, SeededAndSplitByKeys) {
  const Fixture f = make_fixture(4);
  const auto stars = nfv::init_stars(f.inst, f.slot, f.q, f.clusters);
  const Eigen::MatrixXi prev = Eigen::MatrixXi::Zero(f.q.rows(), f.q.cols());
  EXPECT_EQ(nfv::owdr(f.inst, stars, f.q, prev, 5, 1).q, nfv::owdr(f.inst, stars, f.q, prev, 5, 1).q);
  nfv::Rng a(5);
  nfv::Rng b(5);
  EXPECT_EQ(a.split({1, 2, 3}).uniform(), b.split({1, 2, 3}).uniform());
  EXPECT_NE(a.split({1, 2, 3}).uniform(), a.split({1, 3, 2}).uniform());
}

TEST(RoundingProperties, RhoIsPositivePartOfChange) {
  const Fixture f = make_fixture(2);
  const auto stars = nfv::init_stars(f.inst, f.slot, f.q, f.clusters);
  Eigen::MatrixXi prev = Eigen::MatrixXi::Constant(f.q.rows(), f.q.cols(), 2);
  const auto r = nfv::owdr(f.inst, stars, f.q, prev, 3, 1);
  EXPECT_EQ(r.rho, (r.q - prev).cwiseMax(0));
}

TEST(RoundingOutput, TrialCsv) {
  Eigen::MatrixXi a(1, 2);
  a << 1, 2;
  std::ostringstream os;
  nfv::write_trials_csv(os, {a, a});
  EXPECT_EQ(os.str(), "trial,m,i,q\n0,0,0,1\n0,0,1,2\n1,0,0,1\n1,0,1,2\n");
}

}  // namespace
