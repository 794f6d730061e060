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


#include "nfv/workload.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "nfv/rates_costs.hpp"

namespace {

nfv::WorkloadConfig desk(std::uint64_t seed) {
  nfv::WorkloadConfig cfg;
  cfg.num_datacenters = 5;
  cfg.num_chains = 4;
  cfg.horizon = 12;
  cfg.seed = seed;
  return cfg;
}

TEST(Workload, DeterministicInSeed) {
  const nfv::Workload a = nfv::generate_workload(desk(7));
  const nfv::Workload b = nfv::generate_workload(desk(7));
  const nfv::Workload c = nfv::generate_workload(desk(8));
  EXPECT_EQ(a.instance.delay.matrix(), b.instance.delay.matrix());
  for (std::size_t t = 0; t < a.trace.slots.size(); ++t) EXPECT_EQ(a.trace.slots[t].rate, b.trace.slots[t].rate);
  EXPECT_NE(a.instance.delay.matrix(), c.instance.delay.matrix());
  EXPECT_NE(a.trace.slots[0].rate, c.trace.slots[0].rate);
}

TEST(Workload, UnperturbedDelaysAreScaledDistances) {
  nfv::WorkloadConfig cfg = desk(3);
  cfg.delay_lo = cfg.delay_hi = 1.0;
  const nfv::Workload w = nfv::generate_workload(cfg);
  std::vector<nfv::Point> pts = w.topology.datacenters;
  pts.insert(pts.end(), w.topology.endpoints.begin(), w.topology.endpoints.end());
  ASSERT_EQ(static_cast<int>(pts.size()), w.instance.delay.num_nodes());
  for (std::size_t a = 0; a < pts.size(); ++a) {
    for (std::size_t b = 0; b < pts.size(); ++b) {
      const double d = std::hypot(pts[a].x - pts[b].x, pts[a].y - pts[b].y) / cfg.km_per_delay_unit;
      EXPECT_NEAR(w.instance.delay(static_cast<int>(a), static_cast<int>(b)), d, 1e-12 * (1.0 + d));
    }
  }
}

TEST(Workload, CollinearUnperturbedHasUnitAlpha) {
  std::vector<nfv::Point> line;
  for (double x : {0.0, 130.0, 410.0, 900.0, 2500.0}) line.push_back({x, 2.0 * x});
  nfv::Rng rng(1);
  const Eigen::MatrixXd l = nfv::delay_matrix(line, 100.0, 1.0, 1.0, rng);
  EXPECT_NEAR(nfv::estimate_alpha(l), 1.0, 1e-12);
}

TEST(Workload, PerturbationUsuallyBreaksTriangle) {
  int above = 0;
  std::vector<double> alphas;
  for (std::uint64_t s = 1; s <= 50; ++s) {
    nfv::Rng rng(s);
    std::vector<nfv::Point> pts;
    for (int n = 0; n < 10; ++n) pts.push_back(nfv::sample_population(rng));
    const double a = nfv::estimate_alpha(nfv::delay_matrix(pts, 100.0, 0.8, 1.2, rng));
    alphas.push_back(a);
    above += a > 1.0;
  }
  std::sort(alphas.begin(), alphas.end());
  RecordProperty("alpha_median", std::to_string(alphas[25]));
  RecordProperty("alpha_max", std::to_string(alphas.back()));
  EXPECT_GE(above, 45);
}

TEST(Workload, Catalog) {
  const auto cat = nfv::default_vnf_catalog();
  ASSERT_EQ(cat.size(), 4u);
  EXPECT_EQ(cat[0].name, "Firewall");
  EXPECT_EQ(cat[3].name, "IDS");
  EXPECT_EQ(cat[3].capacity, 600.0);
  for (int m : {0, 1, 2}) EXPECT_EQ(cat[static_cast<std::size_t>(m)].capacity, 900.0);
  EXPECT_EQ(cat[2].beta_lo, 1.0);
  EXPECT_EQ(cat[2].beta_hi, 1.0);
  EXPECT_EQ(cat[1].beta_lo, 1.0);
  EXPECT_EQ(cat[0].beta_lo, 0.8);
  EXPECT_EQ(cat[3].beta_hi, 1.0);
  // m4.2xlarge over m4.large.
  EXPECT_EQ(cat[3].cost_units / cat[2].cost_units, 4.0);
  EXPECT_EQ(cat[0].cost_units / cat[2].cost_units, 2.0);
}

TEST(Workload, InstancesAreValidAndChainsFollowCatalog) {
  const auto cat = nfv::default_vnf_catalog();
  for (std::uint64_t s = 1; s <= 20; ++s) {
    nfv::WorkloadConfig cfg = desk(s);
    cfg.num_chains = 8;
    const nfv::Workload w = nfv::generate_workload(cfg);
    const nfv::ValidationReport rep = nfv::validate_instance(w.instance);
    EXPECT_TRUE(rep.ok()) << rep.violations[0].detail;
    ASSERT_EQ(w.instance.num_flows(), cfg.num_chains);
    for (const nfv::ServiceChain& c : w.instance.chains) {
      EXPECT_GE(c.length(), 2u);
      EXPECT_LE(c.length(), 4u);
      for (std::size_t p = 0; p < c.length(); ++p) {
        const auto& e = cat[static_cast<std::size_t>(c.vnf_at(p))];
        EXPECT_GE(c.beta_at(p), e.beta_lo);
        EXPECT_LE(c.beta_at(p), e.beta_hi);
      }
    }
    for (const nfv::SlotInput& sl : w.trace.slots) {
      EXPECT_TRUE(nfv::validate_slot(w.instance, sl).ok());
      EXPECT_LE(static_cast<int>(std::count_if(sl.rate.begin(), sl.rate.end(), [](double r) { return r > 0; })),
                w.instance.num_flows());
      for (double r : sl.rate) EXPECT_GE(r, 0.0);
      for (double a : sl.delay_weight) EXPECT_EQ(a, 1.0);
    }
    EXPECT_DOUBLE_EQ(w.instance.deploy_cost(1, 2), cfg.deploy_ratio * w.instance.vnfs[1].running_cost[2]);
  }
}

TEST(Workload, ChainLengthClippedToCatalog) {
  nfv::WorkloadConfig cfg = desk(2);
  cfg.min_chain_length = 4;
  cfg.max_chain_length = 9;
  for (const nfv::ServiceChain& c : nfv::generate_workload(cfg).instance.chains) EXPECT_EQ(c.length(), 4u);
}

TEST(Workload, UnitShockLeavesBaseCurve) {
  nfv::WorkloadConfig cfg = desk(5);
  cfg.shock_level = 1.0;
  const nfv::Workload w = nfv::generate_workload(cfg);
  for (std::size_t t = 0; t < w.trace.slots.size(); ++t) EXPECT_EQ(w.trace.slots[t].rate, w.trace.base[t]);
}

TEST(Workload, ShockMultipliesFlashWindows) {
  nfv::WorkloadConfig cfg = desk(9);
  cfg.horizon = 2400;
  cfg.num_chains = 10;
  cfg.flash_windows = 20;
  cfg.shock_level = 5.0;
  const nfv::Workload w = nfv::generate_workload(cfg);
  double flash_sum = 0.0, base_sum = 0.0;
  int flash_n = 0, base_n = 0;
  for (std::size_t t = 0; t < w.trace.slots.size(); ++t) {
    for (std::size_t k = 0; k < w.trace.base[t].size(); ++k) {
      const double r = w.trace.slots[t].rate[k];
      if (w.trace.flash[t][k]) {
        EXPECT_DOUBLE_EQ(r, 5.0 * w.trace.base[t][k]);
        flash_sum += r;
        ++flash_n;
      } else {
        EXPECT_EQ(r, w.trace.base[t][k]);
      }
      base_sum += w.trace.base[t][k];
      ++base_n;
    }
  }
  ASSERT_GT(flash_n, 500);
  const double ratio = (flash_sum / flash_n) / (base_sum / base_n);
  RecordProperty("flash_over_base", std::to_string(ratio));
  EXPECT_NEAR(ratio, 5.0, 0.25);
}

TEST(Workload, DiurnalPeriodWithoutNoise) {
  nfv::WorkloadConfig cfg = desk(4);
  cfg.horizon = 60;
  cfg.rate_noise = 0.0;
  cfg.flash_windows = 0;
  const nfv::Workload w = nfv::generate_workload(cfg);
  for (int t = 0; t + cfg.diurnal_period < cfg.horizon; ++t) {
    for (std::size_t k = 0; k < 4; ++k) {
      EXPECT_NEAR(w.trace.slots[static_cast<std::size_t>(t)].rate[k],
                  w.trace.slots[static_cast<std::size_t>(t + cfg.diurnal_period)].rate[k], 1e-9);
    }
  }
}

TEST(Workload, ConfigValidation) {
  auto bad = [](auto edit) {
    nfv::WorkloadConfig cfg;
    edit(cfg);
    return cfg;
  };
  EXPECT_NO_THROW(nfv::WorkloadConfig{}.validate());
  EXPECT_THROW(bad([](auto& c) { c.num_datacenters = 0; }).validate(), std::invalid_argument);
  EXPECT_THROW(bad([](auto& c) { c.min_chain_length = 0; }).validate(), std::invalid_argument);
  EXPECT_THROW(bad([](auto& c) { c.min_chain_length = 6; c.max_chain_length = 6; }).validate(), std::invalid_argument);
  EXPECT_THROW(bad([](auto& c) { c.shock_level = 0.0; }).validate(), std::invalid_argument);
  EXPECT_THROW(bad([](auto& c) { c.delay_lo = 1.3; }).validate(), std::invalid_argument);
  EXPECT_THROW(bad([](auto& c) { c.horizon = 0; }).validate(), std::invalid_argument);
}

TEST(WorkloadIo, InstanceJsonRoundTrip) {
  const nfv::Workload w = nfv::generate_workload(desk(11));
  std::stringstream ss;
  nfv::write_instance_json(ss, w.instance);
  const nfv::ProblemInstance r = nfv::read_instance_json(ss);
  EXPECT_EQ(r.delay.matrix(), w.instance.delay.matrix());
  EXPECT_EQ(r.delay.alpha(), w.instance.delay.alpha());
  EXPECT_EQ(r.horizon, w.instance.horizon);
  EXPECT_EQ(r.epsilon, w.instance.epsilon);
  ASSERT_EQ(r.num_vnfs(), w.instance.num_vnfs());
  for (int m = 0; m < r.num_vnfs(); ++m) {
    EXPECT_EQ(r.vnfs[static_cast<std::size_t>(m)].name, w.instance.vnfs[static_cast<std::size_t>(m)].name);
    EXPECT_EQ(r.vnfs[static_cast<std::size_t>(m)].capacity, w.instance.vnfs[static_cast<std::size_t>(m)].capacity);
    EXPECT_EQ(r.vnfs[static_cast<std::size_t>(m)].deploy_cost, w.instance.vnfs[static_cast<std::size_t>(m)].deploy_cost);
    EXPECT_EQ(r.vnfs[static_cast<std::size_t>(m)].running_cost, w.instance.vnfs[static_cast<std::size_t>(m)].running_cost);
  }
  ASSERT_EQ(r.chains.size(), w.instance.chains.size());
  for (std::size_t c = 0; c < r.chains.size(); ++c) {
    EXPECT_EQ(r.chains[c].vnfs(), w.instance.chains[c].vnfs());
    EXPECT_EQ(r.chains[c].beta(), w.instance.chains[c].beta());
  }
  for (int i = 0; i < r.num_datacenters(); ++i) {
    EXPECT_EQ(r.datacenters[static_cast<std::size_t>(i)].egress_cost, w.instance.datacenters[static_cast<std::size_t>(i)].egress_cost);
  }
  EXPECT_EQ(r.flows[3].source, w.instance.flows[3].source);
  EXPECT_EQ(r.flows[3].destination, w.instance.flows[3].destination);
}

TEST(WorkloadIo, InstanceJsonErrors) {
  std::istringstream garbage("{not json");
  EXPECT_THROW(nfv::read_instance_json(garbage), std::invalid_argument);
  std::istringstream missing(R"({"horizon": 2})");
  EXPECT_THROW(nfv::read_instance_json(missing), std::invalid_argument);

  nfv::ProblemInstance inst = nfv::generate_workload(desk(1)).instance;
  Eigen::MatrixXd l = inst.delay.matrix();
  l(0, 1) += 1.0;
  inst.delay = nfv::DelayMatrix(l, inst.delay.alpha());
  std::stringstream ss;
  nfv::write_instance_json(ss, inst);
  try {
    nfv::read_instance_json(ss);
    FAIL() << "asymmetric delays accepted";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("symmetry"), std::string::npos);
  }
}

TEST(WorkloadIo, TraceCsvRoundTrip) {
  const nfv::Workload w = nfv::generate_workload(desk(6));
  std::stringstream ss;
  nfv::write_trace_csv(ss, w.trace.slots);
  std::string header;
  std::getline(ss, header);
  EXPECT_EQ(header, "t,flow_id,rate");
  ss.seekg(0);
  const std::vector<nfv::SlotInput> r = nfv::read_trace_csv(ss, w.instance);
  ASSERT_EQ(r.size(), w.trace.slots.size());
  for (std::size_t t = 0; t < r.size(); ++t) {
    EXPECT_EQ(r[t].t, static_cast<int>(t) + 1);
    EXPECT_EQ(r[t].rate, w.trace.slots[t].rate);
    EXPECT_EQ(r[t].running_cost, w.trace.slots[t].running_cost);
  }
}

TEST(WorkloadIo, TraceCsvMissingRowsAndErrors) {
  const nfv::ProblemInstance inst = nfv::generate_workload(desk(6)).instance;
  std::istringstream sparse("t,flow_id,rate\n2,1,7.5\r\n\n");
  const auto slots = nfv::read_trace_csv(sparse, inst);
  ASSERT_EQ(static_cast<int>(slots.size()), inst.horizon);
  EXPECT_EQ(slots[1].rate[1], 7.5);
  EXPECT_EQ(slots[1].rate[0], 0.0);
  EXPECT_EQ(slots[0].rate[1], 0.0);
  for (const char* body : {"t,flow,rate\n", "t,flow_id,rate\n1,0,1\n1,0,2\n", "t,flow_id,rate\n1,9,1\n",
                           "t,flow_id,rate\n0,0,1\n", "t,flow_id,rate\n13,0,1\n", "t,flow_id,rate\n1,0,-1\n",
                           "t,flow_id,rate\n1,0\n", "t,flow_id,rate\n1,0,x\n", "t,flow_id,rate\n1,0,nan\n"}) {
    std::istringstream in(body);
    EXPECT_THROW(nfv::read_trace_csv(in, inst), std::invalid_argument) << body;
  }
}

}  // namespace
