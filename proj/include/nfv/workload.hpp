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


// Synthetic geo-distributed workloads: datacenter placement over a population
// map, perturbed distance delays, the default VNF catalog, service chains and
// diurnal demand traces with flash crowds. Also the instance JSON and trace
// CSV formats.

#ifndef NFV_WORKLOAD_HPP_
#define NFV_WORKLOAD_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nfv/model.hpp"
#include "nfv/rng.hpp"

namespace nfv {

struct WorkloadConfig {
  int num_datacenters = 50;
  int num_chains = 30;  // one flow per chain
  int min_chain_length = 2;
  int max_chain_length = 5;  // clipped to the catalog size
  double shock_level = 5.0;
  int horizon = 200;
  std::uint64_t seed = 1;
  double delay_lo = 0.8;  // delay multiplier range
  double delay_hi = 1.2;
  double epsilon = 0.1;

  // Rates and capacities are Mbps divided by this; transfer costs are per
  // flow unit. Gbps keeps rates and instance counts on similar scales.
  double mbps_per_unit = 1000.0;
  double base_rate = 3000.0;     // mean per-flow rate, Mbps
  double diurnal_amplitude = 0.5;
  int diurnal_period = 24;       // slots
  double rate_noise = 0.05;      // relative sd of the multiplicative noise
  int flash_windows = 1;         // per flow
  int flash_length = 4;          // slots, clipped to the horizon

  double instance_price = 10.0;  // running cost of the smallest size per slot
  double price_spread = 0.15;    // per-datacenter price multiplier in 1 +- spread
  double deploy_ratio = 0.5;     // delta / c
  double ingress_cost = 0.5;  // per flow unit, scaled per datacenter by U[0.5, 1.5]
  double egress_cost = 2.0;
  double km_per_delay_unit = 100.0;

  // Throws std::invalid_argument naming the first bad field.
  void validate() const;
};

struct Point {
  double x = 0.0;  // km
  double y = 0.0;
};

// Draws a location from the synthetic population map: weighted city hubs on
// three continents with Gaussian spread.
Point sample_population(Rng& rng);

// Delays over the given points: distance / km_per_unit times the average of
// two directed U[lo, hi] draws, so the matrix is symmetric with zero diagonal.
Eigen::MatrixXd delay_matrix(const std::vector<Point>& points, double km_per_unit, double lo, double hi,
                             Rng& rng);

struct Topology {
  std::vector<Point> datacenters;
  std::vector<Point> endpoints;  // source and destination of flow k at 2k, 2k + 1
  DelayMatrix delay;             // datacenters first, then endpoints
};

Topology generate_topology(const WorkloadConfig& cfg, int num_endpoints, std::uint64_t seed);

struct CatalogEntry {
  std::string name;
  std::string instance_size;  // m4.large, m4.xlarge or m4.2xlarge
  double capacity = 0.0;      // Mbps per instance
  double beta_lo = 1.0;
  double beta_hi = 1.0;
  double cost_units = 1.0;    // price relative to m4.large
};

std::vector<CatalogEntry> default_vnf_catalog();

struct Trace {
  std::vector<SlotInput> slots;
  std::vector<std::vector<double>> base;  // per slot, per flow: rate before flash crowds
  std::vector<std::vector<bool>> flash;   // per slot, per flow
};

// Rates for every flow of inst; running costs are the nominal ones and delay
// weights are 1.
Trace generate_traffic(const WorkloadConfig& cfg, const ProblemInstance& inst, std::uint64_t seed);

struct Workload {
  Topology topology;
  ProblemInstance instance;
  Trace trace;
};

// Full instance and trace from (cfg, cfg.seed).
Workload generate_workload(const WorkloadConfig& cfg);

// Instance JSON. read_instance_json throws std::invalid_argument on malformed
// input or when the instance fails validate_instance.
void write_instance_json(std::ostream& out, const ProblemInstance& inst);
ProblemInstance read_instance_json(std::istream& in);

// Trace CSV with header t,flow_id,rate. Missing (t, flow) pairs read as zero;
// duplicates, unknown flows, slots outside [1, horizon] and negative rates
// throw std::invalid_argument.
void write_trace_csv(std::ostream& out, const std::vector<SlotInput>& slots);
std::vector<SlotInput> read_trace_csv(std::istream& in, const ProblemInstance& inst);

}  // namespace nfv

#endif  // NFV_WORKLOAD_HPP_
