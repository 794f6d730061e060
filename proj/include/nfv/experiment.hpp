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


// Experiment runner: sweeps a workload parameter over seeds, runs the online
// algorithms and baselines, and prices them against the offline oracles.

#ifndef NFV_EXPERIMENT_HPP_
#define NFV_EXPERIMENT_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "nfv/coa.hpp"
#include "nfv/offline_oracle.hpp"
#include "nfv/workload.hpp"

namespace nfv {

enum class Algorithm { kOrfa, kCoa, kIrr, kGr };
enum class Oracle { kRelaxation, kExact, kCertificate };
enum class SweepParam { kNone, kDatacenters, kSlots, kShock, kEpsilon };

std::string to_string(Algorithm a);
std::string to_string(Oracle o);
std::string to_string(SweepParam p);
// Case-insensitive; throw std::invalid_argument on unknown names.
Algorithm parse_algorithm(const std::string& s);
Oracle parse_oracle(const std::string& s);
SweepParam parse_sweep(const std::string& s);

struct ExperimentSpec {
  WorkloadConfig workload;   // used when instance_path is empty
  std::string instance_path;  // instance JSON
  std::string trace_path;     // optional trace CSV for a file instance
  std::vector<Algorithm> algorithms;
  std::vector<Oracle> oracles;
  SweepParam sweep = SweepParam::kNone;
  std::vector<double> values;
  std::vector<std::uint64_t> seeds{1};
  ExactLimits exact;
  int jobs = 1;

  // Throws std::invalid_argument on an empty algorithm or oracle set, a sweep
  // without values (or values without a sweep) and sweeps that cannot apply
  // to the instance source.
  void validate() const;
};

struct ExperimentPoint {
  ProblemInstance instance;
  std::vector<SlotInput> slots;
};

// Instance and slots for one sweep value and seed. Reads files when the spec
// names them; a file instance without a trace gets generated traffic.
ExperimentPoint prepare_point(const ExperimentSpec& spec, double value, std::uint64_t seed);

struct ResultRow {
  double sweep_value = 0.0;
  std::uint64_t seed = 0;
  Algorithm algorithm = Algorithm::kCoa;
  bool feasible = true;
  int infeasible_slot = 0;
  CostBreakdown cost;
  // Fractional algorithms are priced against the relaxation, integer ones
  // against the exact optimum, else the best proven lower bound. The
  // certificate is the last resort for both.
  double ratio = 0.0;
  std::string denominator_kind;  // exact, lower_bound, relaxation, certificate or none
  double denominator = 0.0;
  double relaxation = 0.0;  // NaN when not computed
  double exact = 0.0;
  double exact_bound = 0.0;
  double certificate = 0.0;
  BoundIngredients bounds;
};

// Rows ordered by sweep value, seed and the spec's algorithm order.
std::vector<ResultRow> run_experiment(const ExperimentSpec& spec);

struct SummaryRow {
  double sweep_value = 0.0;
  Algorithm algorithm = Algorithm::kCoa;
  int runs = 0;
  int infeasible = 0;
  int rated = 0;  // feasible runs with a defined ratio
  double mean_ratio = 0.0;
  double stddev_ratio = 0.0;  // sample standard deviation; 0 below two samples
  double mean_cost = 0.0;     // over feasible runs
};

std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows);

void write_results_csv(std::ostream& out, SweepParam sweep, const std::vector<ResultRow>& rows);
void write_summary_json(std::ostream& out, SweepParam sweep, const std::vector<SummaryRow>& summary);

}  // namespace nfv

#endif  // NFV_EXPERIMENT_HPP_
