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

// Weighted dependent rounding of fractional instance counts over per-cluster
// star graphs centred on a buffer datacenter.

#ifndef NFV_ROUNDING_HPP_
#define NFV_ROUNDING_HPP_

#include <cstdint>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "nfv/clustering.hpp"
#include "nfv/model.hpp"
#include "nfv/rng.hpp"

namespace nfv {

// Fractional parts closer than this to 0 or 1 count as integral.
inline constexpr double kIntegralTolerance = 1e-9;

struct StarEdge {
  int dc = 0;
  double q = 0.0;  // fractional count at the leaf
  double p = 0.0;  // frac(q): probability of rounding up
  double w = 0.0;  // frac(q) * b_leaf / b_buffer
};

struct Star {
  int vnf = 0;
  int cluster = 0;
  int buffer = 0;
  double buffer_q = 0.0;
  std::vector<StarEdge> edges;  // ascending dc id; p strictly inside (0, 1)
  std::vector<int> integral;    // non-buffer datacenters with integral q
};

// Round-down mass sum_e w_e (1 - p_e): the capacity, in buffer instances,
// that the buffer must absorb. Pair steps keep it constant.
double star_degree(const Star& star);

std::vector<Star> init_stars(const ProblemInstance& inst, const SlotInput& slot,
                             const Eigen::MatrixXd& frac_q, const ClusterSet& clusters);

struct StarOutcome {
  int vnf = 0;
  int cluster = 0;
  int buffer = 0;
  int iterations = 0;            // pair steps plus the terminal step, if any
  double initial_degree = 0.0;
  double final_degree = 0.0;
  double max_pair_drift = 0.0;   // largest degree change over pair steps
  bool terminal = false;         // one floating edge was left for a single draw
  int buffer_count = 0;
  // The buffer needed more than ceil(q_buffer + initial degree) to cover the
  // capacity lost at the leaves (only possible after a terminal round-down).
  bool buffer_raised = false;
};

struct StarRounding {
  std::vector<int> leaf_count;      // per edge, in edge order
  std::vector<double> degree_trace;  // degree before the first and after every step
  StarOutcome outcome;
};

// Rounds one star. Throws std::logic_error if a probability leaves [0, 1].
StarRounding round_star(const ProblemInstance& inst, const Star& star, Rng& rng);

struct RoundingResult {
  Eigen::MatrixXi q;
  Eigen::MatrixXi rho;
  std::vector<StarOutcome> stars;
};

// Star (m, u) uses the stream Rng(seed).split({t, m, u}).
RoundingResult owdr(const ProblemInstance& inst, const std::vector<Star>& stars,
                    const Eigen::MatrixXd& frac_q, const Eigen::MatrixXi& prev_q, std::uint64_t seed,
                    int t);

// ceil(x) that ignores round-off just above an integer.
int ceil_tolerant(double x);

// CSV with header trial,m,i,q.
void write_trials_csv(std::ostream& out, const std::vector<Eigen::MatrixXi>& trials);

}  // namespace nfv

#endif  // NFV_ROUNDING_HPP_
