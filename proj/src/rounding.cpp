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

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

namespace nfv {

namespace {

// Integer nearest to q when q is integral within tolerance, else -1.
long integral_value(double q) {
  const double f = std::floor(q);
  if (q - f <= kIntegralTolerance) return static_cast<long>(f);
  if (f + 1.0 - q <= kIntegralTolerance) return static_cast<long>(f) + 1;
  return -1;
}

void check_probability(double p, const Star& star, int dc) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::logic_error("rounding probability " + std::to_string(p) + " left [0,1] at vnf " +
                           std::to_string(star.vnf) + " datacenter " + std::to_string(dc));
  }
}

}  // namespace

int ceil_tolerant(double x) { return static_cast<int>(std::ceil(x - kIntegralTolerance)); }

double star_degree(const Star& star) {
  double d = 0.0;
  for (const StarEdge& e : star.edges) d += e.w * (1.0 - e.p);
  return d;
}

std::vector<Star> init_stars(const ProblemInstance& inst, const SlotInput& slot,
                             const Eigen::MatrixXd& frac_q, const ClusterSet& clusters) {
  std::vector<Star> stars;
  for (int m = 0; m < inst.num_vnfs(); ++m) {
    for (int u = 0; u < clusters.num_clusters(); ++u) {
      const std::vector<int>& members = clusters.clusters[static_cast<std::size_t>(u)];
      Star s;
      s.vnf = m;
      s.cluster = u;
      s.buffer = members.front();
      for (int i : members) {
        const double ratio = slot.running_cost(m, i) / inst.capacity(m, i);
        if (ratio < slot.running_cost(m, s.buffer) / inst.capacity(m, s.buffer)) s.buffer = i;
      }
      s.buffer_q = frac_q(m, s.buffer);
      for (int i : members) {
        if (i == s.buffer) continue;
        const double q = frac_q(m, i);
        if (integral_value(q) >= 0) {
          s.integral.push_back(i);
          continue;
        }
        const double f = q - std::floor(q);
        s.edges.push_back({i, q, f, f * inst.capacity(m, i) / inst.capacity(m, s.buffer)});
      }
      stars.push_back(std::move(s));
    }
  }
  return stars;
}

StarRounding round_star(const ProblemInstance& inst, const Star& star, Rng& rng) {
  StarRounding out;
  StarOutcome& oc = out.outcome;
  oc.vnf = star.vnf;
  oc.cluster = star.cluster;
  oc.buffer = star.buffer;
  std::vector<double> p;
  p.reserve(star.edges.size());
  for (const StarEdge& e : star.edges) {
    check_probability(e.p, star, e.dc);
    p.push_back(e.p);
  }
  auto degree = [&] {
    double d = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) d += star.edges[k].w * (1.0 - p[k]);
    return d;
  };
  auto floating = [&] {
    std::vector<std::size_t> f;
    for (std::size_t k = 0; k < p.size(); ++k) {
      if (p[k] > 0.0 && p[k] < 1.0) f.push_back(k);
    }
    return f;
  };
  oc.initial_degree = degree();
  out.degree_trace.push_back(oc.initial_degree);

  for (std::vector<std::size_t> fl = floating(); !fl.empty(); fl = floating()) {
    ++oc.iterations;
    if (fl.size() == 1) {
      const std::size_t a = fl[0];
      p[a] = rng.uniform() < p[a] ? 1.0 : 0.0;
      oc.terminal = true;
      out.degree_trace.push_back(degree());
      break;
    }
    const std::size_t a = fl[0];
    const std::size_t b = fl[1];
    const double r = star.edges[a].w / star.edges[b].w;
    // Largest moves keeping both in [0,1] with dp_b = -r dp_a.
    const double k1 = std::min(1.0 - p[a], p[b] / r);
    const double k2 = std::min(p[a], (1.0 - p[b]) / r);
    const double before = degree();
    if (rng.uniform() * (k1 + k2) < k2) {
      const bool a_binds = 1.0 - p[a] <= p[b] / r;
      const bool b_binds = p[b] / r <= 1.0 - p[a];
      p[a] = a_binds ? 1.0 : p[a] + k1;
      p[b] = b_binds ? 0.0 : p[b] - r * k1;
    } else {
      const bool a_binds = p[a] <= (1.0 - p[b]) / r;
      const bool b_binds = (1.0 - p[b]) / r <= p[a];
      p[a] = a_binds ? 0.0 : p[a] - k2;
      p[b] = b_binds ? 1.0 : p[b] + r * k2;
    }
    for (std::size_t k : {a, b}) {
      if (p[k] < 1e-12 && p[k] > -1e-12) p[k] = 0.0;
      if (p[k] > 1.0 - 1e-12 && p[k] < 1.0 + 1e-12) p[k] = 1.0;
      check_probability(p[k], star, star.edges[k].dc);
    }
    const double after = degree();
    oc.max_pair_drift = std::max(oc.max_pair_drift, std::abs(after - before));
    out.degree_trace.push_back(after);
  }
  oc.final_degree = degree();

  // Capacity lost at the leaves, in buffer instances.
  double loss = 0.0;
  out.leaf_count.resize(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) {
    const StarEdge& e = star.edges[k];
    out.leaf_count[k] = static_cast<int>(std::floor(e.q)) + static_cast<int>(p[k]);
    loss += (e.q - out.leaf_count[k]) * inst.capacity(star.vnf, e.dc);
  }
  loss /= inst.capacity(star.vnf, star.buffer);
  oc.buffer_count = ceil_tolerant(star.buffer_q + oc.initial_degree);
  const int needed = ceil_tolerant(star.buffer_q + loss);
  if (needed > oc.buffer_count) {
    oc.buffer_count = needed;
    oc.buffer_raised = true;
  }
  return out;
}

RoundingResult owdr(const ProblemInstance& inst, const std::vector<Star>& stars,
                    const Eigen::MatrixXd& frac_q, const Eigen::MatrixXi& prev_q, std::uint64_t seed,
                    int t) {
  RoundingResult res;
  res.q = Eigen::MatrixXi::Zero(frac_q.rows(), frac_q.cols());
  const Rng root(seed);
  for (const Star& s : stars) {
    Rng rng = root.split({static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(s.vnf),
                          static_cast<std::uint64_t>(s.cluster)});
    const StarRounding sr = round_star(inst, s, rng);
    for (std::size_t k = 0; k < s.edges.size(); ++k) res.q(s.vnf, s.edges[k].dc) = sr.leaf_count[k];
    for (int i : s.integral) res.q(s.vnf, i) = static_cast<int>(integral_value(frac_q(s.vnf, i)));
    res.q(s.vnf, s.buffer) = sr.outcome.buffer_count;
    res.stars.push_back(sr.outcome);
  }
  res.rho = (res.q - prev_q).cwiseMax(0);
  return res;
}

void write_trials_csv(std::ostream& out, const std::vector<Eigen::MatrixXi>& trials) {
  out << "trial,m,i,q\n";
  for (std::size_t n = 0; n < trials.size(); ++n) {
    for (Eigen::Index m = 0; m < trials[n].rows(); ++m) {
      for (Eigen::Index i = 0; i < trials[n].cols(); ++i) {
        out << n << ',' << m << ',' << i << ',' << trials[n](m, i) << '\n';
      }
    }
  }
}

}  // namespace nfv
