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

#include "nfv/clustering.hpp"

#include <algorithm>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace nfv {

double cluster_radius(const Eigen::MatrixXd& delays) {
  std::vector<double> v(delays.data(), delays.data() + delays.size());
  if (v.empty()) throw std::invalid_argument("empty delay matrix");
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

namespace {

bool all_within(const Eigen::MatrixXd& l, const std::vector<int>& a, const std::vector<int>& b,
                double r) {
  for (int i : a) {
    for (int j : b) {
      if (l(i, j) > r || l(j, i) > r) return false;
    }
  }
  return true;
}

void merge_into(std::vector<std::vector<int>>& cs, std::size_t into, std::size_t from) {
  cs[into].insert(cs[into].end(), cs[from].begin(), cs[from].end());
  std::sort(cs[into].begin(), cs[into].end());
  cs.erase(cs.begin() + static_cast<std::ptrdiff_t>(from));
  std::sort(cs.begin(), cs.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
}

}  // namespace

ClusterSet cluster(const Eigen::MatrixXd& l) {
  const auto n = static_cast<int>(l.rows());
  if (l.cols() != n) throw std::invalid_argument("delay matrix must be square");
  if (n < 2) throw std::invalid_argument("clustering needs at least two datacenters");
  ClusterSet cs;
  cs.radius = cluster_radius(l);
  std::vector<std::vector<int>> c;
  for (int i = 0; i < n; ++i) c.push_back({i});

  bool merged = true;
  while (merged) {
    merged = false;
    for (std::size_t u = 0; u < c.size() && !merged; ++u) {
      for (std::size_t v = u + 1; v < c.size() && !merged; ++v) {
        if (all_within(l, c[u], c[v], cs.radius)) {
          merge_into(c, u, v);
          merged = true;
        }
      }
    }
  }
  cs.pre_merge = c;

  for (int i = 0; i < n; ++i) {
    auto self = std::find_if(c.begin(), c.end(), [i](const auto& m) { return m.front() == i; });
    if (self == c.end() || self->size() != 1) continue;
    const auto su = static_cast<std::size_t>(self - c.begin());
    std::size_t best = su;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t v = 0; v < c.size(); ++v) {
      if (v == su) continue;
      double worst = 0.0;
      for (int j : c[v]) worst = std::max(worst, l(i, j));
      if (worst < best_d) {
        best_d = worst;
        best = v;
      }
    }
    merge_into(c, best, su);
  }
  cs.clusters = c;
  cs.assignment.assign(static_cast<std::size_t>(n), -1);
  for (std::size_t u = 0; u < c.size(); ++u) {
    for (int i : c[u]) cs.assignment[static_cast<std::size_t>(i)] = static_cast<int>(u);
  }
  return cs;
}

ClusterSet cluster(const ProblemInstance& inst) {
  const int n = inst.num_datacenters();
  return cluster(Eigen::MatrixXd(inst.delay.matrix().topLeftCorner(n, n)));
}

void write_clusters_csv(std::ostream& out, const ClusterSet& cs) {
  out << "datacenter_id,cluster_id\n";
  for (std::size_t i = 0; i < cs.assignment.size(); ++i) out << i << ',' << cs.assignment[i] << '\n';
}

}  // namespace nfv
