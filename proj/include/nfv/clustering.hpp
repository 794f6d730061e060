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

// Threshold clustering of datacenters by pairwise delay.

#ifndef NFV_CLUSTERING_HPP_
#define NFV_CLUSTERING_HPP_

#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "nfv/model.hpp"

namespace nfv {

struct ClusterSet {
  double radius = 0.0;                       // R
  std::vector<std::vector<int>> clusters;    // sorted members, ordered by smallest member
  std::vector<std::vector<int>> pre_merge;   // merge-loop fixed point, before singletons move
  std::vector<int> assignment;               // datacenter -> index into clusters

  int num_clusters() const { return static_cast<int>(clusters.size()); }
};

// Median of all I x I entries of the delay matrix, diagonal included; an even
// count averages the two middle values.
double cluster_radius(const Eigen::MatrixXd& delays);

// delays is I x I over datacenters. Throws std::invalid_argument if I < 2 or
// the matrix is not square.
ClusterSet cluster(const Eigen::MatrixXd& delays);

// Clusters the datacenter block of the instance's delay matrix.
ClusterSet cluster(const ProblemInstance& inst);

// CSV with header datacenter_id,cluster_id.
void write_clusters_csv(std::ostream& out, const ClusterSet& cs);

}  // namespace nfv

#endif  // NFV_CLUSTERING_HPP_
