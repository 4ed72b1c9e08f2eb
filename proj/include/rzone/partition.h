// Copyright 2026 The rzone Authors
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

#ifndef RZONE_PARTITION_H_
#define RZONE_PARTITION_H_

#include <string>
#include <vector>

#include "rzone/milp/linearize.h"
#include "rzone/milp/model.h"
#include "rzone/network.h"

// Connected grid partitioning as a MILP block (single-commodity flow with
// endogenous roots), plus combinatorial oracles.
//
// Indexing: buses and lines by position (id - 1), zones 0..Z-1.
namespace rzone {

struct PartitionOptions {
  int zones = 1;
  int min_size = 1;
  // 0 means the implied maximum N - (Z - 1) * min_size.
  int max_size = 0;
  // Orders zones by their smallest bus and makes that bus the root, so each
  // partition has exactly one feasible labeling.
  bool break_symmetry = true;
};

struct PartitionVars {
  int zones = 0;
  std::vector<std::vector<int>> x;    // [bus][zone] membership
  std::vector<std::vector<int>> root; // [bus][zone]
  std::vector<int> size;              // [zone]
  std::vector<std::vector<int>> flow; // [line][zone] flow units
  // size[z] * root[n][z], injected at the root.
  std::vector<std::vector<milp::ProductHandle>> injection;
  // size[z] * x[n][z]; bounds the unit flow on every line touching n.
  std::vector<std::vector<milp::ProductHandle>> reach;
  int min_size = 1;
  int max_size = 0;

  std::vector<milp::ProductHandle> products() const;
};

// Adds the partition constraints to `model`. Throws ConfigError when the
// sizing cannot cover the network.
PartitionVars EmitPartitionBlock(milp::Model& model, const PowerNetwork& net,
                                 const PartitionOptions& options);

struct Partition {
  std::vector<int> zone_of;      // [bus] zone index
  std::vector<int> roots;        // [zone] bus id
  std::vector<int> sizes;        // [zone]
  std::vector<int> cross_zonal;  // line ids, ascending

  int num_zones() const { return static_cast<int>(sizes.size()); }
  // Number of endpoints of line `l` (index) inside zone `z`: 0, 1 or 2.
  int Endpoints(const PowerNetwork& net, int l, int z) const;
};

// Builds sizes and cross-zonal lines from an assignment. Roots default to
// the smallest bus of each zone.
Partition MakePartition(const PowerNetwork& net, const std::vector<int>& zone_of,
                        int zones);

// Relabels zones in order of their smallest bus.
Partition Canonical(const PowerNetwork& net, const Partition& partition);

// Reads the partition from a solution. Throws kSolverFailure if a binary is
// fractional beyond `tol`.
Partition ExtractPartition(const PowerNetwork& net, const PartitionVars& vars,
                           const std::vector<double>& values,
                           double tol = 1e-4);

// Exclusivity, coverage, sizes and per-zone connectivity by BFS.
std::vector<std::string> VerifyPartition(const PowerNetwork& net,
                                         const Partition& partition,
                                         int min_size, int max_size);

// Every connected partition into exactly `zones` zones with sizes in
// [min_size, max_size], canonically labeled, in lexicographic order of
// zone_of. Limited to 12 buses.
std::vector<Partition> EnumeratePartitions(const PowerNetwork& net, int zones,
                                           int min_size, int max_size);

// Graphviz description with buses colored by zone and cross-zonal lines bold.
std::string PartitionDot(const PowerNetwork& net, const Partition& partition);

}  // namespace rzone

#endif  // RZONE_PARTITION_H_
