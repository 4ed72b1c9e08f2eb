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

#include "rzone/partition.h"

#include <fmt/core.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <sstream>

#include "rzone/error.h"

namespace rzone {

using milp::LinExpr;
using milp::Model;
using milp::Sense;

std::vector<milp::ProductHandle> PartitionVars::products() const {
  std::vector<milp::ProductHandle> out;
  for (const auto& row : injection) out.insert(out.end(), row.begin(), row.end());
  for (const auto& row : reach) out.insert(out.end(), row.begin(), row.end());
  return out;
}

PartitionVars EmitPartitionBlock(Model& model, const PowerNetwork& net,
                                 const PartitionOptions& options) {
  const int N = net.num_buses();
  const int L = net.num_lines();
  const int Z = options.zones;
  if (Z < 1 || Z > N) {
    throw ConfigError(fmt::format("zones must be in [1, {}], got {}", N, Z));
  }
  if (options.min_size < 1) {
    throw ConfigError(
        fmt::format("minimum zone size must be >= 1, got {}", options.min_size));
  }
  const int implied_max = N - (Z - 1) * options.min_size;
  const int max_size = options.max_size > 0
                           ? std::min(options.max_size, implied_max)
                           : implied_max;
  if (Z * options.min_size > N) {
    throw ConfigError(fmt::format(
        "{} zones of at least {} buses need {} buses, network has {}", Z,
        options.min_size, Z * options.min_size, N));
  }
  if (Z * max_size < N) {
    throw ConfigError(fmt::format(
        "{} zones of at most {} buses cannot cover {} buses", Z, max_size, N));
  }

  PartitionVars v;
  v.zones = Z;
  v.min_size = options.min_size;
  v.max_size = max_size;
  v.x.assign(N, std::vector<int>(Z));
  v.root.assign(N, std::vector<int>(Z));
  v.flow.assign(L, std::vector<int>(Z));
  v.injection.assign(N, std::vector<milp::ProductHandle>(Z));
  v.reach.assign(N, std::vector<milp::ProductHandle>(Z));
  for (int n = 0; n < N; ++n) {
    for (int z = 0; z < Z; ++z) {
      v.x[n][z] = model.AddBinary(fmt::format("x_{}_{}", n + 1, z + 1));
      v.root[n][z] = model.AddBinary(fmt::format("c_{}_{}", n + 1, z + 1));
      // Zone membership is the top-level decision.
      model.SetPriority(v.x[n][z], 2);
      model.SetPriority(v.root[n][z], 1);
    }
  }
  for (int z = 0; z < Z; ++z) {
    v.size.push_back(model.AddVariable(fmt::format("y_{}", z + 1),
                                       milp::VarKind::kInteger,
                                       options.min_size, max_size));
  }
  for (int l = 0; l < L; ++l) {
    for (int z = 0; z < Z; ++z) {
      v.flow[l][z] = model.AddContinuous(fmt::format("phi_{}_{}", l + 1, z + 1),
                                         -max_size, max_size);
    }
  }

  // Each bus in exactly one zone.
  for (int n = 0; n < N; ++n) {
    std::vector<milp::Term> t;
    for (int z = 0; z < Z; ++z) t.push_back({v.x[n][z], 1.0});
    model.AddConstraint(fmt::format("assign_{}", n + 1), t, Sense::kEqual, 1.0);
  }
  // Zone sizes.
  for (int z = 0; z < Z; ++z) {
    std::vector<milp::Term> t{{v.size[z], -1.0}};
    for (int n = 0; n < N; ++n) t.push_back({v.x[n][z], 1.0});
    model.AddConstraint(fmt::format("size_{}", z + 1), t, Sense::kEqual, 0.0);
  }
  // Products with the zone size.
  for (int n = 0; n < N; ++n) {
    for (int z = 0; z < Z; ++z) {
      v.injection[n][z] = milp::LinearizeBinIntProduct(
          model, fmt::format("cy_{}_{}", n + 1, z + 1), v.root[n][z], v.size[z]);
      v.reach[n][z] = milp::LinearizeBinIntProduct(
          model, fmt::format("xy_{}_{}", n + 1, z + 1), v.x[n][z], v.size[z]);
    }
  }
  // Unit balance: inflow - outflow + injection = membership.
  for (int n = 0; n < N; ++n) {
    for (int z = 0; z < Z; ++z) {
      LinExpr e;
      for (int l = 0; l < L; ++l) {
        if (net.lines[l].to == n + 1) e.Add(v.flow[l][z], 1.0);
        if (net.lines[l].from == n + 1) e.Add(v.flow[l][z], -1.0);
      }
      e.Add(v.injection[n][z].aux, 1.0);
      e.Add(v.x[n][z], -1.0);
      model.AddConstraint(fmt::format("units_{}_{}", n + 1, z + 1), e,
                          Sense::kEqual, 0.0);
    }
  }
  // Roots: at most one zone per bus, exactly one bus per zone.
  for (int n = 0; n < N; ++n) {
    std::vector<milp::Term> t;
    for (int z = 0; z < Z; ++z) t.push_back({v.root[n][z], 1.0});
    model.AddConstraint(fmt::format("root_bus_{}", n + 1), t,
                        Sense::kLessEqual, 1.0);
  }
  for (int z = 0; z < Z; ++z) {
    std::vector<milp::Term> t;
    for (int n = 0; n < N; ++n) t.push_back({v.root[n][z], 1.0});
    model.AddConstraint(fmt::format("root_zone_{}", z + 1), t, Sense::kEqual,
                        1.0);
  }
  // Unit flow only on lines with both ends in the zone.
  for (int l = 0; l < L; ++l) {
    const int f = net.lines[l].from - 1;
    const int t = net.lines[l].to - 1;
    for (int z = 0; z < Z; ++z) {
      const int phi = v.flow[l][z];
      for (auto [end, tag] : {std::pair{f, "f"}, std::pair{t, "t"}}) {
        const int cap = v.reach[end][z].aux;
        model.AddConstraint(fmt::format("phi{}up_{}_{}", tag, l + 1, z + 1),
                            {{phi, 1.0}, {cap, -1.0}}, Sense::kLessEqual, 0.0);
        model.AddConstraint(fmt::format("phi{}lo_{}_{}", tag, l + 1, z + 1),
                            {{phi, 1.0}, {cap, 1.0}}, Sense::kGreaterEqual, 0.0);
      }
    }
  }

  if (options.break_symmetry) {
    for (int n = 0; n < N; ++n) {
      for (int z = 0; z < Z; ++z) {
        // Zone z may hold bus n only if zone z-1 holds a smaller bus.
        if (z > 0) {
          std::vector<milp::Term> t{{v.x[n][z], 1.0}};
          for (int m = 0; m < n; ++m) t.push_back({v.x[m][z - 1], -1.0});
          model.AddConstraint(fmt::format("order_{}_{}", n + 1, z + 1), t,
                              Sense::kLessEqual, 0.0);
        }
        // The root is the smallest bus of its zone.
        model.AddConstraint(fmt::format("root_in_{}_{}", n + 1, z + 1),
                            {{v.root[n][z], 1.0}, {v.x[n][z], -1.0}},
                            Sense::kLessEqual, 0.0);
        std::vector<milp::Term> below{{v.root[n][z], static_cast<double>(n)}};
        std::vector<milp::Term> first{{v.x[n][z], 1.0}, {v.root[n][z], -1.0}};
        for (int m = 0; m < n; ++m) {
          below.push_back({v.x[m][z], 1.0});
          first.push_back({v.x[m][z], -1.0});
        }
        if (n > 0) {
          model.AddConstraint(fmt::format("root_min_{}_{}", n + 1, z + 1),
                              below, Sense::kLessEqual, n);
        }
        model.AddConstraint(fmt::format("root_first_{}_{}", n + 1, z + 1),
                            first, Sense::kLessEqual, 0.0);
      }
    }
  }
  return v;
}

int Partition::Endpoints(const PowerNetwork& net, int l, int z) const {
  return (zone_of[net.lines[l].from - 1] == z) +
         (zone_of[net.lines[l].to - 1] == z);
}

Partition MakePartition(const PowerNetwork& net, const std::vector<int>& zone_of,
                        int zones) {
  Partition p;
  p.zone_of = zone_of;
  p.sizes.assign(zones, 0);
  p.roots.assign(zones, 0);
  for (int n = static_cast<int>(zone_of.size()) - 1; n >= 0; --n) {
    int z = zone_of[n];
    if (z < 0 || z >= zones) continue;
    ++p.sizes[z];
    p.roots[z] = n + 1;
  }
  for (int l = 0; l < net.num_lines(); ++l) {
    const Line& line = net.lines[l];
    if (zone_of[line.from - 1] != zone_of[line.to - 1]) {
      p.cross_zonal.push_back(line.id);
    }
  }
  return p;
}

Partition Canonical(const PowerNetwork& net, const Partition& partition) {
  std::vector<int> relabel(partition.num_zones(), -1);
  int next = 0;
  for (int z : partition.zone_of) {
    if (z >= 0 && z < partition.num_zones() && relabel[z] < 0) relabel[z] = next++;
  }
  std::vector<int> zone_of;
  for (int z : partition.zone_of) {
    zone_of.push_back(z >= 0 && z < partition.num_zones() ? relabel[z] : z);
  }
  return MakePartition(net, zone_of, partition.num_zones());
}

Partition ExtractPartition(const PowerNetwork& net, const PartitionVars& vars,
                           const std::vector<double>& values, double tol) {
  const int N = net.num_buses();
  auto binary = [&](int var) {
    double v = values.at(var);
    if (std::abs(v - std::round(v)) > tol) {
      throw Error(ErrorKind::kSolverFailure,
                  fmt::format("partition binary at {:.6g} is not integral", v));
    }
    return v > 0.5;
  };
  std::vector<int> zone_of(N, -1);
  for (int n = 0; n < N; ++n) {
    for (int z = 0; z < vars.zones; ++z) {
      if (!binary(vars.x[n][z])) continue;
      if (zone_of[n] >= 0) {
        throw Error(ErrorKind::kSolverFailure,
                    fmt::format("bus {} assigned to zones {} and {}", n + 1,
                                zone_of[n] + 1, z + 1));
      }
      zone_of[n] = z;
    }
    if (zone_of[n] < 0) {
      throw Error(ErrorKind::kSolverFailure,
                  fmt::format("bus {} has no zone", n + 1));
    }
  }
  Partition p = MakePartition(net, zone_of, vars.zones);
  for (int z = 0; z < vars.zones; ++z) {
    for (int n = 0; n < N; ++n) {
      if (binary(vars.root[n][z])) p.roots[z] = n + 1;
    }
  }
  return p;
}

std::vector<std::string> VerifyPartition(const PowerNetwork& net,
                                         const Partition& partition,
                                         int min_size, int max_size) {
  std::vector<std::string> out;
  const int N = net.num_buses();
  const int Z = partition.num_zones();
  if (static_cast<int>(partition.zone_of.size()) != N) {
    out.push_back(fmt::format("assignment covers {} buses, network has {}",
                              partition.zone_of.size(), N));
    return out;
  }
  std::vector<std::vector<int>> members(Z);
  for (int n = 0; n < N; ++n) {
    int z = partition.zone_of[n];
    if (z < 0 || z >= Z) {
      out.push_back(fmt::format("bus {} has no zone", n + 1));
    } else {
      members[z].push_back(n);
    }
  }
  std::vector<std::vector<int>> adj(N);
  for (const Line& l : net.lines) {
    adj[l.from - 1].push_back(l.to - 1);
    adj[l.to - 1].push_back(l.from - 1);
  }
  for (int z = 0; z < Z; ++z) {
    const int size = static_cast<int>(members[z].size());
    if (size < min_size) {
      out.push_back(fmt::format("zone {}: size {} below minimum {}", z + 1,
                                size, min_size));
    }
    if (max_size > 0 && size > max_size) {
      out.push_back(fmt::format("zone {}: size {} above maximum {}", z + 1,
                                size, max_size));
    }
    if (size == 0) continue;
    std::vector<char> seen(N, 0);
    std::queue<int> q;
    q.push(members[z][0]);
    seen[members[z][0]] = 1;
    while (!q.empty()) {
      int n = q.front();
      q.pop();
      for (int m : adj[n]) {
        if (!seen[m] && partition.zone_of[m] == z) {
          seen[m] = 1;
          q.push(m);
        }
      }
    }
    std::string cut;
    for (int n : members[z]) {
      if (!seen[n]) cut += (cut.empty() ? "" : ", ") + std::to_string(n + 1);
    }
    if (!cut.empty()) {
      out.push_back(fmt::format(
          "zone {}: buses {} not connected to bus {} within the zone", z + 1,
          cut, members[z][0] + 1));
    }
  }
  return out;
}

std::vector<Partition> EnumeratePartitions(const PowerNetwork& net, int zones,
                                           int min_size, int max_size) {
  const int N = net.num_buses();
  if (N > 12) {
    throw ConfigError(fmt::format(
        "partition enumeration is limited to 12 buses, network has {}", N));
  }
  if (zones < 1) throw ConfigError("zones must be >= 1");
  std::vector<Partition> out;
  std::vector<int> zone_of(N, 0);
  std::vector<int> count(zones, 0);
  // Restricted growth strings: bus n opens zone k only after zones < k.
  std::function<void(int, int)> grow = [&](int n, int used) {
    if (used + (N - n) < zones) return;
    if (n == N) {
      if (used != zones) return;
      Partition p = MakePartition(net, zone_of, zones);
      if (VerifyPartition(net, p, min_size, max_size).empty()) {
        out.push_back(std::move(p));
      }
      return;
    }
    for (int z = 0; z <= std::min(used, zones - 1); ++z) {
      if (max_size > 0 && count[z] >= max_size) continue;
      zone_of[n] = z;
      ++count[z];
      grow(n + 1, std::max(used, z + 1));
      --count[z];
    }
  };
  grow(0, 0);
  return out;
}

std::string PartitionDot(const PowerNetwork& net, const Partition& partition) {
  std::ostringstream os;
  os << "graph \"" << (net.name.empty() ? "grid" : net.name) << "\" {\n";
  os << "  node [shape=circle, style=filled, colorscheme=set312];\n";
  for (int n = 0; n < net.num_buses(); ++n) {
    int z = partition.zone_of[n];
    bool root = z >= 0 && z < partition.num_zones() &&
                partition.roots[z] == n + 1;
    os << fmt::format("  n{} [label=\"{}\", fillcolor={}{}];\n", n + 1, n + 1,
                      z % 12 + 1, root ? ", peripheries=2" : "");
  }
  for (const Line& l : net.lines) {
    bool cross = partition.zone_of[l.from - 1] != partition.zone_of[l.to - 1];
    os << fmt::format("  n{} -- n{} [label=\"l{}\"{}];\n", l.from, l.to, l.id,
                      cross ? ", style=bold, penwidth=3" : "");
  }
  os << "}\n";
  return os.str();
}

}  // namespace rzone
