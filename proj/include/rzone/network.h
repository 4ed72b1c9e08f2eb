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

#ifndef RZONE_NETWORK_H_
#define RZONE_NETWORK_H_

#include <Eigen/Dense>
#include <string>
#include <string_view>
#include <vector>

namespace rzone {

struct Bus {
  int id = 0;
  double load = 0.0;  // MW
};

// Positive flow runs from `from` to `to`.
struct Line {
  int id = 0;
  int from = 0;
  int to = 0;
  double reactance = 0.0;  // p.u.
  double rating = 0.0;     // MW
};

struct Generator {
  int id = 0;
  int bus = 0;
  double p_min = 0.0;
  double p_max = 0.0;
  double cost = 0.0;     // energy, $/MW
  double up_cost = 0.0;  // up reserve capacity, $/MW
  double dn_cost = 0.0;  // down reserve capacity, $/MW
  double up_cap = 0.0;   // MW
  double dn_cap = 0.0;   // MW
};

struct WindFarm {
  int id = 0;
  int bus = 0;
  double capacity = 0.0;
  double forecast = 0.0;
};

// Single-period DC network. Every id is dense and 1-based; element k of
// each vector has id k + 1.
struct PowerNetwork {
  std::string name;
  std::vector<Bus> buses;
  std::vector<Line> lines;
  std::vector<Generator> generators;
  std::vector<WindFarm> wind;
  int slack = 1;
  double curtail_cost = 0.0;
  double shed_cost = 0.0;

  int num_buses() const { return static_cast<int>(buses.size()); }
  int num_lines() const { return static_cast<int>(lines.size()); }
  int num_generators() const { return static_cast<int>(generators.size()); }
  int num_wind() const { return static_cast<int>(wind.size()); }
  double TotalLoad() const;
  double TotalForecast() const;
  double MaxEnergyCost() const;
};

// Parses a JSON case document and enforces every network invariant.
// Throws Error(kConfig) naming the offending element.
PowerNetwork ParseCase(std::string_view text);
PowerNetwork LoadCaseFile(const std::string& path);

// Canonical JSON form; ParseCase(ExportCase(net)) reproduces `net`.
std::string ExportCase(const PowerNetwork& net);

// Throws Error(kConfig) on the first violated invariant.
void ValidateNetwork(const PowerNetwork& net);

struct GridMatrices {
  Eigen::MatrixXd ptdf;       // L x N, slack column zero
  Eigen::MatrixXd branch;     // L x N, -1 at from, +1 at to
  Eigen::MatrixXd from_map;   // L x N
  Eigen::MatrixXd to_map;     // L x N
  Eigen::MatrixXd gen_map;    // G x N
  Eigen::MatrixXd wind_map;   // J x N
};

// Dense PTDF from the reduced susceptance matrix. Throws Error(kConfig) if
// the reduced matrix is singular.
GridMatrices BuildMatrices(const PowerNetwork& net);

struct NetworkReport {
  bool connected = true;
  std::vector<int> islanded_buses;
  std::vector<std::string> violations;
  std::vector<std::string> warnings;

  bool clean() const { return violations.empty() && warnings.empty(); }
};

// Report-only diagnostics; never throws.
NetworkReport VerifyNetwork(const PowerNetwork& net);

// Connected components of the bus graph (0-based bus indices).
std::vector<std::vector<int>> Components(const PowerNetwork& net);

}  // namespace rzone

#endif  // RZONE_NETWORK_H_
