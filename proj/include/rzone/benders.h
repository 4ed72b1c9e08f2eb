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

#ifndef RZONE_BENDERS_H_
#define RZONE_BENDERS_H_

#include <limits>
#include <string>
#include <vector>

#include "rzone/zonal.h"

// Multi-cut Benders decomposition of the zonal design: the master keeps the
// partition, capacity and both KKT blocks, each scenario's balancing market
// is a subproblem priced at the master's reserves and schedule.
namespace rzone {

// The first-stage quantities a balancing subproblem sees.
struct FirstStageValues {
  std::vector<double> up;  // [generator]
  std::vector<double> dn;
  std::vector<double> p;
  std::vector<double> w;   // [farm]
};

FirstStageValues ReadFirstStage(const FirstStage& first,
                                const std::vector<double>& values);

struct Cut {
  int scenario = 0;
  int iteration = 0;
  double cost = 0.0;  // subproblem value at the anchor
  FirstStageValues slope;
  FirstStageValues anchor;

  // cost + slope . (x - anchor)
  double Evaluate(const FirstStageValues& x) const;
};

struct MasterState {
  milp::Model model;
  FirstStage first;
  std::vector<int> theta;  // [scenario]
  double theta0 = 0.0;
  std::vector<Cut> cuts;
  int iteration = 0;
};

// Lowest possible balancing cost: every down offer activated in full.
double BalancingLowerBound(const PowerNetwork& net);

MasterState BuildMaster(const PowerNetwork& net, const GridMatrices& mats,
                        const std::vector<double>& prob,
                        const ZonalOptions& options, double theta0);

struct SubproblemResult {
  double cost = 0.0;
  FirstStageValues slope;  // duals of the fixing rows
};

// Balancing LP with the first stage pinned by equality rows. Throws
// Error(kInfeasible) if the recourse is not complete at `x`.
SubproblemResult SolveSubproblem(const PowerNetwork& net,
                                 const GridMatrices& mats,
                                 const Eigen::VectorXd& wind,
                                 const FirstStageValues& x,
                                 const milp::SolverParams& params = {});

// One optimality cut per scenario, anchored at `x`.
void AddCuts(MasterState& master, const FirstStageValues& x,
             const std::vector<SubproblemResult>& results);

struct TraceRow {
  int iteration = 0;
  double lower = 0.0;
  double upper = 0.0;  // best so far
  double gap = 0.0;
  double seconds = 0.0;
};

struct BendersTrace {
  std::vector<TraceRow> rows;

  std::string Csv() const;
};

struct BendersOptions {
  ZonalOptions zonal;
  double epsilon = 1e-4;  // absolute, on expected balancing cost
  int max_iter = 100;
  // Lower bound on each scenario's cost; NaN means BalancingLowerBound.
  double theta0 = std::numeric_limits<double>::quiet_NaN();
  int jobs = 1;
};

struct BendersResult {
  ZonalOutcome outcome;
  BendersTrace trace;
  bool converged = false;
  int iterations = 0;
  int cuts = 0;
};

// Throws Error(kInfeasible) when the master has no feasible design and
// Error(kSolverLimit) when a master solve stops without one.
BendersResult RunBenders(const PowerNetwork& net, const GridMatrices& mats,
                         const ScenarioSet& scenarios,
                         const BendersOptions& options);

}  // namespace rzone

#endif  // RZONE_BENDERS_H_
