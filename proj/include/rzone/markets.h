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

#ifndef RZONE_MARKETS_H_
#define RZONE_MARKETS_H_

#include <string>
#include <vector>

#include "rzone/milp/solver.h"
#include "rzone/network.h"
#include "rzone/scenarios.h"

namespace rzone {

struct CostBreakdown {
  double reserve = 0.0;
  double day_ahead = 0.0;
  double balancing = 0.0;  // expected over scenarios
  double total = 0.0;

  static CostBreakdown Of(double reserve, double day_ahead, double balancing) {
    return {reserve, day_ahead, balancing, reserve + day_ahead + balancing};
  }
};

struct ReserveSchedule {
  milp::Status status = milp::Status::kOptimal;
  std::vector<double> up;  // per generator, MW
  std::vector<double> dn;
  double cost = 0.0;
  // Marginal prices of the system requirements.
  double up_price = 0.0;
  double dn_price = 0.0;

  bool ok() const { return status == milp::Status::kOptimal; }
};

struct DayAheadSchedule {
  milp::Status status = milp::Status::kOptimal;
  std::vector<double> p;
  std::vector<double> w;
  std::vector<double> flow;  // MW, positive from -> to
  double cost = 0.0;
  double price = 0.0;        // dual of the balance
  std::vector<double> flow_price;  // per line, signed
  // Names of the rows an elastic relaxation had to violate; filled only
  // when the schedule is infeasible.
  std::vector<std::string> conflict;

  bool ok() const { return status == milp::Status::kOptimal; }
};

struct BalancingOutcome {
  milp::Status status = milp::Status::kOptimal;
  std::vector<double> up;
  std::vector<double> dn;
  std::vector<double> curtail;
  std::vector<double> shed;  // per bus
  std::vector<double> flow;
  double cost = 0.0;
};

struct MarketOptions {
  milp::SolverParams solver;
  // Adds 1e-9 * id to generator costs so equal offers clear by lowest id.
  bool tie_break = true;
};

ReserveSchedule SolveReserveMarket(const PowerNetwork& net, double up_req,
                                   double dn_req,
                                   const MarketOptions& options = {});

// `margins` is the per-line set-aside (empty means zero everywhere).
DayAheadSchedule SolveDayAhead(const PowerNetwork& net,
                               const GridMatrices& mats,
                               const ReserveSchedule& reserve,
                               const std::vector<double>& margins = {},
                               const MarketOptions& options = {});

BalancingOutcome SolveBalancing(const PowerNetwork& net,
                                const GridMatrices& mats,
                                const DayAheadSchedule& day_ahead,
                                const ReserveSchedule& reserve,
                                const Eigen::VectorXd& wind,
                                const MarketOptions& options = {});

struct MarketResult {
  Requirements requirements;
  ReserveSchedule reserve;
  DayAheadSchedule day_ahead;
  std::vector<BalancingOutcome> balancing;  // per scenario
  CostBreakdown cost;
};

// Day-ahead and balancing clearing for given reserves and line margins.
// Throws Error(kInfeasible) if the day-ahead market cannot clear.
MarketResult EvaluateReserves(const PowerNetwork& net,
                              const GridMatrices& mats,
                              const ScenarioSet& scenarios,
                              const ReserveSchedule& reserve,
                              const std::vector<double>& margins = {},
                              const MarketOptions& options = {});

// Reserve market with quantile requirements, then day-ahead, then
// balancing per scenario. Throws Error(kInfeasible) on a failed stage.
MarketResult RunSequential(const PowerNetwork& net, const GridMatrices& mats,
                           const ScenarioSet& scenarios, double q,
                           const MarketOptions& options = {});

// Same chain with explicit requirements.
MarketResult RunSequentialWith(const PowerNetwork& net,
                               const GridMatrices& mats,
                               const ScenarioSet& scenarios, double up_req,
                               double dn_req,
                               const MarketOptions& options = {});

// Extensive-form co-optimization of reserves, day-ahead and all scenario
// recourse.
MarketResult SolveStochastic(const PowerNetwork& net, const GridMatrices& mats,
                             const ScenarioSet& scenarios,
                             const MarketOptions& options = {});

// Costs of a schedule at the true offers (no tie-breaking).
double ReserveCost(const PowerNetwork& net, const std::vector<double>& up,
                   const std::vector<double>& dn);
double DayAheadCost(const PowerNetwork& net, const std::vector<double>& p);
double BalancingCost(const PowerNetwork& net, const BalancingOutcome& b);

}  // namespace rzone

#endif  // RZONE_MARKETS_H_
