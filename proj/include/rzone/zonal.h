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

#ifndef RZONE_ZONAL_H_
#define RZONE_ZONAL_H_

#include <string>
#include <vector>

#include "rzone/blocks.h"
#include "rzone/markets.h"
#include "rzone/milp/linearize.h"
#include "rzone/milp/solver.h"
#include "rzone/partition.h"

// Zonal reserve design: partition, zonal requirements and cross-zonal
// capacity set-asides chosen above merit-order reserve and day-ahead
// clearings, which enter through their KKT conditions.
namespace rzone {

struct ZonalOptions {
  int zones = 1;
  double chi = 0.0;  // max share of a cross-zonal rating set aside
  int min_size = 1;
  int max_size = 0;  // 0 = implied maximum
  bool break_symmetry = true;
  // Bound on day-ahead duals; 0 means 10 x the shedding cost.
  double dual_bound = 0.0;
  // Seed the search with sequential and stochastic schedules.
  bool warm_start = true;
  // Relative tolerance of the lower-level certification.
  double certify_tol = 1e-5;
  milp::SolverParams solver;
};

struct CapacityVars {
  double chi = 0.0;
  std::vector<std::vector<int>> zone_share;  // [line][zone] set-aside
  std::vector<int> set_aside;                // [line]
};

// Set-asides limited to chi * rating on lines with exactly one endpoint in
// the zone, counted once per line. With one zone every line is interior, so
// the set-asides are fixed at zero.
CapacityVars EmitCapacityBlock(milp::Model& model, const PowerNetwork& net,
                               const PartitionVars& partition, double chi);

struct KktBlock {
  std::vector<int> stationarity;
  std::vector<milp::ComplementarityHandle> handles;
  std::vector<int> duals;
};

struct ZonalReserveVars {
  std::vector<int> up_req;                // [zone]
  std::vector<int> dn_req;
  std::vector<std::vector<int>> up_zone;  // [generator][zone], -1 if no offer
  std::vector<std::vector<int>> dn_zone;
  std::vector<int> up;                    // [generator] total
  std::vector<int> dn;
  KktBlock kkt;
};

// Adds requirement variables and the optimality conditions of the zonal
// reserve market. Generators may serve only the zone holding their bus.
ZonalReserveVars EmitZonalReserveKkt(milp::Model& model, const PowerNetwork& net,
                                     const PartitionVars& partition);

struct DayAheadKktVars {
  std::vector<int> p;
  std::vector<int> w;
  int price = -1;  // dual of the balance
  KktBlock kkt;
};

// Optimality conditions of the day-ahead market for reserves `r_up`,
// `r_dn` and per-line set-asides `margins`.
DayAheadKktVars EmitDayAheadKkt(milp::Model& model, const PowerNetwork& net,
                                const GridMatrices& mats, const Exprs& r_up,
                                const Exprs& r_dn, const Exprs& margins,
                                double dual_bound);

struct ModelStats {
  int variables = 0;
  int constraints = 0;
  int binaries = 0;
  int integers = 0;
  int complementarities = 0;
};

ModelStats Stats(const milp::Model& model);

// Upper-level variables shared by the extensive form and the Benders master.
struct FirstStage {
  PartitionVars partition;
  CapacityVars capacity;
  ZonalReserveVars reserve;
  DayAheadKktVars day_ahead;

  std::vector<milp::ComplementarityHandle> complementarity() const;
};

// Partition, capacity and both KKT blocks, costed at reserve plus
// day-ahead cost.
FirstStage EmitFirstStage(milp::Model& model, const PowerNetwork& net,
                          const GridMatrices& mats, const ZonalOptions& options);

struct MpecModel {
  milp::Model model;
  FirstStage first;
  std::vector<BalancingBlock> balancing;  // per scenario
  ModelStats stats;
};

MpecModel AssembleMpec(const PowerNetwork& net, const GridMatrices& mats,
                       const ScenarioSet& scenarios, const ZonalOptions& options);

struct Certificate {
  bool partition_ok = false;
  std::vector<std::string> partition_violations;
  double reserve_cost = 0.0;     // at the solution
  double reserve_lp_cost = 0.0;  // re-solved lower level
  double day_ahead_cost = 0.0;
  double day_ahead_lp_cost = 0.0;
  double max_rel_error = 0.0;
  milp::BigMAudit audit;

  bool ok(double tol) const {
    return partition_ok && max_rel_error <= tol && audit.clean();
  }
};

struct ZoneRow {
  int zone = 0;  // 1-based
  double up = 0.0;
  double dn = 0.0;
  double total = 0.0;
  double avg_cost = 0.0;  // reserve cost per MW procured
};

struct ZonalOutcome {
  milp::Status status = milp::Status::kOptimal;
  double objective = 0.0;
  double best_bound = 0.0;
  double mip_gap = 0.0;
  int64_t nodes = 0;
  double seconds = 0.0;
  Partition partition;
  std::vector<double> up_req;  // [zone]
  std::vector<double> dn_req;
  std::vector<std::vector<double>> up_zone;  // [generator][zone]
  std::vector<std::vector<double>> dn_zone;
  ReserveSchedule reserve;
  DayAheadSchedule day_ahead;
  std::vector<BalancingOutcome> balancing;
  std::vector<double> set_aside;  // [line] MW
  CostBreakdown cost;
  Certificate certificate;
  ModelStats stats;
};

// Zonal merit-order reserve clearing for a fixed partition.
ReserveSchedule SolveZonalReserveMarket(const PowerNetwork& net,
                                        const Partition& partition,
                                        const std::vector<double>& up_req,
                                        const std::vector<double>& dn_req,
                                        const MarketOptions& options = {});

// Solves the assembled model, evaluates every scenario at the chosen first
// stage and certifies the lower levels. Throws Error(kInfeasible) when no
// feasible design exists, Error(kSolverLimit) when a limit stops the search
// without one, and Error(kCertification) when the certificate fails.
ZonalOutcome SolveExtensive(const MpecModel& mpec, const PowerNetwork& net,
                            const GridMatrices& mats,
                            const ScenarioSet& scenarios,
                            const ZonalOptions& options);

ZonalOutcome SolveZonal(const PowerNetwork& net, const GridMatrices& mats,
                        const ScenarioSet& scenarios,
                        const ZonalOptions& options);

// First-stage values of a feasible design (integer coordinates filled from
// the partition and the active lower-level constraints).
std::vector<double> DesignPoint(const milp::Model& model,
                                const FirstStage& first,
                                const PowerNetwork& net,
                                const Partition& partition,
                                const std::vector<double>& up_req,
                                const std::vector<double>& dn_req,
                                const ReserveSchedule& reserve,
                                const DayAheadSchedule& day_ahead,
                                const std::vector<double>& set_aside);

// Candidate designs from sequential and stochastic schedules on a seed
// partition; each is a full-length point for `model`.
std::vector<std::vector<double>> DesignStarts(const milp::Model& model,
                                              const FirstStage& first,
                                              const PowerNetwork& net,
                                              const GridMatrices& mats,
                                              const ScenarioSet& scenarios,
                                              const ZonalOptions& options);

// A connected partition with the requested sizes, found by splitting a BFS
// spanning tree. Empty if the splitting fails.
std::vector<int> SeedPartition(const PowerNetwork& net, int zones, int min_size,
                               int max_size);

// Reads the first stage, evaluates balancing per scenario and certifies.
ZonalOutcome EvaluateDesign(const FirstStage& first, const std::vector<double>& values,
                            const PowerNetwork& net, const GridMatrices& mats,
                            const ScenarioSet& scenarios,
                            const ZonalOptions& options);

std::vector<ZoneRow> ZoneTable(const PowerNetwork& net,
                               const ZonalOutcome& outcome);

// Fixed reserves and set-asides evaluated on another scenario set, as a
// ratio to the stochastic optimum on that set.
struct StabilityPoint {
  double cost = 0.0;
  double stochastic_cost = 0.0;
  double ratio = 0.0;
};

StabilityPoint EvaluateStability(const PowerNetwork& net,
                                 const GridMatrices& mats,
                                 const ScenarioSet& scenarios,
                                 const ReserveSchedule& reserve,
                                 const std::vector<double>& set_aside,
                                 const MarketOptions& options = {});

// The stochastic model on `scenarios` against its own first stage re-cleared
// scenario by scenario; the ratio is 1 when the recourse decomposes.
StabilityPoint StochasticSelfCheck(const PowerNetwork& net,
                                   const GridMatrices& mats,
                                   const ScenarioSet& scenarios,
                                   const MarketOptions& options = {});

std::vector<StabilityPoint> RunStability(
    const PowerNetwork& net, const GridMatrices& mats,
    const std::vector<ScenarioSet>& sets, const ReserveSchedule& reserve,
    const std::vector<double>& set_aside, const MarketOptions& options = {});

}  // namespace rzone

#endif  // RZONE_ZONAL_H_
