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

#include <fmt/core.h>
#include <gtest/gtest.h>

#include <algorithm>

#include "rzone/error.h"
#include "rzone/zonal.h"
#include "test_data.h"

namespace rzone {
namespace {

using milp::Model;

PowerNetwork Case(const std::string& name) {
  return LoadCaseFile(CasePath(name));
}

ScenarioSet Reduced(const PowerNetwork& net, int count, uint64_t seed = 42) {
  return FastForwardReduce(
      SampleScenarios(ForecastFromNetwork(net), 200, seed), count);
}

void FixPartition(Model& model, const PartitionVars& vars,
                  const std::vector<int>& zone_of) {
  for (size_t n = 0; n < zone_of.size(); ++n) {
    for (int z = 0; z < vars.zones; ++z) {
      double v = zone_of[n] == z ? 1.0 : 0.0;
      model.SetBounds(vars.x[n][z], v, v);
    }
  }
}

double Rel(double a, double b) {
  return std::abs(a - b) / std::max(1.0, std::abs(b));
}

TEST(CapacityBlock, EnvelopeFollowsCrossZonalLines) {
  PowerNetwork ring = Case("ring4");
  Model model;
  PartitionVars pv = EmitPartitionBlock(model, ring, {2, 1, 0, true});
  CapacityVars cv = EmitCapacityBlock(model, ring, pv, 0.6);
  FixPartition(model, pv, {0, 0, 1, 1});
  for (int g : cv.set_aside) model.SetCost(g, -1.0);
  milp::Solution sol = milp::SolveMilp(model);
  ASSERT_TRUE(sol.ok());
  // Lines 2 and 4 cross; lines 1 and 3 are interior.
  EXPECT_NEAR(sol.values[cv.set_aside[0]], 0.0, 1e-9);
  EXPECT_NEAR(sol.values[cv.set_aside[1]], 0.6 * 80, 1e-6);
  EXPECT_NEAR(sol.values[cv.set_aside[2]], 0.0, 1e-9);
  EXPECT_NEAR(sol.values[cv.set_aside[3]], 0.6 * 120, 1e-6);
}

TEST(CapacityBlock, SingleZoneFixesSetAsidesAtZero) {
  PowerNetwork ring = Case("ring4");
  Model model;
  PartitionVars pv = EmitPartitionBlock(model, ring, {1, 1, 0, true});
  CapacityVars cv = EmitCapacityBlock(model, ring, pv, 1.0);
  for (int g : cv.set_aside) EXPECT_EQ(model.variable(g).upper, 0.0);
  Model bad;
  EXPECT_THROW(EmitCapacityBlock(bad, ring, pv, 1.5), Error);
}

// Lower-level optimality must hold whatever the upper level prefers, so the
// reserve cost is maximized here.
TEST(ZonalReserveKkt, SingleZoneMatchesReserveMarket) {
  PowerNetwork ring = Case("ring4");
  for (auto [up, dn] : {std::pair{70.0, 50.0}, {20.0, 110.0}, {0.0, 0.0}}) {
    Model model;
    PartitionVars pv = EmitPartitionBlock(model, ring, {1, 1, 0, true});
    ZonalReserveVars rv = EmitZonalReserveKkt(model, ring, pv);
    model.SetBounds(rv.up_req[0], up, up);
    model.SetBounds(rv.dn_req[0], dn, dn);
    for (int k = 0; k < ring.num_generators(); ++k) {
      model.SetCost(rv.up[k], -ring.generators[k].up_cost);
      model.SetCost(rv.dn[k], -ring.generators[k].dn_cost);
    }
    milp::Solution sol = milp::SolveMilp(model);
    ASSERT_TRUE(sol.ok());
    ReserveSchedule lp = SolveReserveMarket(ring, up, dn, {{}, false});
    ASSERT_TRUE(lp.ok());
    EXPECT_NEAR(-sol.objective, lp.cost, 1e-6 * std::max(1.0, lp.cost));
    // Merit order: up offers cost 2 < 6 < 12 with caps 60, 50, 40.
    std::vector<double> merit(3, 0.0);
    double left = up;
    for (int k = 0; k < 3; ++k) {
      merit[k] = std::min(left, ring.generators[k].up_cap);
      left -= merit[k];
    }
    for (int k = 0; k < 3; ++k) {
      EXPECT_NEAR(sol.values[rv.up[k]], merit[k], 1e-6);
    }
  }
}

TEST(ZonalReserveKkt, ZoneEligibilityAndShortfall) {
  PowerNetwork ring = Case("ring4");
  Model model;
  PartitionVars pv = EmitPartitionBlock(model, ring, {2, 1, 0, true});
  ZonalReserveVars rv = EmitZonalReserveKkt(model, ring, pv);
  FixPartition(model, pv, {0, 0, 1, 1});
  model.SetBounds(rv.up_req[0], 30, 30);
  model.SetBounds(rv.up_req[1], 60, 60);
  milp::Solution sol = milp::SolveMilp(model);
  ASSERT_TRUE(sol.ok());
  // Zone 1 holds generator 1 only; zone 2 generators 2 and 3.
  EXPECT_NEAR(sol.values[rv.up[0]], 30, 1e-6);
  EXPECT_NEAR(sol.values[rv.up[1]], 50, 1e-6);
  EXPECT_NEAR(sol.values[rv.up[2]], 10, 1e-6);
  for (int k = 0; k < 3; ++k) {
    int own = k == 0 ? 0 : 1;
    EXPECT_NEAR(sol.values[rv.up_zone[k][1 - own]], 0.0, 1e-9);
  }
  // Zone 2 can offer 90 MW at most.
  model.SetBounds(rv.up_req[1], 100, 100);
  EXPECT_EQ(milp::SolveMilp(model).status, milp::Status::kInfeasible);
}

TEST(DayAheadKkt, MatchesDayAheadMarket) {
  for (const char* name : {"ring4", "congested4", "six_bus"}) {
    SCOPED_TRACE(name);
    PowerNetwork net = Case(name);
    GridMatrices mats = BuildMatrices(net);
    ReserveSchedule r = SolveReserveMarket(net, 30, 20);
    ASSERT_TRUE(r.ok());
    DayAheadSchedule lp = SolveDayAhead(net, mats, r, {}, {{}, false});
    ASSERT_TRUE(lp.ok());
    Model model;
    DayAheadKktVars dv =
        EmitDayAheadKkt(model, net, mats, Constants(r.up), Constants(r.dn),
                        Constants(std::vector<double>(net.num_lines(), 0.0)),
                        0.0);
    for (int k = 0; k < net.num_generators(); ++k) {
      model.SetCost(dv.p[k], -net.generators[k].cost);
    }
    milp::Solution sol = milp::SolveMilp(model);
    ASSERT_TRUE(sol.ok());
    EXPECT_NEAR(-sol.objective, lp.cost, 1e-6 * std::max(1.0, lp.cost));
    EXPECT_NEAR(sol.values[dv.price], lp.price, 1e-5);
    milp::BigMAudit audit = milp::AuditBigM(sol.values, dv.kkt.handles);
    EXPECT_TRUE(audit.clean());
  }
}

TEST(DayAheadKkt, CheapWindRunsAtForecast) {
  PowerNetwork ring = Case("ring4");
  GridMatrices mats = BuildMatrices(ring);
  ReserveSchedule none = SolveReserveMarket(ring, 0, 0);
  Model model;
  DayAheadKktVars dv = EmitDayAheadKkt(
      model, ring, mats, Constants(none.up), Constants(none.dn),
      Constants(std::vector<double>(ring.num_lines(), 0.0)), 0.0);
  milp::Solution sol = milp::SolveMilp(model);
  ASSERT_TRUE(sol.ok());
  EXPECT_NEAR(sol.values[dv.w[0]], ring.wind[0].forecast, 1e-6);
  const milp::ComplementarityHandle* wup = nullptr;
  for (const auto& h : dv.kkt.handles) {
    if (h.name == "cwup_1") wup = &h;
  }
  ASSERT_NE(wup, nullptr);
  EXPECT_GT(sol.values[wup->dual], 1e-6);
}

TEST(SeedPartition, ProducesValidPartitions) {
  for (auto [name, zones, min_size] :
       {std::tuple{"ring4", 2, 2}, {"eight_bus", 3, 2}, {"rts24", 2, 4},
        {"rts24", 3, 4}, {"rts96", 3, 10}}) {
    SCOPED_TRACE(fmt::format("{} Z={}", name, zones));
    PowerNetwork net = Case(name);
    std::vector<int> seed = SeedPartition(net, zones, min_size, 0);
    ASSERT_EQ(static_cast<int>(seed.size()), net.num_buses());
    EXPECT_TRUE(
        VerifyPartition(net, MakePartition(net, seed, zones), min_size, 0)
            .empty());
  }
  EXPECT_TRUE(SeedPartition(Case("ring4"), 3, 2, 0).empty());
}

TEST(AssembleMpec, ReportsModelCounts) {
  PowerNetwork ring = Case("ring4");
  GridMatrices mats = BuildMatrices(ring);
  ZonalOptions opt;
  MpecModel mpec = AssembleMpec(ring, mats, Reduced(ring, 2), opt);
  EXPECT_EQ(mpec.stats.binaries,
            2 * ring.num_buses() + mpec.stats.complementarities);
  EXPECT_EQ(mpec.balancing.size(), 2u);
  EXPECT_EQ(mpec.stats.variables, mpec.model.num_variables());
  opt.zones = 3;
  opt.min_size = 2;
  EXPECT_THROW(AssembleMpec(ring, mats, Reduced(ring, 2), opt), Error);
}

struct Fixture {
  PowerNetwork net;
  GridMatrices mats;
  ScenarioSet set;
};

Fixture Load(const std::string& name, int scenarios) {
  Fixture f{Case(name), {}, {}};
  f.mats = BuildMatrices(f.net);
  f.set = Reduced(f.net, scenarios);
  return f;
}

TEST(SolveZonal, CostSandwichAndCertificate) {
  for (const char* name : {"ring4", "congested4", "six_bus"}) {
    Fixture f = Load(name, 4);
    double stochastic = SolveStochastic(f.net, f.mats, f.set).cost.total;
    for (int zones : {1, 2}) {
      SCOPED_TRACE(fmt::format("{} Z={}", name, zones));
      ZonalOptions opt;
      opt.zones = zones;
      ZonalOutcome out = SolveZonal(f.net, f.mats, f.set, opt);
      EXPECT_EQ(out.status, milp::Status::kOptimal);
      EXPECT_TRUE(out.certificate.ok(1e-5));
      EXPECT_LE(out.certificate.max_rel_error, 1e-5);
      EXPECT_NEAR(out.cost.total, out.objective,
                  1e-6 * std::abs(out.objective));
      EXPECT_GE(out.cost.total, stochastic * (1 - 1e-6));
      for (double q : {0.01, 0.03, 0.05, 0.10}) {
        try {
          double seq = RunSequential(f.net, f.mats, f.set, q).cost.total;
          EXPECT_LE(out.cost.total, seq * (1 + 1e-6)) << "q=" << q;
        } catch (const Error& e) {
          EXPECT_EQ(e.kind(), ErrorKind::kInfeasible);
        }
      }
    }
  }
}

TEST(SolveZonal, SingleZoneIgnoresCapacityShare) {
  Fixture f = Load("congested4", 3);
  ZonalOptions opt;
  ZonalOutcome none = SolveZonal(f.net, f.mats, f.set, opt);
  opt.chi = 1.0;
  ZonalOutcome full = SolveZonal(f.net, f.mats, f.set, opt);
  EXPECT_LE(Rel(full.objective, none.objective), 1e-6);
  for (double g : full.set_aside) EXPECT_EQ(g, 0.0);
}

TEST(SolveZonal, SingleZoneBeatsRequirementGrid) {
  Fixture f = Load("ring4", 3);
  ZonalOptions opt;
  ZonalOutcome z = SolveZonal(f.net, f.mats, f.set, opt);
  double fleet_up = 0, fleet_dn = 0;
  for (const Generator& g : f.net.generators) {
    fleet_up += g.up_cap;
    fleet_dn += g.dn_cap;
  }
  int tried = 0;
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 4; ++j) {
      double up = fleet_up * i / 4.0, dn = fleet_dn * j / 3.0;
      try {
        double seq =
            RunSequentialWith(f.net, f.mats, f.set, up, dn).cost.total;
        EXPECT_LE(z.cost.total, seq * (1 + 1e-6)) << up << " " << dn;
        ++tried;
      } catch (const Error&) {
      }
    }
  }
  EXPECT_GT(tried, 10);
}

TEST(SolveZonal, MinimumSizeKeepsOppositeSplits) {
  Fixture f = Load("ring4", 2);
  ZonalOptions opt;
  opt.zones = 2;
  opt.min_size = 2;
  ZonalOutcome out = SolveZonal(f.net, f.mats, f.set, opt);
  EXPECT_EQ(out.partition.sizes, (std::vector<int>{2, 2}));
  auto halves = EnumeratePartitions(f.net, 2, 2, 0);
  bool found = false;
  for (const Partition& p : halves) found |= p.zone_of == out.partition.zone_of;
  EXPECT_TRUE(found);
}

TEST(SolveZonal, CapacityAllocationLowersCost) {
  Fixture f = Load("congested4", 5);
  ZonalOptions opt;
  opt.zones = 2;
  ZonalOutcome none = SolveZonal(f.net, f.mats, f.set, opt);
  opt.chi = 1.0;
  ZonalOutcome full = SolveZonal(f.net, f.mats, f.set, opt);
  EXPECT_LT(full.objective, none.objective * (1 - 0.01));
  double withdrawn = 0;
  for (double g : full.set_aside) withdrawn += g;
  EXPECT_GT(withdrawn, 0.0);
}

TEST(ZoneTable, RowsSumToTotals) {
  Fixture f = Load("six_bus", 3);
  ZonalOptions opt;
  opt.zones = 2;
  ZonalOutcome out = SolveZonal(f.net, f.mats, f.set, opt);
  std::vector<ZoneRow> rows = ZoneTable(f.net, out);
  ASSERT_EQ(rows.size(), 3u);
  const ZoneRow& total = rows.back();
  EXPECT_EQ(total.zone, 0);
  EXPECT_NEAR(total.up, rows[0].up + rows[1].up, 1e-9);
  double up = 0, dn = 0;
  for (int k = 0; k < f.net.num_generators(); ++k) {
    up += out.reserve.up[k];
    dn += out.reserve.dn[k];
  }
  EXPECT_NEAR(total.up, up, 1e-6);
  EXPECT_NEAR(total.dn, dn, 1e-6);
  if (total.total > 0) {
    EXPECT_NEAR(total.avg_cost * total.total, out.reserve.cost, 1e-6);
  }
}

TEST(Stability, StochasticRatioIsOne) {
  PowerNetwork net = Case("ring4");
  GridMatrices mats = BuildMatrices(net);
  for (uint64_t seed : {1, 2, 3}) {
    StabilityPoint p = StochasticSelfCheck(net, mats, Reduced(net, 5, seed));
    EXPECT_NEAR(p.ratio, 1.0, 1e-9);
  }
}

TEST(Stability, FixedReservesNeverBeatStochastic) {
  PowerNetwork net = Case("ring4");
  GridMatrices mats = BuildMatrices(net);
  ScenarioSet first = Reduced(net, 5, 1);
  MarketResult seq = RunSequential(net, mats, first, 0.03);
  std::vector<ScenarioSet> sets = {first, Reduced(net, 5, 2),
                                   Reduced(net, 5, 3)};
  std::vector<StabilityPoint> pts =
      RunStability(net, mats, sets, seq.reserve, {});
  ASSERT_EQ(pts.size(), 3u);
  for (const StabilityPoint& p : pts) EXPECT_GE(p.ratio, 1.0 - 1e-9);
  EXPECT_NEAR(pts[0].cost, seq.cost.total, 1e-6 * seq.cost.total);
}

}  // namespace
}  // namespace rzone
