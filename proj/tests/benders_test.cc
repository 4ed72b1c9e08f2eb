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
#include <cmath>
#include <random>

#include "rzone/benders.h"
#include "rzone/error.h"
#include "test_data.h"

namespace rzone {
namespace {

struct Fixture {
  PowerNetwork net;
  GridMatrices mats;
  ScenarioSet set;
};

Fixture Load(const std::string& name, int scenarios, uint64_t seed = 42) {
  Fixture f{LoadCaseFile(CasePath(name)), {}, {}};
  f.mats = BuildMatrices(f.net);
  f.set = FastForwardReduce(
      SampleScenarios(ForecastFromNetwork(f.net), 200, seed), scenarios);
  return f;
}

double Rel(double a, double b) {
  return std::abs(a - b) / std::max(1.0, std::abs(b));
}

FirstStageValues FromMarket(const MarketResult& m) {
  return {m.reserve.up, m.reserve.dn, m.day_ahead.p, m.day_ahead.w};
}

TEST(BendersMaster, OneThetaPerScenarioAndNoCuts) {
  Fixture f = Load("ring4", 3);
  ZonalOptions opt;
  MasterState master = BuildMaster(f.net, f.mats, f.set.prob, opt, -50.0);
  ASSERT_EQ(master.theta.size(), 3u);
  EXPECT_TRUE(master.cuts.empty());
  for (size_t s = 0; s < 3; ++s) {
    const auto& v = master.model.variable(master.theta[s]);
    EXPECT_EQ(v.lower, -50.0);
    EXPECT_NEAR(master.model.cost(master.theta[s]), f.set.prob[s], 1e-12);
  }
}

TEST(BendersSubproblem, MatchesStochasticRecourse) {
  for (const char* name : {"ring4", "congested4", "six_bus"}) {
    SCOPED_TRACE(name);
    Fixture f = Load(name, 4);
    MarketResult st = SolveStochastic(f.net, f.mats, f.set);
    FirstStageValues x = FromMarket(st);
    for (int s = 0; s < f.set.size(); ++s) {
      SubproblemResult sub =
          SolveSubproblem(f.net, f.mats, f.set.wind.col(s), x);
      EXPECT_LT(Rel(sub.cost, st.balancing[s].cost), 1e-6);
    }
  }
}

TEST(BendersSubproblem, PointForecastCostsNothing) {
  Fixture f = Load("six_bus", 2);
  ScenarioSet point = PointForecastSet(f.net);
  MarketResult st = SolveStochastic(f.net, f.mats, point);
  SubproblemResult sub =
      SolveSubproblem(f.net, f.mats, point.wind.col(0), FromMarket(st));
  EXPECT_NEAR(sub.cost, 0.0, 1e-6);
}

TEST(BendersSubproblem, SlopesUnderestimateChanges) {
  Fixture f = Load("congested4", 3);
  MarketResult st = SolveStochastic(f.net, f.mats, f.set);
  FirstStageValues x = FromMarket(st);
  const Eigen::VectorXd wind = f.set.wind.col(0);
  SubproblemResult base = SolveSubproblem(f.net, f.mats, wind, x);
  // Raise each generator's up reserve slightly.
  const double h = 1e-3;
  for (size_t g = 0; g < x.up.size(); ++g) {
    if (f.net.generators[g].up_cap - x.up[g] < 2 * h) continue;
    FirstStageValues y = x;
    y.up[g] += h;
    SubproblemResult moved = SolveSubproblem(f.net, f.mats, wind, y);
    // Convexity: the subgradient under-estimates the change.
    EXPECT_GE(moved.cost - base.cost, base.slope.up[g] * h - 1e-7);
  }
}

TEST(BendersCut, AnchorIdentityAndValidity) {
  Fixture f = Load("congested4", 3);
  MarketResult st = SolveStochastic(f.net, f.mats, f.set);
  FirstStageValues x = FromMarket(st);
  ZonalOptions opt;
  MasterState master = BuildMaster(f.net, f.mats, f.set.prob, opt, -1e4);
  std::vector<SubproblemResult> subs;
  for (int s = 0; s < f.set.size(); ++s) {
    subs.push_back(SolveSubproblem(f.net, f.mats, f.set.wind.col(s), x));
  }
  AddCuts(master, x, subs);
  ASSERT_EQ(master.cuts.size(), 3u);
  for (const Cut& cut : master.cuts) {
    EXPECT_NEAR(cut.Evaluate(x), cut.cost, 1e-9);
  }
  // Cuts under-estimate the recourse at other reserve levels.
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int checked = 0;
  for (int k = 0; k < 20; ++k) {
    FirstStageValues y = x;
    for (size_t g = 0; g < y.up.size(); ++g) {
      const Generator& gen = f.net.generators[g];
      y.up[g] = std::min(gen.up_cap, gen.p_max - y.p[g]) * u(rng);
      y.dn[g] = std::min(gen.dn_cap, y.p[g] - gen.p_min) * u(rng);
      y.up[g] = std::max(0.0, y.up[g]);
      y.dn[g] = std::max(0.0, y.dn[g]);
    }
    for (const Cut& cut : master.cuts) {
      try {
        SubproblemResult r = SolveSubproblem(
            f.net, f.mats, f.set.wind.col(cut.scenario), y);
        EXPECT_LE(cut.Evaluate(y), r.cost + 1e-6 * std::max(1.0, r.cost));
        ++checked;
      } catch (const Error&) {
      }
    }
  }
  EXPECT_GT(checked, 0);
}

struct Case {
  const char* name;
  int scenarios;
  int zones;
  double chi;
};

TEST(Benders, MatchesExtensiveForm) {
  const Case cases[] = {{"ring4", 3, 1, 0.0},       {"path3", 3, 1, 0.0},
                        {"congested4", 5, 1, 0.0},  {"congested4", 5, 2, 1.0},
                        {"six_bus", 4, 1, 0.0},     {"six_bus", 3, 2, 0.5},
                        {"eight_bus", 3, 1, 0.0}};
  for (const Case& c : cases) {
    SCOPED_TRACE(fmt::format("{} S={} Z={} chi={}", c.name, c.scenarios,
                             c.zones, c.chi));
    Fixture f = Load(c.name, c.scenarios);
    ZonalOptions zopt;
    zopt.zones = c.zones;
    zopt.chi = c.chi;
    zopt.solver.rel_gap = 1e-7;
    ZonalOutcome ext = SolveZonal(f.net, f.mats, f.set, zopt);
    BendersOptions bopt;
    bopt.zonal = zopt;
    bopt.epsilon = 1e-6;
    BendersResult ben = RunBenders(f.net, f.mats, f.set, bopt);
    EXPECT_TRUE(ben.converged);
    const double tol = 1e-5 * std::max(1.0, std::abs(ext.cost.total));
    EXPECT_NEAR(ben.outcome.cost.total, ext.cost.total, tol);
    EXPECT_NEAR(ben.outcome.objective, ben.outcome.cost.total, tol);
    EXPECT_TRUE(ben.outcome.certificate.ok(zopt.certify_tol));
  }
}

TEST(Benders, LowerBoundNeverDecreases) {
  Fixture f = Load("congested4", 5);
  BendersOptions opt;
  opt.zonal.zones = 2;
  opt.zonal.chi = 1.0;
  BendersResult r = RunBenders(f.net, f.mats, f.set, opt);
  ASSERT_FALSE(r.trace.rows.empty());
  for (size_t i = 1; i < r.trace.rows.size(); ++i) {
    EXPECT_GE(r.trace.rows[i].lower, r.trace.rows[i - 1].lower - 1e-9);
    EXPECT_LE(r.trace.rows[i].upper, r.trace.rows[i - 1].upper + 1e-9);
  }
  EXPECT_LE(r.trace.rows.back().lower, r.trace.rows.back().upper + 1e-6);
  EXPECT_EQ(r.cuts, (r.iterations - (r.converged ? 1 : 0)) * f.set.size());
}

TEST(Benders, LooseToleranceStopsAfterOneIteration) {
  Fixture f = Load("six_bus", 3);
  BendersOptions opt;
  opt.epsilon = 1e9;
  BendersResult r = RunBenders(f.net, f.mats, f.set, opt);
  EXPECT_EQ(r.iterations, 1);
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.cuts, 0);
}

TEST(Benders, SingleScenario) {
  Fixture f = Load("congested4", 1);
  ZonalOptions zopt;
  zopt.solver.rel_gap = 1e-7;
  ZonalOutcome ext = SolveZonal(f.net, f.mats, f.set, zopt);
  BendersOptions opt;
  opt.zonal = zopt;
  opt.epsilon = 1e-6;
  BendersResult r = RunBenders(f.net, f.mats, f.set, opt);
  EXPECT_NEAR(r.outcome.cost.total, ext.cost.total,
              1e-5 * std::max(1.0, ext.cost.total));
}

TEST(Benders, ParallelSubproblemsAgree) {
  Fixture f = Load("six_bus", 4);
  BendersOptions opt;
  BendersResult serial = RunBenders(f.net, f.mats, f.set, opt);
  opt.jobs = 3;
  BendersResult parallel = RunBenders(f.net, f.mats, f.set, opt);
  EXPECT_EQ(serial.iterations, parallel.iterations);
  EXPECT_DOUBLE_EQ(serial.outcome.objective, parallel.outcome.objective);
}

TEST(Benders, RejectsBadOptions) {
  Fixture f = Load("ring4", 2);
  BendersOptions opt;
  opt.epsilon = 0.0;
  EXPECT_THROW(RunBenders(f.net, f.mats, f.set, opt), Error);
}

TEST(BendersTrace, CsvHasHeaderAndRows) {
  Fixture f = Load("ring4", 2);
  BendersResult r = RunBenders(f.net, f.mats, f.set, {});
  std::string csv = r.trace.Csv();
  EXPECT_EQ(csv.rfind("iteration,lower,upper,gap,seconds\n", 0), 0u);
  EXPECT_EQ(static_cast<size_t>(std::count(csv.begin(), csv.end(), '\n')),
            r.trace.rows.size() + 1);
}

}  // namespace
}  // namespace rzone
