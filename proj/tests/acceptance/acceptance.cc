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

// Acceptance checks: one PASS/FAIL line per criterion, exit 0 iff all pass.

#include <fmt/core.h>

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "rzone/benders.h"
#include "rzone/error.h"
#include "rzone/markets.h"
#include "rzone/milp/linearize.h"
#include "rzone/network.h"
#include "rzone/partition.h"
#include "rzone/scenarios.h"
#include "rzone/zonal.h"

namespace rzone {
namespace {

using milp::Model;

std::string g_data;
int64_t g_rts_nodes = 2000;

PowerNetwork Case(const std::string& name) {
  return LoadCaseFile(g_data + "/cases/" + name + ".json");
}

ScenarioSet Reduced(const PowerNetwork& net, int count, uint64_t seed = 42) {
  return FastForwardReduce(SampleScenarios(ForecastFromNetwork(net), 200, seed),
                           count);
}

double Rel(double a, double b) {
  return std::abs(a - b) / std::max(1.0, std::abs(b));
}

struct Result {
  bool pass = false;
  std::string detail;
};

// Certificates of every zonal solve run by the other checks.
struct Certified {
  int solves = 0;
  int failures = 0;
  double worst = 0.0;
  size_t flags = 0;

  void Add(const ZonalOutcome& z) {
    ++solves;
    worst = std::max(worst, z.certificate.max_rel_error);
    flags += z.certificate.audit.flags.size();
    if (!z.certificate.ok(1e-5)) ++failures;
  }
};
Certified g_cert;

ZonalOutcome Zonal(const PowerNetwork& net, const GridMatrices& mats,
                   const ScenarioSet& set, ZonalOptions opt) {
  ZonalOutcome z = SolveZonal(net, mats, set, opt);
  g_cert.Add(z);
  return z;
}

std::set<std::vector<int>> MilpPartitions(const PowerNetwork& net,
                                          const PartitionOptions& options) {
  Model model;
  PartitionVars vars = EmitPartitionBlock(model, net, options);
  std::set<std::vector<int>> out;
  for (int iter = 0; iter < 5000; ++iter) {
    milp::Solution sol = milp::SolveMilp(model);
    if (sol.status == milp::Status::kInfeasible) break;
    if (!sol.ok()) throw Error(ErrorKind::kSolverLimit, "partition enumeration stopped");
    out.insert(ExtractPartition(net, vars, sol.values).zone_of);
    std::vector<milp::Term> cut;
    double ones = 0;
    for (int n = 0; n < net.num_buses(); ++n) {
      for (int z = 0; z < options.zones; ++z) {
        bool on = sol.values[vars.x[n][z]] > 0.5;
        cut.push_back({vars.x[n][z], on ? -1.0 : 1.0});
        ones += on;
      }
    }
    model.AddConstraint(fmt::format("nogood_{}", iter), cut,
                        milp::Sense::kGreaterEqual, 1.0 - ones);
  }
  return out;
}

std::set<std::vector<int>> OraclePartitions(const PowerNetwork& net, int zones,
                                            int min_size) {
  std::set<std::vector<int>> out;
  for (const Partition& p : EnumeratePartitions(net, zones, min_size, 0)) {
    out.insert(p.zone_of);
  }
  return out;
}

Result PartitionOracle() {
  int cases = 0, bad = 0;
  for (const char* name :
       {"tiny2", "path3", "ring4", "congested4", "six_bus", "eight_bus"}) {
    PowerNetwork net = Case(name);
    if (net.num_buses() > 8) continue;
    for (int zones = 1; zones <= 3; ++zones) {
      for (int min_size : {1, 2}) {
        if (zones * min_size > net.num_buses()) continue;
        ++cases;
        if (MilpPartitions(net, {zones, min_size, 0, true}) !=
            OraclePartitions(net, zones, min_size)) {
          ++bad;
        }
      }
    }
  }
  return {bad == 0, fmt::format("{} (net, Z, y_min) cases, {} discrepancies", cases, bad)};
}

Result RingSplits() {
  PowerNetwork ring = Case("ring4");
  size_t one = MilpPartitions(ring, {2, 1, 0, true}).size();
  size_t two = MilpPartitions(ring, {2, 2, 0, true}).size();
  return {one == 6 && two == 2,
          fmt::format("y_min=1: {} partitions (want 6), y_min=2: {} (want 2)", one, two)};
}

struct Sandwich {
  std::string name;
  int scenarios;
  int min_size;
  int64_t node_limit;
};

Result CostSandwich(std::vector<ZonalOutcome>* rts_z1) {
  const double tol = 1e-6;
  const double qs[] = {0.01, 0.03, 0.05, 0.10};
  bool ok = true;
  std::string detail;
  for (const Sandwich& c : {Sandwich{"ring4", 5, 1, 0},
                            Sandwich{"rts24", 10, 4, g_rts_nodes}}) {
    PowerNetwork net = Case(c.name);
    GridMatrices mats = BuildMatrices(net);
    ScenarioSet set = Reduced(net, c.scenarios);
    const double st = SolveStochastic(net, mats, set).cost.total;
    double seq_min = 1e300;
    for (double q : qs) seq_min = std::min(seq_min, RunSequential(net, mats, set, q).cost.total);
    detail += fmt::format("{} S={}: stochastic {:.2f}, min sequential {:.2f}", c.name,
                          c.scenarios, st, seq_min);
    for (int zones : {1, 2}) {
      ZonalOptions opt;
      opt.zones = zones;
      opt.min_size = c.min_size;
      if (c.node_limit > 0) opt.solver.node_limit = c.node_limit;
      ZonalOutcome z = Zonal(net, mats, set, opt);
      const double cz = z.cost.total;
      const bool lo = cz >= st - tol * std::abs(st);
      const bool hi = cz <= seq_min + tol * std::abs(seq_min);
      ok = ok && lo && hi;
      detail += fmt::format(", Z={} {:.2f} (gap {:.2g})", zones, cz, z.mip_gap);
      if (c.name == "rts24" && zones == 1) rts_z1->push_back(z);
    }
    detail += "; ";
  }
  return {ok, detail.substr(0, detail.size() - 2)};
}

Result SingleZoneDegeneracy(const std::vector<ZonalOutcome>& rts_z1) {
  bool ok = true;
  std::string detail;
  auto compare = [&](const std::string& name, const ZonalOutcome& a,
                     const ZonalOutcome& b) {
    double gamma = 0.0;
    for (double g : a.set_aside) gamma = std::max(gamma, std::abs(g));
    for (double g : b.set_aside) gamma = std::max(gamma, std::abs(g));
    const double d = Rel(a.objective, b.objective);
    ok = ok && d <= 1e-6 && gamma == 0.0;
    detail += fmt::format("{} {:.4f} vs {:.4f} (max Gamma {}); ", name, a.objective,
                          b.objective, gamma);
  };
  for (const char* name : {"ring4", "congested4", "six_bus"}) {
    PowerNetwork net = Case(name);
    GridMatrices mats = BuildMatrices(net);
    ScenarioSet set = Reduced(net, 4);
    ZonalOptions opt;
    ZonalOutcome none = Zonal(net, mats, set, opt);
    opt.chi = 1.0;
    compare(name, none, Zonal(net, mats, set, opt));
  }
  if (!rts_z1.empty()) {
    PowerNetwork net = Case("rts24");
    GridMatrices mats = BuildMatrices(net);
    ZonalOptions opt;
    opt.min_size = 4;
    opt.chi = 1.0;
    opt.solver.node_limit = g_rts_nodes;
    compare("rts24", rts_z1[0], Zonal(net, mats, Reduced(net, 10), opt));
  }
  return {ok, detail.substr(0, detail.size() - 2)};
}

struct BendersCase {
  const char* name;
  int scenarios;
  int zones;
  double chi;
};

Result BendersEquivalence() {
  const BendersCase cases[] = {{"ring4", 3, 1, 0.0},      {"path3", 3, 1, 0.0},
                               {"congested4", 5, 1, 0.0}, {"congested4", 5, 2, 1.0},
                               {"six_bus", 4, 1, 0.0},    {"six_bus", 3, 2, 0.5},
                               {"eight_bus", 3, 1, 0.0}};
  int agree = 0, monotone = 0, n = 0;
  double worst = 0.0;
  for (const BendersCase& c : cases) {
    PowerNetwork net = Case(c.name);
    GridMatrices mats = BuildMatrices(net);
    ScenarioSet set = Reduced(net, c.scenarios);
    ZonalOptions opt;
    opt.zones = c.zones;
    opt.chi = c.chi;
    ZonalOutcome ext = Zonal(net, mats, set, opt);
    BendersOptions bopt;
    bopt.zonal = opt;
    bopt.epsilon = 1e-4 * std::abs(ext.objective);
    BendersResult ben = RunBenders(net, mats, set, bopt);
    g_cert.Add(ben.outcome);
    ++n;
    const double scale = std::abs(ext.objective);
    const double allowed =
        bopt.epsilon + (ext.mip_gap + opt.solver.rel_gap) * scale + 1e-9 * scale;
    const double diff = std::abs(ben.outcome.objective - ext.objective);
    worst = std::max(worst, diff / std::max(1.0, scale));
    agree += ben.converged && diff <= allowed;
    bool mono = true;
    for (size_t i = 1; i < ben.trace.rows.size(); ++i) {
      mono = mono && ben.trace.rows[i].lower >= ben.trace.rows[i - 1].lower;
    }
    monotone += mono;
  }
  return {agree == n && monotone == n && n >= 5,
          fmt::format("{}/{} fixtures agree (worst rel diff {:.2g}), {}/{} traces "
                      "with monotone lower bound", agree, n, worst, monotone, n)};
}

Result KktCertification() {
  return {g_cert.solves > 0 && g_cert.failures == 0,
          fmt::format("{} zonal solves, {} failed, worst lower-level rel error {:.2g}, "
                      "{} binding big-Ms", g_cert.solves, g_cert.failures, g_cert.worst,
                      g_cert.flags)};
}

Result LinearizationExactness() {
  int points = 0, bad = 0;
  double worst = 0.0;
  const std::pair<int, int> ranges[] = {{0, 4}, {1, 4}, {-3, 2}, {-5, -1}};
  for (auto [lo, hi] : ranges) {
    for (int b = 0; b <= 1; ++b) {
      for (int y = lo; y <= hi; ++y) {
        for (double dir : {1.0, -1.0}) {
          Model m;
          const int bv = m.AddBinary("b");
          const int yv = m.AddVariable("y", milp::VarKind::kInteger, lo, hi);
          const milp::ProductHandle h = milp::LinearizeBinIntProduct(m, "u", bv, yv);
          m.SetBounds(bv, b, b);
          m.SetBounds(yv, y, y);
          m.SetCost(h.aux, dir);
          const milp::Solution s = milp::SolveMilp(m);
          ++points;
          const double r = s.ok() ? std::abs(s.values[h.aux] - b * y) : 1e300;
          worst = std::max(worst, r);
          bad += r != 0.0;
        }
      }
    }
  }
  // Complementarity: each branch forces one side to zero.
  for (int b = 0; b <= 1; ++b) {
    for (double target : {0.0, 3.0, 10.0}) {
      Model m;
      const int x = m.AddContinuous("x", 0, 10, 0.0);
      const int mu = m.AddContinuous("mu", 0, milp::kInf, 0.0);
      milp::LinExpr g;
      g.Add(x, 1).AddConstant(-10);
      const milp::ComplementarityHandle h =
          milp::LinearizeComplementarity(m, "c", g, mu, 10, 50);
      m.SetBounds(h.binary, b, b);
      m.SetCost(x, target < 5 ? 1.0 : -1.0);
      m.SetCost(mu, -1.0);
      const milp::Solution s = milp::SolveMilp(m);
      ++points;
      const double r = s.ok() ? std::abs(g.Evaluate(s.values) * s.values[mu]) : 1e300;
      worst = std::max(worst, r);
      bad += r != 0.0;
    }
  }
  return {bad == 0, fmt::format("{} integral points, max |u - b y| or |g mu| = {}", points,
                                worst)};
}

Result ScenarioStatistics() {
  bool ok = true;
  std::string detail;
  // Beta moments.
  const int n = 1'000'000;
  double worst_z = 0.0;
  for (double p : {0.15, 0.4, 0.7}) {
    ProbabilisticForecast f;
    f.farm_ids = {1};
    f.capacity = {1.0};
    f.p_hat = {p};
    f.rank_corr = Eigen::MatrixXd::Identity(1, 1);
    ScenarioSet set = SampleScenarios(f, n, 11);
    const double se = std::sqrt(f.law(p) / n);
    const double z = std::abs(set.wind.row(0).mean() - p) / se;
    worst_z = std::max(worst_z, z);
    ok = ok && z <= 3.0;
  }
  detail += fmt::format("Beta mean within {:.2f} standard errors", worst_z);
  // Copula rank correlation.
  double worst_rho = 0.0;
  for (double rho : {0.8, 0.3, -0.5}) {
    ProbabilisticForecast f;
    f.farm_ids = {1, 2};
    f.capacity = {100, 200};
    f.p_hat = {0.4, 0.6};
    f.rank_corr = Eigen::MatrixXd::Identity(2, 2);
    f.rank_corr(0, 1) = f.rank_corr(1, 0) = rho;
    ScenarioSet set = SampleScenarios(f, 10000, 17);
    worst_rho = std::max(worst_rho, std::abs(SampleRankCorrelation(set)(0, 1) - rho));
  }
  ok = ok && worst_rho <= 0.05;
  detail += fmt::format(", Spearman error {:.3f}", worst_rho);
  // Fast-forward to one scenario against brute force.
  int matches = 0, sets = 0;
  std::mt19937 rng(5);
  for (int size : {20, 80, 150, 200}) {
    std::uniform_real_distribution<double> u(0, 100), w(0.5, 2.0);
    ScenarioSet set;
    set.farm_ids = {1, 2, 3};
    set.wind.resize(3, size);
    double total = 0.0;
    for (int s = 0; s < size; ++s) {
      for (int k = 0; k < 3; ++k) set.wind(k, s) = u(rng);
      set.prob.push_back(w(rng));
      total += set.prob.back();
    }
    for (double& p : set.prob) p /= total;
    int brute = -1;
    double best = 1e300;
    for (int s = 0; s < size; ++s) {
      const double v = ReductionDistance(set, {s});
      if (v < best) {
        best = v;
        brute = s;
      }
    }
    ++sets;
    matches += FastForwardSelect(set, 1) == std::vector<int>{brute};
  }
  ok = ok && matches == sets;
  detail += fmt::format(", fast-forward matches brute force on {}/{} sets", matches, sets);
  return {ok, detail};
}

Result QuantileRequirements() {
  // Totals 40..130 with cumulative probabilities .02 .05 .10 .25 .35 .55 .70
  // .85 .95 1 once sorted; expected total 91.8.
  const std::vector<double> totals = {100, 40, 130, 70, 50, 110, 60, 90, 120, 80};
  const std::vector<double> prob = {0.15, 0.02, 0.05, 0.15, 0.03,
                                    0.15, 0.05, 0.20, 0.10, 0.10};
  ScenarioSet set;
  set.farm_ids = {1};
  set.wind.resize(1, 10);
  for (int s = 0; s < 10; ++s) set.wind(0, s) = totals[s];
  set.prob = prob;
  struct Want {
    double q, up, dn;
  };
  const Want wants[] = {{0.03, 91.8 - 50, 130 - 91.8},
                        {0.05, 91.8 - 50, 120 - 91.8},
                        {0.10, 91.8 - 60, 120 - 91.8},
                        {0.25, 91.8 - 70, 110 - 91.8}};
  double worst = 0.0;
  for (const Want& w : wants) {
    Requirements r = DeterministicRequirements(set, w.q);
    worst = std::max({worst, std::abs(r.up - w.up), std::abs(r.dn - w.dn)});
  }
  return {worst <= 1e-12, fmt::format("4 quantiles, max error {:.2g} MW", worst)};
}

Result CapacityEffect() {
  PowerNetwork net = Case("congested4");
  GridMatrices mats = BuildMatrices(net);
  ScenarioSet set = Reduced(net, 5);
  ZonalOptions opt;
  opt.zones = 2;
  ZonalOutcome none = Zonal(net, mats, set, opt);
  opt.chi = 1.0;
  ZonalOutcome full = Zonal(net, mats, set, opt);
  const double margin = (none.cost.total - full.cost.total) / none.cost.total;
  return {margin >= 0.01,
          fmt::format("congested4 Z=2: chi=0 {:.2f}, chi=1 {:.2f}, reduction {:.2f}%",
                      none.cost.total, full.cost.total, 100 * margin)};
}

Result StabilityIdentity() {
  double worst = 0.0;
  int runs = 0;
  for (const char* name : {"ring4", "congested4", "rts24"}) {
    PowerNetwork net = Case(name);
    GridMatrices mats = BuildMatrices(net);
    for (uint64_t seed = 1000; seed < 1005; ++seed) {
      StabilityPoint p = StochasticSelfCheck(net, mats, Reduced(net, 10, seed));
      worst = std::max(worst, std::abs(p.ratio - 1.0));
      ++runs;
    }
  }
  return {worst <= 1e-9, fmt::format("{} scenario sets, max |ratio - 1| = {:.2g}", runs, worst)};
}

}  // namespace
}  // namespace rzone

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks"};
  app.add_option("--data", rzone::g_data, "data directory")->default_val(RZONE_DATA_DIR);
  app.add_option("--rts-nodes", rzone::g_rts_nodes, "node limit for RTS-24 zonal solves")
      ->default_val(2000);
  CLI11_PARSE(app, argc, argv);

  using rzone::Result;
  std::vector<rzone::ZonalOutcome> rts_z1;
  const std::vector<std::pair<std::string, std::function<Result()>>> checks = {
      {"partition-oracle", rzone::PartitionOracle},
      {"ring-split-count", rzone::RingSplits},
      {"cost-sandwich", [&] { return rzone::CostSandwich(&rts_z1); }},
      {"single-zone-degeneracy", [&] { return rzone::SingleZoneDegeneracy(rts_z1); }},
      {"benders-vs-extensive", rzone::BendersEquivalence},
      {"capacity-allocation", rzone::CapacityEffect},
      {"kkt-certification", rzone::KktCertification},
      {"linearization-exactness", rzone::LinearizationExactness},
      {"scenario-statistics", rzone::ScenarioStatistics},
      {"quantile-requirements", rzone::QuantileRequirements},
      {"stability-identity", rzone::StabilityIdentity},
  };
  int passed = 0;
  for (const auto& [name, check] : checks) {
    const auto start = std::chrono::steady_clock::now();
    Result r;
    try {
      r = check();
    } catch (const std::exception& e) {
      r = {false, std::string("error: ") + e.what()};
    }
    const double sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << fmt::format("{} {:<24} {} [{:.1f} s]\n", r.pass ? "PASS" : "FAIL", name,
                             r.detail, sec)
              << std::flush;
    passed += r.pass;
  }
  std::cout << fmt::format("acceptance: {}/{} passed\n", passed, checks.size());
  return passed == static_cast<int>(checks.size()) ? 0 : 1;
}
