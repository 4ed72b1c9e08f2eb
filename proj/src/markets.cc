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

#include "rzone/markets.h"

#include <fmt/core.h>

#include <algorithm>
#include <cmath>

#include "rzone/blocks.h"
#include "rzone/error.h"

namespace rzone {

using milp::LinExpr;
using milp::Model;
using milp::Sense;
using milp::Solution;
using milp::Status;

namespace {

std::vector<double> Values(const Solution& sol, const std::vector<int>& vars) {
  std::vector<double> out;
  out.reserve(vars.size());
  for (int v : vars) out.push_back(v < 0 ? 0.0 : sol.values[v]);
  return out;
}

Exprs ZeroExprs(int n) { return Exprs(n); }

// Rows an elastic copy of `model` must violate to become feasible.
std::vector<std::string> Conflict(const Model& model,
                                  const milp::SolverParams& params) {
  Model relaxed;
  for (const milp::Variable& v : model.variables()) {
    relaxed.AddVariable(v.name, v.kind, v.lower, v.upper);
  }
  const int rows = model.num_constraints();
  std::vector<std::pair<int, int>> slacks;
  for (int i = 0; i < rows; ++i) {
    int pos = relaxed.AddContinuous(fmt::format("el+{}", i), 0.0, milp::kInf, 1.0);
    int neg = relaxed.AddContinuous(fmt::format("el-{}", i), 0.0, milp::kInf, 1.0);
    slacks.push_back({pos, neg});
    milp::Constraint c = model.constraint(i);
    c.terms.push_back({pos, 1.0});
    c.terms.push_back({neg, -1.0});
    int row = relaxed.AddConstraint(c.name, c.terms, c.sense, c.rhs);
    if (c.range) relaxed.SetRange(row, *c.range);
  }
  Solution sol = milp::SolveLp(relaxed, params);
  std::vector<std::string> names;
  if (sol.status != Status::kOptimal) return names;
  for (int i = 0; i < rows; ++i) {
    double viol = sol.values[slacks[i].first] + sol.values[slacks[i].second];
    if (viol > 1e-7) {
      names.push_back(fmt::format("{} (by {:.6g})", model.constraint(i).name,
                                  viol));
    }
  }
  // Bound windows are modelled as rows, so an empty list means the
  // variable bounds alone conflict.
  if (names.empty()) names.push_back("variable bounds");
  return names;
}

BalancingOutcome ExtractBalancing(const PowerNetwork& net,
                                  const GridMatrices& mats,
                                  const BalancingBlock& block,
                                  const Solution& sol,
                                  const std::vector<double>& p_da,
                                  const Eigen::VectorXd& wind) {
  BalancingOutcome out;
  out.status = sol.status;
  out.up = Values(sol, block.up);
  out.dn = Values(sol, block.dn);
  out.curtail = Values(sol, block.curtail);
  out.shed = Values(sol, block.shed);
  // Offsetting up and down activations on one unit differ only by the
  // tie-break cost, which is below the LP tolerance; report the net move.
  for (int g = 0; g < net.num_generators(); ++g) {
    double both = std::min(out.up[g], out.dn[g]);
    out.up[g] -= both;
    out.dn[g] -= both;
  }
  std::vector<double> p(net.num_generators()), w(net.num_wind());
  for (int g = 0; g < net.num_generators(); ++g) {
    p[g] = p_da[g] + out.up[g] - out.dn[g];
  }
  for (int j = 0; j < net.num_wind(); ++j) w[j] = wind(j) - out.curtail[j];
  Eigen::VectorXd f = Flows(mats, Injection(net, p, w, out.shed));
  out.flow.assign(f.data(), f.data() + f.size());
  out.cost = BalancingCost(net, out);
  return out;
}

}  // namespace

double ReserveCost(const PowerNetwork& net, const std::vector<double>& up,
                   const std::vector<double>& dn) {
  double cost = 0.0;
  for (int g = 0; g < net.num_generators(); ++g) {
    cost += net.generators[g].up_cost * up[g] + net.generators[g].dn_cost * dn[g];
  }
  return cost;
}

double DayAheadCost(const PowerNetwork& net, const std::vector<double>& p) {
  double cost = 0.0;
  for (int g = 0; g < net.num_generators(); ++g) {
    cost += net.generators[g].cost * p[g];
  }
  return cost;
}

double BalancingCost(const PowerNetwork& net, const BalancingOutcome& b) {
  double cost = 0.0;
  for (int g = 0; g < net.num_generators(); ++g) {
    cost += net.generators[g].cost * (b.up[g] - b.dn[g]);
  }
  for (double c : b.curtail) cost += net.curtail_cost * c;
  for (double s : b.shed) cost += net.shed_cost * s;
  return cost;
}

ReserveSchedule SolveReserveMarket(const PowerNetwork& net, double up_req,
                                   double dn_req,
                                   const MarketOptions& options) {
  Model model;
  model.set_name("RESERVE");
  ReserveBlock block = AddReserveVariables(model, net, options.tie_break, "");
  AddReserveRequirements(model, block, up_req, dn_req);
  Solution sol = milp::SolveLp(model, options.solver);
  ReserveSchedule out;
  out.status = sol.status;
  if (sol.status != Status::kOptimal) return out;
  out.up = Values(sol, block.up);
  out.dn = Values(sol, block.dn);
  out.cost = ReserveCost(net, out.up, out.dn);
  out.up_price = sol.duals[block.up_row];
  out.dn_price = sol.duals[block.dn_row];
  return out;
}

DayAheadSchedule SolveDayAhead(const PowerNetwork& net,
                               const GridMatrices& mats,
                               const ReserveSchedule& reserve,
                               const std::vector<double>& margins,
                               const MarketOptions& options) {
  Model model;
  model.set_name("DAYAHEAD");
  Exprs gamma = margins.empty() ? ZeroExprs(net.num_lines()) : Constants(margins);
  Exprs r_up = Constants(reserve.up);
  Exprs r_dn = Constants(reserve.dn);
  DayAheadBlock block = AddDayAheadBlock(model, net, mats, r_up, r_dn, &gamma,
                                         options.tie_break, "");
  Solution sol = milp::SolveLp(model, options.solver);
  DayAheadSchedule out;
  out.status = sol.status;
  if (sol.status != Status::kOptimal) {
    if (sol.status == Status::kInfeasible) {
      out.conflict = Conflict(model, options.solver);
    }
    return out;
  }
  out.p = Values(sol, block.p);
  out.w = Values(sol, block.w);
  Eigen::VectorXd f = Flows(mats, Injection(net, out.p, out.w));
  out.flow.assign(f.data(), f.data() + f.size());
  out.cost = DayAheadCost(net, out.p);
  out.price = sol.duals[block.balance_row];
  for (int l = 0; l < net.num_lines(); ++l) {
    out.flow_price.push_back(sol.duals[block.flow_up_rows[l]] +
                             sol.duals[block.flow_dn_rows[l]]);
  }
  return out;
}

BalancingOutcome SolveBalancing(const PowerNetwork& net,
                                const GridMatrices& mats,
                                const DayAheadSchedule& day_ahead,
                                const ReserveSchedule& reserve,
                                const Eigen::VectorXd& wind,
                                const MarketOptions& options) {
  Model model;
  model.set_name("BALANCE");
  BalancingBlock block = AddBalancingBlock(
      model, net, mats, Constants(day_ahead.p), Constants(day_ahead.w),
      Constants(reserve.up), Constants(reserve.dn), wind, 1.0,
      options.tie_break, "");
  Solution sol = milp::SolveLp(model, options.solver);
  if (sol.status != Status::kOptimal) {
    throw Error(ErrorKind::kSolverFailure,
                fmt::format("balancing LP returned {}",
                            milp::StatusName(sol.status)));
  }
  return ExtractBalancing(net, mats, block, sol, day_ahead.p, wind);
}

MarketResult EvaluateReserves(const PowerNetwork& net,
                              const GridMatrices& mats,
                              const ScenarioSet& scenarios,
                              const ReserveSchedule& reserve,
                              const std::vector<double>& margins,
                              const MarketOptions& options) {
  MarketResult result;
  result.reserve = reserve;
  result.day_ahead = SolveDayAhead(net, mats, reserve, margins, options);
  if (!result.day_ahead.ok()) {
    std::string detail;
    for (const std::string& c : result.day_ahead.conflict) {
      detail += (detail.empty() ? "" : ", ") + c;
    }
    throw InfeasibleError(fmt::format("day-ahead market {}: {}",
                                      milp::StatusName(result.day_ahead.status),
                                      detail));
  }
  double expected = 0.0;
  for (int s = 0; s < scenarios.size(); ++s) {
    result.balancing.push_back(SolveBalancing(net, mats, result.day_ahead,
                                              reserve, scenarios.wind.col(s),
                                              options));
    expected += scenarios.prob[s] * result.balancing.back().cost;
  }
  result.cost = CostBreakdown::Of(reserve.cost, result.day_ahead.cost, expected);
  return result;
}

MarketResult RunSequentialWith(const PowerNetwork& net,
                               const GridMatrices& mats,
                               const ScenarioSet& scenarios, double up_req,
                               double dn_req, const MarketOptions& options) {
  ReserveSchedule reserve = SolveReserveMarket(net, up_req, dn_req, options);
  if (!reserve.ok()) {
    throw InfeasibleError(fmt::format(
        "reserve market {}: requirements {:.6g}/{:.6g} MW exceed the offers",
        milp::StatusName(reserve.status), up_req, dn_req));
  }
  MarketResult result =
      EvaluateReserves(net, mats, scenarios, reserve, {}, options);
  result.requirements = {up_req, dn_req};
  return result;
}

MarketResult RunSequential(const PowerNetwork& net, const GridMatrices& mats,
                           const ScenarioSet& scenarios, double q,
                           const MarketOptions& options) {
  Requirements req = DeterministicRequirements(scenarios, q);
  return RunSequentialWith(net, mats, scenarios, req.up, req.dn, options);
}

MarketResult SolveStochastic(const PowerNetwork& net, const GridMatrices& mats,
                             const ScenarioSet& scenarios,
                             const MarketOptions& options) {
  Model model;
  model.set_name("STOCH");
  ReserveBlock reserve = AddReserveVariables(model, net, options.tie_break, "");
  Exprs r_up = VarExprs(reserve.up);
  Exprs r_dn = VarExprs(reserve.dn);
  DayAheadBlock da = AddDayAheadBlock(model, net, mats, r_up, r_dn, nullptr,
                                      options.tie_break, "da_");
  Exprs p_da = VarExprs(da.p);
  Exprs w_da = VarExprs(da.w);
  std::vector<BalancingBlock> blocks;
  for (int s = 0; s < scenarios.size(); ++s) {
    blocks.push_back(AddBalancingBlock(
        model, net, mats, p_da, w_da, r_up, r_dn, scenarios.wind.col(s),
        scenarios.prob[s], options.tie_break, fmt::format("s{}_", s + 1)));
  }
  Solution sol = milp::SolveLp(model, options.solver);
  if (sol.status != Status::kOptimal) {
    throw Error(sol.status == Status::kInfeasible ? ErrorKind::kInfeasible
                                                  : ErrorKind::kSolverFailure,
                fmt::format("stochastic model {}", milp::StatusName(sol.status)));
  }
  MarketResult result;
  result.reserve.up = Values(sol, reserve.up);
  result.reserve.dn = Values(sol, reserve.dn);
  result.reserve.cost = ReserveCost(net, result.reserve.up, result.reserve.dn);
  result.day_ahead.p = Values(sol, da.p);
  result.day_ahead.w = Values(sol, da.w);
  Eigen::VectorXd f =
      Flows(mats, Injection(net, result.day_ahead.p, result.day_ahead.w));
  result.day_ahead.flow.assign(f.data(), f.data() + f.size());
  result.day_ahead.cost = DayAheadCost(net, result.day_ahead.p);
  result.day_ahead.price = sol.duals[da.balance_row];
  double expected = 0.0;
  for (int s = 0; s < scenarios.size(); ++s) {
    result.balancing.push_back(ExtractBalancing(net, mats, blocks[s], sol,
                                                result.day_ahead.p,
                                                scenarios.wind.col(s)));
    expected += scenarios.prob[s] * result.balancing.back().cost;
  }
  result.cost = CostBreakdown::Of(result.reserve.cost, result.day_ahead.cost,
                                  expected);
  return result;
}

}  // namespace rzone
