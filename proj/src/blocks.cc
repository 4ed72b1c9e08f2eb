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

#include "rzone/blocks.h"

#include <fmt/core.h>

#include <cmath>

namespace rzone {

using milp::LinExpr;
using milp::Sense;

namespace {

bool IsConstant(const LinExpr& e) { return e.terms().empty(); }

// Adds one flow-limit pair for every line: flow + margin <= F and
// flow - margin >= -F.
void AddFlowRows(milp::Model& model, const PowerNetwork& net,
                 const GridMatrices& mats, const std::vector<LinExpr>& bus_inj,
                 const Exprs* margins, const std::string& prefix,
                 std::vector<int>& up_rows, std::vector<int>& dn_rows) {
  for (int l = 0; l < net.num_lines(); ++l) {
    LinExpr flow;
    for (int n = 0; n < net.num_buses(); ++n) {
      double m = mats.ptdf(l, n);
      if (std::abs(m) < 1e-12) continue;
      flow.AddExpr(bus_inj[n], m);
    }
    flow.Normalize();
    const double rating = net.lines[l].rating;
    LinExpr upper = flow;
    LinExpr lower = flow;
    if (margins) {
      upper.AddExpr((*margins)[l], 1.0);
      lower.AddExpr((*margins)[l], -1.0);
    }
    up_rows.push_back(model.AddConstraint(
        fmt::format("{}fmax_{}", prefix, l + 1), upper, Sense::kLessEqual,
        rating));
    dn_rows.push_back(model.AddConstraint(
        fmt::format("{}fmin_{}", prefix, l + 1), lower, Sense::kGreaterEqual,
        -rating));
  }
}

}  // namespace

Exprs Constants(const std::vector<double>& values) {
  Exprs out;
  for (double v : values) out.emplace_back(v);
  return out;
}

Exprs VarExprs(const std::vector<int>& vars) {
  Exprs out;
  for (int v : vars) {
    LinExpr e;
    e.Add(v, 1.0);
    out.push_back(std::move(e));
  }
  return out;
}

ReserveBlock AddReserveVariables(milp::Model& model, const PowerNetwork& net,
                                 bool tie_break, const std::string& prefix) {
  ReserveBlock block;
  for (const Generator& g : net.generators) {
    double tb = tie_break ? TieBreak(g.id) : 0.0;
    block.up.push_back(model.AddContinuous(fmt::format("{}rup_{}", prefix, g.id),
                                           0.0, g.up_cap, g.up_cost + tb));
    block.dn.push_back(model.AddContinuous(fmt::format("{}rdn_{}", prefix, g.id),
                                           0.0, g.dn_cap, g.dn_cost + tb));
  }
  return block;
}

void AddReserveRequirements(milp::Model& model, ReserveBlock& block,
                            double up, double dn) {
  std::vector<milp::Term> up_terms, dn_terms;
  for (int v : block.up) up_terms.push_back({v, 1.0});
  for (int v : block.dn) dn_terms.push_back({v, 1.0});
  block.up_row =
      model.AddConstraint("req_up", up_terms, Sense::kGreaterEqual, up);
  block.dn_row =
      model.AddConstraint("req_dn", dn_terms, Sense::kGreaterEqual, dn);
}

DayAheadBlock AddDayAheadBlock(milp::Model& model, const PowerNetwork& net,
                               const GridMatrices& mats, const Exprs& r_up,
                               const Exprs& r_dn, const Exprs* margins,
                               bool tie_break, const std::string& prefix) {
  DayAheadBlock block;
  std::vector<LinExpr> bus_inj(net.num_buses());
  for (int n = 0; n < net.num_buses(); ++n) {
    bus_inj[n].AddConstant(-net.buses[n].load);
  }
  LinExpr balance;
  for (int k = 0; k < net.num_generators(); ++k) {
    const Generator& g = net.generators[k];
    double lo = g.p_min, hi = g.p_max;
    if (IsConstant(r_dn[k])) lo += r_dn[k].constant();
    if (IsConstant(r_up[k])) hi -= r_up[k].constant();
    double cost = g.cost + (tie_break ? TieBreak(g.id) : 0.0);
    // An infeasible window is left to the LP (it reports infeasibility).
    int p = model.AddContinuous(fmt::format("{}p_{}", prefix, g.id), lo,
                                std::max(lo, hi), cost);
    if (hi < lo) {
      model.AddConstraint(fmt::format("{}pwin_{}", prefix, g.id), {{p, 1.0}},
                          Sense::kLessEqual, hi);
    }
    block.p.push_back(p);
    int lo_row = -1, up_row = -1;
    if (!IsConstant(r_dn[k])) {
      LinExpr e;
      e.Add(p, 1.0).AddExpr(r_dn[k], -1.0);
      lo_row = model.AddConstraint(fmt::format("{}plo_{}", prefix, g.id), e,
                                   Sense::kGreaterEqual, g.p_min);
    }
    if (!IsConstant(r_up[k])) {
      LinExpr e;
      e.Add(p, 1.0).AddExpr(r_up[k], 1.0);
      up_row = model.AddConstraint(fmt::format("{}pup_{}", prefix, g.id), e,
                                   Sense::kLessEqual, g.p_max);
    }
    block.p_lo_rows.push_back(lo_row);
    block.p_up_rows.push_back(up_row);
    balance.Add(p, 1.0);
    bus_inj[g.bus - 1].Add(p, 1.0);
  }
  for (const WindFarm& wf : net.wind) {
    int w = model.AddContinuous(fmt::format("{}w_{}", prefix, wf.id), 0.0,
                                wf.forecast, 0.0);
    block.w.push_back(w);
    balance.Add(w, 1.0);
    bus_inj[wf.bus - 1].Add(w, 1.0);
  }
  block.balance_row = model.AddConstraint(fmt::format("{}bal", prefix),
                                          balance, Sense::kEqual,
                                          net.TotalLoad());
  if (margins) {
    AddFlowRows(model, net, mats, bus_inj, margins, prefix, block.flow_up_rows,
                block.flow_dn_rows);
  }
  return block;
}

BalancingBlock AddBalancingBlock(milp::Model& model, const PowerNetwork& net,
                                 const GridMatrices& mats, const Exprs& p_da,
                                 const Exprs& w_da, const Exprs& r_up,
                                 const Exprs& r_dn,
                                 const Eigen::VectorXd& wind, double weight,
                                 bool tie_break, const std::string& prefix) {
  BalancingBlock block;
  std::vector<LinExpr> bus_inj(net.num_buses());
  LinExpr balance;
  for (int k = 0; k < net.num_generators(); ++k) {
    const Generator& g = net.generators[k];
    double tb = tie_break ? TieBreak(g.id) : 0.0;
    double up_hi = IsConstant(r_up[k]) ? std::max(0.0, r_up[k].constant())
                                       : g.up_cap;
    double dn_hi = IsConstant(r_dn[k]) ? std::max(0.0, r_dn[k].constant())
                                       : g.dn_cap;
    int up = model.AddContinuous(fmt::format("{}pu_{}", prefix, g.id), 0.0,
                                 up_hi, weight * (g.cost + tb));
    int dn = model.AddContinuous(fmt::format("{}pd_{}", prefix, g.id), 0.0,
                                 dn_hi, weight * (-g.cost + tb));
    block.up.push_back(up);
    block.dn.push_back(dn);
    int up_row = -1, dn_row = -1;
    if (!IsConstant(r_up[k])) {
      LinExpr e;
      e.Add(up, 1.0).AddExpr(r_up[k], -1.0);
      up_row = model.AddConstraint(fmt::format("{}pulim_{}", prefix, g.id), e,
                                   Sense::kLessEqual, 0.0);
    }
    if (!IsConstant(r_dn[k])) {
      LinExpr e;
      e.Add(dn, 1.0).AddExpr(r_dn[k], -1.0);
      dn_row = model.AddConstraint(fmt::format("{}pdlim_{}", prefix, g.id), e,
                                   Sense::kLessEqual, 0.0);
    }
    block.up_rows.push_back(up_row);
    block.dn_rows.push_back(dn_row);
    balance.Add(up, 1.0).Add(dn, -1.0);
    LinExpr& inj = bus_inj[g.bus - 1];
    inj.AddExpr(p_da[k], 1.0);
    inj.Add(up, 1.0).Add(dn, -1.0);
  }
  for (int j = 0; j < net.num_wind(); ++j) {
    const WindFarm& wf = net.wind[j];
    int ct = model.AddContinuous(fmt::format("{}wc_{}", prefix, wf.id), 0.0,
                                 std::max(0.0, wind(j)),
                                 weight * net.curtail_cost);
    block.curtail.push_back(ct);
    // Imbalance W - w* less curtailment.
    balance.AddConstant(wind(j));
    balance.AddExpr(w_da[j], -1.0);
    balance.Add(ct, -1.0);
    LinExpr& inj = bus_inj[wf.bus - 1];
    inj.AddConstant(wind(j));
    inj.Add(ct, -1.0);
  }
  for (int n = 0; n < net.num_buses(); ++n) {
    const Bus& b = net.buses[n];
    bus_inj[n].AddConstant(-b.load);
    if (b.load > 0) {
      int sh = model.AddContinuous(fmt::format("{}sh_{}", prefix, b.id), 0.0,
                                   b.load, weight * net.shed_cost);
      block.shed.push_back(sh);
      balance.Add(sh, 1.0);
      bus_inj[n].Add(sh, 1.0);
    } else {
      block.shed.push_back(-1);
    }
  }
  balance.Normalize();
  block.balance_row = model.AddConstraint(fmt::format("{}bal", prefix),
                                          balance, Sense::kEqual, 0.0);
  AddFlowRows(model, net, mats, bus_inj, nullptr, prefix, block.flow_up_rows,
              block.flow_dn_rows);
  return block;
}

Eigen::VectorXd Flows(const GridMatrices& mats, const Eigen::VectorXd& inj) {
  return mats.ptdf * inj;
}

Eigen::VectorXd Injection(const PowerNetwork& net,
                          const std::vector<double>& p,
                          const std::vector<double>& w,
                          const std::vector<double>& shed) {
  Eigen::VectorXd inj(net.num_buses());
  for (int n = 0; n < net.num_buses(); ++n) {
    inj(n) = -net.buses[n].load + (shed.empty() ? 0.0 : shed[n]);
  }
  for (int k = 0; k < net.num_generators(); ++k) {
    inj(net.generators[k].bus - 1) += p[k];
  }
  for (int j = 0; j < net.num_wind(); ++j) inj(net.wind[j].bus - 1) += w[j];
  return inj;
}

}  // namespace rzone
