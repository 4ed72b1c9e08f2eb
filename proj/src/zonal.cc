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

#include "rzone/zonal.h"

#include <fmt/core.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

#include "rzone/error.h"

namespace rzone {

using milp::ComplementarityHandle;
using milp::LinExpr;
using milp::Model;
using milp::Sense;
using milp::Solution;
using milp::Status;

namespace {

// Primal slack bound with headroom so a binding big-M signals a modeling
// error rather than a tight point.
double Pad(double bound) { return 1.1 * bound + 1.0; }

LinExpr Var(int v, double coef = 1.0) {
  LinExpr e;
  e.Add(v, coef);
  return e;
}

double RelError(double a, double b) {
  return std::abs(a - b) / std::max(1.0, std::abs(b));
}

double MaxOfferCost(const PowerNetwork& net) {
  double c = 0.0;
  for (const Generator& g : net.generators) {
    c = std::max({c, g.up_cost, g.dn_cost});
  }
  return c;
}

struct Direction {
  const char* tag;
  double Generator::*cap;
  double Generator::*cost;
};

constexpr Direction kUp{"up", &Generator::up_cap, &Generator::up_cost};
constexpr Direction kDn{"dn", &Generator::dn_cap, &Generator::dn_cost};

// One direction of the zonal reserve market: requirement per zone, zone
// shares per generator and their KKT conditions.
void EmitDirection(Model& model, const PowerNetwork& net,
                   const PartitionVars& partition, const Direction& dir,
                   std::vector<int>& req, std::vector<std::vector<int>>& share,
                   std::vector<int>& total, KktBlock& kkt) {
  const int zones = partition.zones;
  double fleet = 0.0;
  for (const Generator& g : net.generators) fleet += g.*dir.cap;
  const double dual_bound = 2.0 * MaxOfferCost(net) + 1.0;

  std::vector<LinExpr> zone_sum(zones);
  std::vector<int> req_dual(zones);
  for (int z = 0; z < zones; ++z) {
    req.push_back(model.AddContinuous(
        fmt::format("lam{}_{}", dir.tag, z + 1), 0.0, fleet));
    req_dual[z] = model.AddContinuous(
        fmt::format("gq{}_{}", dir.tag, z + 1), 0.0, dual_bound);
    kkt.duals.push_back(req_dual[z]);
  }
  share.assign(net.num_generators(), std::vector<int>(zones, -1));
  for (int k = 0; k < net.num_generators(); ++k) {
    const Generator& g = net.generators[k];
    const double cap = g.*dir.cap;
    int r = model.AddContinuous(fmt::format("r{}_{}", dir.tag, g.id), 0.0, cap);
    total.push_back(r);
    LinExpr def = Var(r);
    if (cap <= 0.0) continue;
    for (int z = 0; z < zones; ++z) {
      const std::string id = fmt::format("{}_{}_{}", dir.tag, g.id, z + 1);
      int rz = model.AddContinuous("rz" + id, 0.0, cap);
      share[k][z] = rz;
      def.Add(rz, -1.0);
      zone_sum[z].Add(rz, 1.0);
      int ub = model.AddContinuous("gu" + id, 0.0, dual_bound);
      int lb = model.AddContinuous("gl" + id, 0.0, dual_bound);
      kkt.duals.push_back(ub);
      kkt.duals.push_back(lb);
      // C - gq_z + gu - gl = 0
      LinExpr st;
      st.Add(req_dual[z], -1.0).Add(ub, 1.0).Add(lb, -1.0);
      kkt.stationarity.push_back(
          model.AddConstraint("st" + id, st, Sense::kEqual, -(g.*dir.cost)));
      LinExpr g_ub = Var(rz);
      g_ub.Add(partition.x[g.bus - 1][z], -cap);
      kkt.handles.push_back(milp::LinearizeComplementarity(
          model, "cu" + id, g_ub, ub, Pad(cap), dual_bound));
      kkt.handles.push_back(milp::LinearizeComplementarity(
          model, "cl" + id, Var(rz, -1.0), lb, Pad(cap), dual_bound));
    }
    model.AddConstraint(fmt::format("rdef{}_{}", dir.tag, g.id), def,
                        Sense::kEqual, 0.0);
  }
  for (int z = 0; z < zones; ++z) {
    LinExpr g = Var(req[z]);
    g.AddExpr(zone_sum[z], -1.0);
    kkt.handles.push_back(milp::LinearizeComplementarity(
        model, fmt::format("cq{}_{}", dir.tag, z + 1), g, req_dual[z],
        Pad(fleet), dual_bound));
  }
}

std::vector<double> Read(const std::vector<double>& values,
                         const std::vector<int>& vars) {
  std::vector<double> out;
  out.reserve(vars.size());
  for (int v : vars) out.push_back(v < 0 ? 0.0 : std::max(0.0, values[v]));
  return out;
}

int EffectiveMax(const PowerNetwork& net, const ZonalOptions& o) {
  return o.max_size > 0 ? o.max_size
                        : net.num_buses() - (o.zones - 1) * o.min_size;
}

std::vector<double> ZoneSums(const Partition& p, const PowerNetwork& net,
                             const std::vector<double>& r) {
  std::vector<double> out(p.num_zones(), 0.0);
  for (int k = 0; k < net.num_generators(); ++k) {
    out[p.zone_of[net.generators[k].bus - 1]] += r[k];
  }
  return out;
}

}  // namespace

CapacityVars EmitCapacityBlock(Model& model, const PowerNetwork& net,
                               const PartitionVars& partition, double chi) {
  if (!(chi >= 0.0 && chi <= 1.0)) {
    throw ConfigError(fmt::format("chi must lie in [0, 1], got {}", chi));
  }
  CapacityVars cv;
  cv.chi = chi;
  const int zones = partition.zones;
  cv.zone_share.assign(net.num_lines(), std::vector<int>(zones, -1));
  for (int l = 0; l < net.num_lines(); ++l) {
    const Line& line = net.lines[l];
    const double cap = chi * line.rating;
    const bool open = zones > 1 && cap > 0.0;
    int total = model.AddContinuous(fmt::format("gam_{}", line.id), 0.0,
                                    open ? cap : 0.0);
    cv.set_aside.push_back(total);
    if (!open) continue;
    LinExpr half = Var(total);
    for (int z = 0; z < zones; ++z) {
      const std::string id = fmt::format("{}_{}", line.id, z + 1);
      int s = model.AddContinuous("gamz_" + id, 0.0, cap);
      cv.zone_share[l][z] = s;
      half.Add(s, -0.5);
      int xf = partition.x[line.from - 1][z];
      int xt = partition.x[line.to - 1][z];
      // s <= cap * h and s <= cap * (2 - h), h = x_from + x_to
      LinExpr lo = Var(s);
      lo.Add(xf, -cap).Add(xt, -cap);
      model.AddConstraint("gin_" + id, lo, Sense::kLessEqual, 0.0);
      LinExpr hi = Var(s);
      hi.Add(xf, cap).Add(xt, cap);
      model.AddConstraint("gout_" + id, hi, Sense::kLessEqual, 2.0 * cap);
      LinExpr under = Var(s);
      under.Add(total, -1.0);
      model.AddConstraint("gsub_" + id, under, Sense::kLessEqual, 0.0);
    }
    model.AddConstraint(fmt::format("gdef_{}", line.id), half, Sense::kEqual,
                        0.0);
  }
  return cv;
}

ZonalReserveVars EmitZonalReserveKkt(Model& model, const PowerNetwork& net,
                                     const PartitionVars& partition) {
  if (partition.zones < 1 ||
      static_cast<int>(partition.x.size()) != net.num_buses()) {
    throw ConfigError("zonal reserve block needs the partition variables");
  }
  ZonalReserveVars rv;
  EmitDirection(model, net, partition, kUp, rv.up_req, rv.up_zone, rv.up,
                rv.kkt);
  EmitDirection(model, net, partition, kDn, rv.dn_req, rv.dn_zone, rv.dn,
                rv.kkt);
  return rv;
}

DayAheadKktVars EmitDayAheadKkt(Model& model, const PowerNetwork& net,
                                const GridMatrices& mats, const Exprs& r_up,
                                const Exprs& r_dn, const Exprs& margins,
                                double dual_bound) {
  if (static_cast<int>(r_up.size()) != net.num_generators() ||
      static_cast<int>(r_dn.size()) != net.num_generators() ||
      static_cast<int>(margins.size()) != net.num_lines()) {
    throw ConfigError("day-ahead block needs reserves and line margins");
  }
  const double U = dual_bound > 0.0 ? dual_bound : 10.0 * net.shed_cost;
  if (!(U > 0.0)) throw ConfigError("day-ahead dual bound must be positive");
  DayAheadKktVars dv;
  KktBlock& kkt = dv.kkt;
  dv.price = model.AddContinuous("price", -U, U);
  kkt.duals.push_back(dv.price);

  std::vector<LinExpr> bus_inj(net.num_buses());
  for (int n = 0; n < net.num_buses(); ++n) {
    bus_inj[n].AddConstant(-net.buses[n].load);
  }
  LinExpr balance;
  std::vector<LinExpr> station;  // generators, then wind farms
  std::vector<int> station_bus;
  for (int k = 0; k < net.num_generators(); ++k) {
    const Generator& g = net.generators[k];
    int p = model.AddContinuous(fmt::format("p_{}", g.id), g.p_min, g.p_max);
    dv.p.push_back(p);
    balance.Add(p, 1.0);
    bus_inj[g.bus - 1].Add(p, 1.0);
    int lo = model.AddContinuous(fmt::format("gplo_{}", g.id), 0.0, U);
    int up = model.AddContinuous(fmt::format("gpup_{}", g.id), 0.0, U);
    kkt.duals.push_back(lo);
    kkt.duals.push_back(up);
    const double G = Pad(g.p_max - g.p_min);
    LinExpr g_lo(g.p_min);
    g_lo.AddExpr(r_dn[k], 1.0).Add(p, -1.0);
    kkt.handles.push_back(milp::LinearizeComplementarity(
        model, fmt::format("cplo_{}", g.id), g_lo, lo, G, U));
    LinExpr g_up(-g.p_max);
    g_up.Add(p, 1.0).AddExpr(r_up[k], 1.0);
    kkt.handles.push_back(milp::LinearizeComplementarity(
        model, fmt::format("cpup_{}", g.id), g_up, up, G, U));
    LinExpr st;
    st.Add(dv.price, -1.0).Add(lo, -1.0).Add(up, 1.0);
    st.AddConstant(g.cost);
    station.push_back(std::move(st));
    station_bus.push_back(g.bus - 1);
  }
  for (const WindFarm& wf : net.wind) {
    int w = model.AddContinuous(fmt::format("w_{}", wf.id), 0.0, wf.forecast);
    dv.w.push_back(w);
    balance.Add(w, 1.0);
    bus_inj[wf.bus - 1].Add(w, 1.0);
    int lo = model.AddContinuous(fmt::format("gwlo_{}", wf.id), 0.0, U);
    int up = model.AddContinuous(fmt::format("gwup_{}", wf.id), 0.0, U);
    kkt.duals.push_back(lo);
    kkt.duals.push_back(up);
    const double G = Pad(wf.forecast);
    kkt.handles.push_back(milp::LinearizeComplementarity(
        model, fmt::format("cwlo_{}", wf.id), Var(w, -1.0), lo, G, U));
    LinExpr g_up(-wf.forecast);
    g_up.Add(w, 1.0);
    kkt.handles.push_back(milp::LinearizeComplementarity(
        model, fmt::format("cwup_{}", wf.id), g_up, up, G, U));
    LinExpr st;
    st.Add(dv.price, -1.0).Add(lo, -1.0).Add(up, 1.0);
    station.push_back(std::move(st));
    station_bus.push_back(wf.bus - 1);
  }
  model.AddConstraint("bal", balance, Sense::kEqual, net.TotalLoad());

  for (int l = 0; l < net.num_lines(); ++l) {
    const Line& line = net.lines[l];
    LinExpr flow;
    for (int n = 0; n < net.num_buses(); ++n) {
      double m = mats.ptdf(l, n);
      if (std::abs(m) > 1e-12) flow.AddExpr(bus_inj[n], m);
    }
    flow.Normalize();
    int fmax = model.AddContinuous(fmt::format("gfmax_{}", line.id), 0.0, U);
    int fmin = model.AddContinuous(fmt::format("gfmin_{}", line.id), 0.0, U);
    kkt.duals.push_back(fmax);
    kkt.duals.push_back(fmin);
    const double G = Pad(2.0 * line.rating);
    LinExpr g_max = flow;
    g_max.AddExpr(margins[l], 1.0).AddConstant(-line.rating);
    kkt.handles.push_back(milp::LinearizeComplementarity(
        model, fmt::format("cfmax_{}", line.id), g_max, fmax, G, U));
    LinExpr g_min = flow;
    g_min.AddExpr(margins[l], -1.0).AddConstant(line.rating);
    g_min = LinExpr().AddExpr(g_min, -1.0);
    kkt.handles.push_back(milp::LinearizeComplementarity(
        model, fmt::format("cfmin_{}", line.id), g_min, fmin, G, U));
    for (size_t i = 0; i < station.size(); ++i) {
      double m = mats.ptdf(l, station_bus[i]);
      if (std::abs(m) < 1e-12) continue;
      station[i].Add(fmax, m).Add(fmin, -m);
    }
  }
  for (size_t i = 0; i < station.size(); ++i) {
    LinExpr& st = station[i];
    st.Normalize();
    const std::string name =
        i < dv.p.size()
            ? fmt::format("stp_{}", net.generators[i].id)
            : fmt::format("stw_{}", net.wind[i - dv.p.size()].id);
    kkt.stationarity.push_back(
        model.AddConstraint(name, st, Sense::kEqual, 0.0));
  }
  return dv;
}

ModelStats Stats(const Model& model) {
  ModelStats s;
  s.variables = model.num_variables();
  s.constraints = model.num_constraints();
  for (const milp::Variable& v : model.variables()) {
    if (v.kind == milp::VarKind::kBinary) ++s.binaries;
    if (v.kind == milp::VarKind::kInteger) ++s.integers;
  }
  return s;
}

std::vector<ComplementarityHandle> FirstStage::complementarity() const {
  std::vector<ComplementarityHandle> out = reserve.kkt.handles;
  out.insert(out.end(), day_ahead.kkt.handles.begin(),
             day_ahead.kkt.handles.end());
  return out;
}

FirstStage EmitFirstStage(Model& model, const PowerNetwork& net,
                          const GridMatrices& mats,
                          const ZonalOptions& options) {
  FirstStage fs;
  fs.partition = EmitPartitionBlock(
      model, net,
      {options.zones, options.min_size, options.max_size,
       options.break_symmetry});
  fs.capacity = EmitCapacityBlock(model, net, fs.partition, options.chi);
  fs.reserve = EmitZonalReserveKkt(model, net, fs.partition);
  fs.day_ahead = EmitDayAheadKkt(model, net, mats, VarExprs(fs.reserve.up),
                                 VarExprs(fs.reserve.dn),
                                 VarExprs(fs.capacity.set_aside),
                                 options.dual_bound);
  for (int k = 0; k < net.num_generators(); ++k) {
    const Generator& g = net.generators[k];
    model.AddCost(fs.reserve.up[k], g.up_cost);
    model.AddCost(fs.reserve.dn[k], g.dn_cost);
    model.AddCost(fs.day_ahead.p[k], g.cost);
  }
  return fs;
}

MpecModel AssembleMpec(const PowerNetwork& net, const GridMatrices& mats,
                       const ScenarioSet& scenarios,
                       const ZonalOptions& options) {
  if (scenarios.num_farms() != net.num_wind()) {
    throw ConfigError(fmt::format("scenario set has {} farms, network has {}",
                                  scenarios.num_farms(), net.num_wind()));
  }
  MpecModel mpec;
  mpec.model.set_name("ZONAL");
  mpec.first = EmitFirstStage(mpec.model, net, mats, options);
  const FirstStage& fs = mpec.first;
  Exprs p = VarExprs(fs.day_ahead.p);
  Exprs w = VarExprs(fs.day_ahead.w);
  Exprs up = VarExprs(fs.reserve.up);
  Exprs dn = VarExprs(fs.reserve.dn);
  for (int s = 0; s < scenarios.size(); ++s) {
    mpec.balancing.push_back(AddBalancingBlock(
        mpec.model, net, mats, p, w, up, dn, scenarios.wind.col(s),
        scenarios.prob[s], false, fmt::format("s{}_", s + 1)));
  }
  mpec.stats = Stats(mpec.model);
  mpec.stats.complementarities =
      static_cast<int>(fs.complementarity().size());
  return mpec;
}

ReserveSchedule SolveZonalReserveMarket(const PowerNetwork& net,
                                        const Partition& partition,
                                        const std::vector<double>& up_req,
                                        const std::vector<double>& dn_req,
                                        const MarketOptions& options) {
  Model model;
  model.set_name("ZRESERVE");
  ReserveBlock block = AddReserveVariables(model, net, options.tie_break, "");
  const int zones = partition.num_zones();
  for (int z = 0; z < zones; ++z) {
    std::vector<milp::Term> up, dn;
    for (int k = 0; k < net.num_generators(); ++k) {
      if (partition.zone_of[net.generators[k].bus - 1] != z) continue;
      up.push_back({block.up[k], 1.0});
      dn.push_back({block.dn[k], 1.0});
    }
    model.AddConstraint(fmt::format("req_up_{}", z + 1), up,
                        Sense::kGreaterEqual, up_req[z]);
    model.AddConstraint(fmt::format("req_dn_{}", z + 1), dn,
                        Sense::kGreaterEqual, dn_req[z]);
  }
  Solution sol = milp::SolveLp(model, options.solver);
  ReserveSchedule out;
  out.status = sol.status;
  if (sol.status != Status::kOptimal) return out;
  out.up = Read(sol.values, block.up);
  out.dn = Read(sol.values, block.dn);
  out.cost = ReserveCost(net, out.up, out.dn);
  return out;
}

std::vector<int> SeedPartition(const PowerNetwork& net, int zones,
                               int min_size, int max_size) {
  const int n = net.num_buses();
  if (zones < 1 || zones * min_size > n) return {};
  if (max_size <= 0) max_size = n - (zones - 1) * min_size;
  if (zones == 1) {
    if (n > max_size) return {};
    return std::vector<int>(n, 0);
  }
  std::vector<std::vector<int>> adj(n);
  for (const Line& l : net.lines) {
    adj[l.from - 1].push_back(l.to - 1);
    adj[l.to - 1].push_back(l.from - 1);
  }
  std::vector<int> parent(n, -2), order;
  std::queue<int> queue;
  parent[0] = -1;
  queue.push(0);
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop();
    order.push_back(u);
    for (int v : adj[u]) {
      if (parent[v] == -2) {
        parent[v] = u;
        queue.push(v);
      }
    }
  }
  if (static_cast<int>(order.size()) != n) return {};

  std::vector<int> zone_of(n, -1);
  int remaining = n;
  for (int k = zones; k >= 2; --k) {
    std::vector<int> sub(n, 0);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      int u = *it;
      if (zone_of[u] >= 0) continue;
      sub[u] += 1;
      if (parent[u] >= 0) sub[parent[u]] += sub[u];
    }
    const double target = static_cast<double>(remaining) / k;
    const int hi = std::min(max_size, remaining - (k - 1) * min_size);
    int best = -1;
    for (int u = 1; u < n; ++u) {
      if (zone_of[u] >= 0) continue;
      int s = sub[u];
      if (s < min_size || s > hi || remaining - s > (k - 1) * max_size) {
        continue;
      }
      if (best < 0 || std::abs(s - target) < std::abs(sub[best] - target)) {
        best = u;
      }
    }
    if (best < 0) return {};
    // Claim the subtree below `best`.
    std::vector<bool> below(n, false);
    for (int u : order) {
      if (zone_of[u] >= 0) continue;
      below[u] = u == best || (parent[u] >= 0 && below[parent[u]]);
    }
    for (int u = 0; u < n; ++u) {
      if (below[u]) zone_of[u] = k - 1;
    }
    remaining -= sub[best];
  }
  for (int& z : zone_of) {
    if (z < 0) z = 0;
  }
  return zone_of;
}

std::vector<double> DesignPoint(const Model& model, const FirstStage& first,
                                const PowerNetwork& net,
                                const Partition& partition,
                                const std::vector<double>& up_req,
                                const std::vector<double>& dn_req,
                                const ReserveSchedule& reserve,
                                const DayAheadSchedule& day_ahead,
                                const std::vector<double>& set_aside) {
  std::vector<double> v(model.num_variables(), 0.0);
  const PartitionVars& pv = first.partition;
  for (int n = 0; n < net.num_buses(); ++n) {
    for (int z = 0; z < pv.zones; ++z) {
      v[pv.x[n][z]] = partition.zone_of[n] == z ? 1.0 : 0.0;
      v[pv.root[n][z]] = partition.roots[z] == n + 1 ? 1.0 : 0.0;
    }
  }
  for (int z = 0; z < pv.zones; ++z) v[pv.size[z]] = partition.sizes[z];
  for (const milp::ProductHandle& h : pv.products()) {
    v[h.aux] = v[h.binary] * v[h.integer];
  }
  const CapacityVars& cv = first.capacity;
  for (int l = 0; l < net.num_lines(); ++l) {
    double g = set_aside.empty() ? 0.0 : set_aside[l];
    v[cv.set_aside[l]] = g;
    for (int z = 0; z < pv.zones; ++z) {
      int s = cv.zone_share[l][z];
      if (s >= 0 && partition.Endpoints(net, l, z) == 1) v[s] = g;
    }
  }
  const ZonalReserveVars& rv = first.reserve;
  for (int z = 0; z < pv.zones; ++z) {
    v[rv.up_req[z]] = up_req[z];
    v[rv.dn_req[z]] = dn_req[z];
  }
  for (int k = 0; k < net.num_generators(); ++k) {
    v[rv.up[k]] = reserve.up[k];
    v[rv.dn[k]] = reserve.dn[k];
    int z = partition.zone_of[net.generators[k].bus - 1];
    if (rv.up_zone[k][z] >= 0) v[rv.up_zone[k][z]] = reserve.up[k];
    if (rv.dn_zone[k][z] >= 0) v[rv.dn_zone[k][z]] = reserve.dn[k];
  }
  const DayAheadKktVars& dv = first.day_ahead;
  for (int k = 0; k < net.num_generators(); ++k) v[dv.p[k]] = day_ahead.p[k];
  for (int j = 0; j < net.num_wind(); ++j) v[dv.w[j]] = day_ahead.w[j];
  for (const ComplementarityHandle& h : first.complementarity()) {
    double g = h.g.Evaluate(v);
    v[h.binary] = g >= -1e-7 * std::max(1.0, h.g_bound) ? 1.0 : 0.0;
  }
  return v;
}

std::vector<std::vector<double>> DesignStarts(const Model& model,
                                              const FirstStage& first,
                                              const PowerNetwork& net,
                                              const GridMatrices& mats,
                                              const ScenarioSet& scenarios,
                                              const ZonalOptions& options) {
  std::vector<std::vector<double>> starts;
  std::vector<int> seed = SeedPartition(net, options.zones, options.min_size,
                                        EffectiveMax(net, options));
  if (seed.empty()) return starts;
  Partition partition =
      Canonical(net, MakePartition(net, seed, options.zones));
  MarketOptions market{options.solver, true};

  auto add = [&](const ReserveSchedule& system) {
    if (!system.ok()) return;
    std::vector<double> up = ZoneSums(partition, net, system.up);
    std::vector<double> dn = ZoneSums(partition, net, system.dn);
    ReserveSchedule zonal =
        SolveZonalReserveMarket(net, partition, up, dn, market);
    if (!zonal.ok()) return;
    DayAheadSchedule da = SolveDayAhead(net, mats, zonal, {}, market);
    if (!da.ok()) return;
    starts.push_back(
        DesignPoint(model, first, net, partition, up, dn, zonal, da, {}));
  };
  for (double q : {0.01, 0.03, 0.05, 0.10}) {
    Requirements req = DeterministicRequirements(scenarios, q);
    add(SolveReserveMarket(net, req.up, req.dn, market));
  }
  try {
    add(SolveStochastic(net, mats, scenarios, market).reserve);
  } catch (const Error&) {
  }
  return starts;
}

ZonalOutcome EvaluateDesign(const FirstStage& first,
                            const std::vector<double>& values,
                            const PowerNetwork& net, const GridMatrices& mats,
                            const ScenarioSet& scenarios,
                            const ZonalOptions& options) {
  ZonalOutcome out;
  out.partition = ExtractPartition(net, first.partition, values);
  const ZonalReserveVars& rv = first.reserve;
  out.up_req = Read(values, rv.up_req);
  out.dn_req = Read(values, rv.dn_req);
  for (int k = 0; k < net.num_generators(); ++k) {
    out.up_zone.push_back(Read(values, rv.up_zone[k]));
    out.dn_zone.push_back(Read(values, rv.dn_zone[k]));
  }
  out.reserve.up = Read(values, rv.up);
  out.reserve.dn = Read(values, rv.dn);
  out.reserve.cost = ReserveCost(net, out.reserve.up, out.reserve.dn);
  out.set_aside = Read(values, first.capacity.set_aside);

  const DayAheadKktVars& dv = first.day_ahead;
  out.day_ahead.p = Read(values, dv.p);
  out.day_ahead.w = Read(values, dv.w);
  Eigen::VectorXd f =
      Flows(mats, Injection(net, out.day_ahead.p, out.day_ahead.w));
  out.day_ahead.flow.assign(f.data(), f.data() + f.size());
  out.day_ahead.cost = DayAheadCost(net, out.day_ahead.p);
  out.day_ahead.price = values[dv.price];

  MarketOptions market{options.solver, true};
  double expected = 0.0;
  for (int s = 0; s < scenarios.size(); ++s) {
    out.balancing.push_back(SolveBalancing(net, mats, out.day_ahead,
                                           out.reserve, scenarios.wind.col(s),
                                           market));
    expected += scenarios.prob[s] * out.balancing.back().cost;
  }
  out.cost = CostBreakdown::Of(out.reserve.cost, out.day_ahead.cost, expected);

  Certificate& cert = out.certificate;
  cert.partition_violations = VerifyPartition(
      net, out.partition, options.min_size, EffectiveMax(net, options));
  cert.partition_ok = cert.partition_violations.empty();
  MarketOptions exact{options.solver, false};
  cert.reserve_cost = out.reserve.cost;
  cert.day_ahead_cost = out.day_ahead.cost;
  ReserveSchedule rlp = SolveZonalReserveMarket(net, out.partition, out.up_req,
                                                out.dn_req, exact);
  DayAheadSchedule dlp =
      SolveDayAhead(net, mats, out.reserve, out.set_aside, exact);
  cert.reserve_lp_cost = rlp.ok() ? rlp.cost : NAN;
  cert.day_ahead_lp_cost = dlp.ok() ? dlp.cost : NAN;
  cert.max_rel_error =
      (rlp.ok() && dlp.ok())
          ? std::max(RelError(cert.reserve_cost, cert.reserve_lp_cost),
                     RelError(cert.day_ahead_cost, cert.day_ahead_lp_cost))
          : INFINITY;
  cert.audit = milp::AuditBigM(values, first.complementarity(),
                               first.partition.products());
  return out;
}

ZonalOutcome SolveExtensive(const MpecModel& mpec, const PowerNetwork& net,
                            const GridMatrices& mats,
                            const ScenarioSet& scenarios,
                            const ZonalOptions& options) {
  std::vector<std::vector<double>> starts;
  if (options.warm_start) {
    starts = DesignStarts(mpec.model, mpec.first, net, mats, scenarios,
                          options);
  }
  Solution sol = milp::SolveMilp(mpec.model, options.solver, starts);
  if (!sol.has_incumbent) {
    if (sol.status == Status::kInfeasible) {
      throw InfeasibleError(fmt::format(
          "no feasible zonal design with {} zones of at least {} buses",
          options.zones, options.min_size));
    }
    throw Error(ErrorKind::kSolverLimit,
                fmt::format("zonal search stopped ({}) without a design",
                            milp::StatusName(sol.status)));
  }
  ZonalOutcome out =
      EvaluateDesign(mpec.first, sol.values, net, mats, scenarios, options);
  out.status = sol.status;
  out.objective = sol.objective;
  out.best_bound = sol.best_bound;
  out.mip_gap = sol.mip_gap;
  out.nodes = sol.nodes;
  out.seconds = sol.seconds;
  out.stats = mpec.stats;
  const Certificate& c = out.certificate;
  if (!c.ok(options.certify_tol)) {
    std::string why;
    for (const std::string& v : c.partition_violations) why += "; " + v;
    if (c.max_rel_error > options.certify_tol) {
      why += fmt::format("; lower-level mismatch {:.3g} (reserve {} vs {}, "
                         "day-ahead {} vs {})",
                         c.max_rel_error, c.reserve_cost, c.reserve_lp_cost,
                         c.day_ahead_cost, c.day_ahead_lp_cost);
    }
    for (const milp::BigMFlag& f : c.audit.flags) {
      why += fmt::format("; {} big-M binding on {} ({} of {})", f.side, f.name,
                         f.value, f.bound);
    }
    throw Error(ErrorKind::kCertification,
                "zonal solution failed certification" + why);
  }
  return out;
}

ZonalOutcome SolveZonal(const PowerNetwork& net, const GridMatrices& mats,
                        const ScenarioSet& scenarios,
                        const ZonalOptions& options) {
  MpecModel mpec = AssembleMpec(net, mats, scenarios, options);
  return SolveExtensive(mpec, net, mats, scenarios, options);
}

std::vector<ZoneRow> ZoneTable(const PowerNetwork& net,
                               const ZonalOutcome& outcome) {
  const int zones = outcome.partition.num_zones();
  std::vector<ZoneRow> rows(zones + 1);
  std::vector<double> cost(zones + 1, 0.0);
  for (int z = 0; z < zones; ++z) rows[z].zone = z + 1;
  for (int k = 0; k < net.num_generators(); ++k) {
    const Generator& g = net.generators[k];
    for (int z = 0; z < zones; ++z) {
      double up = outcome.up_zone[k][z], dn = outcome.dn_zone[k][z];
      rows[z].up += up;
      rows[z].dn += dn;
      cost[z] += g.up_cost * up + g.dn_cost * dn;
    }
  }
  ZoneRow& total = rows[zones];
  for (int z = 0; z <= zones; ++z) {
    if (z < zones) {
      total.up += rows[z].up;
      total.dn += rows[z].dn;
      cost[zones] += cost[z];
    }
    rows[z].total = rows[z].up + rows[z].dn;
    rows[z].avg_cost = rows[z].total > 0 ? cost[z] / rows[z].total : 0.0;
  }
  return rows;
}

StabilityPoint EvaluateStability(const PowerNetwork& net,
                                 const GridMatrices& mats,
                                 const ScenarioSet& scenarios,
                                 const ReserveSchedule& reserve,
                                 const std::vector<double>& set_aside,
                                 const MarketOptions& options) {
  StabilityPoint pt;
  pt.cost =
      EvaluateReserves(net, mats, scenarios, reserve, set_aside, options)
          .cost.total;
  pt.stochastic_cost = SolveStochastic(net, mats, scenarios, options).cost.total;
  pt.ratio = pt.cost / pt.stochastic_cost;
  return pt;
}

StabilityPoint StochasticSelfCheck(const PowerNetwork& net,
                                   const GridMatrices& mats,
                                   const ScenarioSet& scenarios,
                                   const MarketOptions& options) {
  MarketResult st = SolveStochastic(net, mats, scenarios, options);
  double expected = 0.0;
  for (int s = 0; s < scenarios.size(); ++s) {
    expected += scenarios.prob[s] *
                SolveBalancing(net, mats, st.day_ahead, st.reserve,
                               scenarios.wind.col(s), options)
                    .cost;
  }
  StabilityPoint pt;
  pt.cost = st.reserve.cost + st.day_ahead.cost + expected;
  pt.stochastic_cost = st.cost.total;
  pt.ratio = pt.cost / pt.stochastic_cost;
  return pt;
}

std::vector<StabilityPoint> RunStability(
    const PowerNetwork& net, const GridMatrices& mats,
    const std::vector<ScenarioSet>& sets, const ReserveSchedule& reserve,
    const std::vector<double>& set_aside, const MarketOptions& options) {
  std::vector<StabilityPoint> out;
  for (const ScenarioSet& set : sets) {
    out.push_back(
        EvaluateStability(net, mats, set, reserve, set_aside, options));
  }
  return out;
}

}  // namespace rzone
