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

#include "rzone/benders.h"

#include <fmt/core.h>

#include <chrono>
#include <cmath>
#include <future>

#include "rzone/error.h"

namespace rzone {

using milp::LinExpr;
using milp::Model;
using milp::Sense;

namespace {

double Dot(const std::vector<double>& a, const std::vector<double>& b,
           const std::vector<double>& c) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * (b[i] - c[i]);
  return s;
}

std::vector<double> Raw(const std::vector<double>& values,
                        const std::vector<int>& vars) {
  std::vector<double> out;
  for (int v : vars) out.push_back(values[v]);
  return out;
}

// Adds slope . (var - anchor) to `cut` and returns slope . anchor.
double AddTerms(LinExpr& cut, const std::vector<int>& vars,
                const std::vector<double>& slope,
                const std::vector<double>& anchor) {
  double offset = 0.0;
  for (size_t i = 0; i < vars.size(); ++i) {
    cut.Add(vars[i], -slope[i]);
    offset += slope[i] * anchor[i];
  }
  return offset;
}

}  // namespace

FirstStageValues ReadFirstStage(const FirstStage& first,
                                const std::vector<double>& values) {
  return {Raw(values, first.reserve.up), Raw(values, first.reserve.dn),
          Raw(values, first.day_ahead.p), Raw(values, first.day_ahead.w)};
}

double Cut::Evaluate(const FirstStageValues& x) const {
  return cost + Dot(slope.up, x.up, anchor.up) +
         Dot(slope.dn, x.dn, anchor.dn) + Dot(slope.p, x.p, anchor.p) +
         Dot(slope.w, x.w, anchor.w);
}

double BalancingLowerBound(const PowerNetwork& net) {
  double bound = 0.0;
  for (const Generator& g : net.generators) bound -= g.cost * g.dn_cap;
  return bound;
}

MasterState BuildMaster(const PowerNetwork& net, const GridMatrices& mats,
                        const std::vector<double>& prob,
                        const ZonalOptions& options, double theta0) {
  MasterState master;
  master.model.set_name("MASTER");
  master.first = EmitFirstStage(master.model, net, mats, options);
  master.theta0 = theta0;
  for (size_t s = 0; s < prob.size(); ++s) {
    master.theta.push_back(master.model.AddContinuous(
        fmt::format("theta_{}", s + 1), theta0, milp::kInf, prob[s]));
  }
  return master;
}

SubproblemResult SolveSubproblem(const PowerNetwork& net,
                                 const GridMatrices& mats,
                                 const Eigen::VectorXd& wind,
                                 const FirstStageValues& x,
                                 const milp::SolverParams& params) {
  Model model;
  model.set_name("SUB");
  auto pin = [&](const char* tag, const std::vector<double>& v,
                 std::vector<int>& rows) {
    std::vector<int> vars;
    for (size_t i = 0; i < v.size(); ++i) {
      int c = model.AddContinuous(fmt::format("{}_{}", tag, i + 1),
                                  -milp::kInf, milp::kInf);
      vars.push_back(c);
      rows.push_back(model.AddConstraint(fmt::format("fix{}_{}", tag, i + 1),
                                         {{c, 1.0}}, Sense::kEqual, v[i]));
    }
    return vars;
  };
  std::vector<int> up_rows, dn_rows, p_rows, w_rows;
  std::vector<int> up = pin("rup", x.up, up_rows);
  std::vector<int> dn = pin("rdn", x.dn, dn_rows);
  std::vector<int> p = pin("p", x.p, p_rows);
  std::vector<int> w = pin("w", x.w, w_rows);
  AddBalancingBlock(model, net, mats, VarExprs(p), VarExprs(w), VarExprs(up),
                    VarExprs(dn), wind, 1.0, false, "");
  milp::Solution sol = milp::SolveLp(model, params);
  if (sol.status == milp::Status::kInfeasible) {
    throw InfeasibleError("balancing subproblem infeasible at the first stage");
  }
  if (!sol.ok()) {
    throw Error(ErrorKind::kSolverFailure,
                fmt::format("balancing subproblem returned {}",
                            milp::StatusName(sol.status)));
  }
  SubproblemResult out;
  out.cost = sol.objective;
  auto duals = [&](const std::vector<int>& rows) {
    std::vector<double> d;
    for (int r : rows) d.push_back(sol.duals[r]);
    return d;
  };
  out.slope = {duals(up_rows), duals(dn_rows), duals(p_rows), duals(w_rows)};
  return out;
}

void AddCuts(MasterState& master, const FirstStageValues& x,
             const std::vector<SubproblemResult>& results) {
  ++master.iteration;
  const FirstStage& fs = master.first;
  for (size_t s = 0; s < results.size(); ++s) {
    Cut cut{static_cast<int>(s), master.iteration, results[s].cost,
            results[s].slope, x};
    // theta_s - slope . x >= cost - slope . anchor
    LinExpr e;
    e.Add(master.theta[s], 1.0);
    double offset = AddTerms(e, fs.reserve.up, cut.slope.up, x.up) +
                    AddTerms(e, fs.reserve.dn, cut.slope.dn, x.dn) +
                    AddTerms(e, fs.day_ahead.p, cut.slope.p, x.p) +
                    AddTerms(e, fs.day_ahead.w, cut.slope.w, x.w);
    e.Normalize();
    master.model.AddConstraint(
        fmt::format("cut_{}_{}", s + 1, master.iteration), e,
        Sense::kGreaterEqual, cut.cost - offset);
    master.cuts.push_back(std::move(cut));
  }
}

std::string BendersTrace::Csv() const {
  std::string out = "iteration,lower,upper,gap,seconds\n";
  for (const TraceRow& r : rows) {
    out += fmt::format("{},{:.10g},{:.10g},{:.6g},{:.3f}\n", r.iteration,
                       r.lower, r.upper, r.gap, r.seconds);
  }
  return out;
}

BendersResult RunBenders(const PowerNetwork& net, const GridMatrices& mats,
                         const ScenarioSet& scenarios,
                         const BendersOptions& options) {
  if (!(options.epsilon > 0.0)) {
    throw ConfigError("Benders tolerance must be positive");
  }
  if (scenarios.num_farms() != net.num_wind()) {
    throw ConfigError(fmt::format("scenario set has {} farms, network has {}",
                                  scenarios.num_farms(), net.num_wind()));
  }
  const auto start = std::chrono::steady_clock::now();
  const double theta0 = std::isnan(options.theta0) ? BalancingLowerBound(net)
                                                   : options.theta0;
  MasterState master =
      BuildMaster(net, mats, scenarios.prob, options.zonal, theta0);
  const int S = scenarios.size();
  const int jobs = std::max(1, options.jobs);

  std::vector<std::vector<double>> starts;
  if (options.zonal.warm_start) {
    starts = DesignStarts(master.model, master.first, net, mats, scenarios,
                          options.zonal);
  }
  BendersResult result;
  double lower = -milp::kInf;
  double upper = milp::kInf;
  std::vector<double> best;
  for (int it = 1; it <= options.max_iter; ++it) {
    milp::Solution sol =
        milp::SolveMilp(master.model, options.zonal.solver, starts);
    if (!sol.has_incumbent) {
      if (sol.status == milp::Status::kInfeasible) {
        throw InfeasibleError(fmt::format(
            "no feasible zonal design with {} zones of at least {} buses",
            options.zonal.zones, options.zonal.min_size));
      }
      throw Error(ErrorKind::kSolverLimit,
                  fmt::format("master stopped ({}) without a design",
                              milp::StatusName(sol.status)));
    }
    lower = std::max(lower, sol.best_bound);
    FirstStageValues x = ReadFirstStage(master.first, sol.values);

    std::vector<SubproblemResult> sub(S);
    for (int s0 = 0; s0 < S; s0 += jobs) {
      std::vector<std::future<SubproblemResult>> batch;
      for (int s = s0; s < std::min(S, s0 + jobs); ++s) {
        batch.push_back(std::async(
            jobs > 1 ? std::launch::async : std::launch::deferred, [&, s] {
              return SolveSubproblem(net, mats, scenarios.wind.col(s), x,
                                     options.zonal.solver);
            }));
      }
      for (int s = s0; s < std::min(S, s0 + jobs); ++s) {
        sub[s] = batch[s - s0].get();
      }
    }
    double expected = 0.0, approx = 0.0;
    for (int s = 0; s < S; ++s) {
      expected += scenarios.prob[s] * sub[s].cost;
      approx += scenarios.prob[s] * sol.values[master.theta[s]];
    }
    const double first_cost = sol.objective - approx;
    if (first_cost + expected < upper) {
      upper = first_cost + expected;
      best = sol.values;
    }
    const double seconds = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - start)
                               .count();
    result.trace.rows.push_back(
        {it, lower, upper, milp::RelativeGap(upper, lower), seconds});
    result.iterations = it;
    if (std::abs(approx - expected) <= options.epsilon ||
        upper - lower <= options.epsilon) {
      result.converged = true;
      break;
    }
    AddCuts(master, x, sub);
    starts = {sol.values};
  }
  result.cuts = static_cast<int>(master.cuts.size());

  ZonalOutcome out =
      EvaluateDesign(master.first, best, net, mats, scenarios, options.zonal);
  out.status = result.converged ? milp::Status::kOptimal
                                : milp::Status::kIterationLimit;
  out.objective = upper;
  out.best_bound = lower;
  out.mip_gap = milp::RelativeGap(upper, lower);
  out.seconds = result.trace.rows.back().seconds;
  out.stats = Stats(master.model);
  out.stats.complementarities =
      static_cast<int>(master.first.complementarity().size());
  if (!out.certificate.ok(options.zonal.certify_tol)) {
    throw Error(ErrorKind::kCertification,
                fmt::format("Benders design failed certification "
                            "(lower-level mismatch {:.3g}, {} big-M flags)",
                            out.certificate.max_rel_error,
                            out.certificate.audit.flags.size()));
  }
  result.outcome = std::move(out);
  return result;
}

}  // namespace rzone
