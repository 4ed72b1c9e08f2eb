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

#include "rzone/milp/solver.h"

#include <fmt/core.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <memory>
#include <optional>

#include "rzone/error.h"
#include "rzone/milp/simplex.h"

namespace rzone::milp {
namespace {

using Clock = std::chrono::steady_clock;

Simplex::Options LpOptions(const SolverParams& p) {
  Simplex::Options o;
  o.feas_tol = p.feas_tol;
  o.opt_tol = p.opt_tol;
  o.bland_after = p.bland_after;
  o.iteration_limit = p.lp_iteration_limit;
  return o;
}

// Activity-based bound tightening over the linear rows.
class Propagator {
 public:
  explicit Propagator(const Model& model) : model_(model) {
    rows_of_.resize(model.num_variables());
    for (int i = 0; i < model.num_constraints(); ++i) {
      for (const Term& t : model.constraint(i).terms) rows_of_[t.var].push_back(i);
    }
  }

  // Tightens lo/up in place. Returns false if the box is proven empty.
  // An empty `seeds` list means every row is examined.
  bool Run(std::vector<double>& lo, std::vector<double>& up,
           const std::vector<int>& seeds) const {
    const int m = model_.num_constraints();
    std::vector<char> queued(m, 0);
    std::deque<int> queue;
    auto push_rows = [&](int var) {
      for (int i : rows_of_[var]) {
        if (!queued[i]) {
          queued[i] = 1;
          queue.push_back(i);
        }
      }
    };
    if (seeds.empty()) {
      for (int i = 0; i < m; ++i) {
        queued[i] = 1;
        queue.push_back(i);
      }
    } else {
      for (int v : seeds) push_rows(v);
    }
    int64_t budget = 20LL * std::max(m, 1) + 1000;
    while (!queue.empty() && budget-- > 0) {
      const int i = queue.front();
      queue.pop_front();
      queued[i] = 0;
      if (!ProcessRow(i, lo, up, push_rows)) return false;
    }
    return true;
  }

 private:
  template <typename Push>
  bool ProcessRow(int i, std::vector<double>& lo, std::vector<double>& up,
                  Push& push_rows) const {
    const Constraint& c = model_.constraint(i);
    const double row_lo = c.RowLower();
    const double row_up = c.RowUpper();
    double min_act = 0.0;
    double max_act = 0.0;
    int min_inf = 0;
    int max_inf = 0;
    for (const Term& t : c.terms) {
      const double l = lo[t.var];
      const double u = up[t.var];
      if (t.coef > 0) {
        if (std::isinf(l)) ++min_inf; else min_act += t.coef * l;
        if (std::isinf(u)) ++max_inf; else max_act += t.coef * u;
      } else {
        if (std::isinf(u)) ++min_inf; else min_act += t.coef * u;
        if (std::isinf(l)) ++max_inf; else max_act += t.coef * l;
      }
    }
    if (min_inf == 0 && min_act > row_up + 1e-6 * std::max(1.0, std::abs(row_up))) {
      return false;
    }
    if (max_inf == 0 && max_act < row_lo - 1e-6 * std::max(1.0, std::abs(row_lo))) {
      return false;
    }
    if ((min_inf > 1 || std::isinf(row_up)) && (max_inf > 1 || std::isinf(row_lo))) {
      return true;
    }
    for (const Term& t : c.terms) {
      const double a = t.coef;
      if (std::abs(a) < 1e-9) continue;
      const int v = t.var;
      const double l = lo[v];
      const double u = up[v];
      const double own_min = a > 0 ? l : u;
      const double own_max = a > 0 ? u : l;
      // a*x <= row_up - (min activity of the others)
      if (std::isfinite(row_up)) {
        double rest;
        bool ok;
        if (std::isinf(own_min)) {
          ok = min_inf == 1;
          rest = min_act;
        } else {
          ok = min_inf == 0;
          rest = min_act - a * own_min;
        }
        if (ok) {
          const double b = (row_up - rest) / a;
          if (a > 0 ? !Tighten(v, b, true, lo, up) : !Tighten(v, b, false, lo, up)) {
            return false;
          }
        }
      }
      if (std::isfinite(row_lo)) {
        double rest;
        bool ok;
        if (std::isinf(own_max)) {
          ok = max_inf == 1;
          rest = max_act;
        } else {
          ok = max_inf == 0;
          rest = max_act - a * own_max;
        }
        if (ok) {
          const double b = (row_lo - rest) / a;
          if (a > 0 ? !Tighten(v, b, false, lo, up) : !Tighten(v, b, true, lo, up)) {
            return false;
          }
        }
      }
      if (lo[v] != l || up[v] != u) push_rows(v);
    }
    return true;
  }

  // Applies x <= b (is_upper) or x >= b. Returns false on an empty domain.
  bool Tighten(int v, double b, bool is_upper, std::vector<double>& lo,
               std::vector<double>& up) const {
    if (!std::isfinite(b)) return true;
    const bool integral = model_.variable(v).is_integral();
    if (!integral && std::abs(b - std::round(b)) <= 1e-9 * std::max(1.0, std::abs(b))) {
      b = std::round(b);
    }
    if (is_upper) {
      double nb = integral ? std::floor(b + 1e-6) : b;
      if (!integral && !(nb < up[v] - 1e-4 * std::max(1.0, std::abs(up[v])))) return true;
      if (nb >= up[v]) return true;
      if (nb < lo[v]) {
        if (nb < lo[v] - 1e-6 * std::max(1.0, std::abs(lo[v]))) return false;
        nb = lo[v];
      }
      up[v] = nb;
    } else {
      double nb = integral ? std::ceil(b - 1e-6) : b;
      if (!integral && !(nb > lo[v] + 1e-4 * std::max(1.0, std::abs(lo[v])))) return true;
      if (nb <= lo[v]) return true;
      if (nb > up[v]) {
        if (nb > up[v] + 1e-6 * std::max(1.0, std::abs(up[v]))) return false;
        nb = up[v];
      }
      lo[v] = nb;
    }
    return true;
  }

  const Model& model_;
  std::vector<std::vector<int>> rows_of_;
};

struct Branch {
  int var;
  double lower;
  double upper;
};

struct Node {
  int64_t id;
  double bound;
  int depth;
  std::vector<Branch> branches;
  std::shared_ptr<const Simplex::Basis> basis;
};

class BranchAndBound {
 public:
  BranchAndBound(const Model& model, const SolverParams& params)
      : model_(model),
        params_(params),
        lp_(model, LpOptions(params)),
        propagator_(model),
        start_(Clock::now()) {
    const int n = model.num_variables();
    root_lo_.resize(n);
    root_up_.resize(n);
    for (int j = 0; j < n; ++j) {
      const Variable& v = model.variable(j);
      root_lo_[j] = v.is_integral() ? std::ceil(v.lower - 1e-9) : v.lower;
      root_up_[j] = v.is_integral() ? std::floor(v.upper + 1e-9) : v.upper;
    }
    cur_lo_ = model_lower();
    cur_up_ = model_upper();
  }

  Solution Run(const std::vector<std::vector<double>>& starts) {
    Solution sol;
    if (!propagator_.Run(root_lo_, root_up_, {})) {
      sol.status = Status::kInfeasible;
      return Finish(sol);
    }
    for (const auto& s : starts) TryStart(s);

    std::vector<Node> open;
    open.push_back({next_id_++, -kInf, 0, {}, nullptr});
    std::optional<Node> plunge;
    bool limit_hit = false;
    Status limit_status = Status::kGapLimit;

    while (plunge || !open.empty()) {
      if (nodes_ >= params_.node_limit || Elapsed() > params_.time_limit) {
        limit_hit = true;
        break;
      }
      Node node;
      if (plunge) {
        node = std::move(*plunge);
        plunge.reset();
      } else {
        node = PopNext(open);
      }
      if (has_incumbent_ && node.bound >= incumbent_obj_ - GapTol()) {
        pruned_bound_ = std::min(pruned_bound_, node.bound);
        continue;
      }
      ++nodes_;
      if (params_.log_every > 0 && nodes_ % params_.log_every == 0) {
        fmt::print(stderr, "  nodes {:>8}  open {:>7}  incumbent {:>14.6g}  bound {:>14.6g}\n",
                   nodes_, open.size(), has_incumbent_ ? incumbent_obj_ : kInf,
                   OpenBound(open, node.bound));
      }

      std::vector<double> lo = root_lo_;
      std::vector<double> up = root_up_;
      std::vector<int> seeds;
      for (const Branch& b : node.branches) {
        lo[b.var] = std::max(lo[b.var], b.lower);
        up[b.var] = std::min(up[b.var], b.upper);
        seeds.push_back(b.var);
      }
      if (!propagator_.Run(lo, up, seeds)) continue;
      ApplyBounds(lo, up);
      if (node.basis) lp_.SetBasis(*node.basis);
      LpStatus st = SolveNodeLp();
      if (st == LpStatus::kIterationLimit) {
        if (lp_.iterations() >= params_.lp_iteration_limit) {
          limit_hit = true;
          limit_status = Status::kIterationLimit;
          open.push_back(std::move(node));
          break;
        }
        // Numerical failure: the subtree is dropped, its bound kept.
        pruned_bound_ = std::min(pruned_bound_, node.bound);
        unresolved_ = true;
        continue;
      }
      if (st == LpStatus::kInfeasible) continue;
      if (st == LpStatus::kUnbounded) {
        if (node.depth == 0 && !has_incumbent_) {
          sol.status = Status::kUnbounded;
          return Finish(sol);
        }
        continue;
      }
      const double obj = lp_.objective() + model_.objective_offset();
      if (node.depth == 0) root_bound_ = obj;
      if (has_incumbent_ && obj >= incumbent_obj_ - GapTol()) {
        pruned_bound_ = std::min(pruned_bound_, obj);
        continue;
      }
      const std::vector<double> x = lp_.PrimalValues();
      const int var = SelectBranchVariable(x);
      if (var < 0) {
        AcceptIntegral(x);
        continue;
      }
      auto basis = std::make_shared<const Simplex::Basis>(lp_.GetBasis());
      const double v = x[var];
      const double fl = std::floor(v);
      Node down{next_id_++, obj, node.depth + 1, node.branches, basis};
      down.branches.push_back({var, lo[var], fl});
      Node upn{next_id_++, obj, node.depth + 1, std::move(node.branches), basis};
      upn.branches.push_back({var, fl + 1.0, up[var]});
      const bool prefer_up = v - fl >= 0.5;
      if (prefer_up) {
        open.push_back(std::move(down));
        plunge = std::move(upn);
      } else {
        open.push_back(std::move(upn));
        plunge = std::move(down);
      }
    }

    double bound = pruned_bound_;
    if (plunge) bound = std::min(bound, plunge->bound);
    for (const Node& n : open) bound = std::min(bound, n.bound);
    if (has_incumbent_) bound = std::min(bound, incumbent_obj_);
    if (unresolved_ && !limit_hit) {
      limit_hit = true;
      if (!std::isfinite(bound)) bound = root_bound_;
    }
    if (!limit_hit) {
      sol.status = has_incumbent_ ? Status::kOptimal : Status::kInfeasible;
    } else if (!has_incumbent_) {
      sol.status = Status::kIterationLimit;
    } else if (limit_status == Status::kIterationLimit) {
      sol.status = Status::kIterationLimit;
    } else {
      sol.status = Status::kGapLimit;
    }
    if (has_incumbent_) {
      if (!std::isfinite(bound)) bound = incumbent_obj_;
      sol.best_bound = bound;
      sol.mip_gap = RelativeGap(incumbent_obj_, bound);
      if (sol.status == Status::kGapLimit && sol.mip_gap <= params_.rel_gap) {
        sol.status = Status::kOptimal;
      }
    } else {
      sol.best_bound = std::isfinite(bound) ? bound : root_bound_;
    }
    return Finish(sol);
  }

 private:
  std::vector<double> model_lower() const {
    std::vector<double> v(model_.num_variables());
    for (int j = 0; j < model_.num_variables(); ++j) v[j] = lp_.ColumnLower(j);
    return v;
  }
  std::vector<double> model_upper() const {
    std::vector<double> v(model_.num_variables());
    for (int j = 0; j < model_.num_variables(); ++j) v[j] = lp_.ColumnUpper(j);
    return v;
  }

  // Node LP with one cold restart after a numerical failure.
  LpStatus SolveNodeLp() {
    for (int attempt = 0; attempt < 2; ++attempt) {
      try {
        const LpStatus st = lp_.Solve();
        if (st != LpStatus::kIterationLimit ||
            lp_.iterations() >= params_.lp_iteration_limit) {
          return st;
        }
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::kSolverFailure) throw;
      }
      lp_.ResetToSlackBasis();
    }
    return LpStatus::kIterationLimit;
  }

  double Elapsed() const {
    return std::chrono::duration<double>(Clock::now() - start_).count();
  }

  double GapTol() const {
    return std::max(params_.abs_gap,
                    params_.rel_gap * std::max(1.0, std::abs(incumbent_obj_)));
  }

  double OpenBound(const std::vector<Node>& open, double current) const {
    double b = current;
    for (const Node& n : open) b = std::min(b, n.bound);
    return b;
  }

  Node PopNext(std::vector<Node>& open) {
    size_t pick = open.size() - 1;
    if (has_incumbent_) {
      for (size_t k = 0; k < open.size(); ++k) {
        const Node& a = open[k];
        const Node& b = open[pick];
        if (a.bound < b.bound || (a.bound == b.bound && a.id < b.id)) pick = k;
      }
    }
    Node node = std::move(open[pick]);
    open.erase(open.begin() + static_cast<std::ptrdiff_t>(pick));
    return node;
  }

  void ApplyBounds(const std::vector<double>& lo, const std::vector<double>& up) {
    for (int j = 0; j < model_.num_variables(); ++j) {
      if (lo[j] != cur_lo_[j] || up[j] != cur_up_[j]) {
        lp_.SetColumnBounds(j, lo[j], up[j]);
        cur_lo_[j] = lo[j];
        cur_up_[j] = up[j];
      }
    }
  }

  int SelectBranchVariable(const std::vector<double>& x) const {
    int best = -1;
    int best_priority = 0;
    double best_frac = 0.0;
    for (int j = 0; j < model_.num_variables(); ++j) {
      const Variable& v = model_.variable(j);
      if (!v.is_integral()) continue;
      const double f = x[j] - std::floor(x[j]);
      const double frac = std::min(f, 1.0 - f);
      if (frac <= params_.int_tol) continue;
      if (best < 0 || v.priority > best_priority ||
          (v.priority == best_priority && frac > best_frac + 1e-12)) {
        best = j;
        best_priority = v.priority;
        best_frac = frac;
      }
    }
    return best;
  }

  // Solves the LP with every integer variable fixed at `ints` (rounded).
  // Returns the point if it is feasible.
  std::optional<std::vector<double>> SolveFixed(const std::vector<double>& ints) {
    std::vector<double> lo = root_lo_;
    std::vector<double> up = root_up_;
    std::vector<int> seeds;
    for (int j = 0; j < model_.num_variables(); ++j) {
      if (!model_.variable(j).is_integral()) continue;
      const double r = std::round(ints[j]);
      if (r < lo[j] - 1e-9 || r > up[j] + 1e-9) return std::nullopt;
      lo[j] = up[j] = r;
      seeds.push_back(j);
    }
    if (!propagator_.Run(lo, up, seeds)) return std::nullopt;
    ApplyBounds(lo, up);
    const LpStatus st = SolveNodeLp();
    if (st != LpStatus::kOptimal) return std::nullopt;
    std::vector<double> x = lp_.PrimalValues();
    for (int j = 0; j < model_.num_variables(); ++j) {
      if (model_.variable(j).is_integral()) x[j] = std::round(ints[j]);
    }
    return x;
  }

  void Offer(const std::vector<double>& x) {
    const double obj = model_.Objective(x);
    if (!has_incumbent_ || obj < incumbent_obj_ - 1e-12 * std::max(1.0, std::abs(obj))) {
      has_incumbent_ = true;
      incumbent_obj_ = obj;
      incumbent_ = x;
      if (params_.log_every > 0) {
        fmt::print(stderr, "  incumbent {:.10g} after {} nodes ({:.1f} s)\n", obj, nodes_,
                   Elapsed());
      }
    }
  }

  void AcceptIntegral(const std::vector<double>& x) {
    std::vector<double> r = x;
    for (int j = 0; j < model_.num_variables(); ++j) {
      if (model_.variable(j).is_integral()) r[j] = std::round(x[j]);
    }
    if (model_.MaxViolation(r, params_.int_tol) <= 10 * params_.feas_tol) {
      Offer(r);
      return;
    }
    const Simplex::Basis basis = lp_.GetBasis();
    if (auto polished = SolveFixed(r)) Offer(*polished);
    lp_.SetBasis(basis);
  }

  void TryStart(const std::vector<double>& start) {
    if (start.size() != static_cast<size_t>(model_.num_variables())) return;
    if (auto x = SolveFixed(start)) Offer(*x);
  }

  Solution Finish(Solution sol) {
    sol.nodes = nodes_;
    sol.has_incumbent = has_incumbent_;
    if (has_incumbent_) {
      // Recover duals from the LP with integers fixed at the incumbent.
      if (auto x = SolveFixed(incumbent_)) {
        if (model_.Objective(*x) <= incumbent_obj_ + 1e-9 * std::max(1.0, std::abs(incumbent_obj_))) {
          incumbent_ = *x;
          incumbent_obj_ = model_.Objective(*x);
        }
        sol.duals = lp_.RowDuals();
        sol.reduced_costs = lp_.ReducedCosts();
      }
      sol.values = incumbent_;
      sol.objective = incumbent_obj_;
    }
    sol.lp_iterations = lp_.iterations();
    sol.seconds = Elapsed();
    return sol;
  }

  const Model& model_;
  SolverParams params_;
  Simplex lp_;
  Propagator propagator_;
  Clock::time_point start_;
  std::vector<double> root_lo_, root_up_;
  std::vector<double> cur_lo_, cur_up_;
  bool has_incumbent_ = false;
  double incumbent_obj_ = kInf;
  std::vector<double> incumbent_;
  double pruned_bound_ = kInf;
  bool unresolved_ = false;
  double root_bound_ = -kInf;
  int64_t nodes_ = 0;
  int64_t next_id_ = 0;
};

}  // namespace

const char* StatusName(Status status) {
  switch (status) {
    case Status::kOptimal:
      return "optimal";
    case Status::kInfeasible:
      return "infeasible";
    case Status::kUnbounded:
      return "unbounded";
    case Status::kGapLimit:
      return "gap_limit";
    case Status::kIterationLimit:
      return "iteration_limit";
  }
  return "unknown";
}

double RelativeGap(double incumbent, double bound) {
  return std::abs(incumbent - bound) / std::max(1.0, std::abs(incumbent));
}

Solution SolveLp(const Model& model, const SolverParams& params) {
  const auto start = Clock::now();
  Simplex lp(model, LpOptions(params));
  Solution sol;
  switch (lp.Solve()) {
    case LpStatus::kOptimal:
      sol.status = Status::kOptimal;
      break;
    case LpStatus::kInfeasible:
      sol.status = Status::kInfeasible;
      break;
    case LpStatus::kUnbounded:
      sol.status = Status::kUnbounded;
      break;
    case LpStatus::kIterationLimit:
      sol.status = Status::kIterationLimit;
      break;
  }
  sol.lp_iterations = lp.iterations();
  if (sol.status == Status::kOptimal) {
    sol.has_incumbent = true;
    sol.values = lp.PrimalValues();
    sol.duals = lp.RowDuals();
    sol.reduced_costs = lp.ReducedCosts();
    sol.objective = lp.objective() + model.objective_offset();
    sol.best_bound = sol.objective;
  }
  sol.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return sol;
}

Solution SolveMilp(const Model& model, const SolverParams& params,
                   const std::vector<std::vector<double>>& starts) {
  BranchAndBound bb(model, params);
  return bb.Run(starts);
}

Solution Solve(const Model& model, const SolverParams& params,
               const std::vector<std::vector<double>>& starts) {
  if (model.num_integral() == 0) return SolveLp(model, params);
  return SolveMilp(model, params, starts);
}

}  // namespace rzone::milp
