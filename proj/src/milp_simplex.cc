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

#include "rzone/milp/simplex.h"

#include <algorithm>
#include <cmath>

#include "rzone/error.h"

namespace rzone::milp {
namespace {

double PowerOfTwoScale(double max_abs) {
  if (max_abs <= 0.0 || !std::isfinite(max_abs)) return 1.0;
  return std::exp2(-std::round(std::log2(max_abs)));
}

}  // namespace

Simplex::Simplex(const Model& model, Options options) : opt_(options) {
  n_ = model.num_variables();
  m_ = model.num_constraints();
  Scale(model);

  const int total = n_ + m_;
  cost_.assign(total, 0.0);
  lower_.assign(total, 0.0);
  upper_.assign(total, 0.0);
  for (int j = 0; j < n_; ++j) {
    const Variable& v = model.variable(j);
    cost_[j] = model.cost(j) * col_scale_[j];
    lower_[j] = v.lower / col_scale_[j];
    upper_[j] = v.upper / col_scale_[j];
  }
  for (int i = 0; i < m_; ++i) {
    const Constraint& c = model.constraint(i);
    lower_[n_ + i] = c.RowLower() * row_scale_[i];
    upper_[n_ + i] = c.RowUpper() * row_scale_[i];
  }
  model_lower_ = lower_;
  model_upper_ = upper_;

  x_.assign(total, 0.0);
  ResetToSlackBasis();
}

void Simplex::Scale(const Model& model) {
  // Row-wise then column-wise max-abs equilibration.
  row_scale_.assign(m_, 1.0);
  col_scale_.assign(n_, 1.0);
  for (int i = 0; i < m_; ++i) {
    double mx = 0.0;
    for (const Term& t : model.constraint(i).terms) {
      mx = std::max(mx, std::abs(t.coef));
    }
    row_scale_[i] = PowerOfTwoScale(mx);
  }
  std::vector<double> col_max(n_, 0.0);
  std::vector<int> count(n_ + 1, 0);
  for (int i = 0; i < m_; ++i) {
    for (const Term& t : model.constraint(i).terms) {
      col_max[t.var] = std::max(col_max[t.var], std::abs(t.coef) * row_scale_[i]);
      ++count[t.var + 1];
    }
  }
  for (int j = 0; j < n_; ++j) col_scale_[j] = PowerOfTwoScale(col_max[j]);

  col_start_.assign(n_ + 1, 0);
  for (int j = 0; j < n_; ++j) col_start_[j + 1] = col_start_[j] + count[j + 1];
  row_index_.assign(col_start_[n_], 0);
  value_.assign(col_start_[n_], 0.0);
  std::vector<int> fill(col_start_.begin(), col_start_.end() - 1);
  for (int i = 0; i < m_; ++i) {
    for (const Term& t : model.constraint(i).terms) {
      const int k = fill[t.var]++;
      row_index_[k] = i;
      value_[k] = t.coef * row_scale_[i] * col_scale_[t.var];
    }
  }
}

void Simplex::SetColumnBounds(int j, double lower, double upper) {
  lower_[j] = lower / col_scale_[j];
  upper_[j] = upper / col_scale_[j];
  if (state_[j] != kBasic) PlaceNonbasic(j);
}

void Simplex::ResetColumnBounds() {
  for (int j = 0; j < n_; ++j) {
    lower_[j] = model_lower_[j];
    upper_[j] = model_upper_[j];
    if (state_[j] != kBasic) PlaceNonbasic(j);
  }
}

// Keeps the nonbasic state consistent with (possibly changed) bounds.
void Simplex::PlaceNonbasic(int j) {
  const bool lo = std::isfinite(lower_[j]);
  const bool up = std::isfinite(upper_[j]);
  State s = state_[j];
  if (s == kLower && !lo) s = up ? kUpper : kZero;
  if (s == kUpper && !up) s = lo ? kLower : kZero;
  if (s == kZero && (lo || up)) s = lo ? kLower : kUpper;
  if (s == kBasic) s = lo ? kLower : (up ? kUpper : kZero);
  state_[j] = s;
  x_[j] = NonbasicValue(j);
}

double Simplex::NonbasicValue(int j) const {
  switch (state_[j]) {
    case kLower:
      return lower_[j];
    case kUpper:
      return upper_[j];
    default:
      return 0.0;
  }
}

void Simplex::ResetToSlackBasis() {
  const int total = n_ + m_;
  state_.assign(total, kLower);
  position_.assign(total, -1);
  head_.resize(m_);
  for (int j = 0; j < n_; ++j) {
    const bool lo = std::isfinite(lower_[j]);
    const bool up = std::isfinite(upper_[j]);
    if (lo && up) {
      state_[j] = cost_[j] >= 0.0 ? kLower : kUpper;
    } else {
      state_[j] = lo ? kLower : (up ? kUpper : kZero);
    }
    x_[j] = NonbasicValue(j);
  }
  for (int i = 0; i < m_; ++i) {
    head_[i] = n_ + i;
    position_[n_ + i] = i;
    state_[n_ + i] = kBasic;
  }
  factored_ = false;
}

Simplex::Basis Simplex::GetBasis() const {
  Basis b;
  b.head = head_;
  b.state.assign(state_.begin(), state_.end());
  return b;
}

void Simplex::SetBasis(const Basis& basis) {
  if (basis.head.size() != static_cast<size_t>(m_) ||
      basis.state.size() != static_cast<size_t>(n_ + m_)) {
    ResetToSlackBasis();
    return;
  }
  // The factorization depends only on the basic columns.
  const bool same = factored_ && basis.head == head_;
  head_ = basis.head;
  std::fill(position_.begin(), position_.end(), -1);
  for (int j = 0; j < n_ + m_; ++j) state_[j] = static_cast<State>(basis.state[j]);
  for (int i = 0; i < m_; ++i) {
    position_[head_[i]] = i;
    state_[head_[i]] = kBasic;
  }
  for (int j = 0; j < n_ + m_; ++j) {
    if (state_[j] != kBasic) PlaceNonbasic(j);
  }
  factored_ = same;
}

Eigen::VectorXd Simplex::Column(int j) const {
  Eigen::VectorXd col = Eigen::VectorXd::Zero(m_);
  if (j < n_) {
    for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) {
      col[row_index_[k]] = value_[k];
    }
  } else {
    col[j - n_] = -1.0;
  }
  return col;
}

double Simplex::ColumnDot(int j, const Eigen::VectorXd& y) const {
  if (j >= n_) return -y[j - n_];
  double s = 0.0;
  for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) {
    s += value_[k] * y[row_index_[k]];
  }
  return s;
}

bool Simplex::Refactor() {
  etas_.clear();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(m_ * 2);
  for (int i = 0; i < m_; ++i) {
    const int j = head_[i];
    if (j < n_) {
      for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) {
        trip.emplace_back(row_index_[k], i, value_[k]);
      }
    } else {
      trip.emplace_back(j - n_, i, -1.0);
    }
  }
  Eigen::SparseMatrix<double> basis(m_, m_);
  basis.setFromTriplets(trip.begin(), trip.end());
  basis.makeCompressed();
  lu_.analyzePattern(basis);
  lu_.factorize(basis);
  factored_ = lu_.info() == Eigen::Success;
  return factored_;
}

Eigen::VectorXd Simplex::Ftran(Eigen::VectorXd v) const {
  Eigen::VectorXd x = lu_.solve(v);
  for (const Eta& e : etas_) {
    const double xr = x[e.row] / e.pivot;
    if (xr != 0.0) {
      for (size_t k = 0; k < e.index.size(); ++k) x[e.index[k]] -= e.value[k] * xr;
    }
    x[e.row] = xr;
  }
  return x;
}

Eigen::VectorXd Simplex::Btran(Eigen::VectorXd v) const {
  for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
    double s = v[it->row];
    for (size_t k = 0; k < it->index.size(); ++k) s -= it->value[k] * v[it->index[k]];
    v[it->row] = s / it->pivot;
  }
  return lu_.transpose().solve(v);
}

void Simplex::ComputePrimal() {
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m_);
  for (int j = 0; j < n_ + m_; ++j) {
    if (state_[j] == kBasic) continue;
    x_[j] = NonbasicValue(j);
    const double v = x_[j];
    if (v == 0.0) continue;
    if (j < n_) {
      for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) {
        rhs[row_index_[k]] -= value_[k] * v;
      }
    } else {
      rhs[j - n_] += v;
    }
  }
  const Eigen::VectorXd xb = Ftran(std::move(rhs));
  for (int i = 0; i < m_; ++i) x_[head_[i]] = xb[i];
}

Eigen::VectorXd Simplex::BasicCosts() const {
  Eigen::VectorXd cb(m_);
  for (int i = 0; i < m_; ++i) cb[i] = cost_[head_[i]];
  return cb;
}

void Simplex::Pivot(int r, int q, const Eigen::VectorXd& alpha) {
  Eta eta;
  eta.row = r;
  eta.pivot = alpha[r];
  for (int i = 0; i < m_; ++i) {
    if (i != r && std::abs(alpha[i]) > 1e-14) {
      eta.index.push_back(i);
      eta.value.push_back(alpha[i]);
    }
  }
  etas_.push_back(std::move(eta));
  const int leaving = head_[r];
  position_[leaving] = -1;
  head_[r] = q;
  position_[q] = r;
  state_[q] = kBasic;
  ++iterations_;
}

double Simplex::MaxPrimalInfeasibility() const {
  double worst = 0.0;
  for (int i = 0; i < m_; ++i) {
    const int j = head_[i];
    worst = std::max({worst, lower_[j] - x_[j], x_[j] - upper_[j]});
  }
  return worst;
}

bool Simplex::DualFeasible(const Eigen::VectorXd& y) const {
  for (int j = 0; j < n_ + m_; ++j) {
    if (state_[j] == kBasic || lower_[j] == upper_[j]) continue;
    const double d = cost_[j] - ColumnDot(j, y);
    if (state_[j] == kLower && d < -opt_.opt_tol) return false;
    if (state_[j] == kUpper && d > opt_.opt_tol) return false;
    if (state_[j] == kZero && std::abs(d) > opt_.opt_tol) return false;
  }
  return true;
}

LpStatus Simplex::SolveWithoutRows() {
  for (int j = 0; j < n_; ++j) {
    if (cost_[j] > 0.0) {
      if (!std::isfinite(lower_[j])) return LpStatus::kUnbounded;
      x_[j] = lower_[j];
    } else if (cost_[j] < 0.0) {
      if (!std::isfinite(upper_[j])) return LpStatus::kUnbounded;
      x_[j] = upper_[j];
    } else {
      x_[j] = std::isfinite(lower_[j]) ? lower_[j]
                                       : (std::isfinite(upper_[j]) ? upper_[j] : 0.0);
    }
    if (lower_[j] > upper_[j] + opt_.feas_tol) return LpStatus::kInfeasible;
  }
  return LpStatus::kOptimal;
}

LpStatus Simplex::Solve() {
  if (m_ == 0) return SolveWithoutRows();
  for (int j = 0; j < n_; ++j) {
    if (lower_[j] > upper_[j] + opt_.feas_tol) return LpStatus::kInfeasible;
  }
  int failures = 0;
  for (int round = 0; round < 8; ++round) {
    if ((round > 0 || !factored_) && !Refactor()) {
      if (++failures > 2) {
        throw Error(ErrorKind::kSolverFailure, "simplex basis is singular");
      }
      ResetToSlackBasis();
      continue;
    }
    ComputePrimal();
    const Eigen::VectorXd y = Btran(BasicCosts());
    const bool primal_ok = MaxPrimalInfeasibility() <= opt_.feas_tol;
    const bool dual_ok = DualFeasible(y);
    if (primal_ok && dual_ok) return LpStatus::kOptimal;

    LpStatus status;
    if (!primal_ok && dual_ok) {
      status = RunDual();
    } else {
      status = RunPrimal();
    }
    if (status == LpStatus::kIterationLimit) return status;
    if (status == LpStatus::kInfeasible || status == LpStatus::kUnbounded) {
      // Confirm on a fresh factorization before reporting.
      if (!Refactor()) continue;
      ComputePrimal();
      if (status == LpStatus::kInfeasible) {
        if (MaxPrimalInfeasibility() > opt_.feas_tol) {
          // Re-run the composite phase 1 once from this basis to confirm.
          const LpStatus again = RunPrimal();
          if (again == LpStatus::kInfeasible) return again;
          if (again == LpStatus::kIterationLimit) return again;
          continue;
        }
        continue;
      }
      return status;
    }
  }
  if (!Refactor()) {
    throw Error(ErrorKind::kSolverFailure, "simplex basis is singular");
  }
  ComputePrimal();
  if (MaxPrimalInfeasibility() <= 10 * opt_.feas_tol) return LpStatus::kOptimal;
  throw Error(ErrorKind::kSolverFailure,
              "simplex failed to converge to a verified optimum");
}

LpStatus Simplex::RunPrimal() {
  int degenerate_run = 0;
  bool bland = false;
  Eigen::VectorXd cb(m_);
  while (true) {
    if (iterations_ >= opt_.iteration_limit) return LpStatus::kIterationLimit;
    if (static_cast<int>(etas_.size()) >= opt_.refactor_interval) {
      if (!Refactor()) return LpStatus::kIterationLimit;
      ComputePrimal();
    }
    bool phase1 = false;
    for (int i = 0; i < m_; ++i) {
      const int j = head_[i];
      if (x_[j] < lower_[j] - opt_.feas_tol) {
        cb[i] = -1.0;
        phase1 = true;
      } else if (x_[j] > upper_[j] + opt_.feas_tol) {
        cb[i] = 1.0;
        phase1 = true;
      } else {
        cb[i] = 0.0;
      }
    }
    if (!phase1) cb = BasicCosts();
    const Eigen::VectorXd y = Btran(cb);

    int q = -1;
    int dir = 0;
    double best = 0.0;
    for (int j = 0; j < n_ + m_; ++j) {
      if (state_[j] == kBasic || lower_[j] == upper_[j]) continue;
      const double d = (phase1 ? 0.0 : cost_[j]) - ColumnDot(j, y);
      int dj_dir = 0;
      if (d < -opt_.opt_tol && (state_[j] == kLower || state_[j] == kZero)) {
        dj_dir = 1;
      } else if (d > opt_.opt_tol && (state_[j] == kUpper || state_[j] == kZero)) {
        dj_dir = -1;
      }
      if (dj_dir == 0) continue;
      if (bland) {
        q = j;
        dir = dj_dir;
        break;
      }
      if (std::abs(d) > best) {
        best = std::abs(d);
        q = j;
        dir = dj_dir;
      }
    }
    if (q < 0) return phase1 ? LpStatus::kInfeasible : LpStatus::kOptimal;

    const Eigen::VectorXd alpha = Ftran(Column(q));

    // Harris two-pass ratio test over the basic variables.
    const double tol = opt_.feas_tol;
    double t_relaxed = kInf;
    for (int i = 0; i < m_; ++i) {
      const double rate = -dir * alpha[i];
      if (std::abs(rate) <= opt_.pivot_tol) continue;
      const int j = head_[i];
      const double xj = x_[j];
      double bound;
      if (rate > 0) {
        if (phase1 && xj < lower_[j] - tol) {
          bound = lower_[j];
        } else if (xj > upper_[j] + tol) {
          continue;
        } else {
          bound = upper_[j];
        }
        if (!std::isfinite(bound)) continue;
        t_relaxed = std::min(t_relaxed, (bound + tol - xj) / rate);
      } else {
        if (phase1 && xj > upper_[j] + tol) {
          bound = upper_[j];
        } else if (xj < lower_[j] - tol) {
          continue;
        } else {
          bound = lower_[j];
        }
        if (!std::isfinite(bound)) continue;
        t_relaxed = std::min(t_relaxed, (bound - tol - xj) / rate);
      }
    }
    int r = -1;
    double t = kInf;
    double best_pivot = 0.0;
    bool to_upper = false;
    if (std::isfinite(t_relaxed)) {
      for (int i = 0; i < m_; ++i) {
        const double rate = -dir * alpha[i];
        if (std::abs(rate) <= opt_.pivot_tol) continue;
        const int j = head_[i];
        const double xj = x_[j];
        double bound;
        bool hits_upper;
        if (rate > 0) {
          if (phase1 && xj < lower_[j] - tol) {
            bound = lower_[j];
            hits_upper = false;
          } else if (xj > upper_[j] + tol) {
            continue;
          } else {
            bound = upper_[j];
            hits_upper = true;
          }
        } else {
          if (phase1 && xj > upper_[j] + tol) {
            bound = upper_[j];
            hits_upper = true;
          } else if (xj < lower_[j] - tol) {
            continue;
          } else {
            bound = lower_[j];
            hits_upper = false;
          }
        }
        if (!std::isfinite(bound)) continue;
        const double ti = (bound - xj) / rate;
        if (bland) {
          // Smallest index among the minimum-ratio ties.
          const double tc = std::max(ti, 0.0);
          if (r < 0 || tc < t - 1e-12 || (tc <= t + 1e-12 && j < head_[r])) {
            r = i;
            t = tc;
            to_upper = hits_upper;
          }
          continue;
        }
        if (ti <= t_relaxed && std::abs(alpha[i]) > best_pivot) {
          best_pivot = std::abs(alpha[i]);
          r = i;
          t = std::max(ti, 0.0);
          to_upper = hits_upper;
        }
      }
    }
    const double flip = upper_[q] - lower_[q];
    if (std::isfinite(flip) && flip <= t) {
      const double step = dir * flip;
      for (int i = 0; i < m_; ++i) x_[head_[i]] -= alpha[i] * step;
      state_[q] = dir > 0 ? kUpper : kLower;
      x_[q] = NonbasicValue(q);
      ++iterations_;
      degenerate_run = 0;
      bland = false;
      continue;
    }
    if (r < 0) {
      if (phase1) {
        // No breakpoint should be impossible in phase 1; refresh and retry.
        if (!Refactor()) return LpStatus::kIterationLimit;
        ComputePrimal();
        if (++degenerate_run > opt_.bland_after) bland = true;
        continue;
      }
      return LpStatus::kUnbounded;
    }

    const double step = dir * t;
    for (int i = 0; i < m_; ++i) x_[head_[i]] -= alpha[i] * step;
    x_[q] += step;
    const int leaving = head_[r];
    Pivot(r, q, alpha);
    state_[leaving] = to_upper ? kUpper : kLower;
    x_[leaving] = NonbasicValue(leaving);

    if (t <= 1e-12) {
      if (++degenerate_run > opt_.bland_after) bland = true;
    } else {
      degenerate_run = 0;
      bland = false;
    }
  }
}

LpStatus Simplex::RunDual() {
  int degenerate_run = 0;
  bool bland = false;
  // Reduced costs, updated along dual steps and rebuilt on refactorization.
  std::vector<double> d(n_ + m_, 0.0);
  std::vector<double> row(n_ + m_, 0.0);
  bool valid = false;
  bool fresh = false;
  auto rebuild = [&] {
    const Eigen::VectorXd y = Btran(BasicCosts());
    for (int j = 0; j < n_ + m_; ++j) {
      d[j] = state_[j] == kBasic ? 0.0 : cost_[j] - ColumnDot(j, y);
    }
    valid = true;
    fresh = true;
  };
  while (true) {
    if (iterations_ >= opt_.iteration_limit) return LpStatus::kIterationLimit;
    if (static_cast<int>(etas_.size()) >= opt_.refactor_interval) {
      if (!Refactor()) return LpStatus::kIterationLimit;
      ComputePrimal();
      valid = false;
    }
    if (!valid) rebuild();
    int r = -1;
    double worst = opt_.feas_tol;
    for (int i = 0; i < m_; ++i) {
      const int j = head_[i];
      const double viol = std::max(lower_[j] - x_[j], x_[j] - upper_[j]);
      if (viol <= opt_.feas_tol) continue;
      // Bland: the infeasible basic variable with the smallest index.
      if (bland ? (r < 0 || j < head_[r]) : viol > worst) {
        worst = viol;
        r = i;
      }
    }
    if (r < 0) return LpStatus::kOptimal;

    const int jr = head_[r];
    const bool to_lower = x_[jr] < lower_[jr];
    const double target = to_lower ? lower_[jr] : upper_[jr];

    Eigen::VectorXd er = Eigen::VectorXd::Zero(m_);
    er[r] = 1.0;
    const Eigen::VectorXd rho = Btran(er);

    // Candidates: nonbasic columns whose move pushes x_jr toward its bound.
    struct Candidate {
      int j;
      double ratio;
      double alpha;
    };
    std::vector<Candidate> cand;
    double t_relaxed = kInf;
    for (int j = 0; j < n_ + m_; ++j) {
      if (state_[j] == kBasic) continue;
      const double a = ColumnDot(j, rho);
      row[j] = a;
      if (lower_[j] == upper_[j]) continue;
      if (std::abs(a) <= opt_.pivot_tol) continue;
      // dx_jr = -a * dx_j; need sign(dx_jr) = +1 when moving to the lower bound.
      const bool need_increase_j = to_lower ? (a < 0) : (a > 0);
      double d_eff;
      if (need_increase_j) {
        if (state_[j] == kUpper) continue;
        d_eff = state_[j] == kZero ? std::abs(d[j]) : std::max(d[j], 0.0);
      } else {
        if (state_[j] == kLower) continue;
        d_eff = state_[j] == kZero ? std::abs(d[j]) : std::max(-d[j], 0.0);
      }
      cand.push_back({j, d_eff / std::abs(a), a});
      t_relaxed = std::min(t_relaxed, (d_eff + opt_.opt_tol) / std::abs(a));
    }
    if (cand.empty()) {
      if (!fresh) {
        valid = false;
        continue;
      }
      return LpStatus::kInfeasible;
    }

    int q = -1;
    double best_pivot = 0.0;
    double ratio = 0.0;
    double min_ratio = kInf;
    for (const Candidate& c : cand) min_ratio = std::min(min_ratio, c.ratio);
    for (const Candidate& c : cand) {
      if (c.ratio > t_relaxed) continue;
      if (bland) {
        // Smallest index among the exact minimum-ratio ties.
        if (c.ratio <= min_ratio + 1e-12 && (q < 0 || c.j < q)) {
          q = c.j;
          ratio = c.ratio;
        }
        continue;
      }
      if (std::abs(c.alpha) > best_pivot) {
        best_pivot = std::abs(c.alpha);
        q = c.j;
        ratio = c.ratio;
      }
    }
    if (q < 0) return LpStatus::kInfeasible;

    const Eigen::VectorXd alpha = Ftran(Column(q));
    if (std::abs(alpha[r]) <= opt_.pivot_tol) {
      // Row and column computations disagree: refresh the factorization.
      if (!Refactor()) return LpStatus::kIterationLimit;
      ComputePrimal();
      valid = false;
      if (++degenerate_run > opt_.bland_after) bland = true;
      continue;
    }
    const double theta = d[q] / row[q];
    for (int j = 0; j < n_ + m_; ++j) {
      if (state_[j] != kBasic) d[j] -= theta * row[j];
    }
    d[q] = 0.0;
    d[jr] = -theta;
    fresh = false;
    const double dxq = (x_[jr] - target) / alpha[r];
    for (int i = 0; i < m_; ++i) x_[head_[i]] -= alpha[i] * dxq;
    x_[q] += dxq;
    Pivot(r, q, alpha);
    state_[jr] = to_lower ? kLower : kUpper;
    x_[jr] = target;

    if (ratio <= 1e-12) {
      if (++degenerate_run > opt_.bland_after) bland = true;
    } else {
      degenerate_run = 0;
      bland = false;
    }
  }
}

double Simplex::objective() const {
  double obj = 0.0;
  for (int j = 0; j < n_; ++j) obj += cost_[j] * x_[j];
  return obj;
}

std::vector<double> Simplex::PrimalValues() const {
  std::vector<double> v(n_);
  for (int j = 0; j < n_; ++j) v[j] = x_[j] * col_scale_[j];
  return v;
}

std::vector<double> Simplex::RowActivities() const {
  std::vector<double> v(m_);
  for (int i = 0; i < m_; ++i) v[i] = x_[n_ + i] / row_scale_[i];
  return v;
}

std::vector<double> Simplex::RowDuals() const {
  if (m_ == 0) return {};
  const Eigen::VectorXd y = Btran(BasicCosts());
  std::vector<double> d(m_);
  for (int i = 0; i < m_; ++i) d[i] = y[i] * row_scale_[i];
  return d;
}

std::vector<double> Simplex::ReducedCosts() const {
  std::vector<double> d(n_);
  if (m_ == 0) {
    for (int j = 0; j < n_; ++j) d[j] = cost_[j] / col_scale_[j];
    return d;
  }
  const Eigen::VectorXd y = Btran(BasicCosts());
  for (int j = 0; j < n_; ++j) {
    d[j] = state_[j] == kBasic ? 0.0 : (cost_[j] - ColumnDot(j, y)) / col_scale_[j];
  }
  return d;
}

}  // namespace rzone::milp
