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

#include <algorithm>
#include <cmath>

#include "rzone/error.h"
#include "rzone/milp/model.h"

namespace rzone::milp {

LinExpr& LinExpr::AddExpr(const LinExpr& other, double scale) {
  for (const Term& t : other.terms_) Add(t.var, scale * t.coef);
  constant_ += scale * other.constant_;
  return *this;
}

void LinExpr::Normalize() {
  std::sort(terms_.begin(), terms_.end(),
            [](const Term& a, const Term& b) { return a.var < b.var; });
  std::vector<Term> merged;
  for (const Term& t : terms_) {
    if (!merged.empty() && merged.back().var == t.var) {
      merged.back().coef += t.coef;
    } else {
      merged.push_back(t);
    }
  }
  std::erase_if(merged, [](const Term& t) { return t.coef == 0.0; });
  terms_ = std::move(merged);
}

double LinExpr::Evaluate(const std::vector<double>& values) const {
  double v = constant_;
  for (const Term& t : terms_) v += t.coef * values[t.var];
  return v;
}

double Constraint::RowLower() const {
  switch (sense) {
    case Sense::kLessEqual:
      return range ? rhs - std::abs(*range) : -kInf;
    case Sense::kGreaterEqual:
      return rhs;
    case Sense::kEqual:
      return (range && *range < 0) ? rhs + *range : rhs;
  }
  return rhs;
}

double Constraint::RowUpper() const {
  switch (sense) {
    case Sense::kLessEqual:
      return rhs;
    case Sense::kGreaterEqual:
      return range ? rhs + std::abs(*range) : kInf;
    case Sense::kEqual:
      return (range && *range > 0) ? rhs + *range : rhs;
  }
  return rhs;
}

int Model::AddVariable(std::string name, VarKind kind, double lower,
                       double upper, double cost) {
  if (kind == VarKind::kBinary) {
    lower = std::max(lower, 0.0);
    upper = std::min(upper, 1.0);
  }
  if (lower > upper) {
    throw Error(ErrorKind::kConfig,
                "variable '" + name + "' has lower bound above upper bound");
  }
  const int id = num_variables();
  if (!var_index_.emplace(name, id).second) {
    throw Error(ErrorKind::kConfig, "duplicate variable name '" + name + "'");
  }
  variables_.push_back({std::move(name), kind, lower, upper, 0});
  costs_.push_back(cost);
  return id;
}

int Model::AddConstraint(std::string name, std::vector<Term> terms,
                         Sense sense, double rhs) {
  LinExpr expr;
  for (const Term& t : terms) expr.Add(t.var, t.coef);
  return AddConstraint(std::move(name), expr, sense, rhs);
}

int Model::AddConstraint(std::string name, const LinExpr& expr, Sense sense,
                         double rhs) {
  LinExpr e = expr;
  e.Normalize();
  for (const Term& t : e.terms()) {
    if (t.var < 0 || t.var >= num_variables()) {
      throw Error(ErrorKind::kConfig, "constraint '" + name +
                                          "' references an undeclared variable");
    }
  }
  const int id = num_constraints();
  if (!row_index_.emplace(name, id).second) {
    throw Error(ErrorKind::kConfig, "duplicate constraint name '" + name + "'");
  }
  constraints_.push_back(
      {std::move(name), e.terms(), sense, rhs - e.constant(), std::nullopt});
  return id;
}

int Model::AddRangedConstraint(std::string name, const LinExpr& expr,
                               double lower, double upper) {
  if (std::isinf(lower)) {
    return AddConstraint(std::move(name), expr, Sense::kLessEqual, upper);
  }
  if (std::isinf(upper)) {
    return AddConstraint(std::move(name), expr, Sense::kGreaterEqual, lower);
  }
  if (lower == upper) {
    return AddConstraint(std::move(name), expr, Sense::kEqual, upper);
  }
  const int id = AddConstraint(std::move(name), expr, Sense::kLessEqual, upper);
  constraints_[id].range = upper - lower;
  return id;
}

void Model::SetCost(int var, double cost) { costs_.at(var) = cost; }

void Model::SetBounds(int var, double lower, double upper) {
  Variable& v = variables_.at(var);
  v.lower = lower;
  v.upper = upper;
}

int Model::num_integral() const {
  return static_cast<int>(std::count_if(
      variables_.begin(), variables_.end(),
      [](const Variable& v) { return v.is_integral(); }));
}

std::optional<int> Model::FindVariable(std::string_view name) const {
  auto it = var_index_.find(std::string(name));
  if (it == var_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> Model::FindConstraint(std::string_view name) const {
  auto it = row_index_.find(std::string(name));
  if (it == row_index_.end()) return std::nullopt;
  return it->second;
}

double Model::Objective(const std::vector<double>& values) const {
  double obj = objective_offset_;
  for (int j = 0; j < num_variables(); ++j) obj += costs_[j] * values[j];
  return obj;
}

double Model::MaxViolation(const std::vector<double>& values,
                           double int_tol) const {
  double worst = 0.0;
  for (int j = 0; j < num_variables(); ++j) {
    const Variable& v = variables_[j];
    worst = std::max(worst, v.lower - values[j]);
    worst = std::max(worst, values[j] - v.upper);
    if (v.is_integral()) {
      const double frac = std::abs(values[j] - std::round(values[j]));
      if (frac > int_tol) worst = std::max(worst, frac);
    }
  }
  for (const Constraint& c : constraints_) {
    double act = 0.0;
    for (const Term& t : c.terms) act += t.coef * values[t.var];
    worst = std::max(worst, c.RowLower() - act);
    worst = std::max(worst, act - c.RowUpper());
  }
  return worst;
}

}  // namespace rzone::milp
