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

#ifndef RZONE_MILP_MODEL_H_
#define RZONE_MILP_MODEL_H_

#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace rzone::milp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VarKind { kContinuous, kBinary, kInteger };
enum class Sense { kLessEqual, kEqual, kGreaterEqual };

struct Variable {
  std::string name;
  VarKind kind = VarKind::kContinuous;
  double lower = 0.0;
  double upper = kInf;
  // Branching priority: higher values are branched on first.
  int priority = 0;

  bool is_integral() const { return kind != VarKind::kContinuous; }
};

struct Term {
  int var;
  double coef;
};

// Affine expression sum(coef * var) + constant.
class LinExpr {
 public:
  LinExpr() = default;
  explicit LinExpr(double constant) : constant_(constant) {}

  LinExpr& Add(int var, double coef) {
    if (coef != 0.0) terms_.push_back({var, coef});
    return *this;
  }
  LinExpr& AddConstant(double value) {
    constant_ += value;
    return *this;
  }
  LinExpr& AddExpr(const LinExpr& other, double scale = 1.0);

  // Merges repeated variables and drops zero coefficients.
  void Normalize();

  double Evaluate(const std::vector<double>& values) const;

  const std::vector<Term>& terms() const { return terms_; }
  double constant() const { return constant_; }

 private:
  std::vector<Term> terms_;
  double constant_ = 0.0;
};

struct Constraint {
  std::string name;
  std::vector<Term> terms;
  Sense sense = Sense::kLessEqual;
  double rhs = 0.0;
  // MPS-style range: L rows become [rhs - |range|, rhs], G rows
  // [rhs, rhs + |range|], E rows extend by the sign of range.
  std::optional<double> range;

  // Row activity bounds implied by sense, rhs and range.
  double RowLower() const;
  double RowUpper() const;
};

// Minimization model over continuous, binary and general integer variables.
class Model {
 public:
  int AddVariable(std::string name, VarKind kind, double lower, double upper,
                  double cost = 0.0);
  int AddContinuous(std::string name, double lower, double upper,
                    double cost = 0.0) {
    return AddVariable(std::move(name), VarKind::kContinuous, lower, upper,
                       cost);
  }
  int AddBinary(std::string name, double cost = 0.0) {
    return AddVariable(std::move(name), VarKind::kBinary, 0.0, 1.0, cost);
  }

  int AddConstraint(std::string name, std::vector<Term> terms, Sense sense,
                    double rhs);
  // The expression constant is moved to the right-hand side.
  int AddConstraint(std::string name, const LinExpr& expr, Sense sense,
                    double rhs);
  // lower <= expr <= upper as a single ranged row.
  int AddRangedConstraint(std::string name, const LinExpr& expr, double lower,
                          double upper);

  // Attaches an MPS-style range to an existing row.
  void SetRange(int row, double range) { constraints_[row].range = range; }

  void SetCost(int var, double cost);
  void AddCost(int var, double cost) { SetCost(var, costs_[var] + cost); }
  void SetObjectiveOffset(double offset) { objective_offset_ = offset; }

  void SetBounds(int var, double lower, double upper);
  void SetPriority(int var, int priority) {
    variables_[var].priority = priority;
  }

  int num_variables() const { return static_cast<int>(variables_.size()); }
  int num_constraints() const { return static_cast<int>(constraints_.size()); }
  int num_integral() const;

  const Variable& variable(int j) const { return variables_[j]; }
  const Constraint& constraint(int i) const { return constraints_[i]; }
  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  const std::vector<double>& costs() const { return costs_; }
  double cost(int j) const { return costs_[j]; }
  double objective_offset() const { return objective_offset_; }

  std::optional<int> FindVariable(std::string_view name) const;
  std::optional<int> FindConstraint(std::string_view name) const;

  double Objective(const std::vector<double>& values) const;
  // Largest bound, row or integrality violation of a candidate point.
  double MaxViolation(const std::vector<double>& values,
                      double int_tol = 1e-6) const;

  void set_name(std::string name) { name_ = std::move(name); }
  const std::string& name() const { return name_; }

 private:
  std::string name_ = "RZONE";
  std::vector<Variable> variables_;
  std::vector<double> costs_;
  std::vector<Constraint> constraints_;
  double objective_offset_ = 0.0;
  std::unordered_map<std::string, int> var_index_;
  std::unordered_map<std::string, int> row_index_;
};

}  // namespace rzone::milp

#endif  // RZONE_MILP_MODEL_H_
