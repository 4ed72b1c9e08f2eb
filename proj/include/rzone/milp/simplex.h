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

#ifndef RZONE_MILP_SIMPLEX_H_
#define RZONE_MILP_SIMPLEX_H_

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <Eigen/OrderingMethods>
#include <cstdint>
#include <vector>

#include "rzone/milp/model.h"

namespace rzone::milp {

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

// Revised bounded-variable simplex on the computational form
//
//   min c'x   s.t.  A x - r = 0,  l <= (x, r) <= u
//
// where r holds one logical (row activity) variable per constraint. Rows and
// columns are equilibrated by power-of-two max-abs scaling. The basis is kept
// as a sparse LU factorization plus a product-form eta file that is rebuilt
// every `refactor_interval` pivots.
//
// Primal simplex uses a composite phase 1 (sum of infeasibilities) and falls
// back to Bland's rule after `bland_after` consecutive degenerate pivots. The
// dual simplex is used whenever the current basis is dual feasible, which is
// the normal case after bound changes in branch-and-bound.
class Simplex {
 public:
  struct Options {
    double feas_tol = 1e-6;
    double opt_tol = 1e-7;
    double pivot_tol = 1e-9;
    int bland_after = 500;
    int refactor_interval = 64;
    int64_t iteration_limit = 1'000'000;
  };

  struct Basis {
    std::vector<int> head;
    std::vector<int8_t> state;
    bool empty() const { return head.empty() && state.empty(); }
  };

  Simplex(const Model& model, Options options);
  explicit Simplex(const Model& model) : Simplex(model, Options{}) {}

  // Bounds are in model units. Integrality is ignored.
  void SetColumnBounds(int j, double lower, double upper);
  void ResetColumnBounds();
  double ColumnLower(int j) const { return lower_[j] * col_scale_[j]; }
  double ColumnUpper(int j) const { return upper_[j] * col_scale_[j]; }

  LpStatus Solve();

  // Objective without the model offset.
  double objective() const;
  std::vector<double> PrimalValues() const;
  // Shadow prices d(objective)/d(rhs), one per constraint.
  std::vector<double> RowDuals() const;
  std::vector<double> ReducedCosts() const;
  std::vector<double> RowActivities() const;

  Basis GetBasis() const;
  void SetBasis(const Basis& basis);
  void ResetToSlackBasis();

  int64_t iterations() const { return iterations_; }
  int num_rows() const { return m_; }
  int num_cols() const { return n_; }

 private:
  enum State : int8_t { kBasic = 0, kLower = 1, kUpper = 2, kZero = 3 };

  struct Eta {
    int row;
    double pivot;
    std::vector<int> index;
    std::vector<double> value;
  };

  void Scale(const Model& model);
  void PlaceNonbasic(int j);
  double NonbasicValue(int j) const;

  bool Refactor();
  void ComputePrimal();
  Eigen::VectorXd Ftran(Eigen::VectorXd v) const;
  Eigen::VectorXd Btran(Eigen::VectorXd v) const;
  Eigen::VectorXd Column(int j) const;
  double ColumnDot(int j, const Eigen::VectorXd& y) const;
  Eigen::VectorXd BasicCosts() const;
  void Pivot(int r, int q, const Eigen::VectorXd& alpha);

  double MaxPrimalInfeasibility() const;
  bool DualFeasible(const Eigen::VectorXd& y) const;

  LpStatus RunPrimal();
  LpStatus RunDual();
  LpStatus SolveWithoutRows();

  Options opt_;
  int n_ = 0;
  int m_ = 0;

  // Scaled structural columns in compressed sparse column form.
  std::vector<int> col_start_;
  std::vector<int> row_index_;
  std::vector<double> value_;
  std::vector<double> col_scale_;
  std::vector<double> row_scale_;

  std::vector<double> cost_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<double> model_lower_;
  std::vector<double> model_upper_;

  std::vector<double> x_;
  std::vector<int> head_;
  std::vector<int> position_;
  std::vector<State> state_;

  mutable Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::AMDOrdering<int>> lu_;
  bool factored_ = false;
  std::vector<Eta> etas_;

  int64_t iterations_ = 0;
};

}  // namespace rzone::milp

#endif  // RZONE_MILP_SIMPLEX_H_
