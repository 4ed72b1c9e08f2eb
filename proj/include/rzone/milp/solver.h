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

#ifndef RZONE_MILP_SOLVER_H_
#define RZONE_MILP_SOLVER_H_

#include <cstdint>
#include <string>
#include <vector>

#include "rzone/milp/model.h"

namespace rzone::milp {

enum class Status { kOptimal, kInfeasible, kUnbounded, kGapLimit, kIterationLimit };

const char* StatusName(Status status);

struct SolverParams {
  double rel_gap = 1e-4;
  double abs_gap = 1e-9;
  int64_t node_limit = 2'000'000;
  double time_limit = 1e30;  // seconds
  int64_t lp_iteration_limit = 50'000'000;
  double feas_tol = 1e-6;
  double opt_tol = 1e-7;
  double int_tol = 1e-6;
  int bland_after = 500;
  // Log progress to stderr every this many nodes (0 = silent).
  int64_t log_every = 0;
};

struct Solution {
  Status status = Status::kIterationLimit;
  bool has_incumbent = false;
  std::vector<double> values;
  // Shadow prices d(objective)/d(rhs). For MILPs these come from the LP
  // with all integer variables fixed at the incumbent.
  std::vector<double> duals;
  std::vector<double> reduced_costs;
  double objective = 0.0;
  double best_bound = 0.0;
  double mip_gap = 0.0;
  int64_t nodes = 0;
  int64_t lp_iterations = 0;
  double seconds = 0.0;

  bool ok() const { return status == Status::kOptimal; }
};

Solution SolveLp(const Model& model, const SolverParams& params = {});

// Branch-and-bound. `starts` are candidate points; only their integer
// coordinates are used (continuous parts are recomputed by an LP).
Solution SolveMilp(const Model& model, const SolverParams& params = {},
                   const std::vector<std::vector<double>>& starts = {});

// Dispatches on whether the model has integer variables.
Solution Solve(const Model& model, const SolverParams& params = {},
               const std::vector<std::vector<double>>& starts = {});

// Relative gap |a - b| / max(1, |a|).
double RelativeGap(double incumbent, double bound);

}  // namespace rzone::milp

#endif  // RZONE_MILP_SOLVER_H_
