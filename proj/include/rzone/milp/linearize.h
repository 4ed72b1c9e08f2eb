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

#ifndef RZONE_MILP_LINEARIZE_H_
#define RZONE_MILP_LINEARIZE_H_

#include <string>
#include <vector>

#include "rzone/milp/model.h"
#include "rzone/milp/solver.h"

namespace rzone::milp {

// u = b * y for binary b and bounded integer y in [m, M].
struct ProductHandle {
  int aux = -1;
  int binary = -1;
  int integer = -1;
  double m = 0.0;
  double M = 0.0;
};

// Adds u with
//   y - M(1 - b) <= u <= y - m(1 - b),   m b <= u <= M b.
// m and M default to the bounds of y; throws if y is unbounded.
ProductHandle LinearizeBinIntProduct(Model& model, const std::string& name,
                                     int binary, int integer);
ProductHandle LinearizeBinIntProduct(Model& model, const std::string& name,
                                     int binary, int integer, double m,
                                     double M);

// g <= 0  _|_  mu >= 0, linearized with an indicator b:
//   g <= 0,  g >= -G (1 - b),  0 <= mu <= U b.
struct ComplementarityHandle {
  std::string name;
  int binary = -1;
  LinExpr g;
  int dual = -1;
  double g_bound = 0.0;
  double dual_bound = 0.0;
};

ComplementarityHandle LinearizeComplementarity(Model& model,
                                               const std::string& name,
                                               const LinExpr& g, int dual,
                                               double g_bound,
                                               double dual_bound);

struct BigMFlag {
  std::string name;
  // "dual" when mu reached U, "primal" when -g reached G.
  std::string side;
  double value = 0.0;
  double bound = 0.0;
};

struct BigMAudit {
  std::vector<BigMFlag> flags;
  double max_product_residual = 0.0;
  double max_complementarity_residual = 0.0;
  bool clean() const { return flags.empty(); }
};

// Flags every handle whose big-M bound is active within `tol`, and records
// the largest |u - b y| and |g mu| residuals.
BigMAudit AuditBigM(const std::vector<double>& values,
                    const std::vector<ComplementarityHandle>& complementarity,
                    const std::vector<ProductHandle>& products = {},
                    double tol = 1e-6);

}  // namespace rzone::milp

#endif  // RZONE_MILP_LINEARIZE_H_
