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

#include "rzone/milp/linearize.h"

#include <algorithm>
#include <cmath>

#include "rzone/error.h"

namespace rzone::milp {

ProductHandle LinearizeBinIntProduct(Model& model, const std::string& name,
                                     int binary, int integer) {
  const Variable& y = model.variable(integer);
  if (!std::isfinite(y.lower) || !std::isfinite(y.upper)) {
    throw ConfigError("product '" + name + "' needs explicit bounds on '" +
                      y.name + "'");
  }
  return LinearizeBinIntProduct(model, name, binary, integer, y.lower, y.upper);
}

ProductHandle LinearizeBinIntProduct(Model& model, const std::string& name,
                                     int binary, int integer, double m,
                                     double M) {
  if (!std::isfinite(m) || !std::isfinite(M) || m > M) {
    throw ConfigError("product '" + name + "' needs finite bounds m <= M");
  }
  ProductHandle h;
  h.binary = binary;
  h.integer = integer;
  h.m = m;
  h.M = M;
  h.aux = model.AddContinuous(name, std::min(0.0, m), std::max(0.0, M));
  // y - M(1-b) <= u  <=>  y + M b - u <= M
  model.AddConstraint(name + "_ylo", {{integer, 1.0}, {binary, M}, {h.aux, -1.0}},
                      Sense::kLessEqual, M);
  // u <= y - m(1-b)  <=>  u - y - m b <= -m
  model.AddConstraint(name + "_yup", {{h.aux, 1.0}, {integer, -1.0}, {binary, -m}},
                      Sense::kLessEqual, -m);
  model.AddConstraint(name + "_blo", {{h.aux, 1.0}, {binary, -m}},
                      Sense::kGreaterEqual, 0.0);
  model.AddConstraint(name + "_bup", {{h.aux, 1.0}, {binary, -M}},
                      Sense::kLessEqual, 0.0);
  return h;
}

ComplementarityHandle LinearizeComplementarity(Model& model,
                                               const std::string& name,
                                               const LinExpr& g, int dual,
                                               double g_bound,
                                               double dual_bound) {
  if (!(g_bound >= 0.0) || !(dual_bound >= 0.0) || std::isinf(g_bound) ||
      std::isinf(dual_bound)) {
    throw ConfigError("complementarity '" + name +
                      "' needs finite nonnegative big-M bounds");
  }
  ComplementarityHandle h;
  h.name = name;
  h.g = g;
  h.dual = dual;
  h.g_bound = g_bound;
  h.dual_bound = dual_bound;
  h.binary = model.AddBinary(name + "_b");
  model.AddConstraint(name + "_g", g, Sense::kLessEqual, 0.0);
  // g >= -G (1 - b)  <=>  g - G b >= -G
  LinExpr lo = g;
  lo.Add(h.binary, -g_bound);
  model.AddConstraint(name + "_gm", lo, Sense::kGreaterEqual, -g_bound);
  const Variable& mu = model.variable(dual);
  if (mu.lower < 0.0) {
    model.SetBounds(dual, 0.0, mu.upper);
  }
  model.AddConstraint(name + "_dm", {{dual, 1.0}, {h.binary, -dual_bound}},
                      Sense::kLessEqual, 0.0);
  return h;
}

BigMAudit AuditBigM(const std::vector<double>& values,
                    const std::vector<ComplementarityHandle>& complementarity,
                    const std::vector<ProductHandle>& products, double tol) {
  BigMAudit audit;
  for (const ComplementarityHandle& h : complementarity) {
    const double g = h.g.Evaluate(values);
    const double mu = values[h.dual];
    const double btol = tol * std::max(1.0, h.dual_bound);
    if (h.dual_bound > 0.0 && mu >= h.dual_bound - btol) {
      audit.flags.push_back({h.name, "dual", mu, h.dual_bound});
    }
    const double gtol = tol * std::max(1.0, h.g_bound);
    if (h.g_bound > 0.0 && -g >= h.g_bound - gtol) {
      audit.flags.push_back({h.name, "primal", -g, h.g_bound});
    }
    audit.max_complementarity_residual =
        std::max(audit.max_complementarity_residual, std::abs(g * mu));
  }
  for (const ProductHandle& p : products) {
    const double r = std::abs(values[p.aux] - values[p.binary] * values[p.integer]);
    audit.max_product_residual = std::max(audit.max_product_residual, r);
  }
  return audit;
}

}  // namespace rzone::milp
