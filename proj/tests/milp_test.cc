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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <fmt/core.h>

#include "rzone/milp/model.h"
#include "rzone/milp/simplex.h"
#include "rzone/milp/solver.h"

namespace rzone::milp {
namespace {

// Checks primal feasibility, dual sign conditions and complementary slackness
// of an LP solution directly from the model data.
void ExpectKkt(const Model& m, const Solution& s, double tol = 1e-6) {
  ASSERT_EQ(s.status, Status::kOptimal);
  EXPECT_LE(m.MaxViolation(s.values), tol);
  std::vector<double> d = m.costs();
  for (int i = 0; i < m.num_constraints(); ++i) {
    const Constraint& c = m.constraint(i);
    double act = 0.0;
    for (const Term& t : c.terms) {
      act += t.coef * s.values[t.var];
      d[t.var] -= t.coef * s.duals[i];
    }
    const double y = s.duals[i];
    const double scale = tol * std::max(1.0, std::abs(y));
    if (y > scale) EXPECT_NEAR(act, c.RowLower(), tol * std::max(1.0, std::abs(act))) << c.name;
    if (y < -scale) EXPECT_NEAR(act, c.RowUpper(), tol * std::max(1.0, std::abs(act))) << c.name;
  }
  double dual_obj = 0.0;
  for (int i = 0; i < m.num_constraints(); ++i) {
    const Constraint& c = m.constraint(i);
    const double b = s.duals[i] > 0 ? c.RowLower() : c.RowUpper();
    if (s.duals[i] != 0.0 && std::isfinite(b)) dual_obj += s.duals[i] * b;
  }
  for (int j = 0; j < m.num_variables(); ++j) {
    const Variable& v = m.variable(j);
    EXPECT_NEAR(d[j], s.reduced_costs[j], 1e-6 * std::max(1.0, std::abs(d[j])));
    if (d[j] > tol) {
      EXPECT_NEAR(s.values[j], v.lower, tol * std::max(1.0, std::abs(v.lower)));
      dual_obj += d[j] * v.lower;
    } else if (d[j] < -tol) {
      EXPECT_NEAR(s.values[j], v.upper, tol * std::max(1.0, std::abs(v.upper)));
      dual_obj += d[j] * v.upper;
    }
  }
  EXPECT_NEAR(dual_obj + m.objective_offset(), s.objective,
              1e-6 * std::max(1.0, std::abs(s.objective)));
}

TEST(SolveLp, SingleBoundRowHasUnitDual) {
  Model m;
  const int x = m.AddContinuous("x", -kInf, kInf, 1.0);
  m.AddConstraint("lb", {{x, 1.0}}, Sense::kGreaterEqual, 3.0);
  const Solution s = SolveLp(m);
  ASSERT_EQ(s.status, Status::kOptimal);
  EXPECT_NEAR(s.values[x], 3.0, 1e-12);
  EXPECT_NEAR(s.duals[0], 1.0, 1e-12);
  EXPECT_NEAR(s.objective, 3.0, 1e-12);
}

TEST(SolveLp, InfeasiblePair) {
  Model m;
  const int x = m.AddContinuous("x", -kInf, kInf, 0.0);
  m.AddConstraint("a", {{x, 1.0}}, Sense::kLessEqual, 0.0);
  m.AddConstraint("b", {{x, 1.0}}, Sense::kGreaterEqual, 1.0);
  EXPECT_EQ(SolveLp(m).status, Status::kInfeasible);
}

TEST(SolveLp, Unbounded) {
  Model m;
  const int x = m.AddContinuous("x", 0, kInf, -1.0);
  const int y = m.AddContinuous("y", 0, kInf, 0.0);
  m.AddConstraint("a", {{x, 1.0}, {y, -1.0}}, Sense::kLessEqual, 1.0);
  EXPECT_EQ(SolveLp(m).status, Status::kUnbounded);
}

// max x + y over a square cut by three constraints through the optimal vertex.
TEST(SolveLp, DegenerateVertexMatchesEnumeration) {
  Model m;
  const int x = m.AddContinuous("x", 0, kInf, -1.0);
  const int y = m.AddContinuous("y", 0, kInf, -1.0);
  m.AddConstraint("c1", {{x, 1}, {y, 0}}, Sense::kLessEqual, 1);
  m.AddConstraint("c2", {{x, 0}, {y, 1}}, Sense::kLessEqual, 1);
  m.AddConstraint("c3", {{x, 1}, {y, 1}}, Sense::kLessEqual, 2);
  m.AddConstraint("c4", {{x, 2}, {y, 1}}, Sense::kLessEqual, 3);
  // Vertices of the polygon: (0,0) (1,0) (1,1) (0,1); best value -2.
  double best = 0.0;
  for (auto [vx, vy] : std::vector<std::pair<double, double>>{{0, 0}, {1, 0}, {1, 1}, {0, 1}}) {
    best = std::min(best, -vx - vy);
  }
  const Solution s = SolveLp(m);
  ExpectKkt(m, s);
  EXPECT_NEAR(s.objective, best, 1e-9);
}

TEST(SolveLp, BlandFallbackOnDegenerateCycle) {
  // Beale's cycling example.
  Model m;
  const int x1 = m.AddContinuous("x1", 0, kInf, -0.75);
  const int x2 = m.AddContinuous("x2", 0, kInf, 150);
  const int x3 = m.AddContinuous("x3", 0, kInf, -0.02);
  const int x4 = m.AddContinuous("x4", 0, kInf, 6);
  m.AddConstraint("r1", {{x1, 0.25}, {x2, -60}, {x3, -0.04}, {x4, 9}}, Sense::kLessEqual, 0);
  m.AddConstraint("r2", {{x1, 0.5}, {x2, -90}, {x3, -0.02}, {x4, 3}}, Sense::kLessEqual, 0);
  m.AddConstraint("r3", {{x3, 1}}, Sense::kLessEqual, 1);
  SolverParams p;
  p.bland_after = 1;
  const Solution s = SolveLp(m, p);
  ExpectKkt(m, s);
  EXPECT_NEAR(s.objective, -0.05, 1e-9);
}

TEST(SolveLp, RangedAndEqualityRows) {
  Model m;
  const int x = m.AddContinuous("x", 0, 10, 1.0);
  const int y = m.AddContinuous("y", 0, 10, 2.0);
  LinExpr e;
  e.Add(x, 1).Add(y, 1);
  m.AddRangedConstraint("band", e, 4, 6);
  m.AddConstraint("eq", {{x, 1}, {y, -1}}, Sense::kEqual, 1);
  const Solution s = SolveLp(m);
  ExpectKkt(m, s);
  EXPECT_NEAR(s.values[x], 2.5, 1e-9);
  EXPECT_NEAR(s.values[y], 1.5, 1e-9);
}

class RandomLp : public ::testing::TestWithParam<int> {};

TEST_P(RandomLp, SatisfiesKkt) {
  std::mt19937 rng(GetParam());
  std::uniform_real_distribution<double> u(-1, 1);
  std::uniform_int_distribution<int> nd(2, 25);
  const int n = nd(rng);
  const int rows = nd(rng);
  Model m;
  std::vector<double> x0(n);
  for (int j = 0; j < n; ++j) {
    const double lo = (rng() % 4 == 0) ? -kInf : -5 * std::abs(u(rng));
    const double up = (rng() % 4 == 0) ? kInf : 5 * std::abs(u(rng)) + 0.1;
    m.AddContinuous("x" + std::to_string(j), lo, up, 10 * u(rng));
    x0[j] = std::isfinite(lo) ? (std::isfinite(up) ? 0.5 * (lo + up) : lo + 1) : (std::isfinite(up) ? up - 1 : 0);
  }
  for (int i = 0; i < rows; ++i) {
    LinExpr e;
    for (int j = 0; j < n; ++j) {
      if (rng() % 3 == 0) e.Add(j, std::round(100 * u(rng)) / 10 * std::pow(10.0, (int)(rng() % 5) - 2));
    }
    const double act = e.Evaluate(x0);
    const int kind = rng() % 3;
    const double slack = std::abs(u(rng)) * 3;
    if (kind == 0) m.AddConstraint("r" + std::to_string(i), e, Sense::kLessEqual, act + slack);
    if (kind == 1) m.AddConstraint("r" + std::to_string(i), e, Sense::kGreaterEqual, act - slack);
    if (kind == 2) m.AddConstraint("r" + std::to_string(i), e, Sense::kEqual, act);
  }
  // Keep the problem bounded.
  for (int j = 0; j < n; ++j) {
    LinExpr e;
    e.Add(j, 1);
    m.AddRangedConstraint("box" + std::to_string(j), e, -100, 100);
  }
  const Solution s = SolveLp(m);
  ExpectKkt(m, s);
}

INSTANTIATE_TEST_SUITE_P(Seeds, RandomLp, ::testing::Range(0, 60));

TEST(SolveMilp, KnapsackMatchesEnumeration) {
  const std::vector<double> value = {10, 13, 7, 8, 4};
  const std::vector<double> weight = {5, 7, 4, 5, 2};
  const double cap = 12;
  Model m;
  LinExpr w;
  for (int i = 0; i < 5; ++i) {
    m.AddBinary("b" + std::to_string(i), -value[i]);
    w.Add(i, weight[i]);
  }
  m.AddConstraint("cap", w, Sense::kLessEqual, cap);
  double best = 0;
  for (int mask = 0; mask < 32; ++mask) {
    double v = 0, wt = 0;
    for (int i = 0; i < 5; ++i) {
      if (mask >> i & 1) {
        v += value[i];
        wt += weight[i];
      }
    }
    if (wt <= cap) best = std::max(best, v);
  }
  SolverParams p;
  p.rel_gap = 0;
  const Solution s = SolveMilp(m, p);
  ASSERT_EQ(s.status, Status::kOptimal);
  EXPECT_NEAR(s.objective, -best, 1e-9);
}

TEST(SolveMilp, PureLpMatchesSolveLp) {
  Model m;
  const int x = m.AddContinuous("x", 0, 4, -1.0);
  const int y = m.AddContinuous("y", 0, 4, -2.0);
  m.AddConstraint("c", {{x, 1}, {y, 3}}, Sense::kLessEqual, 6);
  const Solution a = SolveLp(m);
  const Solution b = SolveMilp(m);
  ASSERT_EQ(b.status, Status::kOptimal);
  EXPECT_NEAR(a.objective, b.objective, 1e-12);
  EXPECT_EQ(a.values, b.values);
}

TEST(SolveMilp, TenBinariesProvenWithinEnumerationBound) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> d(1, 20);
  Model m;
  std::vector<double> c(10), a(10), b(10);
  LinExpr r1, r2;
  for (int i = 0; i < 10; ++i) {
    c[i] = -d(rng);
    a[i] = d(rng);
    b[i] = d(rng);
    m.AddBinary("b" + std::to_string(i), c[i]);
    r1.Add(i, a[i]);
    r2.Add(i, b[i]);
  }
  m.AddConstraint("r1", r1, Sense::kLessEqual, 50);
  m.AddConstraint("r2", r2, Sense::kLessEqual, 45);
  double best = 0;
  for (int mask = 0; mask < 1024; ++mask) {
    double v = 0, w1 = 0, w2 = 0;
    for (int i = 0; i < 10; ++i) {
      if (mask >> i & 1) {
        v += c[i];
        w1 += a[i];
        w2 += b[i];
      }
    }
    if (w1 <= 50 && w2 <= 45) best = std::min(best, v);
  }
  SolverParams p;
  p.rel_gap = 0;
  p.abs_gap = 1e-9;
  const Solution s = SolveMilp(m, p);
  ASSERT_EQ(s.status, Status::kOptimal);
  EXPECT_NEAR(s.objective, best, 1e-9);
  EXPECT_LE(s.nodes, 2048);
  EXPECT_LE(s.best_bound, s.objective + 1e-9);
}

TEST(SolveMilp, GeneralIntegersAgainstEnumeration) {
  for (int seed = 0; seed < 20; ++seed) {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> d(-6, 6);
    Model m;
    for (int j = 0; j < 3; ++j) m.AddVariable("z" + std::to_string(j), VarKind::kInteger, -3, 3, d(rng));
    const int cont = m.AddContinuous("w", 0, 10, 0.5);
    std::vector<std::vector<int>> rows;
    for (int i = 0; i < 3; ++i) {
      std::vector<int> a = {d(rng), d(rng), d(rng)};
      rows.push_back(a);
      m.AddConstraint("r" + std::to_string(i), {{0, (double)a[0]}, {1, (double)a[1]}, {2, (double)a[2]}, {cont, -1}},
                      Sense::kLessEqual, 2);
    }
    double best = kInf;
    for (int z0 = -3; z0 <= 3; ++z0)
      for (int z1 = -3; z1 <= 3; ++z1)
        for (int z2 = -3; z2 <= 3; ++z2) {
          double need = 0;
          for (auto& a : rows) need = std::max(need, a[0] * z0 + a[1] * z1 + a[2] * z2 - 2.0);
          if (need > 10) continue;
          const double v = m.cost(0) * z0 + m.cost(1) * z1 + m.cost(2) * z2 + 0.5 * need;
          best = std::min(best, v);
        }
    SolverParams p;
    p.rel_gap = 0;
    const Solution s = SolveMilp(m, p);
    if (std::isinf(best)) {
      EXPECT_EQ(s.status, Status::kInfeasible);
    } else {
      ASSERT_EQ(s.status, Status::kOptimal) << seed;
      EXPECT_NEAR(s.objective, best, 1e-7) << seed;
    }
  }
}

TEST(SolveMilp, InfeasibleIntegerModel) {
  Model m;
  const int a = m.AddBinary("a");
  const int b = m.AddBinary("b");
  m.AddConstraint("r", {{a, 2}, {b, 2}}, Sense::kEqual, 1);
  EXPECT_EQ(SolveMilp(m).status, Status::kInfeasible);
}

TEST(SolveMilp, NodeLimitWithoutIncumbentIsReported) {
  Model m;
  LinExpr e;
  for (int i = 0; i < 12; ++i) {
    m.AddBinary("b" + std::to_string(i), -1);
    e.Add(i, 2);
  }
  m.AddConstraint("odd", e, Sense::kLessEqual, 11);
  SolverParams p;
  p.node_limit = 1;
  const Solution s = SolveMilp(m, p);
  EXPECT_FALSE(s.has_incumbent);
  EXPECT_EQ(s.status, Status::kIterationLimit);
}

TEST(SolveMilp, StartProvidesIncumbent) {
  Model m;
  LinExpr e;
  for (int i = 0; i < 6; ++i) {
    m.AddBinary("b" + std::to_string(i), -(i + 1));
    e.Add(i, i + 1);
  }
  m.AddConstraint("cap", e, Sense::kLessEqual, 10);
  SolverParams p;
  p.node_limit = 1;
  std::vector<double> start = {1, 1, 1, 1, 0, 0};
  const Solution s = SolveMilp(m, p, {start});
  EXPECT_TRUE(s.has_incumbent);
  EXPECT_LE(s.objective, -10 + 1e-9);
}

TEST(Simplex, WarmStartAfterBoundChange) {
  Model m;
  const int x = m.AddContinuous("x", 0, 10, -1);
  const int y = m.AddContinuous("y", 0, 10, -1);
  m.AddConstraint("c", {{x, 1}, {y, 2}}, Sense::kLessEqual, 12);
  Simplex lp(m);
  ASSERT_EQ(lp.Solve(), LpStatus::kOptimal);
  EXPECT_NEAR(lp.objective(), -11, 1e-9);
  lp.SetColumnBounds(x, 0, 4);
  ASSERT_EQ(lp.Solve(), LpStatus::kOptimal);
  EXPECT_NEAR(lp.objective(), -8, 1e-9);
  lp.ResetColumnBounds();
  ASSERT_EQ(lp.Solve(), LpStatus::kOptimal);
  EXPECT_NEAR(lp.objective(), -11, 1e-9);
}

}  // namespace
}  // namespace rzone::milp

namespace rzone::milp {
namespace {

// Larger transportation-style LPs: highly degenerate, many equalities.
class TransportLp : public ::testing::TestWithParam<int> {};

TEST_P(TransportLp, SatisfiesKkt) {
  std::mt19937 rng(1000 + GetParam());
  std::uniform_int_distribution<int> sz(5, 18);
  std::uniform_int_distribution<int> q(1, 9);
  const int src = sz(rng);
  const int dst = sz(rng);
  std::vector<double> supply(src), demand(dst, 0.0);
  double total = 0.0;
  for (double& s : supply) total += (s = 10 * q(rng));
  for (int k = 0; k < src; ++k) demand[k % dst] += supply[k];
  Model m;
  for (int a = 0; a < src; ++a) {
    for (int b = 0; b < dst; ++b) {
      m.AddContinuous(fmt::format("t{}_{}", a, b), 0, (rng() % 5 == 0) ? 2.0 * total : kInf, q(rng));
    }
  }
  for (int a = 0; a < src; ++a) {
    LinExpr e;
    for (int b = 0; b < dst; ++b) e.Add(a * dst + b, 1.0);
    m.AddConstraint(fmt::format("s{}", a), e, Sense::kEqual, supply[a]);
  }
  for (int b = 0; b < dst; ++b) {
    LinExpr e;
    for (int a = 0; a < src; ++a) e.Add(a * dst + b, 1.0);
    m.AddConstraint(fmt::format("d{}", b), e, Sense::kGreaterEqual, demand[b]);
  }
  ExpectKkt(m, SolveLp(m));
}

INSTANTIATE_TEST_SUITE_P(Seeds, TransportLp, ::testing::Range(0, 25));

}  // namespace
}  // namespace rzone::milp
