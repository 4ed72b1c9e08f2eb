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

#include <random>
#include <string>

#include "rzone/error.h"
#include "rzone/network.h"
#include "test_data.h"

namespace rzone {
namespace {

PowerNetwork Ring(int n, double x = 0.1) {
  PowerNetwork net;
  for (int b = 1; b <= n; ++b) net.buses.push_back({b, 10.0});
  for (int k = 1; k <= n; ++k) {
    net.lines.push_back({k, k, k % n + 1, x, 100.0});
  }
  net.generators.push_back({1, 1, 0, 100, 10, 1, 1, 10, 10});
  net.curtail_cost = 50;
  net.shed_cost = 500;
  return net;
}

// Direct DC solve: theta from the reduced susceptance matrix, flows from
// angle differences.
Eigen::VectorXd DirectFlows(const PowerNetwork& net, const Eigen::VectorXd& u) {
  const int n = net.num_buses();
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
  for (const Line& l : net.lines) {
    double s = 1.0 / l.reactance;
    int i = l.from - 1, j = l.to - 1;
    b(i, i) += s;
    b(j, j) += s;
    b(i, j) -= s;
    b(j, i) -= s;
  }
  const int k = net.slack - 1;
  std::vector<int> keep;
  for (int i = 0; i < n; ++i) {
    if (i != k) keep.push_back(i);
  }
  Eigen::MatrixXd br(n - 1, n - 1);
  Eigen::VectorXd ur(n - 1);
  for (int a = 0; a < n - 1; ++a) {
    ur(a) = u(keep[a]);
    for (int c = 0; c < n - 1; ++c) br(a, c) = b(keep[a], keep[c]);
  }
  Eigen::VectorXd theta_r = br.lu().solve(ur);
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(n);
  for (int a = 0; a < n - 1; ++a) theta(keep[a]) = theta_r(a);
  Eigen::VectorXd f(net.num_lines());
  for (int l = 0; l < net.num_lines(); ++l) {
    const Line& line = net.lines[l];
    f(l) = (theta(line.from - 1) - theta(line.to - 1)) / line.reactance;
  }
  return f;
}

TEST(Network, LoadsRingFixture) {
  PowerNetwork net = LoadCaseFile(CasePath("ring4"));
  EXPECT_EQ(net.num_buses(), 4);
  EXPECT_EQ(net.num_lines(), 4);
  EXPECT_EQ(net.lines[0].from, 1);
  EXPECT_EQ(net.lines[3].to, 1);
}

TEST(Network, LoadsRts24Counts) {
  PowerNetwork net = LoadCaseFile(CasePath("rts24"));
  EXPECT_EQ(net.num_buses(), 24);
  EXPECT_EQ(net.num_lines(), 38);
  EXPECT_EQ(net.num_generators(), 12);
  EXPECT_DOUBLE_EQ(net.TotalLoad(), 2850.0);
  EXPECT_EQ(net.num_wind(), 6);
}

TEST(Network, LoadsEveryBundledCase) {
  for (const char* name :
       {"ring4", "path3", "tiny2", "six_bus", "eight_bus", "congested4",
        "rts24", "rts96"}) {
    SCOPED_TRACE(name);
    PowerNetwork net = LoadCaseFile(CasePath(name));
    EXPECT_TRUE(VerifyNetwork(net).violations.empty());
    EXPECT_NO_THROW(BuildMatrices(net));
  }
}

TEST(Network, MissingBusIsNamed) {
  PowerNetwork net = Ring(4);
  net.lines[2].to = 99;
  std::string text = ExportCase(net);
  try {
    ParseCase(text);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kConfig);
    std::string what = e.what();
    EXPECT_NE(what.find("line 3"), std::string::npos) << what;
    EXPECT_NE(what.find("99"), std::string::npos) << what;
  }
}

TEST(Network, RejectsSchemaViolations) {
  EXPECT_THROW(ParseCase("{"), Error);
  EXPECT_THROW(ParseCase(R"({"buses": [], "lines": []})"), Error);
  PowerNetwork net = Ring(3);
  std::string text = ExportCase(net);
  std::string typed = text;
  typed.replace(typed.find("\"load\": 10.0"), 12, "\"load\": \"x\"");
  EXPECT_THROW(ParseCase(typed), Error);
  std::string extra = text;
  extra.replace(extra.find("\"slack\""), 7, "\"slak\"");
  EXPECT_THROW(ParseCase(extra), Error);
}

TEST(Network, RejectsDisconnectedAndPenaltyOrder) {
  PowerNetwork net = Ring(4);
  net.buses.push_back({5, 0.0});
  EXPECT_THROW(ValidateNetwork(net), Error);
  net = Ring(4);
  net.curtail_cost = 5;  // below the energy cost 10
  EXPECT_THROW(ValidateNetwork(net), Error);
  net = Ring(4);
  net.shed_cost = 40;  // below curtailment
  EXPECT_THROW(ValidateNetwork(net), Error);
  net = Ring(4);
  net.generators[0].up_cap = 200;
  EXPECT_THROW(ValidateNetwork(net), Error);
}

TEST(Network, ExportRoundTrip) {
  for (const char* name : {"ring4", "rts24"}) {
    PowerNetwork net = LoadCaseFile(CasePath(name));
    std::string text = ExportCase(net);
    EXPECT_EQ(ExportCase(ParseCase(text)), text);
  }
}

TEST(Network, TwoBusPtdf) {
  PowerNetwork net;
  net.buses = {{1, 0}, {2, 10}};
  net.lines = {{1, 1, 2, 0.1, 50}};
  net.curtail_cost = 1;
  net.shed_cost = 2;
  GridMatrices m = BuildMatrices(net);
  ASSERT_EQ(m.ptdf.rows(), 1);
  EXPECT_DOUBLE_EQ(m.ptdf(0, 0), 0.0);
  EXPECT_NEAR(m.ptdf(0, 1), -1.0, 1e-12);
}

TEST(Network, ThreeBusRingThirds) {
  GridMatrices m = BuildMatrices(Ring(3));
  for (int l = 0; l < 3; ++l) {
    EXPECT_EQ(m.ptdf(l, 0), 0.0);
    for (int n = 1; n < 3; ++n) {
      double a = std::abs(m.ptdf(l, n));
      bool third = std::abs(a - 1.0 / 3) < 1e-12;
      bool two_thirds = std::abs(a - 2.0 / 3) < 1e-12;
      EXPECT_TRUE(third || two_thirds) << m.ptdf(l, n);
    }
  }
  // Injection at bus 2 withdrawn at bus 1: two thirds over line 1 (1->2)
  // flowing backwards.
  EXPECT_NEAR(m.ptdf(0, 1), -2.0 / 3, 1e-12);
}

TEST(Network, FourBusRingReversalSymmetry) {
  // Relabel bus k -> 2 - k (mod 4) with bus 1 fixed; line (k, k+1) maps to
  // line (k-1 .. ) reversed.
  PowerNetwork net = Ring(4);
  GridMatrices m = BuildMatrices(net);
  auto perm = [](int b) { return (4 - (b - 1)) % 4 + 1; };  // 1,4,3,2
  for (int l = 0; l < 4; ++l) {
    const Line& line = net.lines[l];
    int a = perm(line.from), b = perm(line.to);
    // Find the image line (same endpoints, opposite orientation).
    int image = -1;
    for (int k = 0; k < 4; ++k) {
      if (net.lines[k].from == b && net.lines[k].to == a) image = k;
    }
    ASSERT_GE(image, 0);
    for (int n = 1; n <= 4; ++n) {
      EXPECT_NEAR(m.ptdf(l, n - 1), -m.ptdf(image, perm(n) - 1), 1e-12);
    }
  }
}

TEST(Network, IncidenceRows) {
  PowerNetwork net = LoadCaseFile(CasePath("rts24"));
  GridMatrices m = BuildMatrices(net);
  for (int l = 0; l < net.num_lines(); ++l) {
    EXPECT_DOUBLE_EQ(m.branch.row(l).sum(), 0.0);
    EXPECT_DOUBLE_EQ(m.branch.row(l).cwiseAbs().sum(), 2.0);
    EXPECT_DOUBLE_EQ(m.branch(l, net.lines[l].from - 1), -1.0);
  }
  for (int g = 0; g < net.num_generators(); ++g) {
    EXPECT_DOUBLE_EQ(m.gen_map.row(g).sum(), 1.0);
  }
  for (int j = 0; j < net.num_wind(); ++j) {
    EXPECT_DOUBLE_EQ(m.wind_map.row(j).sum(), 1.0);
  }
  EXPECT_TRUE(m.ptdf.col(net.slack - 1).isZero());
}

TEST(Network, PtdfMatchesDirectSolve) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> unif(-50, 50);
  std::uniform_real_distribution<double> react(0.05, 0.5);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 3 + trial % 8;
    PowerNetwork net = Ring(n);
    for (auto& l : net.lines) l.reactance = react(rng);
    // A few chords.
    for (int c = 0; c < n / 2; ++c) {
      int a = 1 + rng() % n, b = 1 + rng() % n;
      if (a == b) continue;
      net.lines.push_back({net.num_lines() + 1, a, b, react(rng), 100});
    }
    net.slack = 1 + trial % n;
    GridMatrices m = BuildMatrices(net);
    Eigen::VectorXd u(n);
    for (int b = 0; b < n; ++b) u(b) = unif(rng);
    u(n - 1) -= u.sum();
    Eigen::VectorXd f = m.ptdf * u;
    EXPECT_LE((f - DirectFlows(net, u)).cwiseAbs().maxCoeff(), 1e-9);
    // Net outflow at each bus equals its injection.
    Eigen::VectorXd balance = -(m.branch.transpose() * f);
    EXPECT_LE((balance - u).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(Network, SlackInvariantForBalancedInjections) {
  PowerNetwork net = LoadCaseFile(CasePath("six_bus"));
  GridMatrices base = BuildMatrices(net);
  Eigen::VectorXd u(6);
  u << 30, -10, -25, 40, -20, -15;
  for (int s = 2; s <= 6; ++s) {
    net.slack = s;
    GridMatrices m = BuildMatrices(net);
    EXPECT_LE((m.ptdf * u - base.ptdf * u).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(Network, SingularReducedMatrix) {
  PowerNetwork net = Ring(4);
  net.buses.push_back({5, 0.0});
  EXPECT_THROW(BuildMatrices(net), Error);
}

TEST(Network, VerifyReports) {
  PowerNetwork net = Ring(4);
  EXPECT_TRUE(VerifyNetwork(net).violations.empty());
  net.buses.push_back({5, 0.0});
  NetworkReport report = VerifyNetwork(net);
  EXPECT_FALSE(report.connected);
  ASSERT_EQ(report.islanded_buses.size(), 1u);
  EXPECT_EQ(report.islanded_buses[0], 5);
  ASSERT_FALSE(report.violations.empty());
  EXPECT_NE(report.violations[0].find("islanded bus"), std::string::npos);

  net = Ring(4);
  net.generators[0].p_max = 20;  // load is 40
  report = VerifyNetwork(net);
  EXPECT_TRUE(report.violations.empty());
  ASSERT_EQ(report.warnings.size(), 1u);
  EXPECT_NE(report.warnings[0].find("adequacy"), std::string::npos);
}

}  // namespace
}  // namespace rzone
