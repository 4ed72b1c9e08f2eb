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

#include "rzone/scenarios.h"

#include <fmt/core.h>

#include <algorithm>
#include <boost/math/special_functions/beta.hpp>
#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <sstream>

#include "rzone/error.h"

namespace rzone {
namespace {

std::vector<double> Ranks(const Eigen::RowVectorXd& v) {
  const int n = static_cast<int>(v.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return v(a) < v(b); });
  std::vector<double> rank(n);
  for (int i = 0; i < n;) {
    int j = i;
    while (j + 1 < n && v(order[j + 1]) == v(order[i])) ++j;
    double avg = 0.5 * (i + j) + 1.0;
    for (int k = i; k <= j; ++k) rank[order[k]] = avg;
    i = j + 1;
  }
  return rank;
}

double Distance(const ScenarioSet& set, int a, int b) {
  return (set.wind.col(a) - set.wind.col(b)).norm();
}

std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    size_t a = cell.find_first_not_of(" \t\r");
    size_t b = cell.find_last_not_of(" \t\r");
    out.push_back(a == std::string::npos ? "" : cell.substr(a, b - a + 1));
  }
  return out;
}

double ParseDouble(const std::string& s, int line) {
  try {
    size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(
        fmt::format("scenario file line {}: bad number '{}'", line, s));
  }
}

}  // namespace

BetaShape BetaMarginal(double p_hat, double variance) {
  BetaShape shape;
  if (!(p_hat >= 0.0 && p_hat <= 1.0)) {
    throw ConfigError(
        fmt::format("point forecast {} outside [0, 1]", p_hat));
  }
  if (p_hat == 0.0 || p_hat == 1.0) {
    shape.degenerate = true;
    shape.point = p_hat;
    return shape;
  }
  const double limit = p_hat * (1.0 - p_hat);
  if (!(variance > 0.0 && variance < limit)) {
    throw ConfigError(fmt::format(
        "infeasible Beta variance {} for forecast {} (need 0 < v < {})",
        variance, p_hat, limit));
  }
  const double k = limit / variance - 1.0;
  shape.alpha = p_hat * k;
  shape.beta = (1.0 - p_hat) * k;
  return shape;
}

BetaShape BetaMarginal(double p_hat, const VarianceLaw& law) {
  return BetaMarginal(p_hat, law(p_hat));
}

Eigen::MatrixXd DistanceDecayCorrelation(const PowerNetwork& net,
                                         double length) {
  if (!(length > 0)) throw ConfigError("correlation length must be positive");
  const int j = net.num_wind();
  Eigen::MatrixXd corr(j, j);
  for (int a = 0; a < j; ++a) {
    for (int b = 0; b < j; ++b) {
      double d = std::abs(net.wind[a].bus - net.wind[b].bus);
      corr(a, b) = std::exp(-d / length);
    }
  }
  return corr;
}

ProbabilisticForecast ForecastFromNetwork(const PowerNetwork& net,
                                          double corr_length,
                                          const VarianceLaw& law) {
  ProbabilisticForecast f;
  for (const WindFarm& w : net.wind) {
    f.farm_ids.push_back(w.id);
    f.capacity.push_back(w.capacity);
    f.p_hat.push_back(w.capacity > 0 ? w.forecast / w.capacity : 0.0);
  }
  f.law = law;
  f.rank_corr = DistanceDecayCorrelation(net, corr_length);
  return f;
}

double ScenarioSet::ExpectedTotal() const {
  double total = 0.0;
  for (int s = 0; s < size(); ++s) total += prob[s] * Total(s);
  return total;
}

void ValidateScenarioSet(const ScenarioSet& set,
                         const std::vector<double>& capacity) {
  if (set.size() == 0) throw ConfigError("scenario set is empty");
  if (set.wind.cols() != set.size()) {
    throw ConfigError("scenario set: probability count mismatch");
  }
  if (static_cast<int>(set.farm_ids.size()) != set.num_farms()) {
    throw ConfigError("scenario set: farm id count mismatch");
  }
  double sum = 0.0;
  for (int s = 0; s < set.size(); ++s) {
    if (!(set.prob[s] > 0.0)) {
      throw ConfigError(fmt::format(
          "scenario {}: probability {} must be positive", s + 1, set.prob[s]));
    }
    sum += set.prob[s];
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw ConfigError(
        fmt::format("scenario probabilities sum to {:.12g}, not 1", sum));
  }
  if (!capacity.empty()) {
    if (static_cast<int>(capacity.size()) != set.num_farms()) {
      throw ConfigError(fmt::format(
          "scenario set has {} farms but the case has {}", set.num_farms(),
          capacity.size()));
    }
    for (int j = 0; j < set.num_farms(); ++j) {
      for (int s = 0; s < set.size(); ++s) {
        double w = set.wind(j, s);
        if (w < -1e-9 || w > capacity[j] + 1e-9) {
          throw ConfigError(fmt::format(
              "scenario {}: wind {} = {} outside [0, {}]", s + 1,
              set.farm_ids[j], w, capacity[j]));
        }
      }
    }
  }
}

Eigen::MatrixXd SpearmanToPearson(const Eigen::MatrixXd& rank_corr) {
  Eigen::MatrixXd out = rank_corr;
  for (Eigen::Index a = 0; a < out.rows(); ++a) {
    for (Eigen::Index b = 0; b < out.cols(); ++b) {
      out(a, b) = a == b ? 1.0
                         : 2.0 * std::sin(std::numbers::pi * rank_corr(a, b) /
                                          6.0);
    }
  }
  return out;
}

ScenarioSet SampleScenarios(const ProbabilisticForecast& forecast, int count,
                            uint64_t seed, std::vector<std::string>* warnings) {
  const int j = static_cast<int>(forecast.p_hat.size());
  if (count < 1) throw ConfigError("scenario count must be at least 1");
  if (forecast.rank_corr.rows() != j || forecast.rank_corr.cols() != j) {
    throw ConfigError("rank correlation size does not match the farm count");
  }
  const Eigen::MatrixXd& rc = forecast.rank_corr;
  for (int a = 0; a < j; ++a) {
    if (std::abs(rc(a, a) - 1.0) > 1e-12) {
      throw ConfigError("rank correlation diagonal must be 1");
    }
    for (int b = 0; b < j; ++b) {
      if (std::abs(rc(a, b) - rc(b, a)) > 1e-12 || std::abs(rc(a, b)) > 1.0) {
        throw ConfigError("rank correlation must be symmetric within [-1, 1]");
      }
    }
  }
  std::vector<BetaShape> shapes;
  for (int k = 0; k < j; ++k) {
    shapes.push_back(BetaMarginal(forecast.p_hat[k], forecast.law));
  }

  Eigen::MatrixXd factor = Eigen::MatrixXd::Zero(j, j);
  if (j > 0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> rank_eig(rc);
    double min_rank = rank_eig.eigenvalues().minCoeff();
    if (min_rank < -1e-10) {
      throw ConfigError(fmt::format(
          "rank correlation is not positive semidefinite (smallest "
          "eigenvalue {:.6g})",
          min_rank));
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(SpearmanToPearson(rc));
    Eigen::VectorXd values = eig.eigenvalues();
    if (values.minCoeff() < -1e-12) {
      if (warnings) {
        warnings->push_back(fmt::format(
            "copula correlation indefinite (smallest eigenvalue {:.6g}); "
            "eigenvalues clipped at zero",
            values.minCoeff()));
      }
    }
    values = values.cwiseMax(0.0);
    factor = eig.eigenvectors() * values.cwiseSqrt().asDiagonal();
    // Rescale rows so the clipped matrix keeps a unit diagonal.
    for (int a = 0; a < j; ++a) {
      double norm = factor.row(a).norm();
      if (norm > 0) factor.row(a) /= norm;
    }
  }

  ScenarioSet set;
  set.farm_ids = forecast.farm_ids;
  set.wind.resize(j, count);
  set.prob.assign(count, 1.0 / count);
  boost::random::mt19937_64 rng(seed);
  boost::random::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd z(j);
  for (int s = 0; s < count; ++s) {
    for (int k = 0; k < j; ++k) z(k) = normal(rng);
    Eigen::VectorXd x = factor * z;
    for (int k = 0; k < j; ++k) {
      const BetaShape& shape = shapes[k];
      double frac;
      if (shape.degenerate) {
        frac = shape.point;
      } else {
        double u = 0.5 * std::erfc(-x(k) / std::numbers::sqrt2);
        u = std::clamp(u, 1e-300, 1.0 - 1e-16);
        frac = boost::math::ibeta_inv(shape.alpha, shape.beta, u);
      }
      set.wind(k, s) = forecast.capacity[k] * frac;
    }
  }
  return set;
}

std::vector<int> FastForwardSelect(const ScenarioSet& set, int target) {
  const int n = set.size();
  if (target < 1 || target > n) {
    throw ConfigError(
        fmt::format("reduction target {} outside 1..{}", target, n));
  }
  const bool cached = n <= 4096;
  Eigen::MatrixXd dist;
  if (cached) {
    dist.resize(n, n);
    for (int a = 0; a < n; ++a) {
      dist(a, a) = 0.0;
      for (int b = a + 1; b < n; ++b) dist(a, b) = dist(b, a) = Distance(set, a, b);
    }
  }
  auto d = [&](int a, int b) { return cached ? dist(a, b) : Distance(set, a, b); };

  const double kInfDist = std::numeric_limits<double>::infinity();
  // Distance of each scenario to the selected set.
  std::vector<double> nearest(n, kInfDist);
  std::vector<char> chosen(n, 0);
  std::vector<int> selected;
  while (static_cast<int>(selected.size()) < target) {
    int best = -1;
    double best_value = kInfDist;
    for (int u = 0; u < n; ++u) {
      if (chosen[u]) continue;
      double value = 0.0;
      for (int k = 0; k < n; ++k) {
        if (chosen[k] || k == u) continue;
        value += set.prob[k] * std::min(nearest[k], d(k, u));
      }
      if (value < best_value) {
        best_value = value;
        best = u;
      }
    }
    chosen[best] = 1;
    selected.push_back(best);
    for (int k = 0; k < n; ++k) nearest[k] = std::min(nearest[k], d(k, best));
  }
  return selected;
}

double ReductionDistance(const ScenarioSet& set,
                         const std::vector<int>& selected) {
  std::vector<char> chosen(set.size(), 0);
  for (int s : selected) chosen[s] = 1;
  double total = 0.0;
  for (int k = 0; k < set.size(); ++k) {
    if (chosen[k]) continue;
    double best = std::numeric_limits<double>::infinity();
    for (int s : selected) best = std::min(best, Distance(set, k, s));
    total += set.prob[k] * best;
  }
  return total;
}

ScenarioSet FastForwardReduce(const ScenarioSet& set, int target) {
  std::vector<int> selected = FastForwardSelect(set, target);
  std::sort(selected.begin(), selected.end());
  std::vector<double> prob(selected.size(), 0.0);
  for (int k = 0; k < set.size(); ++k) {
    int best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < selected.size(); ++i) {
      if (selected[i] == k) {
        best = static_cast<int>(i);
        break;
      }
      double dk = Distance(set, k, selected[i]);
      if (dk < best_dist) {
        best_dist = dk;
        best = static_cast<int>(i);
      }
    }
    prob[best] += set.prob[k];
  }
  ScenarioSet out;
  out.farm_ids = set.farm_ids;
  out.wind.resize(set.num_farms(), selected.size());
  for (size_t i = 0; i < selected.size(); ++i) {
    out.wind.col(i) = set.wind.col(selected[i]);
  }
  out.prob = std::move(prob);
  return out;
}

Requirements DeterministicRequirements(const ScenarioSet& set, double q) {
  if (!(q > 0.0 && q < 1.0)) {
    throw ConfigError(fmt::format("quantile {} outside (0, 1)", q));
  }
  const int n = set.size();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> totals(n);
  for (int s = 0; s < n; ++s) totals[s] = set.Total(s);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return totals[a] < totals[b]; });
  auto inverse_cdf = [&](double level) {
    double cum = 0.0;
    for (int s : order) {
      cum += set.prob[s];
      if (cum >= level - 1e-12) return totals[s];
    }
    return totals[order.back()];
  };
  const double expected = set.ExpectedTotal();
  Requirements req;
  req.up = std::max(0.0, expected - inverse_cdf(q));
  req.dn = std::max(0.0, inverse_cdf(1.0 - q) - expected);
  return req;
}

Eigen::MatrixXd SampleRankCorrelation(const ScenarioSet& set) {
  const int j = set.num_farms();
  const int n = set.size();
  Eigen::MatrixXd ranks(j, n);
  for (int k = 0; k < j; ++k) {
    std::vector<double> r = Ranks(set.wind.row(k));
    for (int s = 0; s < n; ++s) ranks(k, s) = r[s];
  }
  Eigen::MatrixXd corr = Eigen::MatrixXd::Identity(j, j);
  for (int a = 0; a < j; ++a) {
    Eigen::RowVectorXd ca = ranks.row(a).array() - ranks.row(a).mean();
    for (int b = a + 1; b < j; ++b) {
      Eigen::RowVectorXd cb = ranks.row(b).array() - ranks.row(b).mean();
      double denom = ca.norm() * cb.norm();
      corr(a, b) = corr(b, a) = denom > 0 ? ca.dot(cb) / denom : 0.0;
    }
  }
  return corr;
}

std::string WriteScenarioText(const ScenarioSet& set) {
  std::string out = "farm_ids";
  for (int id : set.farm_ids) out += fmt::format(",{}", id);
  out += "\n";
  for (int s = 0; s < set.size(); ++s) {
    out += fmt::format("{},{:.15g}", s + 1, set.prob[s]);
    for (int j = 0; j < set.num_farms(); ++j) {
      out += fmt::format(",{:.15g}", set.wind(j, s));
    }
    out += "\n";
  }
  return out;
}

ScenarioSet ParseScenarioText(std::string_view text) {
  std::stringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  ScenarioSet set;
  bool header = false;
  std::vector<std::vector<double>> columns;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#' || line == "\r") continue;
    std::vector<std::string> cells = SplitCsv(line);
    if (!header) {
      if (cells.empty() || cells[0] != "farm_ids") {
        throw ConfigError(fmt::format(
            "scenario file line {}: expected a farm_ids header", line_no));
      }
      for (size_t k = 1; k < cells.size(); ++k) {
        set.farm_ids.push_back(
            static_cast<int>(ParseDouble(cells[k], line_no)));
      }
      header = true;
      continue;
    }
    if (cells.size() != set.farm_ids.size() + 2) {
      throw ConfigError(fmt::format(
          "scenario file line {}: expected {} fields, found {}", line_no,
          set.farm_ids.size() + 2, cells.size()));
    }
    int index = static_cast<int>(ParseDouble(cells[0], line_no));
    if (index != static_cast<int>(columns.size()) + 1) {
      throw ConfigError(fmt::format(
          "scenario file line {}: scenario {} out of sequence", line_no,
          index));
    }
    set.prob.push_back(ParseDouble(cells[1], line_no));
    std::vector<double> col;
    for (size_t k = 2; k < cells.size(); ++k) {
      col.push_back(ParseDouble(cells[k], line_no));
    }
    columns.push_back(std::move(col));
  }
  if (!header) throw ConfigError("scenario file: missing farm_ids header");
  set.wind.resize(set.farm_ids.size(), columns.size());
  for (size_t s = 0; s < columns.size(); ++s) {
    for (size_t j = 0; j < columns[s].size(); ++j) set.wind(j, s) = columns[s][j];
  }
  ValidateScenarioSet(set);
  return set;
}

ScenarioSet LoadScenarioFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open scenario file '{}'", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseScenarioText(buffer.str());
}

ScenarioSet PointForecastSet(const PowerNetwork& net) {
  ScenarioSet set;
  set.wind.resize(net.num_wind(), 1);
  for (int j = 0; j < net.num_wind(); ++j) {
    set.farm_ids.push_back(net.wind[j].id);
    set.wind(j, 0) = net.wind[j].forecast;
  }
  set.prob = {1.0};
  return set;
}

}  // namespace rzone
