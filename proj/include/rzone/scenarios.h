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

#ifndef RZONE_SCENARIOS_H_
#define RZONE_SCENARIOS_H_

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "rzone/network.h"

namespace rzone {

// Forecast-error variance as a quadratic in the per-unit point forecast.
struct VarianceLaw {
  double c0 = 0.04;
  double c1 = 0.10;
  double c2 = -0.10;

  double operator()(double p) const { return c0 + c1 * p + c2 * p * p; }
};

struct BetaShape {
  double alpha = 0.0;
  double beta = 0.0;
  // Point forecast of exactly 0 or 1: the distribution is a point mass.
  bool degenerate = false;
  double point = 0.0;
};

// Moment matching: mean p_hat, variance law(p_hat). Throws Error(kConfig)
// when the variance is not in (0, p_hat (1 - p_hat)).
BetaShape BetaMarginal(double p_hat, const VarianceLaw& law);
BetaShape BetaMarginal(double p_hat, double variance);

struct ProbabilisticForecast {
  std::vector<int> farm_ids;
  std::vector<double> capacity;  // MW
  std::vector<double> p_hat;     // per unit of capacity
  VarianceLaw law;
  Eigen::MatrixXd rank_corr;     // Spearman, J x J
};

// exp(-|bus_i - bus_j| / length) over the farms' bus indices.
Eigen::MatrixXd DistanceDecayCorrelation(const PowerNetwork& net,
                                         double length);

ProbabilisticForecast ForecastFromNetwork(const PowerNetwork& net,
                                          double corr_length = 5.0,
                                          const VarianceLaw& law = {});

struct ScenarioSet {
  std::vector<int> farm_ids;
  Eigen::MatrixXd wind;  // J x S, MW
  std::vector<double> prob;

  int num_farms() const { return static_cast<int>(wind.rows()); }
  int size() const { return static_cast<int>(prob.size()); }
  double Total(int s) const { return wind.col(s).sum(); }
  double ExpectedTotal() const;
};

// Throws Error(kConfig) unless probabilities are positive and sum to one
// within 1e-9 and, when capacities are given, 0 <= W <= capacity.
void ValidateScenarioSet(const ScenarioSet& set,
                         const std::vector<double>& capacity = {});

// Spearman to Pearson for the Gaussian copula: 2 sin(pi rho / 6).
Eigen::MatrixXd SpearmanToPearson(const Eigen::MatrixXd& rank_corr);

// Equiprobable draws from the Gaussian copula with Beta marginals, using
// a Mersenne Twister (mt19937_64) stream seeded by `seed`. Throws
// Error(kConfig) if the rank correlation is not a PSD correlation matrix.
// If only the converted matrix is indefinite, its eigenvalues are clipped
// at zero and a message is appended to `warnings`.
ScenarioSet SampleScenarios(const ProbabilisticForecast& forecast, int count,
                            uint64_t seed,
                            std::vector<std::string>* warnings = nullptr);

// Greedy forward selection under Euclidean distance. Returns the selected
// scenario indices in selection order.
std::vector<int> FastForwardSelect(const ScenarioSet& set, int target);

// Probability-weighted distance of every unselected scenario to its
// nearest selected one.
double ReductionDistance(const ScenarioSet& set,
                         const std::vector<int>& selected);

// Selected scenarios, each absorbing the probability of the unselected
// scenarios closest to it.
ScenarioSet FastForwardReduce(const ScenarioSet& set, int target);

struct Requirements {
  double up = 0.0;
  double dn = 0.0;
};

// Up: expected total minus the lower q-quantile; down: upper (1 - q)
// quantile minus expected total; both clamped at zero. The empirical
// quantile is the smallest total whose cumulative probability reaches q.
Requirements DeterministicRequirements(const ScenarioSet& set, double q);

// Sample Spearman correlation across farms.
Eigen::MatrixXd SampleRankCorrelation(const ScenarioSet& set);

// CSV: a `farm_ids,...` header then `s,prob,W_1..W_J` rows, 15
// significant digits.
std::string WriteScenarioText(const ScenarioSet& set);
ScenarioSet ParseScenarioText(std::string_view text);
ScenarioSet LoadScenarioFile(const std::string& path);

// The single scenario equal to the point forecast.
ScenarioSet PointForecastSet(const PowerNetwork& net);

}  // namespace rzone

#endif  // RZONE_SCENARIOS_H_
