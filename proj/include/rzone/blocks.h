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

#ifndef RZONE_BLOCKS_H_
#define RZONE_BLOCKS_H_

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "rzone/milp/model.h"
#include "rzone/network.h"

// Constraint blocks shared by the market, zonal and decomposition models.
// Upstream quantities (reserves, schedules, line margins) enter as affine
// expressions so the same block serves fixed values and decision variables.
namespace rzone {

using Exprs = std::vector<milp::LinExpr>;

Exprs Constants(const std::vector<double>& values);
Exprs VarExprs(const std::vector<int>& vars);

// Tie-breaking cost added per generator so equal offers clear in id order.
inline double TieBreak(int generator_id) { return 1e-9 * generator_id; }

struct ReserveBlock {
  std::vector<int> up;  // per generator
  std::vector<int> dn;
  int up_row = -1;      // sum r+ >= requirement (when requested)
  int dn_row = -1;
};

// 0 <= r <= offer caps, costed at the capacity offers.
ReserveBlock AddReserveVariables(milp::Model& model, const PowerNetwork& net,
                                 bool tie_break, const std::string& prefix);
void AddReserveRequirements(milp::Model& model, ReserveBlock& block,
                            double up, double dn);

struct DayAheadBlock {
  std::vector<int> p;
  std::vector<int> w;
  int balance_row = -1;
  std::vector<int> p_lo_rows;   // p - r- >= p_min (-1 when a bound)
  std::vector<int> p_up_rows;   // p + r+ <= p_max (-1 when a bound)
  std::vector<int> flow_up_rows;  // flow + margin <= rating
  std::vector<int> flow_dn_rows;  // flow - margin >= -rating
};

// Balance, generation limits shifted by reserves, wind up to forecast and,
// when `margins` is non-null, PTDF flow limits |flow| <= rating - margin.
DayAheadBlock AddDayAheadBlock(milp::Model& model, const PowerNetwork& net,
                               const GridMatrices& mats, const Exprs& r_up,
                               const Exprs& r_dn, const Exprs* margins,
                               bool tie_break, const std::string& prefix);

struct BalancingBlock {
  std::vector<int> up;
  std::vector<int> dn;
  std::vector<int> curtail;
  std::vector<int> shed;
  std::vector<int> up_rows;  // p+ <= r+ (-1 when a bound)
  std::vector<int> dn_rows;
  int balance_row = -1;
  std::vector<int> flow_up_rows;
  std::vector<int> flow_dn_rows;
};

// Recourse for one wind realization, costs scaled by `weight`.
BalancingBlock AddBalancingBlock(milp::Model& model, const PowerNetwork& net,
                                 const GridMatrices& mats, const Exprs& p_da,
                                 const Exprs& w_da, const Exprs& r_up,
                                 const Exprs& r_dn,
                                 const Eigen::VectorXd& wind, double weight,
                                 bool tie_break, const std::string& prefix);

// Line flows of a nodal injection vector.
Eigen::VectorXd Flows(const GridMatrices& mats, const Eigen::VectorXd& inj);

// Nodal injection of generator and wind output net of load.
Eigen::VectorXd Injection(const PowerNetwork& net,
                          const std::vector<double>& p,
                          const std::vector<double>& w,
                          const std::vector<double>& shed = {});

}  // namespace rzone

#endif  // RZONE_BLOCKS_H_
