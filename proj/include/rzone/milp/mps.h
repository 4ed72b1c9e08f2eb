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

#ifndef RZONE_MILP_MPS_H_
#define RZONE_MILP_MPS_H_

#include <string>
#include <string_view>
#include <vector>

#include "rzone/milp/model.h"

namespace rzone::milp {

struct MpsRename {
  char kind;  // 'C' column, 'R' row
  std::string original;
  std::string mps_name;
};

struct MpsExport {
  std::string text;
  // Names that did not fit the 8-character fixed-format fields.
  std::vector<MpsRename> renames;

  std::string RenameMapText() const;
};

// Fixed-format (IBM) MPS. The objective row is named COST; a nonzero
// objective offset is written as minus the RHS of that row. Numbers are
// written in at most 12 characters.
MpsExport WriteMps(const Model& model);

// Reads fixed or free MPS as written by WriteMps (and the common subset
// of the format: N/L/G/E rows, MARKER blocks, RHS, RANGES and
// UP/LO/FX/FR/MI/PL/BV/LI/UI bounds). Throws Error(kConfig) on bad input.
Model ReadMps(std::string_view text);

}  // namespace rzone::milp

#endif  // RZONE_MILP_MPS_H_
