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

#include "rzone/milp/mps.h"

#include <fmt/core.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <unordered_map>

#include "rzone/error.h"

namespace rzone::milp {
namespace {

constexpr char kObjectiveRow[] = "COST";

std::string Number(double v) {
  if (v == 0.0) return "0";
  std::string s = fmt::format("{}", v);
  for (int p = 12; s.size() > 12 && p > 0; --p) s = fmt::format("{:.{}g}", v, p);
  return s;
}

std::string Line(std::string_view f1, std::string_view f2, std::string_view f3 = {},
                 std::string_view f4 = {}, std::string_view f5 = {},
                 std::string_view f6 = {}) {
  std::string line = fmt::format(" {:<2} {:<8}  {:<8}  {:<12}   {:<8}  {:<12}", f1,
                                 f2, f3, f4, f5, f6);
  while (!line.empty() && line.back() == ' ') line.pop_back();
  line.push_back('\n');
  return line;
}

// Assigns unique names of at most 8 characters.
class NameTable {
 public:
  explicit NameTable(char kind) : kind_(kind) { used_.insert(kObjectiveRow); }

  std::string Assign(const std::string& original, std::vector<MpsRename>& renames) {
    std::string base = original;
    std::replace_if(base.begin(), base.end(),
                    [](char c) { return c == ' ' || c == '\t' || c == '$' || c == '*'; },
                    '_');
    if (base.empty()) base = std::string(1, kind_);
    std::string name = base.substr(0, 8);
    for (int k = 1; used_.count(name); ++k) {
      const std::string suffix = fmt::format("~{}", k);
      name = base.substr(0, 8 - suffix.size()) + suffix;
    }
    used_.insert(name);
    if (name != original) renames.push_back({kind_, original, name});
    return name;
  }

 private:
  char kind_;
  std::set<std::string> used_;
};

}  // namespace

std::string MpsExport::RenameMapText() const {
  std::string out;
  for (const MpsRename& r : renames) {
    out += fmt::format("{} {} {}\n", r.kind, r.mps_name, r.original);
  }
  return out;
}

MpsExport WriteMps(const Model& model) {
  MpsExport result;
  NameTable row_names('R');
  NameTable col_names('C');
  std::vector<std::string> rows(model.num_constraints());
  std::vector<std::string> cols(model.num_variables());
  for (int i = 0; i < model.num_constraints(); ++i) {
    rows[i] = row_names.Assign(model.constraint(i).name, result.renames);
  }
  for (int j = 0; j < model.num_variables(); ++j) {
    cols[j] = col_names.Assign(model.variable(j).name, result.renames);
  }

  std::vector<std::vector<std::pair<int, double>>> by_col(model.num_variables());
  for (int i = 0; i < model.num_constraints(); ++i) {
    for (const Term& t : model.constraint(i).terms) by_col[t.var].push_back({i, t.coef});
  }

  std::string& out = result.text;
  out += fmt::format("NAME          {}\n", model.name().substr(0, 8));
  out += "ROWS\n";
  out += Line("N", kObjectiveRow);
  for (int i = 0; i < model.num_constraints(); ++i) {
    const char* type = "E";
    if (model.constraint(i).sense == Sense::kLessEqual) type = "L";
    if (model.constraint(i).sense == Sense::kGreaterEqual) type = "G";
    out += Line(type, rows[i]);
  }

  out += "COLUMNS\n";
  bool in_block = false;
  for (int j = 0; j < model.num_variables(); ++j) {
    const bool integral = model.variable(j).is_integral();
    if (integral != in_block) {
      out += Line("", "MARKER", "'MARKER'", "", integral ? "'INTORG'" : "'INTEND'");
      in_block = integral;
    }
    bool wrote = false;
    if (model.cost(j) != 0.0) {
      out += Line("", cols[j], kObjectiveRow, Number(model.cost(j)));
      wrote = true;
    }
    for (const auto& [row, coef] : by_col[j]) {
      out += Line("", cols[j], rows[row], Number(coef));
      wrote = true;
    }
    if (!wrote) out += Line("", cols[j], kObjectiveRow, "0");
  }
  if (in_block) out += Line("", "MARKER", "'MARKER'", "", "'INTEND'");

  out += "RHS\n";
  if (model.objective_offset() != 0.0) {
    out += Line("", "RHS", kObjectiveRow, Number(-model.objective_offset()));
  }
  for (int i = 0; i < model.num_constraints(); ++i) {
    if (model.constraint(i).rhs != 0.0) {
      out += Line("", "RHS", rows[i], Number(model.constraint(i).rhs));
    }
  }

  bool ranges = false;
  for (int i = 0; i < model.num_constraints(); ++i) {
    const auto& r = model.constraint(i).range;
    if (!r) continue;
    if (!ranges) out += "RANGES\n";
    ranges = true;
    out += Line("", "RNG", rows[i], Number(*r));
  }

  out += "BOUNDS\n";
  for (int j = 0; j < model.num_variables(); ++j) {
    const Variable& v = model.variable(j);
    const bool lo_inf = std::isinf(v.lower);
    const bool up_inf = std::isinf(v.upper);
    if (!lo_inf && !up_inf && v.lower == v.upper) {
      out += Line("FX", "BND", cols[j], Number(v.lower));
      continue;
    }
    if (lo_inf && up_inf) {
      out += Line("FR", "BND", cols[j]);
      continue;
    }
    if (lo_inf) {
      out += Line("MI", "BND", cols[j]);
    } else if (v.lower != 0.0 || v.is_integral() || v.upper < 0.0) {
      out += Line("LO", "BND", cols[j], Number(v.lower));
    }
    if (!up_inf) {
      out += Line("UP", "BND", cols[j], Number(v.upper));
    } else if (v.is_integral()) {
      out += Line("PL", "BND", cols[j]);
    }
  }
  out += "ENDATA\n";
  return result;
}

Model ReadMps(std::string_view text) {
  struct Row {
    std::string name;
    char type;
    std::vector<Term> terms;
    double rhs = 0.0;
    std::optional<double> range;
  };
  struct Col {
    std::string name;
    bool integral = false;
    double lower = 0.0;
    double upper = kInf;
    bool lower_set = false;
    bool upper_set = false;
    bool binary = false;
    double cost = 0.0;
  };
  std::vector<Row> rows;
  std::unordered_map<std::string, int> row_index;
  std::vector<Col> cols;
  std::unordered_map<std::string, int> col_index;
  std::string objective;
  std::string model_name;
  double offset = 0.0;
  bool integer_block = false;

  auto fail = [](int line_no, const std::string& what) {
    return ConfigError(fmt::format("MPS line {}: {}", line_no, what));
  };
  auto parse_number = [&](const std::string& s, int line_no) {
    try {
      size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw fail(line_no, "bad number '" + s + "'");
    }
  };
  auto find_col = [&](const std::string& name, int line_no) {
    auto it = col_index.find(name);
    if (it == col_index.end()) throw fail(line_no, "unknown column '" + name + "'");
    return it->second;
  };

  std::string section;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '*') continue;
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    if (line[0] != ' ' && line[0] != '\t') {
      section = tok[0];
      if (section == "NAME") model_name = tok.size() > 1 ? tok[1] : "";
      if (section == "ENDATA") break;
      continue;
    }
    if (section == "ROWS") {
      if (tok.size() != 2) throw fail(line_no, "expected row type and name");
      const char type = static_cast<char>(std::toupper(tok[0][0]));
      if (type == 'N') {
        if (objective.empty()) objective = tok[1];
        continue;
      }
      if (type != 'L' && type != 'G' && type != 'E') throw fail(line_no, "bad row type");
      if (!row_index.emplace(tok[1], static_cast<int>(rows.size())).second) {
        throw fail(line_no, "duplicate row '" + tok[1] + "'");
      }
      rows.push_back({tok[1], type, {}, 0.0, std::nullopt});
    } else if (section == "COLUMNS") {
      if (tok.size() >= 3 && tok[1] == "'MARKER'") {
        if (tok[2] == "'INTORG'") integer_block = true;
        else if (tok[2] == "'INTEND'") integer_block = false;
        else throw fail(line_no, "bad marker");
        continue;
      }
      if (tok.size() != 3 && tok.size() != 5) throw fail(line_no, "bad COLUMNS entry");
      auto it = col_index.find(tok[0]);
      int j;
      if (it == col_index.end()) {
        j = static_cast<int>(cols.size());
        col_index.emplace(tok[0], j);
        cols.push_back({});
        cols.back().name = tok[0];
        cols.back().integral = integer_block;
      } else {
        j = it->second;
      }
      for (size_t k = 1; k + 1 < tok.size(); k += 2) {
        const double v = parse_number(tok[k + 1], line_no);
        if (tok[k] == objective) {
          cols[j].cost += v;
          continue;
        }
        auto r = row_index.find(tok[k]);
        if (r == row_index.end()) throw fail(line_no, "unknown row '" + tok[k] + "'");
        if (v != 0.0) rows[r->second].terms.push_back({j, v});
      }
    } else if (section == "RHS" || section == "RANGES") {
      const size_t first = tok.size() % 2 == 1 ? 1 : 0;
      for (size_t k = first; k + 1 < tok.size(); k += 2) {
        const double v = parse_number(tok[k + 1], line_no);
        if (tok[k] == objective) {
          if (section == "RHS") offset = -v;
          continue;
        }
        auto r = row_index.find(tok[k]);
        if (r == row_index.end()) throw fail(line_no, "unknown row '" + tok[k] + "'");
        if (section == "RHS") rows[r->second].rhs = v;
        else rows[r->second].range = v;
      }
    } else if (section == "BOUNDS") {
      std::string type = tok[0];
      std::transform(type.begin(), type.end(), type.begin(), ::toupper);
      const bool needs_value = type == "UP" || type == "LO" || type == "FX" ||
                               type == "LI" || type == "UI";
      std::string col_name;
      std::optional<double> value;
      if (needs_value) {
        if (tok.size() == 4) {
          col_name = tok[2];
        } else if (tok.size() == 3) {
          col_name = tok[1];
        } else {
          throw fail(line_no, "bad bound entry");
        }
        value = parse_number(tok.back(), line_no);
      } else {
        if (tok.size() == 3 || (tok.size() == 4 && type == "BV")) {
          col_name = tok[2];
        } else if (tok.size() == 2) {
          col_name = tok[1];
        } else {
          throw fail(line_no, "bad bound entry");
        }
      }
      Col& c = cols[find_col(col_name, line_no)];
      if (type == "UP" || type == "UI") {
        c.upper = *value;
        c.upper_set = true;
        if (type == "UI") c.integral = true;
      } else if (type == "LO" || type == "LI") {
        c.lower = *value;
        c.lower_set = true;
        if (type == "LI") c.integral = true;
      } else if (type == "FX") {
        c.lower = c.upper = *value;
        c.lower_set = c.upper_set = true;
      } else if (type == "FR") {
        c.lower = -kInf;
        c.upper = kInf;
        c.lower_set = c.upper_set = true;
      } else if (type == "MI") {
        c.lower = -kInf;
        c.lower_set = true;
      } else if (type == "PL") {
        c.upper = kInf;
        c.upper_set = true;
      } else if (type == "BV") {
        c.binary = true;
        c.integral = true;
        c.lower = 0.0;
        c.upper = 1.0;
        c.lower_set = c.upper_set = true;
      } else {
        throw fail(line_no, "unknown bound type '" + type + "'");
      }
    } else {
      throw fail(line_no, "data outside a known section");
    }
  }

  Model model;
  if (!model_name.empty()) model.set_name(model_name);
  for (Col& c : cols) {
    if (c.upper_set && c.upper < 0.0 && !c.lower_set) c.lower = -kInf;
    VarKind kind = VarKind::kContinuous;
    if (c.integral) {
      kind = (c.binary || (c.lower == 0.0 && c.upper == 1.0)) ? VarKind::kBinary
                                                               : VarKind::kInteger;
    }
    model.AddVariable(c.name, kind, c.lower, c.upper, c.cost);
  }
  for (Row& r : rows) {
    const Sense sense = r.type == 'L'   ? Sense::kLessEqual
                        : r.type == 'G' ? Sense::kGreaterEqual
                                        : Sense::kEqual;
    const int id = model.AddConstraint(r.name, r.terms, sense, r.rhs);
    if (r.range) model.SetRange(id, *r.range);
  }
  model.SetObjectiveOffset(offset);
  return model;
}

}  // namespace rzone::milp
