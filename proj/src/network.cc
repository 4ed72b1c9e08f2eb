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

#include "rzone/network.h"

#include <fmt/core.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <queue>
#include <sstream>

#include "json.hpp"
#include "rzone/error.h"

namespace rzone {
namespace {

using nlohmann::json;

double Number(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw ConfigError(fmt::format("{}: missing field '{}'", where, key));
  }
  if (!it->is_number()) {
    throw ConfigError(fmt::format("{}: field '{}' must be a number", where, key));
  }
  double value = it->get<double>();
  if (!std::isfinite(value)) {
    throw ConfigError(fmt::format("{}: field '{}' is not finite", where, key));
  }
  return value;
}

int Integer(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw ConfigError(fmt::format("{}: missing field '{}'", where, key));
  }
  if (!it->is_number_integer()) {
    throw ConfigError(
        fmt::format("{}: field '{}' must be an integer", where, key));
  }
  return it->get<int>();
}

void CheckKeys(const json& obj, std::initializer_list<const char*> allowed,
               const std::string& where) {
  if (!obj.is_object()) {
    throw ConfigError(fmt::format("{}: expected an object", where));
  }
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* k : allowed) known = known || key == k;
    if (!known) {
      throw ConfigError(fmt::format("{}: unknown field '{}'", where, key));
    }
  }
}

const json& Array(const json& doc, const char* key, bool required) {
  static const json kEmpty = json::array();
  auto it = doc.find(key);
  if (it == doc.end()) {
    if (required) throw ConfigError(fmt::format("case: missing '{}'", key));
    return kEmpty;
  }
  if (!it->is_array()) {
    throw ConfigError(fmt::format("case: '{}' must be an array", key));
  }
  return *it;
}

// Sorts by id and checks the ids are exactly 1..n.
template <typename T>
void SortDense(std::vector<T>& items, const char* kind) {
  std::sort(items.begin(), items.end(),
            [](const T& a, const T& b) { return a.id < b.id; });
  for (size_t k = 0; k < items.size(); ++k) {
    if (items[k].id != static_cast<int>(k) + 1) {
      throw ConfigError(fmt::format(
          "{} ids must be dense 1..{}; found id {} at position {}", kind,
          items.size(), items[k].id, k + 1));
    }
  }
}

std::string Fmt(double v) { return fmt::format("{}", v); }

}  // namespace

double PowerNetwork::TotalLoad() const {
  double total = 0.0;
  for (const Bus& b : buses) total += b.load;
  return total;
}

double PowerNetwork::TotalForecast() const {
  double total = 0.0;
  for (const WindFarm& w : wind) total += w.forecast;
  return total;
}

double PowerNetwork::MaxEnergyCost() const {
  double worst = 0.0;
  for (const Generator& g : generators) worst = std::max(worst, g.cost);
  return worst;
}

std::vector<std::vector<int>> Components(const PowerNetwork& net) {
  const int n = net.num_buses();
  std::vector<std::vector<int>> adj(n);
  for (const Line& l : net.lines) {
    if (l.from < 1 || l.from > n || l.to < 1 || l.to > n) continue;
    adj[l.from - 1].push_back(l.to - 1);
    adj[l.to - 1].push_back(l.from - 1);
  }
  std::vector<int> seen(n, 0);
  std::vector<std::vector<int>> comps;
  for (int s = 0; s < n; ++s) {
    if (seen[s]) continue;
    std::vector<int> comp;
    std::queue<int> q;
    q.push(s);
    seen[s] = 1;
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      comp.push_back(u);
      for (int v : adj[u]) {
        if (!seen[v]) {
          seen[v] = 1;
          q.push(v);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  return comps;
}

void ValidateNetwork(const PowerNetwork& net) {
  const int n = net.num_buses();
  if (n == 0) throw ConfigError("case: no buses");
  auto check_bus = [&](int bus, const std::string& where) {
    if (bus < 1 || bus > n) {
      throw ConfigError(fmt::format("{}: bus {} does not exist", where, bus));
    }
  };
  for (int k = 0; k < n; ++k) {
    const Bus& b = net.buses[k];
    if (b.id != k + 1) throw ConfigError("bus ids must be dense 1..N");
    if (b.load < 0) {
      throw ConfigError(fmt::format("bus {}: negative load {}", b.id, b.load));
    }
  }
  for (int k = 0; k < net.num_lines(); ++k) {
    const Line& l = net.lines[k];
    std::string where = fmt::format("line {}", l.id);
    if (l.id != k + 1) throw ConfigError("line ids must be dense 1..L");
    check_bus(l.from, where);
    check_bus(l.to, where);
    if (l.from == l.to) {
      throw ConfigError(fmt::format("{}: both ends at bus {}", where, l.from));
    }
    if (!(l.reactance > 0)) {
      throw ConfigError(fmt::format("{}: reactance must be positive", where));
    }
    if (!(l.rating > 0)) {
      throw ConfigError(fmt::format("{}: rating must be positive", where));
    }
  }
  for (int k = 0; k < net.num_generators(); ++k) {
    const Generator& g = net.generators[k];
    std::string where = fmt::format("generator {}", g.id);
    if (g.id != k + 1) throw ConfigError("generator ids must be dense 1..G");
    check_bus(g.bus, where);
    if (g.p_min < 0 || g.p_min > g.p_max) {
      throw ConfigError(fmt::format("{}: need 0 <= p_min <= p_max", where));
    }
    if (g.up_cap < 0 || g.dn_cap < 0) {
      throw ConfigError(fmt::format("{}: negative reserve capacity", where));
    }
    const double span = g.p_max - g.p_min;
    if (g.up_cap > span + 1e-9 || g.dn_cap > span + 1e-9) {
      throw ConfigError(fmt::format(
          "{}: reserve capacity exceeds p_max - p_min = {}", where, span));
    }
    if (g.cost < 0 || g.up_cost < 0 || g.dn_cost < 0) {
      throw ConfigError(fmt::format("{}: negative cost", where));
    }
  }
  for (int k = 0; k < net.num_wind(); ++k) {
    const WindFarm& w = net.wind[k];
    std::string where = fmt::format("wind {}", w.id);
    if (w.id != k + 1) throw ConfigError("wind ids must be dense 1..J");
    check_bus(w.bus, where);
    if (w.forecast < 0 || w.forecast > w.capacity) {
      throw ConfigError(
          fmt::format("{}: need 0 <= forecast <= capacity", where));
    }
  }
  check_bus(net.slack, "slack");
  if (!(net.curtail_cost > net.MaxEnergyCost())) {
    throw ConfigError(fmt::format(
        "penalties: curtail cost {} must exceed the largest energy cost {}",
        net.curtail_cost, net.MaxEnergyCost()));
  }
  if (!(net.shed_cost > net.curtail_cost)) {
    throw ConfigError(fmt::format(
        "penalties: shed cost {} must exceed curtail cost {}", net.shed_cost,
        net.curtail_cost));
  }
  auto comps = Components(net);
  if (comps.size() > 1) {
    throw ConfigError(fmt::format(
        "case: network is disconnected ({} components; bus {} unreachable "
        "from bus 1)",
        comps.size(), comps[1].front() + 1));
  }
}

PowerNetwork ParseCase(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(fmt::format("case: {}", e.what()));
  }
  CheckKeys(doc,
            {"name", "description", "buses", "lines", "generators", "wind",
             "penalties", "slack"},
            "case");
  PowerNetwork net;
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) throw ConfigError("case: name must be text");
    net.name = doc["name"].get<std::string>();
  }
  for (const json& b : Array(doc, "buses", true)) {
    CheckKeys(b, {"id", "load"}, "bus");
    std::string where = fmt::format("bus {}", Integer(b, "id", "bus"));
    net.buses.push_back({Integer(b, "id", where), Number(b, "load", where)});
  }
  for (const json& l : Array(doc, "lines", true)) {
    CheckKeys(l, {"id", "from", "to", "reactance", "rating"}, "line");
    std::string where = fmt::format("line {}", Integer(l, "id", "line"));
    net.lines.push_back({Integer(l, "id", where), Integer(l, "from", where),
                         Integer(l, "to", where),
                         Number(l, "reactance", where),
                         Number(l, "rating", where)});
  }
  for (const json& g : Array(doc, "generators", true)) {
    CheckKeys(g,
              {"id", "bus", "p_min", "p_max", "c", "c_up", "c_dn", "r_up_max",
               "r_dn_max"},
              "generator");
    std::string where =
        fmt::format("generator {}", Integer(g, "id", "generator"));
    Generator gen;
    gen.id = Integer(g, "id", where);
    gen.bus = Integer(g, "bus", where);
    gen.p_min = Number(g, "p_min", where);
    gen.p_max = Number(g, "p_max", where);
    gen.cost = Number(g, "c", where);
    gen.up_cost = Number(g, "c_up", where);
    gen.dn_cost = Number(g, "c_dn", where);
    gen.up_cap = Number(g, "r_up_max", where);
    gen.dn_cap = Number(g, "r_dn_max", where);
    net.generators.push_back(gen);
  }
  for (const json& w : Array(doc, "wind", false)) {
    CheckKeys(w, {"id", "bus", "capacity", "forecast"}, "wind");
    std::string where = fmt::format("wind {}", Integer(w, "id", "wind"));
    net.wind.push_back({Integer(w, "id", where), Integer(w, "bus", where),
                        Number(w, "capacity", where),
                        Number(w, "forecast", where)});
  }
  auto pen = doc.find("penalties");
  if (pen == doc.end()) throw ConfigError("case: missing 'penalties'");
  CheckKeys(*pen, {"curtail", "shed"}, "penalties");
  net.curtail_cost = Number(*pen, "curtail", "penalties");
  net.shed_cost = Number(*pen, "shed", "penalties");
  if (doc.contains("slack")) net.slack = Integer(doc, "slack", "case");

  SortDense(net.buses, "bus");
  SortDense(net.lines, "line");
  SortDense(net.generators, "generator");
  SortDense(net.wind, "wind");
  ValidateNetwork(net);
  return net;
}

PowerNetwork LoadCaseFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open case file '{}'", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseCase(buffer.str());
}

std::string ExportCase(const PowerNetwork& net) {
  json doc = json::object();
  if (!net.name.empty()) doc["name"] = net.name;
  doc["slack"] = net.slack;
  doc["penalties"] = {{"curtail", net.curtail_cost}, {"shed", net.shed_cost}};
  json buses = json::array();
  for (const Bus& b : net.buses) buses.push_back({{"id", b.id}, {"load", b.load}});
  doc["buses"] = std::move(buses);
  json lines = json::array();
  for (const Line& l : net.lines) {
    lines.push_back({{"id", l.id},
                     {"from", l.from},
                     {"to", l.to},
                     {"reactance", l.reactance},
                     {"rating", l.rating}});
  }
  doc["lines"] = std::move(lines);
  json gens = json::array();
  for (const Generator& g : net.generators) {
    gens.push_back({{"id", g.id},
                    {"bus", g.bus},
                    {"p_min", g.p_min},
                    {"p_max", g.p_max},
                    {"c", g.cost},
                    {"c_up", g.up_cost},
                    {"c_dn", g.dn_cost},
                    {"r_up_max", g.up_cap},
                    {"r_dn_max", g.dn_cap}});
  }
  doc["generators"] = std::move(gens);
  json wind = json::array();
  for (const WindFarm& w : net.wind) {
    wind.push_back({{"id", w.id},
                    {"bus", w.bus},
                    {"capacity", w.capacity},
                    {"forecast", w.forecast}});
  }
  doc["wind"] = std::move(wind);
  return doc.dump(2) + "\n";
}

GridMatrices BuildMatrices(const PowerNetwork& net) {
  const int n = net.num_buses();
  const int l = net.num_lines();
  GridMatrices m;
  m.from_map = Eigen::MatrixXd::Zero(l, n);
  m.to_map = Eigen::MatrixXd::Zero(l, n);
  Eigen::VectorXd susceptance(l);
  for (int k = 0; k < l; ++k) {
    const Line& line = net.lines[k];
    m.from_map(k, line.from - 1) = 1.0;
    m.to_map(k, line.to - 1) = 1.0;
    susceptance(k) = 1.0 / line.reactance;
  }
  m.branch = m.to_map - m.from_map;
  m.gen_map = Eigen::MatrixXd::Zero(net.num_generators(), n);
  for (int g = 0; g < net.num_generators(); ++g) {
    m.gen_map(g, net.generators[g].bus - 1) = 1.0;
  }
  m.wind_map = Eigen::MatrixXd::Zero(net.num_wind(), n);
  for (int j = 0; j < net.num_wind(); ++j) {
    m.wind_map(j, net.wind[j].bus - 1) = 1.0;
  }

  m.ptdf = Eigen::MatrixXd::Zero(l, n);
  if (n == 1) return m;
  const int slack = net.slack - 1;
  std::vector<int> keep;
  for (int b = 0; b < n; ++b) {
    if (b != slack) keep.push_back(b);
  }
  Eigen::MatrixXd branch_red(l, n - 1);
  for (int c = 0; c < n - 1; ++c) branch_red.col(c) = m.branch.col(keep[c]);
  Eigen::MatrixXd b_red =
      branch_red.transpose() * susceptance.asDiagonal() * branch_red;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(b_red);
  if (lu.rank() < n - 1) {
    throw ConfigError(fmt::format(
        "reduced susceptance matrix is singular (rank {} of {})", lu.rank(),
        n - 1));
  }
  // Flow = b (theta_from - theta_to) = -b H theta, theta = B_red^-1 u.
  Eigen::MatrixXd ptdf_red =
      -(susceptance.asDiagonal() * branch_red) * lu.inverse();
  for (int c = 0; c < n - 1; ++c) m.ptdf.col(keep[c]) = ptdf_red.col(c);
  return m;
}

NetworkReport VerifyNetwork(const PowerNetwork& net) {
  NetworkReport report;
  const int n = net.num_buses();
  auto comps = Components(net);
  report.connected = comps.size() <= 1;
  if (!report.connected) {
    // Buses outside the component holding the slack are islanded.
    int slack = std::clamp(net.slack, 1, std::max(n, 1)) - 1;
    for (const auto& comp : comps) {
      if (std::binary_search(comp.begin(), comp.end(), slack)) continue;
      for (int b : comp) {
        report.islanded_buses.push_back(b + 1);
        report.violations.push_back(fmt::format("islanded bus {}", b + 1));
      }
    }
    std::sort(report.islanded_buses.begin(), report.islanded_buses.end());
  }
  for (const Line& l : net.lines) {
    if (l.from < 1 || l.from > n || l.to < 1 || l.to > n) {
      report.violations.push_back(
          fmt::format("line {}: endpoint outside 1..{}", l.id, n));
    } else if (l.from == l.to) {
      report.violations.push_back(fmt::format("line {}: self loop", l.id));
    }
  }
  double supply = 0.0;
  for (const Generator& g : net.generators) supply += g.p_max;
  for (const WindFarm& w : net.wind) supply += w.capacity;
  const double load = net.TotalLoad();
  if (supply < load) {
    report.warnings.push_back(fmt::format(
        "capacity adequacy: generation and wind capacity {} below load {}",
        Fmt(supply), Fmt(load)));
  }
  return report;
}

}  // namespace rzone
