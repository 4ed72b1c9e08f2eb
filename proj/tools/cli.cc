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

#include "cli.h"

#include <fmt/core.h>

#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <json.hpp>
#include <numeric>
#include <optional>
#include <sstream>

#include "rzone/benders.h"
#include "rzone/markets.h"
#include "rzone/milp/mps.h"
#include "rzone/network.h"
#include "rzone/partition.h"
#include "rzone/scenarios.h"
#include "rzone/zonal.h"

namespace rzone::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

int ExitCodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kConfig:
      return kExitConfig;
    case ErrorKind::kInfeasible:
      return kExitInfeasible;
    case ErrorKind::kSolverLimit:
    case ErrorKind::kSolverFailure:
      return kExitSolverLimit;
    case ErrorKind::kCertification:
      return kExitCertification;
  }
  return kExitCertification;
}

std::string ModelSpec::Label() const {
  if (model == "sequential") return fmt::format("sequential q={}", q);
  if (model == "stochastic") return "stochastic";
  return fmt::format("{} Z={} chi={}", model, zones, chi);
}

namespace {

const char* const kModels[] = {"sequential", "stochastic", "zonal-extensive",
                               "zonal-benders"};

bool KnownModel(const std::string& m) {
  return std::find(std::begin(kModels), std::end(kModels), m) !=
         std::end(kModels);
}

// Key-checked view of one JSON object.
class Section {
 public:
  Section(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j.is_object()) throw ConfigError(fmt::format("{}: expected an object", where_));
  }

  const json* Find(const char* key) {
    seen_.push_back(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  void Get(const char* key, double& out) {
    if (const json* v = Find(key)) {
      if (!v->is_number()) Fail(key, "a number");
      out = v->get<double>();
    }
  }
  void Get(const char* key, int& out) {
    if (const json* v = Find(key)) {
      if (!v->is_number_integer()) Fail(key, "an integer");
      out = v->get<int>();
    }
  }
  void Get(const char* key, int64_t& out) {
    if (const json* v = Find(key)) {
      if (!v->is_number_integer()) Fail(key, "an integer");
      out = v->get<int64_t>();
    }
  }
  void Get(const char* key, uint64_t& out) {
    if (const json* v = Find(key)) {
      if (!v->is_number_unsigned()) Fail(key, "a non-negative integer");
      out = v->get<uint64_t>();
    }
  }
  void Get(const char* key, bool& out) {
    if (const json* v = Find(key)) {
      if (!v->is_boolean()) Fail(key, "true or false");
      out = v->get<bool>();
    }
  }
  void Get(const char* key, std::string& out) {
    if (const json* v = Find(key)) {
      if (!v->is_string()) Fail(key, "a string");
      out = v->get<std::string>();
    }
  }

  std::string Path(const char* key) const {
    return where_.empty() ? key : where_ + "." + key;
  }

  void Finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (std::find(seen_.begin(), seen_.end(), it.key()) == seen_.end()) {
        throw ConfigError(fmt::format("unknown config key '{}'",
                                      Path(it.key().c_str())));
      }
    }
  }

 private:
  [[noreturn]] void Fail(const char* key, const char* what) const {
    throw ConfigError(fmt::format("config key '{}' must be {}", Path(key), what));
  }

  const json& j_;
  std::string where_;
  std::vector<std::string> seen_;
};

std::string Resolve(const std::string& base, const std::string& path) {
  if (path.empty() || base.empty() || fs::path(path).is_absolute()) return path;
  return (fs::path(base) / path).lexically_normal().string();
}

ModelSpec ParseModelSpec(const json& j, const std::string& where) {
  ModelSpec spec;
  Section s(j, where);
  s.Get("model", spec.model);
  s.Get("q", spec.q);
  s.Get("zones", spec.zones);
  s.Get("chi", spec.chi);
  s.Finish();
  return spec;
}

}  // namespace

RunConfig ParseConfig(const std::string& text, const std::string& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    size_t end = std::min(text.size(), static_cast<size_t>(e.byte));
    int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + end, '\n'));
    throw ConfigError(fmt::format("config line {}: malformed JSON", line));
  }
  RunConfig c;
  Section top(j, "");
  top.Get("case", c.case_path);
  if (const json* s = top.Find("scenarios")) {
    Section sc(*s, "scenarios");
    sc.Get("file", c.scenarios.file);
    sc.Get("count", c.scenarios.count);
    sc.Get("seed", c.scenarios.seed);
    sc.Get("reduce_to", c.scenarios.reduce_to);
    sc.Finish();
  }
  top.Get("model", c.model);
  top.Get("q", c.q);
  top.Get("zones", c.zones);
  top.Get("chi", c.chi);
  top.Get("min_size", c.min_size);
  top.Get("max_size", c.max_size);
  if (const json* s = top.Find("solver")) {
    Section so(*s, "solver");
    so.Get("rel_gap", c.rel_gap);
    so.Get("time_limit", c.time_limit);
    so.Get("node_limit", c.node_limit);
    so.Get("epsilon", c.epsilon);
    so.Get("max_iter", c.max_iter);
    so.Get("dual_bound", c.dual_bound);
    so.Finish();
  }
  if (const json* s = top.Find("stability")) {
    Section st(*s, "stability");
    st.Get("omega", c.omega);
    st.Get("seed", c.omega_seed);
    if (const json* m = st.Find("models")) {
      if (!m->is_array()) {
        throw ConfigError("config key 'stability.models' must be an array");
      }
      for (size_t i = 0; i < m->size(); ++i) {
        c.compare.push_back(
            ParseModelSpec((*m)[i], fmt::format("stability.models[{}]", i)));
      }
    }
    st.Finish();
  }
  top.Get("output", c.output);
  top.Get("mps", c.mps);
  top.Get("jobs", c.jobs);
  top.Finish();

  c.case_path = Resolve(base_dir, c.case_path);
  c.scenarios.file = Resolve(base_dir, c.scenarios.file);
  c.output = Resolve(base_dir, c.output);
  return c;
}

RunConfig LoadConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config file '{}'", path));
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return ParseConfig(ss.str(), fs::path(path).parent_path().string());
  } catch (const Error& e) {
    throw Error(e.kind(), fmt::format("{}: {}", path, e.what()));
  }
}

void ValidateConfig(const RunConfig& c) {
  auto check = [](bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
  };
  check(!c.case_path.empty(), "no case file given (config key 'case' or --case)");
  check(KnownModel(c.model),
        fmt::format("unknown model '{}'; expected sequential, stochastic, "
                    "zonal-extensive or zonal-benders", c.model));
  check(c.q > 0.0 && c.q <= 0.5, fmt::format("q must be in (0, 0.5], got {}", c.q));
  check(c.zones >= 1, fmt::format("zones must be >= 1, got {}", c.zones));
  check(c.chi >= 0.0 && c.chi <= 1.0, fmt::format("chi must be in [0, 1], got {}", c.chi));
  check(c.min_size >= 1, fmt::format("min_size must be >= 1, got {}", c.min_size));
  check(c.max_size >= 0, fmt::format("max_size must be >= 0, got {}", c.max_size));
  if (c.scenarios.file.empty()) {
    check(c.scenarios.count >= 1,
          fmt::format("scenarios.count must be >= 1, got {}", c.scenarios.count));
    check(c.scenarios.reduce_to >= 0 && c.scenarios.reduce_to <= c.scenarios.count,
          fmt::format("scenarios.reduce_to ({}) must be in [0, count = {}]",
                      c.scenarios.reduce_to, c.scenarios.count));
  }
  check(c.rel_gap >= 0.0, "solver.rel_gap must be >= 0");
  check(c.time_limit > 0.0, "solver.time_limit must be > 0");
  check(c.node_limit > 0, "solver.node_limit must be > 0");
  check(c.epsilon > 0.0, "solver.epsilon must be > 0");
  check(c.max_iter >= 1, "solver.max_iter must be >= 1");
  check(c.dual_bound >= 0.0, "solver.dual_bound must be >= 0");
  check(c.omega >= 1, "stability.omega must be >= 1");
  check(c.jobs >= 1, fmt::format("jobs must be >= 1, got {}", c.jobs));
  for (const ModelSpec& m : c.compare) {
    check(KnownModel(m.model), fmt::format("unknown stability model '{}'", m.model));
    check(m.q > 0.0 && m.q <= 0.5, fmt::format("stability q must be in (0, 0.5], got {}", m.q));
    check(m.zones >= 1, "stability zones must be >= 1");
    check(m.chi >= 0.0 && m.chi <= 1.0, "stability chi must be in [0, 1]");
  }
}

void WriteFileAtomic(const std::string& path, const std::string& contents) {
  fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError(fmt::format("cannot write '{}'", tmp.string()));
    out << contents;
    out.flush();
    if (!out) throw ConfigError(fmt::format("write to '{}' failed", tmp.string()));
  }
  fs::rename(tmp, target);
}

namespace {

struct Inputs {
  PowerNetwork net;
  GridMatrices mats;
  ScenarioSet scenarios;
  ScenarioSet sampled;  // before reduction; empty for file input
};

ScenarioSet Generate(const PowerNetwork& net, int count, uint64_t seed,
                     int reduce_to, ScenarioSet* sampled = nullptr) {
  ScenarioSet set = SampleScenarios(ForecastFromNetwork(net), count, seed);
  if (sampled) *sampled = set;
  if (reduce_to > 0 && reduce_to < count) return FastForwardReduce(set, reduce_to);
  return set;
}

Inputs LoadInputs(const RunConfig& c) {
  Inputs in;
  in.net = LoadCaseFile(c.case_path);
  in.mats = BuildMatrices(in.net);
  if (!c.scenarios.file.empty()) {
    in.scenarios = LoadScenarioFile(c.scenarios.file);
    std::vector<double> capacity;
    for (const WindFarm& w : in.net.wind) capacity.push_back(w.capacity);
    if (in.scenarios.num_farms() != in.net.num_wind()) {
      throw ConfigError(fmt::format("scenario file has {} farms, case has {}",
                                    in.scenarios.num_farms(), in.net.num_wind()));
    }
    ValidateScenarioSet(in.scenarios, capacity);
  } else {
    in.scenarios = Generate(in.net, c.scenarios.count, c.scenarios.seed,
                            c.scenarios.reduce_to, &in.sampled);
  }
  return in;
}

milp::SolverParams Solver(const RunConfig& c) {
  milp::SolverParams p;
  p.rel_gap = c.rel_gap;
  p.time_limit = c.time_limit;
  p.node_limit = c.node_limit;
  return p;
}

MarketOptions Market(const RunConfig& c) {
  MarketOptions m;
  m.solver = Solver(c);
  return m;
}

ZonalOptions Zonal(const RunConfig& c, int zones, double chi) {
  ZonalOptions z;
  z.zones = zones;
  z.chi = chi;
  z.min_size = c.min_size;
  z.max_size = c.max_size;
  z.dual_bound = c.dual_bound;
  z.solver = Solver(c);
  return z;
}

std::string CostCsv(const CostBreakdown& cost) {
  return fmt::format("reserve,day_ahead,balancing,total\n{:.6f},{:.6f},{:.6f},{:.6f}\n",
                     cost.reserve, cost.day_ahead, cost.balancing, cost.total);
}

std::string ZoneCsv(const std::vector<ZoneRow>& rows) {
  std::string out = "zone,up,dn,total,avg_cost\n";
  for (const ZoneRow& r : rows) {
    out += fmt::format("{},{:.6f},{:.6f},{:.6f},{:.6f}\n",
                       r.zone == 0 ? std::string("all") : std::to_string(r.zone),
                       r.up, r.dn, r.total, r.avg_cost);
  }
  return out;
}

json CostJson(const CostBreakdown& c) {
  return {{"reserve", c.reserve}, {"day_ahead", c.day_ahead},
          {"balancing", c.balancing}, {"total", c.total}};
}

json ScheduleJson(const ReserveSchedule& r, const DayAheadSchedule& d) {
  return {{"reserve_up", r.up}, {"reserve_dn", r.dn}, {"p", d.p},
          {"w", d.w}, {"flow", d.flow}, {"price", d.price}};
}

std::string Out(const RunConfig& c, const char* name) {
  return (fs::path(c.output) / name).string();
}

// Weighted empirical quantile of scenario totals.
double TotalQuantile(const ScenarioSet& set, double q) {
  std::vector<int> order(set.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return set.Total(a) < set.Total(b); });
  double cum = 0.0;
  for (int s : order) {
    cum += set.prob[s];
    if (cum >= q - 1e-12) return set.Total(s);
  }
  return set.Total(order.back());
}

double MeanRankCorrelation(const ScenarioSet& set) {
  if (set.num_farms() < 2 || set.size() < 2) return 1.0;
  Eigen::MatrixXd r = SampleRankCorrelation(set);
  double sum = 0.0;
  int n = 0;
  for (int i = 0; i < r.rows(); ++i) {
    for (int j = i + 1; j < r.cols(); ++j) {
      sum += r(i, j);
      ++n;
    }
  }
  return sum / n;
}

int CmdScen(const RunConfig& c, std::ostream& out) {
  Inputs in = LoadInputs(c);
  const ScenarioSet& set = in.scenarios;
  WriteFileAtomic(Out(c, "scenarios.txt"), WriteScenarioText(set));
  out << fmt::format("scenarios: {} over {} farms -> {}\n", set.size(),
                     set.num_farms(), Out(c, "scenarios.txt"));
  out << fmt::format("expected total wind: {:.4f} MW\n", set.ExpectedTotal());
  out << fmt::format("total wind quantiles: q05 {:.4f}  q50 {:.4f}  q95 {:.4f}\n",
                     TotalQuantile(set, 0.05), TotalQuantile(set, 0.5),
                     TotalQuantile(set, 0.95));
  const ScenarioSet& raw = in.sampled.size() > 0 ? in.sampled : set;
  out << fmt::format("mean pairwise rank correlation: {:.4f} (n = {})\n",
                     MeanRankCorrelation(raw), raw.size());
  return kExitOk;
}

int StatusExit(milp::Status status) {
  return status == milp::Status::kOptimal ? kExitOk : kExitSolverLimit;
}

int CmdSolve(const RunConfig& c, std::ostream& out) {
  if (c.mps && c.model != "zonal-extensive") {
    throw ConfigError("MPS output needs model zonal-extensive (or use 'export')");
  }
  Inputs in = LoadInputs(c);
  json report = {{"model", c.model}, {"case", fs::path(c.case_path).filename().string()},
                 {"scenarios", in.scenarios.size()}};
  CostBreakdown cost;
  int code = kExitOk;
  if (c.model == "sequential" || c.model == "stochastic") {
    MarketResult r = c.model == "sequential"
                         ? RunSequential(in.net, in.mats, in.scenarios, c.q, Market(c))
                         : SolveStochastic(in.net, in.mats, in.scenarios, Market(c));
    cost = r.cost;
    if (c.model == "sequential") {
      report["q"] = c.q;
      report["requirements"] = {{"up", r.requirements.up}, {"dn", r.requirements.dn}};
    }
    report["schedule"] = ScheduleJson(r.reserve, r.day_ahead);
  } else {
    ZonalOptions zopt = Zonal(c, c.zones, c.chi);
    ZonalOutcome z;
    if (c.model == "zonal-extensive") {
      MpecModel mpec = AssembleMpec(in.net, in.mats, in.scenarios, zopt);
      if (c.mps) {
        milp::MpsExport mps = milp::WriteMps(mpec.model);
        WriteFileAtomic(Out(c, "model.mps"), mps.text);
        if (!mps.renames.empty()) WriteFileAtomic(Out(c, "model.names"), mps.RenameMapText());
      }
      z = SolveExtensive(mpec, in.net, in.mats, in.scenarios, zopt);
    } else {
      BendersOptions bopt;
      bopt.zonal = zopt;
      bopt.epsilon = c.epsilon;
      bopt.max_iter = c.max_iter;
      bopt.jobs = c.jobs;
      BendersResult b = RunBenders(in.net, in.mats, in.scenarios, bopt);
      WriteFileAtomic(Out(c, "benders_trace.csv"), b.trace.Csv());
      report["benders"] = {{"iterations", b.iterations}, {"cuts", b.cuts},
                           {"converged", b.converged}};
      z = std::move(b.outcome);
    }
    cost = z.cost;
    code = StatusExit(z.status);
    report["status"] = milp::StatusName(z.status);
    report["objective"] = z.objective;
    report["best_bound"] = z.best_bound;
    report["zones"] = c.zones;
    report["chi"] = c.chi;
    report["zone_of"] = z.partition.zone_of;
    report["up_requirement"] = z.up_req;
    report["dn_requirement"] = z.dn_req;
    report["set_aside"] = z.set_aside;
    report["schedule"] = ScheduleJson(z.reserve, z.day_ahead);
    report["model_size"] = {{"variables", z.stats.variables},
                            {"constraints", z.stats.constraints},
                            {"binaries", z.stats.binaries},
                            {"integers", z.stats.integers},
                            {"complementarities", z.stats.complementarities}};
    report["certificate"] = {{"max_rel_error", z.certificate.max_rel_error},
                             {"bigm_flags", z.certificate.audit.flags.size()}};
    WriteFileAtomic(Out(c, "zones.csv"), ZoneCsv(ZoneTable(in.net, z)));
    WriteFileAtomic(Out(c, "partition.dot"), PartitionDot(in.net, z.partition));
  }
  report["cost"] = CostJson(cost);
  WriteFileAtomic(Out(c, "costs.csv"), CostCsv(cost));
  WriteFileAtomic(Out(c, "report.json"), report.dump(2) + "\n");
  out << fmt::format("{}: reserve {:.4f}  day-ahead {:.4f}  balancing {:.4f}  total {:.4f}\n",
                     c.model, cost.reserve, cost.day_ahead, cost.balancing, cost.total);
  if (code != kExitOk) out << "stopped at a limit; the design is the best found\n";
  out << "outputs in " << c.output << "\n";
  return code;
}

struct Design {
  ReserveSchedule reserve;
  std::vector<double> set_aside;
};

Design DesignFor(const ModelSpec& m, const RunConfig& c, const Inputs& in) {
  if (m.model == "sequential") {
    return {RunSequential(in.net, in.mats, in.scenarios, m.q, Market(c)).reserve, {}};
  }
  ZonalOptions zopt = Zonal(c, m.zones, m.chi);
  ZonalOutcome z;
  if (m.model == "zonal-benders") {
    BendersOptions bopt;
    bopt.zonal = zopt;
    bopt.epsilon = c.epsilon;
    bopt.max_iter = c.max_iter;
    z = RunBenders(in.net, in.mats, in.scenarios, bopt).outcome;
  } else {
    z = SolveZonal(in.net, in.mats, in.scenarios, zopt);
  }
  return {z.reserve, z.set_aside};
}

int CmdStability(const RunConfig& c, std::ostream& out) {
  if (c.omega < 2) throw ConfigError("stability needs stability.omega >= 2");
  if (!c.scenarios.file.empty()) {
    throw ConfigError("stability generates its sets; drop scenarios.file");
  }
  Inputs in = LoadInputs(c);
  std::vector<ModelSpec> models = c.compare;
  if (models.empty()) {
    models = {{"stochastic"}, {"sequential", 0.01}, {"sequential", 0.03},
              {"sequential", 0.05}};
  }
  std::vector<ScenarioSet> sets;
  for (int i = 0; i < c.omega; ++i) {
    sets.push_back(Generate(in.net, c.scenarios.count, c.omega_seed + i,
                            c.scenarios.reduce_to));
  }
  std::string csv = "model,omega,seed,cost,stochastic_cost,ratio\n";
  std::string summary = "model,mean,min,max\n";
  for (const ModelSpec& m : models) {
    std::optional<Design> design;
    if (m.model != "stochastic") design = DesignFor(m, c, in);
    std::vector<StabilityPoint> points(sets.size());
    for (size_t i0 = 0; i0 < sets.size(); i0 += c.jobs) {
      std::vector<std::future<StabilityPoint>> batch;
      for (size_t i = i0; i < std::min(sets.size(), i0 + c.jobs); ++i) {
        batch.push_back(std::async(
            c.jobs > 1 ? std::launch::async : std::launch::deferred, [&, i] {
              if (!design) return StochasticSelfCheck(in.net, in.mats, sets[i], Market(c));
              return EvaluateStability(in.net, in.mats, sets[i], design->reserve,
                                       design->set_aside, Market(c));
            }));
      }
      for (size_t i = i0; i < std::min(sets.size(), i0 + c.jobs); ++i) {
        points[i] = batch[i - i0].get();
      }
    }
    double lo = 1e300, hi = -1e300, sum = 0.0;
    for (size_t i = 0; i < points.size(); ++i) {
      const StabilityPoint& p = points[i];
      csv += fmt::format("{},{},{},{:.6f},{:.6f},{:.9f}\n", m.Label(), i + 1,
                         c.omega_seed + i, p.cost, p.stochastic_cost, p.ratio);
      lo = std::min(lo, p.ratio);
      hi = std::max(hi, p.ratio);
      sum += p.ratio;
    }
    const double mean = sum / points.size();
    summary += fmt::format("{},{:.9f},{:.9f},{:.9f}\n", m.Label(), mean, lo, hi);
    out << fmt::format("{:<32} mean {:.6f}  min {:.6f}  max {:.6f}\n", m.Label(),
                       mean, lo, hi);
  }
  WriteFileAtomic(Out(c, "stability.csv"), csv);
  WriteFileAtomic(Out(c, "stability_summary.csv"), summary);
  out << "outputs in " << c.output << "\n";
  return kExitOk;
}

int CmdExport(const RunConfig& c, std::ostream& out) {
  Inputs in = LoadInputs(c);
  MpecModel mpec = AssembleMpec(in.net, in.mats, in.scenarios, Zonal(c, c.zones, c.chi));
  milp::MpsExport mps = milp::WriteMps(mpec.model);
  WriteFileAtomic(Out(c, "model.mps"), mps.text);
  if (!mps.renames.empty()) WriteFileAtomic(Out(c, "model.names"), mps.RenameMapText());
  const ModelStats& s = mpec.stats;
  out << fmt::format(
      "variables {}  constraints {}  binaries {}  integers {}  complementarities {}\n",
      s.variables, s.constraints, s.binaries, s.integers, s.complementarities);
  out << "wrote " << Out(c, "model.mps") << "\n";
  return kExitOk;
}

int CmdValidate(const std::string& path, std::ostream& out) {
  PowerNetwork net = LoadCaseFile(path);
  NetworkReport report = VerifyNetwork(net);
  out << fmt::format("{}: {} buses, {} lines, {} generators, {} wind farms\n",
                     path, net.num_buses(), net.num_lines(),
                     static_cast<int>(net.generators.size()), net.num_wind());
  for (const std::string& v : report.violations) out << "violation: " << v << "\n";
  for (const std::string& w : report.warnings) out << "warning: " << w << "\n";
  if (!report.connected) {
    out << fmt::format("network is not connected ({} islanded buses)\n",
                       report.islanded_buses.size());
  }
  if (!report.violations.empty()) return kExitConfig;
  out << "ok\n";
  return kExitOk;
}

// Flag overrides; unset flags leave the config alone.
struct Overrides {
  std::string config;
  std::optional<std::string> case_path, model, scenario_file, output;
  std::optional<double> q, chi, gap, time_limit, epsilon;
  std::optional<int> zones, min_size, max_size, count, reduce_to, omega, jobs;
  std::optional<uint64_t> seed;
  bool mps = false;

  void Attach(CLI::App* cmd) {
    cmd->add_option("-c,--config", config, "JSON run config (default: $RZONE_CONFIG)");
    cmd->add_option("--case", case_path, "case file");
    cmd->add_option("--model", model,
                    "sequential | stochastic | zonal-extensive | zonal-benders");
    cmd->add_option("--scenario-file", scenario_file, "read scenarios instead of sampling");
    cmd->add_option("--count", count, "scenarios to sample");
    cmd->add_option("--seed", seed, "sampling seed");
    cmd->add_option("--reduce-to", reduce_to, "fast-forward target (0 = none)");
    cmd->add_option("--q", q, "quantile for sequential requirements");
    cmd->add_option("--zones", zones, "number of zones");
    cmd->add_option("--chi", chi, "max share of cross-zonal capacity set aside");
    cmd->add_option("--min-size", min_size, "minimum buses per zone");
    cmd->add_option("--max-size", max_size, "maximum buses per zone (0 = implied)");
    cmd->add_option("--gap", gap, "relative MILP gap");
    cmd->add_option("--time-limit", time_limit, "seconds per MILP solve");
    cmd->add_option("--epsilon", epsilon, "Benders tolerance");
    cmd->add_option("--omega", omega, "stability scenario sets");
    cmd->add_option("--jobs", jobs, "parallel solves");
    cmd->add_option("-o,--out", output, "output directory");
    cmd->add_flag("--mps", mps, "also write the MPS of the assembled model");
  }

  RunConfig Build() const {
    RunConfig c;
    std::string path = config;
    if (path.empty()) {
      if (const char* env = std::getenv("RZONE_CONFIG")) path = env;
    }
    if (!path.empty()) c = LoadConfig(path);
    if (case_path) c.case_path = *case_path;
    if (model) c.model = *model;
    if (scenario_file) c.scenarios.file = *scenario_file;
    if (count) c.scenarios.count = *count;
    if (seed) c.scenarios.seed = *seed;
    if (reduce_to) c.scenarios.reduce_to = *reduce_to;
    if (q) c.q = *q;
    if (zones) c.zones = *zones;
    if (chi) c.chi = *chi;
    if (min_size) c.min_size = *min_size;
    if (max_size) c.max_size = *max_size;
    if (gap) c.rel_gap = *gap;
    if (time_limit) c.time_limit = *time_limit;
    if (epsilon) c.epsilon = *epsilon;
    if (omega) c.omega = *omega;
    if (jobs) c.jobs = *jobs;
    if (output) c.output = *output;
    if (mps) c.mps = true;
    ValidateConfig(c);
    return c;
  }
};

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Reserve zone design for wind-dominated power systems", "rzone"};
  app.require_subcommand(1);
  Overrides scen_o, solve_o, stab_o, export_o;
  CLI::App* scen = app.add_subcommand("scen", "sample and reduce a scenario set");
  scen_o.Attach(scen);
  CLI::App* solve = app.add_subcommand("solve", "solve one market model");
  solve_o.Attach(solve);
  CLI::App* stab = app.add_subcommand("stability", "out-of-sample ratios to the stochastic cost");
  stab_o.Attach(stab);
  CLI::App* exp = app.add_subcommand("export", "write the zonal model as MPS");
  export_o.Attach(exp);
  CLI::App* cas = app.add_subcommand("case", "case file tools");
  cas->require_subcommand(1);
  std::string validate_path;
  CLI::App* validate = cas->add_subcommand("validate", "check a case file");
  validate->add_option("path", validate_path, "case file")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitConfig;
  }
  try {
    if (*scen) return CmdScen(scen_o.Build(), out);
    if (*solve) return CmdSolve(solve_o.Build(), out);
    if (*stab) return CmdStability(stab_o.Build(), out);
    if (*exp) return CmdExport(export_o.Build(), out);
    if (*validate) return CmdValidate(validate_path, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return ExitCodeFor(e.kind());
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitCertification;
  }
  return kExitConfig;
}

}  // namespace rzone::cli
