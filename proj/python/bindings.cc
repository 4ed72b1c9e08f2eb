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

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rzone/benders.h"
#include "rzone/error.h"
#include "rzone/markets.h"
#include "rzone/network.h"
#include "rzone/partition.h"
#include "rzone/scenarios.h"
#include "rzone/zonal.h"

namespace py = pybind11;

namespace {

struct Case {
  rzone::PowerNetwork net;
  rzone::GridMatrices mats;
};

Case LoadCase(const std::string& path) {
  Case c{rzone::LoadCaseFile(path), {}};
  c.mats = rzone::BuildMatrices(c.net);
  return c;
}

py::dict Costs(const rzone::CostBreakdown& c) {
  py::dict d;
  d["reserve"] = c.reserve;
  d["day_ahead"] = c.day_ahead;
  d["balancing"] = c.balancing;
  d["total"] = c.total;
  return d;
}

py::dict Market(const rzone::MarketResult& r) {
  py::dict d;
  d["cost"] = Costs(r.cost);
  d["reserve_up"] = r.reserve.up;
  d["reserve_dn"] = r.reserve.dn;
  d["p"] = r.day_ahead.p;
  d["w"] = r.day_ahead.w;
  return d;
}

py::dict Zonal(const Case& c, const rzone::ZonalOutcome& z) {
  py::dict d;
  d["status"] = rzone::milp::StatusName(z.status);
  d["objective"] = z.objective;
  d["best_bound"] = z.best_bound;
  d["cost"] = Costs(z.cost);
  d["zone_of"] = z.partition.zone_of;
  d["up_requirement"] = z.up_req;
  d["dn_requirement"] = z.dn_req;
  d["set_aside"] = z.set_aside;
  py::list table;
  for (const rzone::ZoneRow& r : rzone::ZoneTable(c.net, z)) {
    table.append(py::make_tuple(r.zone, r.up, r.dn, r.total, r.avg_cost));
  }
  d["zones"] = table;
  d["certified"] = z.certificate.ok(1e-5);
  return d;
}

}  // namespace

PYBIND11_MODULE(_rzone, m) {
  m.doc() = "Reserve zone design: markets, scenarios and zonal models";

  py::register_exception<rzone::Error>(m, "Error");

  py::class_<Case>(m, "Case")
      .def_property_readonly("name", [](const Case& c) { return c.net.name; })
      .def_property_readonly("num_buses", [](const Case& c) { return c.net.num_buses(); })
      .def_property_readonly("num_lines", [](const Case& c) { return c.net.num_lines(); })
      .def_property_readonly("num_generators",
                             [](const Case& c) { return c.net.num_generators(); })
      .def_property_readonly("num_wind", [](const Case& c) { return c.net.num_wind(); })
      .def("__repr__", [](const Case& c) {
        return "<Case " + c.net.name + " with " + std::to_string(c.net.num_buses()) +
               " buses>";
      });

  py::class_<rzone::ScenarioSet>(m, "ScenarioSet")
      .def_readonly("wind", &rzone::ScenarioSet::wind)
      .def_readonly("prob", &rzone::ScenarioSet::prob)
      .def("__len__", &rzone::ScenarioSet::size)
      .def("expected_total", &rzone::ScenarioSet::ExpectedTotal);

  m.def("load_case", &LoadCase, py::arg("path"));

  m.def(
      "sample_scenarios",
      [](const Case& c, int count, uint64_t seed, int reduce_to) {
        rzone::ScenarioSet set = rzone::SampleScenarios(
            rzone::ForecastFromNetwork(c.net), count, seed);
        if (reduce_to > 0 && reduce_to < count) return rzone::FastForwardReduce(set, reduce_to);
        return set;
      },
      py::arg("case"), py::arg("count"), py::arg("seed") = 42, py::arg("reduce_to") = 0);

  m.def("load_scenarios", &rzone::LoadScenarioFile, py::arg("path"));

  m.def(
      "requirements",
      [](const rzone::ScenarioSet& set, double q) {
        rzone::Requirements r = rzone::DeterministicRequirements(set, q);
        return py::make_tuple(r.up, r.dn);
      },
      py::arg("scenarios"), py::arg("q"));

  m.def(
      "solve_sequential",
      [](const Case& c, const rzone::ScenarioSet& set, double q) {
        return Market(rzone::RunSequential(c.net, c.mats, set, q));
      },
      py::arg("case"), py::arg("scenarios"), py::arg("q"));

  m.def(
      "solve_stochastic",
      [](const Case& c, const rzone::ScenarioSet& set) {
        return Market(rzone::SolveStochastic(c.net, c.mats, set));
      },
      py::arg("case"), py::arg("scenarios"));

  m.def(
      "solve_zonal",
      [](const Case& c, const rzone::ScenarioSet& set, int zones, double chi,
         int min_size, const std::string& method, double epsilon,
         double time_limit) {
        rzone::ZonalOptions opt;
        opt.zones = zones;
        opt.chi = chi;
        opt.min_size = min_size;
        opt.solver.time_limit = time_limit;
        if (method == "benders") {
          rzone::BendersOptions b;
          b.zonal = opt;
          b.epsilon = epsilon;
          rzone::BendersResult r;
          {
            py::gil_scoped_release release;
            r = rzone::RunBenders(c.net, c.mats, set, b);
          }
          return Zonal(c, r.outcome);
        }
        if (method != "extensive") {
          throw rzone::ConfigError("method must be 'extensive' or 'benders'");
        }
        rzone::ZonalOutcome z;
        {
          py::gil_scoped_release release;
          z = rzone::SolveZonal(c.net, c.mats, set, opt);
        }
        return Zonal(c, z);
      },
      py::arg("case"), py::arg("scenarios"), py::arg("zones") = 1,
      py::arg("chi") = 0.0, py::arg("min_size") = 1,
      py::arg("method") = "extensive", py::arg("epsilon") = 1e-4,
      py::arg("time_limit") = 1e30);

  m.def(
      "enumerate_partitions",
      [](const Case& c, int zones, int min_size, int max_size) {
        std::vector<std::vector<int>> out;
        for (const rzone::Partition& p :
             rzone::EnumeratePartitions(c.net, zones, min_size, max_size)) {
          out.push_back(p.zone_of);
        }
        return out;
      },
      py::arg("case"), py::arg("zones"), py::arg("min_size") = 1,
      py::arg("max_size") = 0);
}
