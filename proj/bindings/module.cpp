#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "swarm/sensors.hpp"
#include "swarm/sim.hpp"
#include "swarm/world.hpp"

namespace py = pybind11;
using namespace swarm;

namespace {

Vec3 to_vec3(const py::object& obj) {
  auto t = obj.cast<std::tuple<double, double, double>>();
  return {std::get<0>(t), std::get<1>(t), std::get<2>(t)};
}

py::tuple from_vec3(const Vec3& v) { return py::make_tuple(v.x, v.y, v.z); }

Scenario load_with(const std::string& path, const std::string& fleet, int seed) {
  ScenarioOverrides ovr;
  if (!fleet.empty()) {
    auto [e, p] = parse_fleet_spec(fleet);
    ovr.exd_count = e;
    ovr.pgd_count = p;
  }
  if (seed >= 0) ovr.seed = static_cast<std::uint32_t>(seed);
  return load_scenario(path, ovr);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Deterministic UAV swarm inspection simulator";

  py::register_exception<ScenarioError>(m, "ScenarioError");

  py::class_<Scenario>(m, "Scenario")
      .def_property_readonly("num_boxes",
                             [](const Scenario& s) { return s.boxes.size(); })
      .def_property_readonly("num_defects",
                             [](const Scenario& s) { return s.model.defects.size(); })
      .def_property_readonly("voxel_size",
                             [](const Scenario& s) { return s.config.voxel_size; })
      .def_property_readonly("gcs",
                             [](const Scenario& s) { return from_vec3(s.gcs_position); })
      .def_property_readonly("fleet", [](const Scenario& s) {
        std::vector<std::pair<std::string, std::string>> out;
        for (const FleetAgent& a : s.fleet)
          out.emplace_back(a.name, a.role == Role::EXD ? "EXD" : "PGD");
        return out;
      });

  py::class_<ScoreLedger::SeriesRow>(m, "SeriesRow")
      .def_readonly("tick", &ScoreLedger::SeriesRow::tick)
      .def_readonly("score", &ScoreLedger::SeriesRow::score)
      .def_readonly("defects_scored", &ScoreLedger::SeriesRow::defects_scored);

  py::class_<MissionReport>(m, "MissionReport")
      .def_readonly("completed", &MissionReport::completed)
      .def_readonly("completion_tick", &MissionReport::completion_tick)
      .def_readonly("ticks_run", &MissionReport::ticks_run)
      .def_readonly("total_score", &MissionReport::total_score)
      .def_readonly("coverage", &MissionReport::coverage)
      .def_readonly("distance_m", &MissionReport::distance_m)
      .def_readonly("defect_quality", &MissionReport::defect_quality)
      .def_readonly("series", &MissionReport::series);

  m.def("load_scenario", &load_with, py::arg("path"), py::arg("fleet") = "",
        py::arg("seed") = -1,
        "Load and validate a .scn file, optionally overriding fleet and seed");

  m.def("parse_fleet_spec", &parse_fleet_spec, py::arg("spec"),
        "Split a fleet spec like '2E3P' into (exd_count, pgd_count)");

  m.def(
      "principal_axis",
      [](const py::object& center, const py::object& half_extents) {
        BoundingBox b{0, to_vec3(center), to_vec3(half_extents)};
        EnterExitPair pair = principal_axis(b);
        return py::make_tuple(from_vec3(pair.p1), from_vec3(pair.p2));
      },
      py::arg("center"), py::arg("half_extents"),
      "Enter/exit face centres pierced by the box's longest axis");

  m.def(
      "line_of_sight",
      [](const py::object& a, const py::object& b, const Scenario& sc) {
        return line_of_sight(to_vec3(a), to_vec3(b), sc.model);
      },
      py::arg("a"), py::arg("b"), py::arg("scenario"),
      "True when the segment between a and b crosses no occupied cell");

  m.def(
      "run",
      [](const Scenario& sc, int max_ticks, const std::string& out) {
        Simulation sim(sc);
        MissionReport rep = sim.run(max_ticks);
        if (!out.empty()) write_outputs(sim, rep, out);
        return rep;
      },
      py::arg("scenario"), py::arg("max_ticks") = 20000, py::arg("out") = "",
      "Run a mission to completion or the tick budget; optionally write reports");

  m.def(
      "run_mission",
      [](const std::string& path, const std::string& fleet, int seed, int max_ticks,
         const std::string& out) {
        Scenario sc = load_with(path, fleet, seed);
        Simulation sim(std::move(sc));
        MissionReport rep = sim.run(max_ticks);
        if (!out.empty()) write_outputs(sim, rep, out);
        return rep;
      },
      py::arg("path"), py::arg("fleet") = "", py::arg("seed") = -1,
      py::arg("max_ticks") = 20000, py::arg("out") = "",
      "Load a scenario and run one mission in a single call");
}
