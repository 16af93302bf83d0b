#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "swarm/sim.hpp"
#include "swarm/world.hpp"

using namespace swarm;

namespace {

const std::string kScenarioDir = SWARM_SCENARIO_DIR;

Scenario tiny_scene(bool with_agent) {
  Scenario s;
  s.boxes.push_back({1, {20, 8, 8}, {8, 8, 8}});
  s.model = GroundTruthModel(4.0);
  s.model.set_occupied({4, 2, 1});  // spans [16,20) x [8,12) x [4,8)
  s.gcs_position = {0, 10, 6};
  if (with_agent) s.fleet.push_back({"exd01", Role::EXD, {6, 10, 6}});
  return s;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("an agentless world only advances its clock") {
  Simulation sim(tiny_scene(false));
  CHECK(sim.tick() == 0);
  sim.step();
  CHECK(sim.tick() == 1);
  CHECK(sim.agents().empty());
  CHECK(sim.events().empty());
  MissionReport rep = sim.report();
  CHECK(rep.total_score == 0.0);
}

TEST_CASE("one tick beside a wall labels the map and the agent's voxel") {
  Simulation sim(tiny_scene(true));
  sim.step();
  REQUIRE(sim.teams().size() == 1);
  const GlobalMap& map = sim.teams()[0].map;

  CHECK(map.occupied({4, 2, 1}));
  CHECK(map.interesting({3, 2, 1}));
  CHECK(map.interesting({5, 2, 1}));
  CHECK(map.interesting({4, 1, 1}));
  CHECK(map.interesting({4, 3, 1}));
  CHECK(map.interesting({4, 2, 0}));
  CHECK(map.interesting({4, 2, 2}));

  const AgentState& exd = sim.agents()[0];
  CHECK(map.visited(exd.voxel));
}

TEST_CASE("a zero tick budget yields an empty partial report") {
  Scenario sc = load_scenario(kScenarioDir + "/box6.scn");
  Simulation sim(std::move(sc));
  MissionReport rep = sim.run(0);
  CHECK(!rep.completed);
  CHECK(rep.completion_tick == -1);
  CHECK(rep.ticks_run == 0);
  CHECK(rep.total_score == 0.0);
  CHECK(rep.series.empty());
}

TEST_CASE("identical runs produce identical reports") {
  auto one = [] {
    Scenario sc = load_scenario(kScenarioDir + "/box6.scn");
    Simulation sim(std::move(sc));
    return sim.run(5000);
  };
  MissionReport a = one();
  MissionReport b = one();
  REQUIRE(a.completed);
  CHECK(a.completion_tick == b.completion_tick);
  CHECK(a.total_score == b.total_score);
  CHECK(a.coverage == b.coverage);
  CHECK(a.distance_m == b.distance_m);
  CHECK(a.defect_quality == b.defect_quality);
  REQUIRE(a.series.size() == b.series.size());
  for (std::size_t i = 0; i < a.series.size(); ++i) {
    CHECK(a.series[i].tick == b.series[i].tick);
    CHECK(a.series[i].score == b.series[i].score);
    CHECK(a.series[i].defects_scored == b.series[i].defects_scored);
  }
}

TEST_CASE("the delivered score never decreases and never exceeds the defect count") {
  Scenario sc = load_scenario(kScenarioDir + "/box6.scn");
  std::size_t defects = sc.model.defects.size();
  Simulation sim(std::move(sc));
  MissionReport rep = sim.run(5000);
  REQUIRE(rep.completed);
  double prev = 0.0;
  for (const auto& row : rep.series) {
    CHECK(row.score >= prev);
    prev = row.score;
  }
  CHECK(rep.total_score <= static_cast<double>(defects));
  for (const auto& [id, q] : rep.defect_quality) {
    CHECK(q >= 0.0);
    CHECK(q <= 1.0);
  }
}

TEST_CASE("a full five-agent mission ends with everyone home") {
  ScenarioOverrides ovr;
  ovr.exd_count = 2;
  ovr.pgd_count = 3;
  Scenario sc = load_scenario(kScenarioDir + "/box6.scn", ovr);
  Simulation sim(std::move(sc));
  MissionReport rep = sim.run(20000);
  REQUIRE(rep.completed);
  CHECK(rep.coverage == 1.0);
  double travelled = 0.0;
  for (const AgentState& st : sim.agents()) {
    CHECK(st.mode == Mode::Done);
    CHECK(st.voxel == st.start_voxel);
    // A surplus team on this one-box scene may legitimately never move.
    CHECK(rep.distance_m.at(st.name) >= 0.0);
    travelled += rep.distance_m.at(st.name);
  }
  CHECK(travelled > 0.0);
}

TEST_CASE("agents never share a voxel or sit inside an obstacle") {
  Scenario sc = load_scenario(kScenarioDir + "/box6.scn");
  Simulation sim(std::move(sc));
  for (int t = 0; t < 200 && !sim.all_done(); ++t) {
    sim.step();
    const auto& agents = sim.agents();
    for (std::size_t a = 0; a < agents.size(); ++a) {
      CHECK(!sim.voxel_obstructed(agents[a].voxel));
      for (std::size_t b = a + 1; b < agents.size(); ++b)
        CHECK(!(agents[a].voxel == agents[b].voxel));
    }
  }
}

TEST_CASE("voxel_obstructed mirrors the ground-truth cells") {
  Simulation sim(tiny_scene(true));
  CHECK(sim.voxel_obstructed({4, 2, 1}));
  CHECK(!sim.voxel_obstructed({3, 2, 1}));
  CHECK(!sim.voxel_obstructed({0, 0, 0}));
}

TEST_CASE("write_outputs emits the four report files byte-identically") {
  namespace fs = std::filesystem;
  fs::path base = fs::temp_directory_path() / "swarm_sim_out_test";
  fs::remove_all(base);
  auto emit = [&](const fs::path& dir) {
    Scenario sc = load_scenario(kScenarioDir + "/box6.scn");
    Simulation sim(std::move(sc));
    MissionReport rep = sim.run(5000);
    write_outputs(sim, rep, dir);
  };
  emit(base / "a");
  emit(base / "b");
  for (const char* name : {"report.json", "score_series.csv", "events.csv", "messages.csv"}) {
    CAPTURE(name);
    REQUIRE(fs::exists(base / "a" / name));
    std::string a = slurp(base / "a" / name);
    CHECK(!a.empty());
    CHECK(a == slurp(base / "b" / name));
  }
  fs::remove_all(base);
}
