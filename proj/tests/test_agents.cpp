#include <map>
#include <string>
#include <vector>

#include "doctest.h"
#include "swarm/agents.hpp"
#include "swarm/sim.hpp"
#include "swarm/world.hpp"

using namespace swarm;

namespace {

const std::string kScenarioDir = SWARM_SCENARIO_DIR;

bool never_occupied(const VoxelIndex&) { return false; }

Intent intent(const std::string& name, const VoxelIndex& next) {
  return {name, next, {next}};
}

}  // namespace

TEST_CASE("conflict-free intents are all granted unchanged") {
  std::vector<Intent> intents{intent("exd01", {1, 0, 0}), intent("pgd01", {5, 5, 0})};
  std::map<std::string, VoxelIndex> cur{{"exd01", {0, 0, 0}}, {"pgd01", {5, 4, 0}}};
  auto r = resolve_collisions(intents, cur, never_occupied);
  CHECK(r.granted.at("exd01"));
  CHECK(r.granted.at("pgd01"));
  CHECK(r.final_voxel.at("exd01") == VoxelIndex{1, 0, 0});
  CHECK(r.final_voxel.at("pgd01") == VoxelIndex{5, 5, 0});
}

TEST_CASE("hovering is always granted") {
  std::vector<Intent> intents{intent("pgd01", {2, 2, 2})};
  std::map<std::string, VoxelIndex> cur{{"pgd01", {2, 2, 2}}};
  auto r = resolve_collisions(intents, cur, never_occupied);
  CHECK(r.granted.at("pgd01"));
}

TEST_CASE("the first-listed agent wins a contended voxel") {
  // Intents arrive in priority order, so pgdA outranks pgdB here.
  std::vector<Intent> intents{intent("pgdA", {1, 1, 0}), intent("pgdB", {1, 1, 0})};
  std::map<std::string, VoxelIndex> cur{{"pgdA", {0, 1, 0}}, {"pgdB", {2, 1, 0}}};
  auto r = resolve_collisions(intents, cur, never_occupied);
  CHECK(r.granted.at("pgdA"));
  CHECK(r.final_voxel.at("pgdA") == VoxelIndex{1, 1, 0});
  CHECK(!r.granted.at("pgdB"));
  CHECK(r.final_voxel.at("pgdB") == VoxelIndex{2, 1, 0});  // hovers in place
}

TEST_CASE("an agent may enter a voxel being vacated this tick") {
  std::vector<Intent> intents{intent("exd01", {1, 0, 0}), intent("pgd01", {0, 0, 0})};
  std::map<std::string, VoxelIndex> cur{{"exd01", {0, 0, 0}}, {"pgd01", {0, 1, 0}}};
  auto r = resolve_collisions(intents, cur, never_occupied);
  CHECK(r.granted.at("exd01"));
  CHECK(r.granted.at("pgd01"));
  CHECK(r.final_voxel.at("pgd01") == VoxelIndex{0, 0, 0});
}

TEST_CASE("follow-the-leader chains move in one tick") {
  std::vector<Intent> intents{intent("exd01", {3, 0, 0}), intent("pgd01", {2, 0, 0}),
                              intent("pgd02", {1, 0, 0})};
  std::map<std::string, VoxelIndex> cur{
      {"exd01", {2, 0, 0}}, {"pgd01", {1, 0, 0}}, {"pgd02", {0, 0, 0}}};
  auto r = resolve_collisions(intents, cur, never_occupied);
  CHECK(r.granted.at("exd01"));
  CHECK(r.granted.at("pgd01"));
  CHECK(r.granted.at("pgd02"));
}

TEST_CASE("a head-on swap is refused for both agents") {
  // Voxel-quantized motion cannot realize a simultaneous swap, so both hover
  // and the lower-priority agent replans around next tick.
  std::vector<Intent> intents{intent("exd01", {1, 0, 0}), intent("pgd01", {0, 0, 0})};
  std::map<std::string, VoxelIndex> cur{{"exd01", {0, 0, 0}}, {"pgd01", {1, 0, 0}}};
  auto r = resolve_collisions(intents, cur, never_occupied);
  CHECK(!r.granted.at("exd01"));
  CHECK(!r.granted.at("pgd01"));
  CHECK(r.final_voxel.at("exd01") == VoxelIndex{0, 0, 0});
  CHECK(r.final_voxel.at("pgd01") == VoxelIndex{1, 0, 0});
}

TEST_CASE("a three-agent rotation cycle is refused") {
  std::vector<Intent> intents{intent("pgdA", {1, 0, 0}), intent("pgdB", {0, 1, 0}),
                              intent("pgdC", {0, 0, 0})};
  std::map<std::string, VoxelIndex> cur{
      {"pgdA", {0, 0, 0}}, {"pgdB", {1, 0, 0}}, {"pgdC", {0, 1, 0}}};
  auto r = resolve_collisions(intents, cur, never_occupied);
  CHECK(!r.granted.at("pgdA"));
  CHECK(!r.granted.at("pgdB"));
  CHECK(!r.granted.at("pgdC"));
}

TEST_CASE("moves onto a staying agent or into a wall are refused") {
  SUBCASE("target held by a hovering higher-priority agent") {
    std::vector<Intent> intents{intent("exd01", {0, 0, 0}), intent("pgd01", {0, 0, 0})};
    std::map<std::string, VoxelIndex> cur{{"exd01", {0, 0, 0}}, {"pgd01", {0, 1, 0}}};
    auto r = resolve_collisions(intents, cur, never_occupied);
    CHECK(r.granted.at("exd01"));  // hover
    CHECK(!r.granted.at("pgd01"));
  }
  SUBCASE("occupied voxel") {
    auto wall = [](const VoxelIndex& v) { return v == VoxelIndex{1, 0, 0}; };
    std::vector<Intent> intents{intent("pgd01", {1, 0, 0})};
    std::map<std::string, VoxelIndex> cur{{"pgd01", {0, 0, 0}}};
    auto r = resolve_collisions(intents, cur, wall);
    CHECK(!r.granted.at("pgd01"));
  }
  SUBCASE("teleport attempt") {
    std::vector<Intent> intents{intent("pgd01", {5, 5, 5})};
    std::map<std::string, VoxelIndex> cur{{"pgd01", {0, 0, 0}}};
    auto r = resolve_collisions(intents, cur, never_occupied);
    CHECK(!r.granted.at("pgd01"));
  }
}

TEST_CASE("two agents pass each other in a two-cell corridor") {
  // exd01 walks +x along row 0, pgd01 walks -x; row 1 is the passing lane.
  // The follower policy mimics the replanner: after a denial, sidestep.
  auto wall = [](const VoxelIndex& v) { return v.j < 0 || v.j > 1; };
  VoxelIndex exd{0, 0, 0}, pgd{6, 0, 0};
  bool pgd_denied = false;
  int ticks = 0;
  for (; ticks < 20 && !(exd == VoxelIndex{6, 0, 0} && pgd == VoxelIndex{0, 0, 0});
       ++ticks) {
    auto toward = [](const VoxelIndex& at, int goal_i, int lane) {
      VoxelIndex n = at;
      if (at.j != lane) n.j = lane;
      else if (at.i < goal_i) ++n.i;
      else if (at.i > goal_i) --n.i;
      return n;
    };
    Intent ie = intent("exd01", toward(exd, 6, 0));
    Intent ip = intent("pgd01", toward(pgd, 0, pgd_denied ? 1 : 0));
    auto r = resolve_collisions({ie, ip}, {{"exd01", exd}, {"pgd01", pgd}}, wall);
    pgd_denied = !r.granted.at("pgd01");
    exd = r.final_voxel.at("exd01");
    pgd = r.final_voxel.at("pgd01");
  }
  CHECK(ticks < 20);
  CHECK(exd == VoxelIndex{6, 0, 0});
  CHECK(pgd == VoxelIndex{0, 0, 0});
}

TEST_CASE("waiting slots stack above the box on the entry column") {
  Aabb arena{{0, 0, 0}, {40, 40, 40}};
  TeamRuntime team(arena, 4.0);
  BoundingBox box{1, {20, 20, 8}, {8, 8, 8}};  // four 4 m layers, top index 3
  team.submap = Submap::for_box(box, 4.0);
  team.entry_voxel = {4, 4, 0};

  CHECK(pgd_wait_voxel(team, 0) == VoxelIndex{4, 4, 4});
  CHECK(pgd_wait_voxel(team, 1) == VoxelIndex{4, 4, 5});
  CHECK(pgd_wait_voxel(team, 2) == VoxelIndex{4, 4, 6});

  // A known-occupied slot is skipped upward.
  std::vector<Vec3> pts{cell_center({4, 4, 4}, 4.0)};
  team.map.insert_points(pts);
  CHECK(pgd_wait_voxel(team, 0) == VoxelIndex{4, 4, 5});
}

TEST_CASE("setup_box derives regions and schedules from the team size") {
  Aabb arena{{0, 0, 0}, {60, 60, 60}};
  TeamRuntime team(arena, 4.0);
  team.team = {0, "exd01", {"pgd01"}};  // M = 2
  std::vector<BoundingBox> boxes{{5, {20, 20, 16}, {12, 12, 16}}};  // 8 layers
  InspectionPath path{{5, {8, 20, 16}, {32, 20, 16}}};
  SimConfig cfg;  // stride 3

  setup_box(team, path, 0, boxes, cfg);
  REQUIRE(team.submap.has_value());
  CHECK(team.submap->nlayers() == 8);
  REQUIRE(team.regions.size() == 2);
  CHECK(team.regions[0].lo == 0);
  CHECK(team.regions[0].hi == 3);
  CHECK(team.regions[1].lo == 4);
  CHECK(team.regions[1].hi == 7);
  REQUIRE(team.schedules.size() == 2);
  CHECK(team.schedules[0] == std::vector<int>{0, 3});
  CHECK(team.schedules[1] == std::vector<int>{4, 7});
  CHECK(team.box_pos == 0);
  CHECK(!team.entry_set);
}

TEST_CASE("a solo EXD walks the documented mode order on a small box") {
  ScenarioOverrides ovr;
  ovr.exd_count = 1;
  ovr.pgd_count = 0;
  Scenario sc = load_scenario(kScenarioDir + "/box6.scn", ovr);
  Simulation sim(std::move(sc));
  MissionReport rep = sim.run(5000);
  REQUIRE(rep.completed);

  std::vector<std::string> modes;
  for (const auto& row : sim.events())
    if (row.agent == "exd01" && (modes.empty() || modes.back() != row.mode))
      modes.push_back(row.mode);

  auto stage = [](const std::string& m) {
    if (m == "Transfer") return 0;
    if (m == "SeekEntry") return 1;
    if (m == "MapRegionFloor") return 2;
    if (m == "SeekLOS") return 3;
    if (m == "Inspect") return 4;
    if (m == "Wait") return 5;
    if (m == "Return") return 6;
    if (m == "Done") return 7;
    return -1;
  };
  REQUIRE(!modes.empty());
  CHECK(modes.front() == "Transfer");
  CHECK(modes.back() == "Done");
  int prev = -1;
  bool saw_inspect = false;
  for (const auto& m : modes) {
    int s = stage(m);
    REQUIRE(s >= 0);
    // One box, so stages only ever advance.
    CHECK(s >= prev);
    prev = s;
    if (m == "Inspect") saw_inspect = true;
    if (saw_inspect) CHECK(m != "SeekEntry");
    // A team of one has no floors to pre-map for anyone else.
    CHECK(m != "MapRegionFloor");
  }
  CHECK(saw_inspect);
}

TEST_CASE("every mode has a printable name") {
  for (Mode m : {Mode::Transfer, Mode::SeekEntry, Mode::MapRegionFloor, Mode::Inspect,
                 Mode::SeekLOS, Mode::Wait, Mode::Return, Mode::Done}) {
    std::string s = mode_name(m);
    CHECK(!s.empty());
    CHECK(s != "?");
  }
}
