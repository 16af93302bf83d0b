#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "swarm/assignment.hpp"
#include "swarm/comms.hpp"
#include "swarm/planner.hpp"
#include "swarm/voxel_map.hpp"
#include "swarm/world.hpp"

namespace swarm {

enum class Mode { Transfer, SeekEntry, MapRegionFloor, Inspect, SeekLOS, Wait, Return, Done };

const char* mode_name(Mode m);

struct Intent {
  std::string name;
  VoxelIndex next;                  // hover when equal to the current voxel
  std::vector<VoxelIndex> future;   // upcoming path prefix, next included
};

struct AgentState {
  std::string name;
  Role role = Role::PGD;
  Mode mode = Mode::Transfer;
  VoxelIndex voxel;       // current global voxel
  Vec3 pose;              // voxel centre
  VoxelIndex start_voxel;
  Vec3 gimbal{1, 0, 0};
  double speed = 0.0;     // m/s this tick, fed to the blur model
  bool moved = false;

  int team_index = -1;
  int pgd_index = -1;     // position among the team's PGDs; -1 for the EXD

  std::vector<VoxelIndex> path;  // remaining steps; front is the next voxel
  std::optional<VoxelIndex> nav_goal;

  // Box / region / sweep cursors.
  int box_pos = -1;              // absolute inspection-path index being worked
  int region_cursor = 0;         // EXD: region being mapped, then its own
  std::vector<int> sched;        // inspection layers of the active region
  int sched_pos = 0;
  int pass_visited = 0;          // arrivals since the last full schedule pass
  std::optional<VoxelIndex> sweep_target;
  IndexSet done_set;             // per-agent inspection filter, reset per box
  Region inspect_region;         // PGD: from InspectCmd; EXD: own region

  // Entry search (EXD) and layer-entry search (both roles).
  std::vector<VoxelIndex> entry_walk;
  std::size_t entry_pos = 0;
  std::size_t goto_pos = 0;

  bool cmd_sent = false;         // InspectCmd for region_cursor in flight
  bool wait_arrived = false;
  bool report_sent = false;      // DoneReport for the active region
  std::size_t done_col_pos = 0;  // fallback cursor along the entry column

  bool denied = false;           // last arbitration denied this agent
  int denied_streak = 0;
  int failed_plans = 0;
};

// Archived per-box mapping state, kept for end-of-mission coverage.
struct BoxRecord {
  int path_index = -1;
  Submap submap;
  std::vector<Region> regions;
  std::vector<std::vector<int>> schedules;
};

struct TeamRuntime {
  Team team;
  TaskArea area;
  GlobalMap map;
  std::optional<Submap> submap;
  int box_pos = -1;  // absolute path index the team is working, -1 when done
  std::vector<Region> regions;
  std::vector<std::vector<int>> schedules;
  VoxelIndex entry_voxel;
  bool entry_set = false;
  std::set<int> done_regions;  // region lo layers acknowledged via DoneReport
  std::vector<BoxRecord> finished;

  explicit TeamRuntime(const Aabb& arena, double voxel) : map(arena, voxel) {}
};

struct StepContext {
  const SimConfig* config = nullptr;
  const InspectionPath* path = nullptr;
  const std::vector<BoundingBox>* boxes = nullptr;
  VoxelIndex arena_lo, arena_hi;
  TeamRuntime* team = nullptr;
  CommBus* bus = nullptr;
  int tick = 0;
  std::vector<Message> inbox;
  const std::map<std::string, VoxelIndex>* positions = nullptr;  // all agents
  const IndexSet* avoid = nullptr;  // higher-priority reservations, when replanning
};

struct StepResult {
  Intent intent;
  std::vector<std::string> sent;      // message kinds emitted this tick
  std::vector<std::string> received;  // message kinds consumed this tick
  std::string warning;
};

StepResult step_exd(AgentState& st, StepContext& ctx);
StepResult step_pgd(AgentState& st, StepContext& ctx);

// Builds the team's submap, regions, and schedules for the path entry at
// `path_index`, resetting per-box team state.
void setup_box(TeamRuntime& team, const InspectionPath& path, int path_index,
               const std::vector<BoundingBox>& boxes, const SimConfig& cfg);

// Entry-column waiting voxel for the idx-th PGD: 1 + idx voxels above the
// entry, moved further up past cells known to be occupied.
VoxelIndex pgd_wait_voxel(const TeamRuntime& team, int pgd_index);

// Priority-ordered arbitration. Intents must arrive in priority order (EXDs
// then PGDs, each alphabetical). An agent may move into a voxel being vacated
// this tick; swaps and rotation cycles are denied, as is any move into a
// voxel claimed by an already-resolved agent or occupied in `occupied`.
struct ArbitrationResult {
  std::map<std::string, VoxelIndex> final_voxel;
  std::map<std::string, bool> granted;
};
ArbitrationResult resolve_collisions(
    const std::vector<Intent>& intents,
    const std::map<std::string, VoxelIndex>& current,
    const std::function<bool(const VoxelIndex&)>& occupied);

}  // namespace swarm
