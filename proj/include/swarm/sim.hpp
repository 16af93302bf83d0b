#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "swarm/agents.hpp"
#include "swarm/assignment.hpp"
#include "swarm/comms.hpp"
#include "swarm/world.hpp"

namespace swarm {

// Delivered-capture bookkeeping: best quality per defect, counted once, plus
// the cumulative time series sampled every tick.
struct ScoreLedger {
  struct SeriesRow {
    int tick = 0;
    double score = 0.0;
    int defects_scored = 0;
  };

  std::map<int, Capture> best;  // defect id -> best delivered capture
  std::vector<SeriesRow> series;

  void record(const Capture& cap);
  double total() const;
};

struct EventRow {
  int tick = 0;
  std::string agent;
  std::string mode;
  VoxelIndex voxel;
  std::string sent;      // semicolon-joined message kinds
  std::string received;
  std::string note;
};

struct MissionReport {
  bool completed = false;
  int completion_tick = -1;  // -1 while unfinished
  int ticks_run = 0;
  double total_score = 0.0;
  double coverage = 1.0;  // visited fraction of inspectable voxels on scheduled layers
  std::map<std::string, double> distance_m;
  std::map<int, double> defect_quality;  // delivered best per defect
  std::vector<ScoreLedger::SeriesRow> series;
};

// Owns the whole mission state and advances it tick by tick. Phase order per
// tick: EXD lidar into team maps, message delivery, agent stepping in
// priority order, collision arbitration, move application and visit marking,
// camera captures, facade-report flushing, tick advance.
class Simulation {
 public:
  explicit Simulation(Scenario scenario);

  void step();
  bool all_done() const;
  MissionReport run(int max_ticks);
  MissionReport report() const;

  int tick() const { return tick_; }
  const Scenario& scenario() const { return scenario_; }
  const std::vector<AgentState>& agents() const { return agents_; }
  AgentState* agent(const std::string& name);
  const std::vector<TeamRuntime>& teams() const { return teams_; }
  const CommBus& bus() const { return bus_; }
  const InspectionPath& inspection_path() const { return path_; }
  const std::vector<TaskArea>& areas() const { return areas_; }
  const std::vector<EventRow>& events() const { return events_; }
  double coverage() const;

  // True when any ground-truth cell overlaps the voxel.
  bool voxel_obstructed(const VoxelIndex& v) const;

 private:
  void phase_lidar();
  void phase_step_agents(std::vector<Intent>& intents,
                         std::vector<StepResult>& results);
  std::map<std::string, Vec3> world_positions() const;
  IndexSet build_avoid(std::size_t agent_index,
                       const std::vector<Intent>& so_far) const;

  Scenario scenario_;
  Aabb arena_;
  VoxelIndex arena_lo_, arena_hi_;
  int tick_ = 0;
  std::vector<AgentState> agents_;  // EXDs then PGDs, each alphabetical
  std::map<std::string, std::size_t> agent_index_;
  std::vector<Team> team_defs_;
  std::vector<TeamRuntime> teams_;
  InspectionPath path_;
  std::vector<TaskArea> areas_;
  CommBus bus_;
  std::map<std::string, VoxelIndex> positions_;
  ScoreLedger ledger_;
  std::vector<EventRow> events_;
  std::map<std::string, double> distance_;
};

// Writes report.json, score_series.csv, events.csv, and messages.csv into
// `dir` (created if absent). Byte-deterministic for a deterministic run.
void write_outputs(const Simulation& sim, const MissionReport& report,
                   const std::filesystem::path& dir);

}  // namespace swarm
