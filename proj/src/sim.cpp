#include "swarm/sim.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "swarm/planner.hpp"
#include "swarm/sensors.hpp"

namespace swarm {

void ScoreLedger::record(const Capture& cap) {
  auto it = best.find(cap.defect_id);
  if (it == best.end() || cap.quality > it->second.quality) best[cap.defect_id] = cap;
}

double ScoreLedger::total() const {
  double s = 0.0;
  for (const auto& [id, cap] : best) s += cap.quality;
  return s;
}

Simulation::Simulation(Scenario scenario)
    : scenario_(std::move(scenario)), bus_(&scenario_.model) {
  const double voxel = scenario_.config.voxel_size;

  arena_.expand(scenario_.gcs_position);
  for (const BoundingBox& b : scenario_.boxes) arena_.expand(b.aabb());
  for (const FleetAgent& a : scenario_.fleet) arena_.expand(a.start);
  if (!scenario_.model.empty()) arena_.expand(scenario_.model.bounds());
  int pgd_total = 0;
  for (const FleetAgent& a : scenario_.fleet)
    if (a.role == Role::PGD) ++pgd_total;
  // Headroom above box tops for the stacked PGD waiting slots.
  arena_.pad((2.0 + pgd_total) * voxel);
  arena_lo_ = point_to_cell(arena_.min, voxel);
  arena_hi_ = point_to_cell(arena_.max, voxel);

  if (!scenario_.fleet.empty()) {
    team_defs_ = form_teams(scenario_.fleet, scenario_.gcs_position);
    path_ = build_inspection_path(scenario_.boxes, scenario_.gcs_position);
    areas_ = partition_path(path_, team_defs_, scenario_.boxes, scenario_.fleet);
    teams_.reserve(team_defs_.size());
    for (std::size_t t = 0; t < team_defs_.size(); ++t) {
      teams_.emplace_back(arena_, voxel);
      teams_.back().team = team_defs_[t];
      teams_.back().area = areas_[t];
    }
  }

  std::vector<const FleetAgent*> order;
  for (const FleetAgent& a : scenario_.fleet) order.push_back(&a);
  std::sort(order.begin(), order.end(), [](const FleetAgent* a, const FleetAgent* b) {
    if (a->role != b->role) return a->role == Role::EXD;
    return a->name < b->name;
  });
  for (const FleetAgent* fa : order) {
    AgentState st;
    st.name = fa->name;
    st.role = fa->role;
    st.voxel = point_to_cell(fa->start, voxel);
    st.pose = cell_center(st.voxel, voxel);
    st.start_voxel = st.voxel;
    for (std::size_t t = 0; t < team_defs_.size(); ++t) {
      if (team_defs_[t].leader == fa->name) st.team_index = static_cast<int>(t);
      const auto& mem = team_defs_[t].members;
      auto it = std::find(mem.begin(), mem.end(), fa->name);
      if (it != mem.end()) {
        st.team_index = static_cast<int>(t);
        st.pgd_index = static_cast<int>(it - mem.begin());
      }
    }
    agent_index_[st.name] = agents_.size();
    positions_[st.name] = st.voxel;
    distance_[st.name] = 0.0;
    agents_.push_back(std::move(st));
  }
}

AgentState* Simulation::agent(const std::string& name) {
  auto it = agent_index_.find(name);
  return it == agent_index_.end() ? nullptr : &agents_[it->second];
}

std::map<std::string, Vec3> Simulation::world_positions() const {
  std::map<std::string, Vec3> out;
  for (const AgentState& st : agents_) out[st.name] = st.pose;
  out[kGcsName] = scenario_.gcs_position;
  return out;
}

bool Simulation::voxel_obstructed(const VoxelIndex& v) const {
  const GroundTruthModel& model = scenario_.model;
  if (model.empty()) return false;
  const double voxel = scenario_.config.voxel_size;
  const double cell = model.cell_size();
  const double eps = 1e-9 * cell;
  Vec3 lo{v.i * voxel, v.j * voxel, v.k * voxel};
  Vec3 hi = lo + Vec3{voxel, voxel, voxel};
  VoxelIndex clo = point_to_cell(lo + Vec3{eps, eps, eps}, cell);
  VoxelIndex chi = point_to_cell(hi - Vec3{eps, eps, eps}, cell);
  for (int i = clo.i; i <= chi.i; ++i)
    for (int j = clo.j; j <= chi.j; ++j)
      for (int k = clo.k; k <= chi.k; ++k)
        if (model.cell_occupied({i, j, k})) return true;
  return false;
}

void Simulation::phase_lidar() {
  if (scenario_.model.empty()) return;
  const LidarConfig& lc = scenario_.config.lidar;
  if (lc.period > 1 && tick_ % lc.period != 0) return;
  for (AgentState& st : agents_) {
    if (st.role != Role::EXD || st.team_index < 0) continue;
    TeamRuntime& team = teams_[st.team_index];
    std::vector<Vec3> pts = lidar_scan(st.pose, scenario_.model, lc);
    if (pts.empty()) continue;
    std::vector<VoxelIndex> changed = team.map.insert_points(pts);
    if (team.submap) team.submap->insert_points(pts);
    if (changed.empty()) continue;
    MapShare share;
    share.cells.reserve(changed.size());
    for (const VoxelIndex& v : changed)
      share.cells.emplace_back(pack_index(v), team.map.attr(v));
    for (const std::string& member : team.team.members)
      if (bus_.pending_between(st.name, member, MsgKind::MapShare) == 0)
        bus_.send(st.name, member, MsgKind::MapShare, share, tick_);
  }
}

IndexSet Simulation::build_avoid(std::size_t agent_index,
                                 const std::vector<Intent>& so_far) const {
  IndexSet avoid;
  bool include_future = agents_[agent_index].denied_streak < 10;
  for (std::size_t h = 0; h < agents_.size(); ++h) {
    if (h == agent_index) continue;
    avoid.insert(positions_.at(agents_[h].name));
    // Published path prefixes exist only for already-stepped (higher
    // priority) agents; after a long denial run fall back to current cells
    // so a crowd cannot wall off every route.
    if (include_future && h < so_far.size())
      for (const VoxelIndex& v : so_far[h].future) avoid.insert(v);
  }
  return avoid;
}

void Simulation::phase_step_agents(std::vector<Intent>& intents,
                                   std::vector<StepResult>& results) {
  for (std::size_t i = 0; i < agents_.size(); ++i) {
    AgentState& st = agents_[i];
    StepContext ctx;
    ctx.config = &scenario_.config;
    ctx.path = &path_;
    ctx.boxes = &scenario_.boxes;
    ctx.arena_lo = arena_lo_;
    ctx.arena_hi = arena_hi_;
    ctx.team = st.team_index >= 0 ? &teams_[st.team_index] : nullptr;
    ctx.bus = &bus_;
    ctx.tick = tick_;
    ctx.inbox = bus_.take_inbox(st.name);
    ctx.positions = &positions_;
    IndexSet avoid;
    if (st.denied) {
      avoid = build_avoid(i, intents);
      ctx.avoid = &avoid;
    }
    StepResult res = st.role == Role::EXD ? step_exd(st, ctx) : step_pgd(st, ctx);
    intents.push_back(res.intent);
    results.push_back(std::move(res));
  }
}

void Simulation::step() {
  phase_lidar();

  bus_.deliver(world_positions(), tick_);

  std::vector<Intent> intents;
  std::vector<StepResult> results;
  phase_step_agents(intents, results);

  ArbitrationResult arb = resolve_collisions(
      intents, positions_, [this](const VoxelIndex& v) { return voxel_obstructed(v); });

  const double voxel = scenario_.config.voxel_size;
  const double dt = scenario_.config.tick_seconds;
  for (std::size_t i = 0; i < agents_.size(); ++i) {
    AgentState& st = agents_[i];
    VoxelIndex from = st.voxel;
    VoxelIndex to = arb.final_voxel.at(st.name);
    bool granted = arb.granted.at(st.name);
    if (!granted) {
      st.denied = true;
      ++st.denied_streak;
      ++st.failed_plans;  // a refused step counts as a failed attempt
      st.path.clear();
      st.nav_goal.reset();
      const VoxelIndex& want = intents[i].next;
      if (st.team_index >= 0 && voxel_obstructed(want)) {
        // Contact feedback. Interior cells shadowed on every side (e.g. under
        // an overhang) are invisible to the lidar, so a refused move is the
        // only way the map ever learns them; without this the agent replans
        // the same straight line forever.
        std::vector<Vec3> pt{cell_center(want, voxel)};
        TeamRuntime& team = teams_[st.team_index];
        team.map.insert_points(pt);
        if (team.submap) team.submap->insert_points(pt);
      }
    } else {
      st.denied = false;
    }
    st.moved = !(to == from);
    if (st.moved) {
      // Counters measure consecutive ticks without progress; a granted hover
      // is not progress, so only an actual move clears them.
      st.denied_streak = 0;
      st.failed_plans = 0;
      distance_[st.name] += step_length(from, to, voxel);
      if (!st.path.empty() && st.path.front() == to) st.path.erase(st.path.begin());
    }
    st.voxel = to;
    st.pose = cell_center(to, voxel);
    st.speed = st.moved ? voxel / dt : 0.0;
    positions_[st.name] = to;
    if (st.team_index >= 0) {
      TeamRuntime& team = teams_[st.team_index];
      team.map.mark_visited(to);
      if (team.submap) {
        VoxelIndex local = team.submap->from_global(to);
        if (team.submap->in_bounds(local)) team.submap->mark_visited(local);
      }
    }
  }
  std::set<std::int64_t> taken;
  for (const AgentState& st : agents_) {
    if (!taken.insert(pack_index(st.voxel)).second)
      throw std::logic_error("two agents resolved to one voxel: " + st.name);
    if (voxel_obstructed(st.voxel))
      throw std::logic_error("agent resolved into an obstructed voxel: " + st.name);
  }

  for (AgentState& st : agents_) {
    std::vector<Capture> caps =
        camera_capture(st.pose, st.gimbal, st.speed, scenario_.model.defects,
                       scenario_.model, scenario_.config.camera);
    for (Capture& cap : caps) {
      cap.tick = tick_;
      cap.agent = st.name;
      bus_.report_capture(st.name, cap);
    }
  }

  for (const Capture& cap : bus_.flush_fd(world_positions(), tick_))
    ledger_.record(cap);
  ledger_.series.push_back(
      {tick_, ledger_.total(), static_cast<int>(ledger_.best.size())});

  for (std::size_t i = 0; i < agents_.size(); ++i) {
    const AgentState& st = agents_[i];
    auto join = [](const std::vector<std::string>& parts) {
      std::string out;
      for (const std::string& p : parts) {
        if (!out.empty()) out += ';';
        out += p;
      }
      return out;
    };
    events_.push_back({tick_, st.name, mode_name(st.mode), st.voxel,
                       join(results[i].sent), join(results[i].received),
                       results[i].warning});
  }

  ++tick_;
}

bool Simulation::all_done() const {
  for (const AgentState& st : agents_)
    if (st.mode != Mode::Done) return false;
  return true;
}

double Simulation::coverage() const {
  long long num = 0, denom = 0;
  auto tally = [&](const Submap& sm, const std::vector<Region>& regions,
                   const std::vector<std::vector<int>>& schedules) {
    for (std::size_t m = 0; m < regions.size() && m < schedules.size(); ++m) {
      for (int layer : schedules[m]) {
        for (int j = 0; j < sm.ny(); ++j) {
          for (int i = 0; i < sm.nx(); ++i) {
            std::uint8_t a = sm.attr({i, j, layer});
            if ((a & kOccupied) || !(a & kInteresting)) continue;
            // Shell insertions can label cells one voxel inside a structure
            // as interesting; those are not inspectable airspace, so they
            // stay out of the denominator.
            if (voxel_obstructed(sm.to_global({i, j, layer}))) continue;
            ++denom;
            if (a & kVisited) ++num;
          }
        }
      }
    }
  };
  for (const TeamRuntime& team : teams_) {
    for (const BoxRecord& rec : team.finished)
      tally(rec.submap, rec.regions, rec.schedules);
    if (team.submap) tally(*team.submap, team.regions, team.schedules);
  }
  return denom == 0 ? 1.0 : static_cast<double>(num) / static_cast<double>(denom);
}

MissionReport Simulation::report() const {
  MissionReport rep;
  rep.completed = all_done();
  rep.completion_tick = rep.completed ? tick_ : -1;
  rep.ticks_run = tick_;
  rep.total_score = ledger_.total();
  rep.coverage = coverage();
  rep.distance_m = distance_;
  for (const auto& [id, cap] : ledger_.best) rep.defect_quality[id] = cap.quality;
  rep.series = ledger_.series;
  return rep;
}

MissionReport Simulation::run(int max_ticks) {
  for (int t = 0; t < max_ticks && !all_done(); ++t) step();
  return report();
}

namespace {

std::string num(double x) { return nlohmann::json(x).dump(); }

}  // namespace

void write_outputs(const Simulation& sim, const MissionReport& report,
                   const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);

  nlohmann::ordered_json j;
  j["completed"] = report.completed;
  j["completion_tick"] = report.completion_tick;
  j["ticks_run"] = report.ticks_run;
  j["total_score"] = report.total_score;
  j["coverage"] = report.coverage;
  j["distance_m"] = nlohmann::ordered_json::object();
  for (const auto& [name, d] : report.distance_m) j["distance_m"][name] = d;
  j["defects"] = nlohmann::ordered_json::array();
  for (const auto& [id, q] : report.defect_quality)
    j["defects"].push_back({{"id", id}, {"quality", q}});
  {
    std::ofstream out(dir / "report.json", std::ios::binary);
    out << j.dump(2) << "\n";
  }

  {
    std::ofstream out(dir / "score_series.csv", std::ios::binary);
    out << "tick,score,defects_scored\n";
    for (const auto& row : report.series)
      out << row.tick << "," << num(row.score) << "," << row.defects_scored << "\n";
  }

  {
    std::ofstream out(dir / "events.csv", std::ios::binary);
    out << "tick,agent,mode,i,j,k,sent,received,note\n";
    for (const EventRow& e : sim.events())
      out << e.tick << "," << e.agent << "," << e.mode << "," << e.voxel.i << ","
          << e.voxel.j << "," << e.voxel.k << "," << e.sent << "," << e.received
          << "," << e.note << "\n";
  }

  {
    std::ofstream out(dir / "messages.csv", std::ios::binary);
    out << "seq,sent_tick,delivered_tick,from,to,kind\n";
    for (const auto& row : sim.bus().trace())
      out << row.seq << "," << row.sent_tick << "," << row.delivered_tick << ","
          << row.from << "," << row.to << "," << msg_kind_name(row.kind) << "\n";
  }
}

}  // namespace swarm
