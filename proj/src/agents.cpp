#include "swarm/agents.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace swarm {

const char* mode_name(Mode m) {
  switch (m) {
    case Mode::Transfer: return "Transfer";
    case Mode::SeekEntry: return "SeekEntry";
    case Mode::MapRegionFloor: return "MapRegionFloor";
    case Mode::Inspect: return "Inspect";
    case Mode::SeekLOS: return "SeekLOS";
    case Mode::Wait: return "Wait";
    case Mode::Return: return "Return";
    case Mode::Done: return "Done";
  }
  return "?";
}

namespace {

constexpr int kMaxPlanFailures = 3;
constexpr int kRelaxDeniedAfter = 10;

Intent make_intent(const AgentState& st, int horizon) {
  Intent it;
  it.name = st.name;
  it.next = st.path.empty() ? st.voxel : st.path.front();
  int n = std::min<int>(horizon, static_cast<int>(st.path.size()));
  it.future.assign(st.path.begin(), st.path.begin() + n);
  if (it.future.empty()) it.future.push_back(st.voxel);
  return it;
}

Intent hover(AgentState& st) {
  st.path.clear();
  st.nav_goal.reset();
  Intent it;
  it.name = st.name;
  it.next = st.voxel;
  it.future.push_back(st.voxel);
  return it;
}

std::function<bool(const VoxelIndex&)> planning_blocked(const StepContext& ctx) {
  const GlobalMap* map = &ctx.team->map;
  const IndexSet* avoid = ctx.avoid;
  return [map, avoid](const VoxelIndex& v) {
    if (map->attr(v) & kOccupied) return true;
    return avoid && avoid->contains(v);
  };
}

bool plan_to(AgentState& st, StepContext& ctx, const VoxelIndex& goal) {
  GridPath p = astar(ctx.arena_lo, ctx.arena_hi, st.voxel, goal, planning_blocked(ctx));
  if (!p.reachable()) {
    ++st.failed_plans;
    st.path.clear();
    st.nav_goal.reset();
    return false;
  }
  // failed_plans is cleared on movement, not here: a plan that the collision
  // arbiter then refuses must not look like progress.
  st.nav_goal = goal;
  st.path.assign(p.cells.begin() + 1, p.cells.end());
  return true;
}

// Keeps st.path marching toward goal, replanning when the goal moved or the
// next step stopped being viable. Returns false when no plan exists.
bool follow_to(AgentState& st, StepContext& ctx, const VoxelIndex& goal) {
  bool stale = !st.nav_goal || !(*st.nav_goal == goal) || st.path.empty() ||
               !adjacent_or_equal(st.path.front(), st.voxel) ||
               planning_blocked(ctx)(st.path.front());
  if (stale) return plan_to(st, ctx, goal);
  return true;
}

// In-layer square-ring spiral of local voxels around (ci, cj), the same
// rotational order the entry search uses.
std::vector<VoxelIndex> spiral_layer(const Submap& sm, int ci, int cj, int layer) {
  std::vector<VoxelIndex> out;
  ci = std::clamp(ci, 0, sm.nx() - 1);
  cj = std::clamp(cj, 0, sm.ny() - 1);
  auto emit = [&](int i, int j) {
    if (i >= 0 && i < sm.nx() && j >= 0 && j < sm.ny()) out.push_back({i, j, layer});
  };
  int rmax = std::max({ci, sm.nx() - 1 - ci, cj, sm.ny() - 1 - cj});
  emit(ci, cj);
  for (int r = 1; r <= rmax; ++r) {
    for (int j = cj; j <= cj + r; ++j) emit(ci + r, j);
    for (int i = ci + r - 1; i >= ci - r; --i) emit(i, cj + r);
    for (int j = cj + r - 1; j >= cj - r; --j) emit(ci - r, j);
    for (int i = ci - r + 1; i <= ci + r; ++i) emit(i, cj - r);
    for (int j = cj - r + 1; j <= cj - 1; ++j) emit(ci + r, j);
  }
  return out;
}

void point_gimbal(AgentState& st, const StepContext& ctx) {
  if (!ctx.team->submap) return;
  const Submap& sm = *ctx.team->submap;
  if (!st.sweep_target) return;
  VoxelIndex local = sm.from_global(*st.sweep_target);
  if (!sm.in_bounds(local)) return;
  // Aim at the shared face with the target's occupied neighbour, or at the
  // submap centre on boundary-fallback sweeps.
  static constexpr int kOff[6][3] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0},
                                     {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  Vec3 target_centre = sm.index_to_center(local);
  Vec3 aim = (sm.index_to_center(sm.index_min()) +
              sm.index_to_center(sm.index_max())) * 0.5;
  for (const auto& d : kOff) {
    VoxelIndex n{local.i + d[0], local.j + d[1], local.k + d[2]};
    if (sm.in_bounds(n) && (sm.attr(n) & kOccupied)) {
      aim = (target_centre + sm.index_to_center(n)) * 0.5;
      break;
    }
  }
  Vec3 dir = aim - st.pose;
  if (dir.norm() > 1e-9) st.gimbal = dir.normalized();
}

// One sweep action over the given submap layer: navigate into the layer,
// then walk nearest-first over its targets. nullopt means the layer holds no
// more work for this agent.
std::optional<Intent> sweep_step(AgentState& st, StepContext& ctx, int layer,
                                 bool use_done_set, bool dwell) {
  Submap& sm = *ctx.team->submap;
  VoxelIndex local = sm.from_global(st.voxel);
  if (!sm.in_bounds(local)) {
    // Fell outside the box footprint; come back through the entry voxel.
    if (!follow_to(st, ctx, ctx.team->entry_voxel)) return hover(st);
    return make_intent(st, ctx.config->future_horizon);
  }
  if (local.k != layer) {
    auto taken_by_other = [&](const VoxelIndex& g) {
      for (const auto& [name, vox] : *ctx.positions)
        if (name != st.name && vox == g) return true;
      return false;
    };
    auto ring = spiral_layer(sm, local.i, local.j, layer);
    while (st.goto_pos < ring.size()) {
      VoxelIndex cand = ring[st.goto_pos];
      VoxelIndex goal = sm.to_global(cand);
      // Any free foothold works, so skip cells someone is parked on instead
      // of contesting them.
      if (!(sm.attr(cand) & kOccupied) && !taken_by_other(goal)) {
        if (follow_to(st, ctx, goal)) return make_intent(st, ctx.config->future_horizon);
        if (st.failed_plans < kMaxPlanFailures) return hover(st);
      }
      ++st.goto_pos;
      st.failed_plans = 0;
    }
    return std::nullopt;  // no reachable foothold in the layer
  }
  st.goto_pos = 0;

  if (st.sweep_target && st.voxel == *st.sweep_target) {
    // Arrived. Book the visit, and in inspection sweeps hold still for one
    // tick so the capture happens at zero speed.
    st.done_set.insert(st.voxel);
    ++st.pass_visited;
    st.sweep_target.reset();
    if (dwell) return hover(st);
  }
  if (!st.sweep_target) {
    auto bfs = nearest_target_dijkstra(sm, local, layer,
                                       use_done_set ? &st.done_set : nullptr,
                                       st.denied ? ctx.avoid : nullptr);
    if (!bfs) return std::nullopt;
    st.sweep_target = bfs->cells.back();
    st.nav_goal = st.sweep_target;
    st.path.assign(bfs->cells.begin() + 1, bfs->cells.end());
    point_gimbal(st, ctx);
    if (bfs->cells.size() == 1) {
      // Already standing on the target.
      st.done_set.insert(st.voxel);
      ++st.pass_visited;
      st.sweep_target.reset();
      return hover(st);
    }
    return make_intent(st, ctx.config->future_horizon);
  }
  point_gimbal(st, ctx);
  if (!follow_to(st, ctx, *st.sweep_target)) {
    if (st.failed_plans >= kMaxPlanFailures) {
      // Abandon a target that stayed unreachable across three replans so the
      // mission always terminates; it counts as handled from here on.
      sm.mark_visited(sm.from_global(*st.sweep_target));
      st.done_set.insert(*st.sweep_target);
      st.sweep_target.reset();
      st.failed_plans = 0;
    }
    return hover(st);
  }
  return make_intent(st, ctx.config->future_horizon);
}

void setup_inspect(AgentState& st, const Region& region, std::vector<int> sched) {
  st.mode = Mode::Inspect;
  st.inspect_region = region;
  st.sched = std::move(sched);
  st.sched_pos = 0;
  st.pass_visited = 0;
  st.done_set.clear();
  st.sweep_target.reset();
  st.goto_pos = 0;
  st.report_sent = false;
}

void goto_rest(AgentState& st, const SimConfig& cfg) {
  st.mode = cfg.return_home ? Mode::Return : Mode::Done;
  st.wait_arrived = false;
  st.path.clear();
  st.nav_goal.reset();
}

// Top of the entry column, stepped down past cells the team knows to be
// occupied.
VoxelIndex exd_wait_voxel(const TeamRuntime& team) {
  const Submap& sm = *team.submap;
  VoxelIndex top = sm.to_global({0, 0, sm.nlayers() - 1});
  VoxelIndex v{team.entry_voxel.i, team.entry_voxel.j, top.k};
  while (v.k > team.entry_voxel.k && (team.map.attr(v) & kOccupied)) --v.k;
  return v;
}

}  // namespace

VoxelIndex pgd_wait_voxel(const TeamRuntime& team, int pgd_index) {
  const Submap& sm = *team.submap;
  VoxelIndex top = sm.to_global({0, 0, sm.nlayers() - 1});
  // Stacked above the box on the entry column, so idle PGDs never park on a
  // cell the sweeps still need.
  VoxelIndex v{team.entry_voxel.i, team.entry_voxel.j, top.k + 1 + pgd_index};
  while (team.map.attr(v) & kOccupied) ++v.k;
  return v;
}

void setup_box(TeamRuntime& team, const InspectionPath& path, int path_index,
               const std::vector<BoundingBox>& boxes, const SimConfig& cfg) {
  team.box_pos = path_index;
  const PathEntry& entry = path[path_index];
  const BoundingBox* box = nullptr;
  for (const BoundingBox& b : boxes)
    if (b.id == entry.box_id) box = &b;
  team.submap = Submap::for_box(*box, cfg.voxel_size);
  int m = team.team.size();
  team.regions = partition_regions(box->id, team.submap->nlayers(), m);
  team.schedules.clear();
  for (const Region& r : team.regions)
    team.schedules.push_back(inspection_layers(r, cfg.stride));
  team.entry_set = false;
  team.done_regions.clear();
}

StepResult step_exd(AgentState& st, StepContext& ctx) {
  StepResult res;
  TeamRuntime& team = *ctx.team;
  const SimConfig& cfg = *ctx.config;
  const int m_total = team.team.size();

  for (const Message& msg : ctx.inbox) {
    res.received.push_back(msg_kind_name(msg.kind));
    if (msg.kind == MsgKind::DoneReport)
      team.done_regions.insert(std::get<DoneReport>(msg.payload).region_lo);
  }

  auto archive_box = [&] {
    if (team.submap)
      team.finished.push_back(
          {team.box_pos, std::move(*team.submap), team.regions, team.schedules});
    team.submap.reset();
  };
  auto broadcast = [&](const TransferCmd& cmd) {
    for (const std::string& pgd : team.team.members) {
      ctx.bus->send(st.name, pgd, MsgKind::TransferCmd, cmd, ctx.tick);
      res.sent.push_back(msg_kind_name(MsgKind::TransferCmd));
    }
  };

  for (int guard = 0; guard < 4; ++guard) {
    switch (st.mode) {
      case Mode::Transfer: {
        if (st.box_pos < 0) {  // first activation
          if (team.area.empty()) {
            broadcast({-1, true});
            goto_rest(st, cfg);
            break;
          }
          st.box_pos = team.area.first;
        }
        if (!team.submap || team.box_pos != st.box_pos)
          setup_box(team, *ctx.path, st.box_pos, *ctx.boxes, cfg);
        VoxelIndex entry_goal =
            point_to_cell((*ctx.path)[st.box_pos].enter, cfg.voxel_size);
        bool entry_blocked = (team.map.attr(entry_goal) & kOccupied) != 0;
        if (st.voxel == entry_goal || entry_blocked ||
            st.failed_plans >= kMaxPlanFailures) {
          st.mode = Mode::SeekEntry;
          st.entry_walk.clear();
          st.entry_pos = 0;
          st.failed_plans = 0;
          break;
        }
        if (!follow_to(st, ctx, entry_goal)) {
          res.intent = hover(st);
          return res;
        }
        res.intent = make_intent(st, cfg.future_horizon);
        return res;
      }
      case Mode::SeekEntry: {
        if (st.entry_walk.empty()) {
          st.entry_walk = entry_candidates(*team.submap, st.pose);
          st.entry_pos = 0;
        }
        const Submap& sm = *team.submap;
        bool acted = false;
        while (st.entry_pos < st.entry_walk.size()) {
          VoxelIndex cand = st.entry_walk[st.entry_pos];
          if (sm.attr(cand) & kOccupied) {
            ++st.entry_pos;
            continue;
          }
          VoxelIndex goal = sm.to_global(cand);
          if (st.voxel == goal) {
            team.entry_voxel = goal;
            team.entry_set = true;
            st.region_cursor = 0;
            st.cmd_sent = false;
            st.entry_walk.clear();
            if (m_total == 1) {
              setup_inspect(st, team.regions[0], team.schedules[0]);
            } else {
              st.mode = Mode::MapRegionFloor;
              st.sweep_target.reset();
              st.goto_pos = 0;
            }
            acted = true;
            break;
          }
          if (follow_to(st, ctx, goal)) {
            res.intent = make_intent(st, cfg.future_horizon);
            return res;
          }
          if (st.failed_plans < kMaxPlanFailures) {
            res.intent = hover(st);
            return res;
          }
          ++st.entry_pos;
          st.failed_plans = 0;
        }
        if (acted) break;
        if (st.entry_pos >= st.entry_walk.size()) {
          res.warning = "entry search exhausted; waiting";
          st.mode = Mode::Wait;
          st.wait_arrived = true;
          break;
        }
        break;
      }
      case Mode::MapRegionFloor: {
        if (st.cmd_sent) {
          const std::string& pgd = team.team.members[st.region_cursor];
          if (ctx.bus->pending_between(st.name, pgd, MsgKind::InspectCmd) > 0) {
            st.mode = Mode::SeekLOS;
            break;
          }
          st.cmd_sent = false;
          ++st.region_cursor;
          if (st.region_cursor == m_total - 1) {
            setup_inspect(st, team.regions[st.region_cursor],
                          team.schedules[st.region_cursor]);
          } else {
            st.sweep_target.reset();
            st.goto_pos = 0;
          }
          break;
        }
        int floor = team.regions[st.region_cursor].lo;
        auto intent = sweep_step(st, ctx, floor, false, false);
        if (intent) {
          res.intent = *intent;
          return res;
        }
        const std::string& pgd = team.team.members[st.region_cursor];
        ctx.bus->send(st.name, pgd, MsgKind::InspectCmd,
                      InspectCmd{team.regions[st.region_cursor].box_id,
                                 team.regions[st.region_cursor],
                                 team.schedules[st.region_cursor]},
                      ctx.tick);
        res.sent.push_back(msg_kind_name(MsgKind::InspectCmd));
        st.cmd_sent = true;
        st.goto_pos = 0;
        res.intent = hover(st);
        return res;
      }
      case Mode::SeekLOS: {
        const std::string& pgd = team.team.members[st.region_cursor];
        if (ctx.bus->pending_between(st.name, pgd, MsgKind::InspectCmd) == 0) {
          st.mode = Mode::MapRegionFloor;  // cmd_sent still set; advances there
          break;
        }
        VoxelIndex goal = pgd_wait_voxel(team, st.region_cursor);
        if (std::abs(st.voxel.i - goal.i) <= 1 && std::abs(st.voxel.j - goal.j) <= 1 &&
            std::abs(st.voxel.k - goal.k) <= 1) {
          res.intent = hover(st);
          return res;
        }
        if (!follow_to(st, ctx, goal)) {
          res.intent = hover(st);
          return res;
        }
        res.intent = make_intent(st, cfg.future_horizon);
        return res;
      }
      case Mode::Inspect: {
        if (st.sched_pos >= static_cast<int>(st.sched.size())) {
          if (st.pass_visited == 0) {
            st.mode = Mode::Wait;
            st.wait_arrived = false;
            break;
          }
          st.sched_pos = 0;
          st.pass_visited = 0;
        }
        auto intent = sweep_step(st, ctx, st.sched[st.sched_pos], true, true);
        if (intent) {
          res.intent = *intent;
          return res;
        }
        ++st.sched_pos;
        st.goto_pos = 0;
        st.sweep_target.reset();
        break;
      }
      case Mode::Wait: {
        if (static_cast<int>(team.done_regions.size()) >= m_total - 1) {
          archive_box();
          if (st.box_pos < team.area.last) {
            ++st.box_pos;
            setup_box(team, *ctx.path, st.box_pos, *ctx.boxes, cfg);
            broadcast({st.box_pos, false});
            st.mode = Mode::Transfer;
          } else {
            broadcast({-1, true});
            goto_rest(st, cfg);
          }
          break;
        }
        if (!st.wait_arrived) {
          VoxelIndex goal = exd_wait_voxel(team);
          if (st.voxel == goal || st.failed_plans >= kMaxPlanFailures ||
              st.denied_streak >= kRelaxDeniedAfter) {
            st.wait_arrived = true;
          } else if (follow_to(st, ctx, goal)) {
            res.intent = make_intent(st, cfg.future_horizon);
            return res;
          }
        }
        res.intent = hover(st);
        return res;
      }
      case Mode::Return: {
        if (st.voxel == st.start_voxel) {
          st.mode = Mode::Done;
          break;
        }
        if (!follow_to(st, ctx, st.start_voxel)) {
          res.intent = hover(st);
          return res;
        }
        res.intent = make_intent(st, cfg.future_horizon);
        return res;
      }
      case Mode::Done: {
        res.intent = hover(st);
        return res;
      }
    }
  }
  res.intent = hover(st);
  return res;
}

StepResult step_pgd(AgentState& st, StepContext& ctx) {
  StepResult res;
  TeamRuntime& team = *ctx.team;
  const SimConfig& cfg = *ctx.config;
  const std::string& leader = team.team.leader;

  for (const Message& msg : ctx.inbox) {
    res.received.push_back(msg_kind_name(msg.kind));
    if (msg.kind == MsgKind::InspectCmd) {
      const auto& cmd = std::get<InspectCmd>(msg.payload);
      setup_inspect(st, cmd.region, cmd.layers);
    } else if (msg.kind == MsgKind::TransferCmd) {
      const auto& cmd = std::get<TransferCmd>(msg.payload);
      if (cmd.go_home) {
        goto_rest(st, cfg);
      } else {
        st.box_pos = cmd.path_index;
        st.mode = Mode::Transfer;
        st.wait_arrived = false;
        st.done_set.clear();
        st.sweep_target.reset();
        st.report_sent = false;
        st.done_col_pos = 0;
      }
    }
  }

  if (st.mode != Mode::Done &&
      ctx.bus->pending_between(st.name, leader, MsgKind::PosePing) == 0) {
    ctx.bus->send(st.name, leader, MsgKind::PosePing,
                  PosePing{st.pose, static_cast<int>(st.mode)}, ctx.tick);
    res.sent.push_back(msg_kind_name(MsgKind::PosePing));
  }

  for (int guard = 0; guard < 4; ++guard) {
    switch (st.mode) {
      case Mode::Transfer: {
        if (st.box_pos < 0 && !team.area.empty()) st.box_pos = team.area.first;
        if (team.entry_set && team.box_pos == st.box_pos) {
          st.mode = Mode::SeekEntry;
          break;
        }
        VoxelIndex lead_voxel = ctx.positions->at(leader);
        int gap = std::max({std::abs(st.voxel.i - lead_voxel.i),
                            std::abs(st.voxel.j - lead_voxel.j),
                            std::abs(st.voxel.k - lead_voxel.k)});
        if (gap <= cfg.standoff + st.pgd_index) {
          res.intent = hover(st);
          return res;
        }
        bool goal_stale = !st.nav_goal ||
                          !adjacent_or_equal(*st.nav_goal, lead_voxel) ||
                          st.path.empty();
        if (goal_stale && !plan_to(st, ctx, lead_voxel)) {
          res.intent = hover(st);
          return res;
        }
        if (!follow_to(st, ctx, *st.nav_goal)) {
          res.intent = hover(st);
          return res;
        }
        res.intent = make_intent(st, cfg.future_horizon);
        return res;
      }
      case Mode::SeekEntry: {
        VoxelIndex goal = pgd_wait_voxel(team, st.pgd_index);
        if (st.voxel == goal || st.failed_plans >= kMaxPlanFailures ||
            st.denied_streak >= kRelaxDeniedAfter) {
          st.mode = Mode::Wait;
          st.wait_arrived = true;
          if (!(st.voxel == goal))
            res.warning = "waiting slot unreachable; waiting in place";
          st.failed_plans = 0;
          break;
        }
        if (!follow_to(st, ctx, goal)) {
          res.intent = hover(st);
          return res;
        }
        res.intent = make_intent(st, cfg.future_horizon);
        return res;
      }
      case Mode::Inspect: {
        if (st.sched_pos >= static_cast<int>(st.sched.size())) {
          if (st.pass_visited == 0) {
            st.mode = Mode::Wait;
            st.wait_arrived = false;
            st.done_col_pos = 0;
            break;
          }
          st.sched_pos = 0;
          st.pass_visited = 0;
        }
        auto intent = sweep_step(st, ctx, st.sched[st.sched_pos], true, true);
        if (intent) {
          res.intent = *intent;
          return res;
        }
        ++st.sched_pos;
        st.goto_pos = 0;
        st.sweep_target.reset();
        break;
      }
      case Mode::Wait: {
        if (st.wait_arrived) {
          res.intent = hover(st);
          return res;
        }
        // Walk to the nearest free voxel sharing the entry column, stepping
        // to the next candidate when the slot stays contested.
        const Submap& sm = *team.submap;
        std::vector<VoxelIndex> col;
        VoxelIndex base = sm.to_global({0, 0, 0});
        for (int k = 0; k < sm.nlayers(); ++k) {
          VoxelIndex v{team.entry_voxel.i, team.entry_voxel.j, base.k + k};
          if (!(team.map.attr(v) & kOccupied)) col.push_back(v);
        }
        std::stable_sort(col.begin(), col.end(), [&](const VoxelIndex& a,
                                                     const VoxelIndex& b) {
          return std::abs(a.k - st.voxel.k) < std::abs(b.k - st.voxel.k);
        });
        if (col.empty()) {
          st.wait_arrived = true;
          res.warning = "entry column fully occupied; waiting in place";
          break;
        }
        if (st.denied_streak >= kMaxPlanFailures &&
            st.done_col_pos + 1 < col.size()) {
          ++st.done_col_pos;
          st.denied_streak = 0;
        }
        VoxelIndex goal = col[std::min(st.done_col_pos, col.size() - 1)];
        if (st.voxel == goal) {
          st.wait_arrived = true;
          if (!st.report_sent) {
            ctx.bus->send(st.name, leader, MsgKind::DoneReport,
                          DoneReport{st.inspect_region.box_id, st.inspect_region.lo},
                          ctx.tick);
            res.sent.push_back(msg_kind_name(MsgKind::DoneReport));
            st.report_sent = true;
          }
          res.intent = hover(st);
          return res;
        }
        if (!follow_to(st, ctx, goal)) {
          if (st.failed_plans >= kMaxPlanFailures &&
              st.done_col_pos + 1 < col.size()) {
            ++st.done_col_pos;
            st.failed_plans = 0;
          }
          res.intent = hover(st);
          return res;
        }
        res.intent = make_intent(st, cfg.future_horizon);
        return res;
      }
      case Mode::Return: {
        if (st.voxel == st.start_voxel) {
          st.mode = Mode::Done;
          break;
        }
        if (!follow_to(st, ctx, st.start_voxel)) {
          res.intent = hover(st);
          return res;
        }
        res.intent = make_intent(st, cfg.future_horizon);
        return res;
      }
      default: {  // MapRegionFloor and SeekLOS never occur for PGDs
        res.intent = hover(st);
        return res;
      }
    }
  }
  res.intent = hover(st);
  return res;
}

ArbitrationResult resolve_collisions(
    const std::vector<Intent>& intents,
    const std::map<std::string, VoxelIndex>& current,
    const std::function<bool(const VoxelIndex&)>& occupied) {
  ArbitrationResult out;
  enum Status { kUnknown, kInProgress, kGranted, kDenied };
  std::map<std::string, Status> status;
  std::map<std::int64_t, std::string> claims;
  std::map<std::int64_t, std::string> occupant;
  std::map<std::string, std::size_t> index_of;
  for (std::size_t i = 0; i < intents.size(); ++i) {
    index_of[intents[i].name] = i;
    status[intents[i].name] = kUnknown;
    occupant[pack_index(current.at(intents[i].name))] = intents[i].name;
  }

  std::function<void(std::size_t)> resolve = [&](std::size_t idx) {
    const Intent& it = intents[idx];
    const std::string& name = it.name;
    if (status[name] == kGranted || status[name] == kDenied) return;
    status[name] = kInProgress;
    VoxelIndex cur = current.at(name);
    VoxelIndex t = it.next;
    auto deny = [&] {
      status[name] = kDenied;
      out.final_voxel[name] = cur;
      out.granted[name] = false;
      claims[pack_index(cur)] = name;
    };
    auto grant = [&] {
      status[name] = kGranted;
      out.final_voxel[name] = t;
      out.granted[name] = true;
      claims[pack_index(t)] = name;
    };
    if (t == cur) {
      grant();
      return;
    }
    if (!adjacent_or_equal(t, cur) || occupied(t)) {
      deny();
      return;
    }
    if (claims.count(pack_index(t))) {
      deny();
      return;
    }
    auto occ = occupant.find(pack_index(t));
    if (occ != occupant.end() && occ->second != name) {
      const std::string& other = occ->second;
      if (status[other] == kUnknown) resolve(index_of[other]);
      if (status[other] == kInProgress || status[other] == kDenied) {
        deny();  // cycle, swap partner, or an agent that is staying put
        return;
      }
      if (out.final_voxel[other] == cur) {
        deny();  // head-on swap
        return;
      }
      if (claims.count(pack_index(t))) {
        deny();
        return;
      }
    }
    grant();
  };
  for (std::size_t i = 0; i < intents.size(); ++i) resolve(i);
  return out;
}

}  // namespace swarm
