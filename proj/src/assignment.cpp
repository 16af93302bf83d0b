#include "swarm/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace swarm {

std::vector<Team> form_teams(const std::vector<FleetAgent>& fleet, const Vec3& gcs) {
  (void)gcs;  // teams form around EXDs; the GCS only hosts the computation
  std::vector<const FleetAgent*> exds, pgds;
  for (const FleetAgent& a : fleet)
    (a.role == Role::EXD ? exds : pgds).push_back(&a);
  if (exds.empty()) throw ScenarioError("fleet: at least one EXD required");
  auto by_name = [](const FleetAgent* a, const FleetAgent* b) { return a->name < b->name; };
  std::sort(exds.begin(), exds.end(), by_name);
  std::sort(pgds.begin(), pgds.end(), by_name);

  std::vector<Team> teams;
  for (std::size_t t = 0; t < exds.size(); ++t)
    teams.push_back({static_cast<int>(t), exds[t]->name, {}});
  for (const FleetAgent* p : pgds) {
    std::size_t best = 0;
    double best_d = (p->start - exds[0]->start).norm();
    for (std::size_t t = 1; t < exds.size(); ++t) {
      double d = (p->start - exds[t]->start).norm();
      if (d < best_d - 1e-12) {  // ties keep the alphabetically first leader
        best = t;
        best_d = d;
      }
    }
    teams[best].members.push_back(p->name);
  }
  return teams;
}

InspectionPath build_inspection_path(const std::vector<BoundingBox>& boxes,
                                     const Vec3& gcs) {
  InspectionPath path;
  if (boxes.empty()) return path;
  std::vector<const BoundingBox*> order(boxes.size());
  for (std::size_t i = 0; i < boxes.size(); ++i) order[i] = &boxes[i];
  std::sort(order.begin(), order.end(),
            [](const BoundingBox* a, const BoundingBox* b) { return a->id < b->id; });

  std::vector<bool> used(order.size(), false);
  Vec3 cursor = gcs;
  for (std::size_t step = 0; step < order.size(); ++step) {
    std::size_t pick = order.size();
    int pick_end = 0;
    double pick_d = 0.0;
    for (std::size_t b = 0; b < order.size(); ++b) {
      if (used[b]) continue;
      EnterExitPair pair = principal_axis(*order[b]);
      const Vec3 ends[2] = {pair.p1, pair.p2};
      for (int e = 0; e < 2; ++e) {
        double d = (ends[e] - cursor).norm();
        // Ties: lower box id first (order is id-sorted), then p1 before p2.
        if (pick == order.size() || d < pick_d - 1e-12) {
          pick = b;
          pick_end = e;
          pick_d = d;
        }
      }
    }
    used[pick] = true;
    EnterExitPair pair = principal_axis(*order[pick]);
    Vec3 enter = pick_end == 0 ? pair.p1 : pair.p2;
    Vec3 exit = pick_end == 0 ? pair.p2 : pair.p1;
    path.push_back({order[pick]->id, enter, exit});
    cursor = exit;
  }
  return path;
}

std::vector<TaskArea> partition_path(const InspectionPath& path,
                                     const std::vector<Team>& teams,
                                     const std::vector<BoundingBox>& boxes,
                                     const std::vector<FleetAgent>& fleet) {
  if (teams.empty()) throw ScenarioError("partition_path: no teams");
  auto volume_of = [&](int box_id) -> double {
    for (const BoundingBox& b : boxes)
      if (b.id == box_id) return b.volume();
    throw ScenarioError("partition_path: unknown box id " + std::to_string(box_id));
  };
  auto leader_start = [&](const Team& t) -> Vec3 {
    for (const FleetAgent& a : fleet)
      if (a.name == t.leader) return a.start;
    throw ScenarioError("partition_path: leader " + t.leader + " not in fleet");
  };

  // Teams walk the path in order of their leader's distance to its head.
  std::vector<std::size_t> team_order(teams.size());
  for (std::size_t t = 0; t < teams.size(); ++t) team_order[t] = t;
  if (!path.empty()) {
    Vec3 head = path.front().enter;
    std::stable_sort(team_order.begin(), team_order.end(),
                     [&](std::size_t a, std::size_t b) {
                       double da = (leader_start(teams[a]) - head).norm();
                       double db = (leader_start(teams[b]) - head).norm();
                       if (std::abs(da - db) > 1e-12) return da < db;
                       return teams[a].leader < teams[b].leader;
                     });
  }

  double total = 0.0;
  int weight_sum = 0;
  for (const PathEntry& e : path) total += volume_of(e.box_id);
  for (const Team& t : teams) weight_sum += t.size();

  std::vector<TaskArea> areas(teams.size());
  for (std::size_t t = 0; t < teams.size(); ++t)
    areas[t] = {teams[t].id, 0, -1};

  const int k = static_cast<int>(team_order.size());
  int ti = 0;
  int first = 0;
  double cum = 0.0;
  double target = 0.0;
  auto quota_target = [&](int upto) {
    int w = 0;
    for (int t = 0; t <= upto; ++t) w += teams[team_order[t]].size();
    return total * w / weight_sum;
  };
  target = quota_target(0);
  for (int b = 0; b < static_cast<int>(path.size()); ++b) {
    cum += volume_of(path[b].box_id);
    int boxes_left = static_cast<int>(path.size()) - 1 - b;
    int teams_after = k - 1 - ti;
    bool quota_met = cum >= target - 1e-9;
    bool must_advance = boxes_left <= teams_after && teams_after > 0;
    if (ti < k - 1 && (quota_met || must_advance)) {
      areas[team_order[ti]] = {teams[team_order[ti]].id, first, b};
      first = b + 1;
      ++ti;
      target = quota_target(ti);
    }
  }
  if (!path.empty())
    areas[team_order[ti]] = {teams[team_order[ti]].id, first,
                             static_cast<int>(path.size()) - 1};
  return areas;
}

std::string assignment_report(const std::vector<Team>& teams, const InspectionPath& path,
                              const std::vector<TaskArea>& areas,
                              const std::vector<BoundingBox>& boxes) {
  auto volume_of = [&](int box_id) -> double {
    for (const BoundingBox& b : boxes)
      if (b.id == box_id) return b.volume();
    return 0.0;
  };
  std::ostringstream os;
  os << "teams:\n";
  for (const Team& t : teams) {
    os << "  " << t.id << " leader=" << t.leader << " members=[";
    for (std::size_t i = 0; i < t.members.size(); ++i)
      os << (i ? "," : "") << t.members[i];
    os << "]\n";
  }
  os << "path:\n";
  for (std::size_t i = 0; i < path.size(); ++i) {
    const PathEntry& e = path[i];
    os << "  " << i << " box=" << e.box_id << " enter=(" << e.enter.x << ","
       << e.enter.y << "," << e.enter.z << ") exit=(" << e.exit.x << "," << e.exit.y
       << "," << e.exit.z << ")\n";
  }
  os << "areas:\n";
  for (const TaskArea& a : areas) {
    double share = 0.0;
    for (int b = a.first; b <= a.last && b >= 0; ++b)
      if (b < static_cast<int>(path.size())) share += volume_of(path[b].box_id);
    os << "  team " << a.team_id << " boxes [" << a.first << "," << a.last
       << "] volume " << share << "\n";
  }
  return os.str();
}

}  // namespace swarm
