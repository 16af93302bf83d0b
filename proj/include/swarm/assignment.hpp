#pragma once

#include <string>
#include <vector>

#include "swarm/world.hpp"

namespace swarm {

struct Team {
  int id = 0;
  std::string leader;                // EXD name
  std::vector<std::string> members;  // PGD names, alphabetical

  int size() const { return 1 + static_cast<int>(members.size()); }
};

struct PathEntry {
  int box_id = -1;
  Vec3 enter;
  Vec3 exit;
};

using InspectionPath = std::vector<PathEntry>;

// Contiguous slice [first, last] of the inspection path owned by one team;
// first > last encodes an empty area.
struct TaskArea {
  int team_id = 0;
  int first = 0;
  int last = -1;

  bool empty() const { return first > last; }
  int count() const { return empty() ? 0 : last - first + 1; }
};

// One team per EXD (ordered alphabetically by leader); each PGD joins the
// team of its nearest EXD, ties to the alphabetically first leader.
std::vector<Team> form_teams(const std::vector<FleetAgent>& fleet, const Vec3& gcs);

// Greedy nearest-endpoint-next ordering over the boxes' enter-exit pairs,
// starting from the endpoint closest to the GCS.
InspectionPath build_inspection_path(const std::vector<BoundingBox>& boxes,
                                     const Vec3& gcs);

// Contiguous split of the path into per-team areas with cumulative box volume
// tracking quotas proportional to team size. Teams are ordered by their
// leader's start distance to the path head; every team gets at least one box
// when there are enough boxes.
std::vector<TaskArea> partition_path(const InspectionPath& path,
                                     const std::vector<Team>& teams,
                                     const std::vector<BoundingBox>& boxes,
                                     const std::vector<FleetAgent>& fleet);

// Human-readable summary of teams, path order, and volume shares.
std::string assignment_report(const std::vector<Team>& teams, const InspectionPath& path,
                              const std::vector<TaskArea>& areas,
                              const std::vector<BoundingBox>& boxes);

}  // namespace swarm
