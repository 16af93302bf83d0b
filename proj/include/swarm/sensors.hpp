#pragma once

#include <string>
#include <vector>

#include "swarm/geometry.hpp"
#include "swarm/world.hpp"

namespace swarm {

struct Capture {
  int defect_id = -1;
  double quality = 0.0;
  int tick = -1;
  std::string agent;
};

// Visits every lattice cell the segment [a, b] passes through, in order.
// visit(cell, t) gets the segment parameter in [0,1] at which the cell is
// entered; returning true stops the walk. Amanatides-Woo traversal.
template <class Visit>
inline void walk_segment(const Vec3& a, const Vec3& b, double cell, Visit&& visit) {
  VoxelIndex cur = point_to_cell(a, cell);
  const VoxelIndex end = point_to_cell(b, cell);
  const double d[3] = {b.x - a.x, b.y - a.y, b.z - a.z};
  const double p[3] = {a.x, a.y, a.z};
  int* axis_ref[3] = {&cur.i, &cur.j, &cur.k};
  int step[3];
  double tmax[3], tdelta[3];
  constexpr double kInf = std::numeric_limits<double>::infinity();
  for (int ax = 0; ax < 3; ++ax) {
    step[ax] = (d[ax] > 0.0) - (d[ax] < 0.0);
    if (step[ax] == 0) {
      tmax[ax] = kInf;
      tdelta[ax] = kInf;
      continue;
    }
    double boundary = (*axis_ref[ax] + (step[ax] > 0 ? 1 : 0)) * cell;
    tmax[ax] = (boundary - p[ax]) / d[ax];
    tdelta[ax] = cell / std::abs(d[ax]);
  }
  int guard = std::abs(end.i - cur.i) + std::abs(end.j - cur.j) + std::abs(end.k - cur.k) + 3;
  double t = 0.0;
  while (true) {
    if (visit(static_cast<const VoxelIndex&>(cur), t)) return;
    if (cur == end || --guard < 0) return;
    int ax = 0;
    if (tmax[1] < tmax[ax]) ax = 1;
    if (tmax[2] < tmax[ax]) ax = 2;
    t = tmax[ax];
    if (t > 1.0) return;  // numerically past b without landing on end's index
    *axis_ref[ax] += step[ax];
    tmax[ax] += tdelta[ax];
  }
}

// True iff the segment between a and b passes through no occupied cell.
// Zero-length segments are always clear.
bool line_of_sight(const Vec3& a, const Vec3& b, const GroundTruthModel& model);

// One full spherical scan from `pose`. Each ray reports the first occupied-cell
// intersection within max_range, nudged 1e-7 m past the cell boundary so the
// hit point falls inside the hit cell. Throws if the pose is inside a cell.
std::vector<Vec3> lidar_scan(const Vec3& pose, const GroundTruthModel& model,
                             const LidarConfig& cfg);

// Defects visible from `pose` with the camera aimed along gimbal_dir: within
// range, inside the FOV frustum, unoccluded, and seen from the front side.
// quality = cos(view angle) * max(0, 1 - speed / v_blur); zero-quality
// captures are still reported.
std::vector<Capture> camera_capture(const Vec3& pose, const Vec3& gimbal_dir,
                                    double speed, const std::vector<Defect>& defects,
                                    const GroundTruthModel& model,
                                    const CameraConfig& cfg);

}  // namespace swarm
