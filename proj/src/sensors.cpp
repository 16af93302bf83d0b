#include "swarm/sensors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace swarm {

namespace {

// Clips the parametric segment a + t*(b-a), t in [0,1], against an AABB.
// Returns false when the segment misses the box entirely.
bool clip_segment(const Vec3& a, const Vec3& b, const Aabb& box, double& t0, double& t1) {
  t0 = 0.0;
  t1 = 1.0;
  const double av[3] = {a.x, a.y, a.z};
  const double bv[3] = {b.x, b.y, b.z};
  const double lo[3] = {box.min.x, box.min.y, box.min.z};
  const double hi[3] = {box.max.x, box.max.y, box.max.z};
  for (int ax = 0; ax < 3; ++ax) {
    double d = bv[ax] - av[ax];
    if (std::abs(d) < 1e-300) {
      if (av[ax] < lo[ax] || av[ax] > hi[ax]) return false;
      continue;
    }
    double ta = (lo[ax] - av[ax]) / d;
    double tb = (hi[ax] - av[ax]) / d;
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    if (t0 > t1) return false;
  }
  return true;
}

}  // namespace

bool line_of_sight(const Vec3& a, const Vec3& b, const GroundTruthModel& model) {
  if ((b - a).norm() < 1e-12) return true;
  if (model.empty()) return true;
  double t0, t1;
  if (!clip_segment(a, b, model.bounds(), t0, t1)) return true;
  Vec3 ca = a + (b - a) * t0;
  Vec3 cb = a + (b - a) * t1;
  bool blocked = false;
  walk_segment(ca, cb, model.cell_size(), [&](const VoxelIndex& c, double) {
    if (model.cell_occupied(c)) {
      blocked = true;
      return true;
    }
    return false;
  });
  return !blocked;
}

std::vector<Vec3> lidar_scan(const Vec3& pose, const GroundTruthModel& model,
                             const LidarConfig& cfg) {
  if (model.cell_occupied(point_to_cell(pose, model.cell_size())))
    throw std::runtime_error("lidar_scan: pose inside an occupied cell");
  std::vector<Vec3> hits;
  if (model.empty()) return hits;
  const Aabb& box = model.bounds();
  const int na = std::max(1, cfg.azimuth_rays);
  const int ne = std::max(1, cfg.elevation_rays);
  for (int ia = 0; ia < na; ++ia) {
    double phi = 2.0 * std::numbers::pi * ia / na;
    for (int ie = 0; ie < ne; ++ie) {
      double theta = ne == 1 ? 0.0
                             : -0.5 * std::numbers::pi +
                                   std::numbers::pi * ie / (ne - 1);
      Vec3 dir{std::cos(theta) * std::cos(phi), std::cos(theta) * std::sin(phi),
               std::sin(theta)};
      Vec3 far = pose + dir * cfg.max_range;
      double t0, t1;
      if (!clip_segment(pose, far, box, t0, t1)) continue;
      Vec3 ca = pose + dir * (cfg.max_range * t0);
      Vec3 cb = pose + dir * (cfg.max_range * t1);
      double seg = (cb - ca).norm();
      walk_segment(ca, cb, model.cell_size(), [&](const VoxelIndex& c, double t) {
        if (!model.cell_occupied(c)) return false;
        Vec3 entry = ca + (cb - ca) * t;
        Vec3 p = entry + dir * 1e-7 * (seg > 0 ? 1.0 : 0.0);
        // A ray entering at a corner or edge can be nudged into a neighbouring
        // cell; clamp such hits just inside the struck cell so the point stays
        // on (within 1e-6 of) the entry face.
        if (point_to_cell(p, model.cell_size()) != c) {
          const double cs = model.cell_size();
          const double e = 1e-7;
          p.x = std::clamp(p.x, c.i * cs + e, (c.i + 1) * cs - e);
          p.y = std::clamp(p.y, c.j * cs + e, (c.j + 1) * cs - e);
          p.z = std::clamp(p.z, c.k * cs + e, (c.k + 1) * cs - e);
        }
        hits.push_back(p);
        return true;
      });
    }
  }
  return hits;
}

std::vector<Capture> camera_capture(const Vec3& pose, const Vec3& gimbal_dir,
                                    double speed, const std::vector<Defect>& defects,
                                    const GroundTruthModel& model,
                                    const CameraConfig& cfg) {
  std::vector<Capture> out;
  Vec3 g = gimbal_dir.normalized();
  if (g.norm() < 0.5) g = {1, 0, 0};
  Vec3 up{0, 0, 1};
  if (std::abs(g.dot(up)) > 1.0 - 1e-9) up = {1, 0, 0};
  Vec3 right = g.cross(up).normalized();
  Vec3 cam_up = right.cross(g);
  double blur = std::max(0.0, 1.0 - speed / cfg.v_blur);

  for (const Defect& d : defects) {
    Vec3 v = d.position - pose;
    double dist = v.norm();
    if (dist < 1e-9 || dist > cfg.max_range) continue;
    double cosv = d.normal.dot((pose - d.position) / dist);
    if (cosv <= 0.0) continue;  // back side
    double f = v.dot(g);
    if (f <= 0.0) continue;
    if (std::atan2(std::abs(v.dot(right)), f) > 0.5 * cfg.fov_h) continue;
    if (std::atan2(std::abs(v.dot(cam_up)), f) > 0.5 * cfg.fov_v) continue;
    // Nudge the endpoint off the surface so the occupied cell behind the
    // face never blocks its own defect.
    Vec3 target = d.position + d.normal * 1e-3;
    if (!line_of_sight(pose, target, model)) continue;
    out.push_back({d.id, std::min(1.0, cosv * blur), -1, {}});
  }
  return out;
}

}  // namespace swarm
