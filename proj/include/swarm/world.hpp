#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "swarm/geometry.hpp"

namespace swarm {

struct ScenarioError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Axis-aligned inspection volume.
struct BoundingBox {
  int id = 0;
  Vec3 center;
  Vec3 half_extents;

  double volume() const { return 8.0 * half_extents.x * half_extents.y * half_extents.z; }
  Aabb aabb() const { return {center - half_extents, center + half_extents}; }
};

// Face centres pierced by the box's principal axis; p1 is on the low side.
struct EnterExitPair {
  int box_id = 0;
  Vec3 p1, p2;
};

struct Defect {
  int id = 0;
  Vec3 position;
  Vec3 normal;  // outward unit vector
  int box_id = -1;
};

// Ground-truth occupancy on its own cell lattice, independent of the planning
// voxel size, plus the scoreable facade defects.
class GroundTruthModel {
 public:
  explicit GroundTruthModel(double cell_size = 4.0) : cell_(cell_size) {}

  double cell_size() const { return cell_; }
  bool empty() const { return cells_.empty(); }
  std::size_t cell_count() const { return cells_.size(); }

  bool cell_occupied(const VoxelIndex& c) const { return cells_.count(pack_index(c)) > 0; }
  void set_occupied(const VoxelIndex& c);
  // Fills every cell whose centre lies inside [min, max).
  void fill_block(const Vec3& min, const Vec3& max);

  std::vector<VoxelIndex> occupied_cells_sorted() const;
  const Aabb& bounds() const { return bounds_; }

  // dir indexes the face normal: 0..5 = +x,-x,+y,-y,+z,-z.
  struct Face {
    VoxelIndex cell;
    int dir;
  };
  static Vec3 face_normal(int dir);
  // Faces whose neighbour cell is unoccupied, in deterministic order.
  std::vector<Face> exposed_faces() const;

  std::vector<Defect> defects;

 private:
  double cell_;
  std::unordered_set<std::int64_t> cells_;
  Aabb bounds_;
};

struct LidarConfig {
  double max_range = 200.0;
  int azimuth_rays = 64;
  int elevation_rays = 33;
  int period = 1;  // ticks per full scan
};

struct CameraConfig {
  double fov_h = 2.4;  // radians
  double fov_v = 2.4;
  double max_range = 40.0;
  double v_blur = 2.0;  // speed at which image quality reaches zero
};

struct SimConfig {
  double voxel_size = 4.0;
  double tick_seconds = 0.5;
  double v_max = 2.0;
  int stride = 3;  // inspect one in every `stride` layers
  bool return_home = true;
  int future_horizon = 5;  // published path prefix length
  int standoff = 2;        // follower trails the leader by this many steps
  LidarConfig lidar;
  CameraConfig camera;
};

enum class Role { EXD, PGD };

struct FleetAgent {
  std::string name;
  Role role = Role::PGD;
  Vec3 start;
};

struct Scenario {
  std::vector<BoundingBox> boxes;
  GroundTruthModel model;
  Vec3 gcs_position;
  std::vector<FleetAgent> fleet;
  SimConfig config;

  const BoundingBox& box_by_id(int id) const;
};

struct ScenarioOverrides {
  std::optional<int> exd_count;  // fleet override, regenerates start positions
  std::optional<int> pgd_count;
  std::optional<std::uint32_t> seed;
  std::optional<int> stride;
  std::optional<double> voxel_size;
};

Scenario load_scenario(const std::filesystem::path& path);
Scenario load_scenario(const std::filesystem::path& path, const ScenarioOverrides& ovr);
Scenario parse_scenario(const std::string& json_text, const ScenarioOverrides& ovr = {});
std::string serialize_scenario(const Scenario& s);
void save_scenario(const Scenario& s, const std::filesystem::path& path);

// Runs all scenario invariant checks; load_scenario calls this itself.
void validate_scenario(const Scenario& s);

EnterExitPair principal_axis(const BoundingBox& box);

// Uniform over exposed cell faces, deterministic for a fixed seed. box_id is
// the lowest-id box containing the sampled position, -1 when none does.
std::vector<Defect> sample_defects(const GroundTruthModel& model, int count,
                                   std::uint32_t seed,
                                   const std::vector<BoundingBox>& boxes);

// "2E3P" -> (2, 3); throws ScenarioError on malformed strings.
std::pair<int, int> parse_fleet_spec(const std::string& spec);

// EXDs first, then PGDs, on a +x line from the GCS spaced two voxels apart.
std::vector<FleetAgent> generate_fleet(int exd_count, int pgd_count, const Vec3& gcs,
                                       double voxel_size);

}  // namespace swarm
