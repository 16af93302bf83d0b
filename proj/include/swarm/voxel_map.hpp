#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "swarm/geometry.hpp"

namespace swarm {

struct BoundingBox;

// Per-voxel attribute bits. All start clear; occupied and visited never reset
// within a mission.
enum VoxelAttr : std::uint8_t {
  kOccupied = 1,
  kInteresting = 2,
  kVisited = 4,
};

// Layered voxel grid covering one bounding box. The grid is snapped to the
// global lattice so every submap voxel coincides with a global voxel; local
// index (0,0,0) corresponds to global index origin_index(). Layers are stacked
// along world z with layer 0 at the bottom.
class Submap {
 public:
  Submap() = default;
  static Submap for_box(const BoundingBox& box, double voxel_size);

  int box_id() const { return box_id_; }
  double voxel_size() const { return voxel_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int nlayers() const { return nlayers_; }
  int layer_sign() const { return layer_sign_; }
  const Vec3& origin() const { return origin_; }

  VoxelIndex index_min() const { return {0, 0, 0}; }
  VoxelIndex index_max() const { return {nx_ - 1, ny_ - 1, nlayers_ - 1}; }
  bool in_bounds(const VoxelIndex& v) const {
    return v.i >= 0 && v.i < nx_ && v.j >= 0 && v.j < ny_ && v.k >= 0 && v.k < nlayers_;
  }

  // Throws std::out_of_range when the point is outside the grid.
  VoxelIndex world_to_index(const Vec3& p) const;
  Vec3 index_to_center(const VoxelIndex& v) const;

  VoxelIndex from_global(const VoxelIndex& g) const {
    return {g.i - origin_index_.i, g.j - origin_index_.j, g.k - origin_index_.k};
  }
  VoxelIndex to_global(const VoxelIndex& l) const {
    return {l.i + origin_index_.i, l.j + origin_index_.j, l.k + origin_index_.k};
  }

  std::uint8_t attr(const VoxelIndex& v) const { return cells_[linear(v)]; }
  bool occupied(const VoxelIndex& v) const { return in_bounds(v) && (attr(v) & kOccupied); }
  bool interesting(const VoxelIndex& v) const { return in_bounds(v) && (attr(v) & kInteresting); }
  bool visited(const VoxelIndex& v) const { return in_bounds(v) && (attr(v) & kVisited); }

  // Marks the containing voxel occupied and its six face neighbours
  // interesting. Out-of-bounds points are dropped. Returns the voxels whose
  // attribute byte changed, sorted.
  std::vector<VoxelIndex> insert_points(std::span<const Vec3> points);

  void mark_visited(const VoxelIndex& v);

  // Free, interesting, unvisited voxels of one layer in row-major (i, then j)
  // order.
  std::vector<VoxelIndex> layer_targets(int layer) const;

  // Free, unvisited voxels on the layer's rectangular perimeter.
  std::vector<VoxelIndex> boundary_unvisited(int layer) const;

  bool layer_has_occupied(int layer) const;

  // CSV grid of "OIV" bit triples, one row per j, for golden-file tests.
  std::string dump_layer(int layer) const;

 private:
  std::size_t linear(const VoxelIndex& v) const {
    return (static_cast<std::size_t>(v.k) * ny_ + v.j) * nx_ + v.i;
  }

  int box_id_ = -1;
  Vec3 origin_;
  VoxelIndex origin_index_;
  double voxel_ = 1.0;
  int nx_ = 0, ny_ = 0, nlayers_ = 0;
  int layer_sign_ = +1;  // bottom-up stacking
  std::vector<std::uint8_t> cells_;
};

// Sparse map over the whole arena, used for navigation between boxes. Same
// labelling scheme as Submap, hash storage keyed on the global lattice index.
class GlobalMap {
 public:
  GlobalMap() = default;
  GlobalMap(const Aabb& bounds, double voxel_size);

  double voxel_size() const { return voxel_; }
  VoxelIndex index_min() const { return min_idx_; }
  VoxelIndex index_max() const { return max_idx_; }
  bool in_bounds(const VoxelIndex& v) const {
    return v.i >= min_idx_.i && v.i <= max_idx_.i && v.j >= min_idx_.j &&
           v.j <= max_idx_.j && v.k >= min_idx_.k && v.k <= max_idx_.k;
  }

  VoxelIndex world_to_index(const Vec3& p) const;
  Vec3 index_to_center(const VoxelIndex& v) const { return cell_center(v, voxel_); }

  std::uint8_t attr(const VoxelIndex& v) const {
    auto it = cells_.find(pack_index(v));
    return it == cells_.end() ? 0 : it->second;
  }
  bool occupied(const VoxelIndex& v) const { return attr(v) & kOccupied; }
  bool interesting(const VoxelIndex& v) const { return attr(v) & kInteresting; }
  bool visited(const VoxelIndex& v) const { return attr(v) & kVisited; }

  std::vector<VoxelIndex> insert_points(std::span<const Vec3> points);
  void mark_visited(const VoxelIndex& v);

 private:
  Aabb bounds_;
  double voxel_ = 1.0;
  VoxelIndex min_idx_, max_idx_;
  std::unordered_map<std::int64_t, std::uint8_t> cells_;
};

}  // namespace swarm
