#include "swarm/voxel_map.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "swarm/world.hpp"

namespace swarm {

namespace {

constexpr int kFaceOffsets[6][3] = {
    {1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};

}  // namespace

Submap Submap::for_box(const BoundingBox& box, double voxel_size) {
  Submap m;
  m.box_id_ = box.id;
  m.voxel_ = voxel_size;
  Vec3 lo = box.center - box.half_extents;
  Vec3 hi = box.center + box.half_extents;
  // Snap to the global lattice so submap voxels coincide with global voxels.
  m.origin_index_ = point_to_cell(lo, voxel_size);
  m.origin_ = {m.origin_index_.i * voxel_size, m.origin_index_.j * voxel_size,
               m.origin_index_.k * voxel_size};
  auto span = [&](double o, double h) {
    return std::max(1, static_cast<int>(std::ceil((h - o) / voxel_size - 1e-9)));
  };
  m.nx_ = span(m.origin_.x, hi.x);
  m.ny_ = span(m.origin_.y, hi.y);
  m.nlayers_ = span(m.origin_.z, hi.z);
  m.cells_.assign(static_cast<std::size_t>(m.nx_) * m.ny_ * m.nlayers_, 0);
  return m;
}

VoxelIndex Submap::world_to_index(const Vec3& p) const {
  VoxelIndex g = point_to_cell(p, voxel_);
  VoxelIndex l = from_global(g);
  if (!in_bounds(l)) throw std::out_of_range("Submap::world_to_index: point outside grid");
  return l;
}

Vec3 Submap::index_to_center(const VoxelIndex& v) const {
  if (!in_bounds(v)) throw std::out_of_range("Submap::index_to_center: index outside grid");
  return cell_center(to_global(v), voxel_);
}

std::vector<VoxelIndex> Submap::insert_points(std::span<const Vec3> points) {
  std::vector<VoxelIndex> changed;
  auto set_bits = [&](const VoxelIndex& v, std::uint8_t bits) {
    std::uint8_t& c = cells_[linear(v)];
    if ((c & bits) != bits) {
      c |= bits;
      changed.push_back(v);
    }
  };
  for (const Vec3& p : points) {
    VoxelIndex l = from_global(point_to_cell(p, voxel_));
    if (!in_bounds(l)) continue;
    set_bits(l, kOccupied);
    for (const auto& d : kFaceOffsets) {
      VoxelIndex n{l.i + d[0], l.j + d[1], l.k + d[2]};
      if (in_bounds(n)) set_bits(n, kInteresting);
    }
  }
  std::sort(changed.begin(), changed.end());
  changed.erase(std::unique(changed.begin(), changed.end()), changed.end());
  return changed;
}

void Submap::mark_visited(const VoxelIndex& v) {
  if (!in_bounds(v)) throw std::out_of_range("Submap::mark_visited: index outside grid");
  cells_[linear(v)] |= kVisited;
}

std::vector<VoxelIndex> Submap::layer_targets(int layer) const {
  std::vector<VoxelIndex> out;
  for (int i = 0; i < nx_; ++i)
    for (int j = 0; j < ny_; ++j) {
      VoxelIndex v{i, j, layer};
      std::uint8_t a = attr(v);
      if ((a & kInteresting) && !(a & kVisited) && !(a & kOccupied)) out.push_back(v);
    }
  return out;
}

std::vector<VoxelIndex> Submap::boundary_unvisited(int layer) const {
  std::vector<VoxelIndex> out;
  for (int i = 0; i < nx_; ++i)
    for (int j = 0; j < ny_; ++j) {
      if (i != 0 && i != nx_ - 1 && j != 0 && j != ny_ - 1) continue;
      VoxelIndex v{i, j, layer};
      std::uint8_t a = attr(v);
      if (!(a & kVisited) && !(a & kOccupied)) out.push_back(v);
    }
  return out;
}

bool Submap::layer_has_occupied(int layer) const {
  for (int i = 0; i < nx_; ++i)
    for (int j = 0; j < ny_; ++j)
      if (attr({i, j, layer}) & kOccupied) return true;
  return false;
}

std::string Submap::dump_layer(int layer) const {
  std::ostringstream os;
  for (int j = 0; j < ny_; ++j) {
    for (int i = 0; i < nx_; ++i) {
      std::uint8_t a = attr({i, j, layer});
      if (i) os << ',';
      os << ((a & kOccupied) ? 1 : 0) << ((a & kInteresting) ? 1 : 0)
         << ((a & kVisited) ? 1 : 0);
    }
    os << '\n';
  }
  return os.str();
}

GlobalMap::GlobalMap(const Aabb& bounds, double voxel_size)
    : bounds_(bounds), voxel_(voxel_size) {
  min_idx_ = point_to_cell(bounds.min, voxel_);
  max_idx_ = point_to_cell(bounds.max, voxel_);
}

VoxelIndex GlobalMap::world_to_index(const Vec3& p) const {
  VoxelIndex v = point_to_cell(p, voxel_);
  if (!in_bounds(v)) throw std::out_of_range("GlobalMap::world_to_index: point outside arena");
  return v;
}

std::vector<VoxelIndex> GlobalMap::insert_points(std::span<const Vec3> points) {
  std::vector<VoxelIndex> changed;
  auto set_bits = [&](const VoxelIndex& v, std::uint8_t bits) {
    std::uint8_t& c = cells_[pack_index(v)];
    if ((c & bits) != bits) {
      c |= bits;
      changed.push_back(v);
    }
  };
  for (const Vec3& p : points) {
    VoxelIndex v = point_to_cell(p, voxel_);
    if (!in_bounds(v)) continue;
    set_bits(v, kOccupied);
    for (const auto& d : kFaceOffsets) {
      VoxelIndex n{v.i + d[0], v.j + d[1], v.k + d[2]};
      if (in_bounds(n)) set_bits(n, kInteresting);
    }
  }
  std::sort(changed.begin(), changed.end());
  changed.erase(std::unique(changed.begin(), changed.end()), changed.end());
  return changed;
}

void GlobalMap::mark_visited(const VoxelIndex& v) {
  if (!in_bounds(v)) throw std::out_of_range("GlobalMap::mark_visited: index outside arena");
  cells_[pack_index(v)] |= kVisited;
}

}  // namespace swarm
