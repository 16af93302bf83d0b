#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "swarm/geometry.hpp"
#include "swarm/voxel_map.hpp"

namespace swarm {

// cells[0] is the start voxel; cost is in voxel-step units (axis 1, planar
// diagonal sqrt2, space diagonal sqrt3). Empty cells means unreachable.
struct GridPath {
  std::vector<VoxelIndex> cells;
  double cost = 0.0;

  bool reachable() const { return !cells.empty(); }
};

// Contiguous inclusive band of submap layers. lo > hi encodes an empty band
// (more regions than layers).
struct Region {
  int box_id = -1;
  int lo = 0;
  int hi = -1;

  bool empty() const { return lo > hi; }
  int size() const { return empty() ? 0 : hi - lo + 1; }
};

// Cost-minimal 26-connected path from start to goal within the inclusive
// index box [lo, hi], avoiding cells where blocked() is true. Deterministic:
// ties resolve toward the lower packed linear index.
GridPath astar(const VoxelIndex& lo, const VoxelIndex& hi, const VoxelIndex& start,
               const VoxelIndex& goal,
               const std::function<bool(const VoxelIndex&)>& blocked);

// Shortest in-layer path (8-connected, unit step cost) from a local start
// voxel to the closest interesting-unvisited voxel of the layer; falls back
// to unvisited boundary voxels when no such target exists. Returns none when
// the layer is exhausted. `done`, when given, replaces the submap's visited
// attribute as the filter (keyed by global packed index); `avoid` blocks
// traversal and targets (same keying). Path cells are global indices.
std::optional<GridPath> nearest_target_dijkstra(const Submap& sm,
                                                const VoxelIndex& start_local,
                                                int layer,
                                                const IndexSet* done = nullptr,
                                                const IndexSet* avoid = nullptr);

// Every voxel of the submap ordered for entry search: layer by layer starting
// at layer 0, each layer in an outward square-ring spiral (counter-clockwise,
// first step +x) centered on the layer voxel nearest `from`. Local indices.
std::vector<VoxelIndex> entry_candidates(const Submap& sm, const Vec3& from);

// M contiguous bands over layers [0, nlayers), sizes differing by at most
// one with the larger bands at the bottom. Bands beyond nlayers are empty.
std::vector<Region> partition_regions(int box_id, int nlayers, int m);

// region.lo, lo+stride, ... while <= region.hi. Empty region gives an empty
// schedule.
std::vector<int> inspection_layers(const Region& region, int stride);

}  // namespace swarm
