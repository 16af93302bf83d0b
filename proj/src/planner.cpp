#include "swarm/planner.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <unordered_map>

namespace swarm {

namespace {

struct Neighbor {
  int di, dj, dk;
  double cost;
};

const std::vector<Neighbor>& neighbors26() {
  static const std::vector<Neighbor> n = [] {
    std::vector<Neighbor> v;
    for (int di = -1; di <= 1; ++di)
      for (int dj = -1; dj <= 1; ++dj)
        for (int dk = -1; dk <= 1; ++dk) {
          int d = std::abs(di) + std::abs(dj) + std::abs(dk);
          if (d == 0) continue;
          double c = d == 1 ? 1.0 : d == 2 ? std::sqrt(2.0) : std::sqrt(3.0);
          v.push_back({di, dj, dk, c});
        }
    return v;
  }();
  return n;
}

double octile3(const VoxelIndex& a, const VoxelIndex& b) {
  int d[3] = {std::abs(a.i - b.i), std::abs(a.j - b.j), std::abs(a.k - b.k)};
  std::sort(d, d + 3);
  int hi = d[2], mid = d[1], lo = d[0];
  return (hi - mid) + (mid - lo) * std::sqrt(2.0) + lo * std::sqrt(3.0);
}

}  // namespace

GridPath astar(const VoxelIndex& lo, const VoxelIndex& hi, const VoxelIndex& start,
               const VoxelIndex& goal,
               const std::function<bool(const VoxelIndex&)>& blocked) {
  GridPath out;
  auto in_bounds = [&](const VoxelIndex& v) {
    return v.i >= lo.i && v.i <= hi.i && v.j >= lo.j && v.j <= hi.j && v.k >= lo.k &&
           v.k <= hi.k;
  };
  if (!in_bounds(start) || !in_bounds(goal) || blocked(start) || blocked(goal)) return out;
  if (start == goal) {
    out.cells.push_back(start);
    return out;
  }

  struct Node {
    double f, g;
    std::int64_t key;
    VoxelIndex v;
    bool operator>(const Node& o) const {
      if (f != o.f) return f > o.f;
      return key > o.key;
    }
  };
  std::priority_queue<Node, std::vector<Node>, std::greater<Node>> open;
  std::unordered_map<std::int64_t, double> best_g;
  std::unordered_map<std::int64_t, std::int64_t> parent;
  std::unordered_map<std::int64_t, VoxelIndex> seen;

  auto push = [&](const VoxelIndex& v, double g, std::int64_t from) {
    std::int64_t key = pack_index(v);
    auto it = best_g.find(key);
    if (it != best_g.end() && it->second <= g + 1e-12) return;
    best_g[key] = g;
    parent[key] = from;
    seen[key] = v;
    open.push({g + octile3(v, goal), g, key, v});
  };
  push(start, 0.0, pack_index(start));

  std::int64_t goal_key = pack_index(goal);
  while (!open.empty()) {
    Node n = open.top();
    open.pop();
    if (n.g > best_g[n.key] + 1e-12) continue;  // stale entry
    if (n.key == goal_key) break;
    for (const Neighbor& nb : neighbors26()) {
      VoxelIndex v{n.v.i + nb.di, n.v.j + nb.dj, n.v.k + nb.dk};
      if (!in_bounds(v) || blocked(v)) continue;
      push(v, n.g + nb.cost, n.key);
    }
  }
  auto gi = best_g.find(goal_key);
  if (gi == best_g.end()) return out;
  out.cost = gi->second;
  std::int64_t cur = goal_key;
  while (true) {
    out.cells.push_back(seen[cur]);
    std::int64_t p = parent[cur];
    if (p == cur) break;
    cur = p;
  }
  std::reverse(out.cells.begin(), out.cells.end());
  return out;
}

std::optional<GridPath> nearest_target_dijkstra(const Submap& sm,
                                                const VoxelIndex& start_local,
                                                int layer, const IndexSet* done,
                                                const IndexSet* avoid) {
  const int nx = sm.nx(), ny = sm.ny();
  auto filtered = [&](const VoxelIndex& local) {
    if (done) return done->contains(sm.to_global(local));
    return (sm.attr(local) & kVisited) != 0;
  };
  auto avoided = [&](const VoxelIndex& local) {
    return avoid && avoid->contains(sm.to_global(local));
  };

  std::vector<char> is_target(static_cast<std::size_t>(nx) * ny, 0);
  bool any = false;
  auto collect = [&](bool boundary_pass) {
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        VoxelIndex v{i, j, layer};
        std::uint8_t a = sm.attr(v);
        if (a & kOccupied) continue;
        if (boundary_pass) {
          if (i != 0 && i != nx - 1 && j != 0 && j != ny - 1) continue;
        } else if (!(a & kInteresting)) {
          continue;
        }
        if (filtered(v) || avoided(v)) continue;
        is_target[static_cast<std::size_t>(j) * nx + i] = 1;
        any = true;
      }
  };
  collect(false);
  if (!any) collect(true);
  if (!any) return std::nullopt;

  if (!sm.in_bounds(start_local) || start_local.k != layer) return std::nullopt;

  // Unit-cost 8-connected BFS over unoccupied voxels of the layer.
  constexpr int kOff[8][2] = {{1, 0},  {-1, 0}, {0, 1},  {0, -1},
                              {1, 1},  {1, -1}, {-1, 1}, {-1, -1}};
  std::vector<int> dist(static_cast<std::size_t>(nx) * ny, -1);
  std::vector<int> par(static_cast<std::size_t>(nx) * ny, -1);
  auto lin = [&](int i, int j) { return j * nx + i; };
  std::queue<int> q;
  if (sm.attr(start_local) & kOccupied) return std::nullopt;
  dist[lin(start_local.i, start_local.j)] = 0;
  q.push(lin(start_local.i, start_local.j));
  while (!q.empty()) {
    int c = q.front();
    q.pop();
    int ci = c % nx, cj = c / nx;
    for (const auto& o : kOff) {
      int ni = ci + o[0], nj = cj + o[1];
      if (ni < 0 || ni >= nx || nj < 0 || nj >= ny) continue;
      int n = lin(ni, nj);
      if (dist[n] >= 0) continue;
      VoxelIndex v{ni, nj, layer};
      if (sm.attr(v) & kOccupied) continue;
      if (avoided(v)) continue;
      dist[n] = dist[c] + 1;
      par[n] = c;
      q.push(n);
    }
  }

  int best = -1;
  for (int idx = 0; idx < nx * ny; ++idx) {
    if (!is_target[idx] || dist[idx] < 0) continue;
    if (best < 0 || dist[idx] < dist[best]) best = idx;
  }
  if (best < 0) return std::nullopt;

  GridPath path;
  path.cost = dist[best];
  for (int c = best; c >= 0; c = par[c])
    path.cells.push_back(sm.to_global({c % nx, c / nx, layer}));
  std::reverse(path.cells.begin(), path.cells.end());
  return path;
}

std::vector<VoxelIndex> entry_candidates(const Submap& sm, const Vec3& from) {
  std::vector<VoxelIndex> out;
  out.reserve(static_cast<std::size_t>(sm.nx()) * sm.ny() * sm.nlayers());
  VoxelIndex fg = point_to_cell(from, sm.voxel_size());
  VoxelIndex fl = sm.from_global(fg);
  int ci = std::clamp(fl.i, 0, sm.nx() - 1);
  int cj = std::clamp(fl.j, 0, sm.ny() - 1);
  int rmax = std::max({ci, sm.nx() - 1 - ci, cj, sm.ny() - 1 - cj});

  for (int layer = 0; layer < sm.nlayers(); ++layer) {
    auto emit = [&](int i, int j) {
      if (i >= 0 && i < sm.nx() && j >= 0 && j < sm.ny()) out.push_back({i, j, layer});
    };
    emit(ci, cj);
    for (int r = 1; r <= rmax; ++r) {
      for (int j = cj; j <= cj + r; ++j) emit(ci + r, j);          // +x side, upward
      for (int i = ci + r - 1; i >= ci - r; --i) emit(i, cj + r);  // top, leftward
      for (int j = cj + r - 1; j >= cj - r; --j) emit(ci - r, j);  // -x side, downward
      for (int i = ci - r + 1; i <= ci + r; ++i) emit(i, cj - r);  // bottom, rightward
      for (int j = cj - r + 1; j <= cj - 1; ++j) emit(ci + r, j);  // close the ring
    }
  }
  return out;
}

std::vector<Region> partition_regions(int box_id, int nlayers, int m) {
  std::vector<Region> out;
  int base = nlayers / m;
  int rem = nlayers % m;
  int lo = 0;
  for (int r = 0; r < m; ++r) {
    int size = base + (r < rem ? 1 : 0);
    Region reg{box_id, lo, lo + size - 1};
    if (size == 0) reg = {box_id, lo, lo - 1};
    out.push_back(reg);
    lo += size;
  }
  return out;
}

std::vector<int> inspection_layers(const Region& region, int stride) {
  std::vector<int> out;
  if (region.empty() || stride < 1) return out;
  for (int l = region.lo; l <= region.hi; l += stride) out.push_back(l);
  return out;
}

}  // namespace swarm
