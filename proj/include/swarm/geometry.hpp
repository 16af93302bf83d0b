#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <unordered_set>

namespace swarm {

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
  bool operator==(const Vec3& o) const { return x == o.x && y == o.y && z == o.z; }

  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  Vec3 cross(const Vec3& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  double norm() const { return std::sqrt(dot(*this)); }
  Vec3 normalized() const {
    double n = norm();
    return n > 0.0 ? *this / n : Vec3{};
  }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

// Integer grid coordinate. Submaps use local indices with k as the layer
// index; the global lattice uses world-frame indices anchored at the origin.
struct VoxelIndex {
  int i = 0, j = 0, k = 0;
  auto operator<=>(const VoxelIndex&) const = default;
};

// 21 bits per axis, good for |i| < 2^20 which far exceeds any arena here.
inline std::int64_t pack_index(const VoxelIndex& v) {
  auto enc = [](int x) {
    return static_cast<std::uint64_t>(static_cast<std::uint32_t>(x)) & 0x1FFFFFull;
  };
  return static_cast<std::int64_t>((enc(v.i) << 42) | (enc(v.j) << 21) | enc(v.k));
}

class IndexSet {
 public:
  void insert(const VoxelIndex& v) { set_.insert(pack_index(v)); }
  bool contains(const VoxelIndex& v) const { return set_.count(pack_index(v)) > 0; }
  bool empty() const { return set_.empty(); }
  std::size_t size() const { return set_.size(); }
  void clear() { set_.clear(); }

 private:
  std::unordered_set<std::int64_t> set_;
};

// Floor convention: a point exactly on a face belongs to the higher-index cell's
// lower boundary, i.e. floor(p / cell).
inline VoxelIndex point_to_cell(const Vec3& p, double cell) {
  return {static_cast<int>(std::floor(p.x / cell)),
          static_cast<int>(std::floor(p.y / cell)),
          static_cast<int>(std::floor(p.z / cell))};
}

inline Vec3 cell_center(const VoxelIndex& v, double cell) {
  return {(v.i + 0.5) * cell, (v.j + 0.5) * cell, (v.k + 0.5) * cell};
}

struct Aabb {
  Vec3 min{std::numeric_limits<double>::max(), std::numeric_limits<double>::max(),
           std::numeric_limits<double>::max()};
  Vec3 max{std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest(),
           std::numeric_limits<double>::lowest()};

  bool valid() const { return min.x <= max.x && min.y <= max.y && min.z <= max.z; }
  void expand(const Vec3& p) {
    min.x = std::min(min.x, p.x); min.y = std::min(min.y, p.y); min.z = std::min(min.z, p.z);
    max.x = std::max(max.x, p.x); max.y = std::max(max.y, p.y); max.z = std::max(max.z, p.z);
  }
  void expand(const Aabb& b) { expand(b.min); expand(b.max); }
  void pad(double m) { min = min - Vec3{m, m, m}; max = max + Vec3{m, m, m}; }
  bool contains(const Vec3& p) const {
    return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y &&
           p.z >= min.z && p.z <= max.z;
  }
};

// Chebyshev (26-neighbourhood) adjacency, hover included.
inline bool adjacent_or_equal(const VoxelIndex& a, const VoxelIndex& b) {
  return std::abs(a.i - b.i) <= 1 && std::abs(a.j - b.j) <= 1 && std::abs(a.k - b.k) <= 1;
}

inline double step_length(const VoxelIndex& a, const VoxelIndex& b, double voxel) {
  int d = std::abs(a.i - b.i) + std::abs(a.j - b.j) + std::abs(a.k - b.k);
  if (d == 0) return 0.0;
  if (d == 1) return voxel;
  if (d == 2) return voxel * std::sqrt(2.0);
  return voxel * std::sqrt(3.0);
}

}  // namespace swarm
