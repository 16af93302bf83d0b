#include <algorithm>
#include <random>
#include <vector>

#include "doctest.h"
#include "swarm/voxel_map.hpp"
#include "swarm/world.hpp"

using namespace swarm;

namespace {

// Submap spanning [0,nx]x[0,ny]x[0,nz] at unit voxels, origin index (0,0,0),
// so local and global indices coincide.
Submap make_submap(int nx, int ny, int nz) {
  BoundingBox box{0, {nx / 2.0, ny / 2.0, nz / 2.0}, {nx / 2.0, ny / 2.0, nz / 2.0}};
  return Submap::for_box(box, 1.0);
}

Vec3 local_center(const VoxelIndex& v) {
  return {v.i + 0.5, v.j + 0.5, v.k + 0.5};
}

}  // namespace

TEST_CASE("point_to_cell floors each coordinate") {
  CHECK(point_to_cell({3.1, 0.5, 7.9}, 2.0) == VoxelIndex{1, 0, 3});
  CHECK(point_to_cell({-0.1, 0.0, 0.0}, 2.0) == VoxelIndex{-1, 0, 0});
  // A point exactly on a shared face belongs to the cell whose min corner it is.
  CHECK(point_to_cell({2.0, 1.0, 1.0}, 2.0) == VoxelIndex{1, 0, 0});
}

TEST_CASE("cell_center inverts point_to_cell at cell middles") {
  Vec3 c = cell_center({0, 0, 0}, 2.0);
  CHECK(c.x == 1.0);
  CHECK(c.y == 1.0);
  CHECK(c.z == 1.0);
  CHECK(point_to_cell(cell_center({4, -2, 9}, 2.0), 2.0) == VoxelIndex{4, -2, 9});
}

TEST_CASE("submap grid snaps to the lattice and reports bounds") {
  Submap sm = make_submap(6, 6, 6);
  CHECK(sm.nx() == 6);
  CHECK(sm.ny() == 6);
  CHECK(sm.nlayers() == 6);
  CHECK(sm.to_global({0, 0, 0}) == VoxelIndex{0, 0, 0});
  CHECK(sm.in_bounds({5, 5, 5}));
  CHECK(!sm.in_bounds({6, 0, 0}));
  CHECK_THROWS_AS(sm.world_to_index({7.0, 1.0, 1.0}), std::out_of_range);
}

TEST_CASE("interior insertion marks the voxel occupied and six neighbours interesting") {
  Submap sm = make_submap(6, 6, 6);
  std::vector<Vec3> pts{local_center({2, 2, 2})};
  auto changed = sm.insert_points(pts);

  std::vector<VoxelIndex> want{{1, 2, 2}, {2, 1, 2}, {2, 2, 1}, {2, 2, 2},
                               {2, 2, 3}, {2, 3, 2}, {3, 2, 2}};
  CHECK(changed == want);
  CHECK(sm.occupied({2, 2, 2}));
  CHECK(!sm.interesting({2, 2, 2}));
  int count = 0;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      for (int k = 0; k < 6; ++k)
        if (sm.interesting({i, j, k})) ++count;
  CHECK(count == 6);
}

TEST_CASE("corner insertion marks only the three in-bounds neighbours") {
  Submap sm = make_submap(6, 6, 6);
  std::vector<Vec3> pts{local_center({0, 0, 0})};
  auto changed = sm.insert_points(pts);
  CHECK(changed.size() == 4);  // the corner itself plus 3 neighbours
  CHECK(sm.occupied({0, 0, 0}));
  CHECK(sm.interesting({1, 0, 0}));
  CHECK(sm.interesting({0, 1, 0}));
  CHECK(sm.interesting({0, 0, 1}));
}

TEST_CASE("empty insertion and out-of-bounds points change nothing") {
  Submap sm = make_submap(6, 6, 6);
  CHECK(sm.insert_points({}).empty());
  std::vector<Vec3> outside{{100.0, 100.0, 100.0}, {-3.0, 0.5, 0.5}};
  CHECK(sm.insert_points(outside).empty());
}

TEST_CASE("repeat insertion reports no further changes") {
  Submap sm = make_submap(6, 6, 6);
  std::vector<Vec3> pts{local_center({2, 2, 2})};
  sm.insert_points(pts);
  CHECK(sm.insert_points(pts).empty());
}

TEST_CASE("mark_visited sets only the visited bit and is idempotent") {
  Submap sm = make_submap(6, 6, 6);
  sm.mark_visited({1, 1, 1});
  CHECK(sm.visited({1, 1, 1}));
  CHECK(!sm.occupied({1, 1, 1}));
  CHECK(!sm.interesting({1, 1, 1}));
  std::uint8_t before = sm.attr({1, 1, 1});
  sm.mark_visited({1, 1, 1});
  CHECK(sm.attr({1, 1, 1}) == before);
  CHECK_THROWS_AS(sm.mark_visited({9, 9, 9}), std::out_of_range);
}

TEST_CASE("replaying a five-voxel path visits exactly those voxels") {
  Submap sm = make_submap(6, 6, 6);
  std::vector<VoxelIndex> path{{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {2, 1, 0}, {2, 2, 0}};
  for (const auto& v : path) sm.mark_visited(v);
  int visited = 0;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      for (int k = 0; k < 6; ++k)
        if (sm.visited({i, j, k})) ++visited;
  CHECK(visited == 5);
  for (const auto& v : path) CHECK(sm.visited(v));
}

TEST_CASE("layer_targets lists free interesting unvisited voxels row-major") {
  Submap sm = make_submap(6, 6, 6);
  SUBCASE("nothing occupied anywhere gives an empty list") {
    CHECK(sm.layer_targets(0).empty());
  }
  SUBCASE("one occupied voxel yields its four in-layer neighbours") {
    std::vector<Vec3> pts{local_center({2, 2, 0})};
    sm.insert_points(pts);
    std::vector<VoxelIndex> want{{1, 2, 0}, {2, 1, 0}, {2, 3, 0}, {3, 2, 0}};
    CHECK(sm.layer_targets(0) == want);
  }
  SUBCASE("visiting every target empties the list") {
    std::vector<Vec3> pts{local_center({2, 2, 0})};
    sm.insert_points(pts);
    for (const auto& v : sm.layer_targets(0)) sm.mark_visited(v);
    CHECK(sm.layer_targets(0).empty());
  }
}

TEST_CASE("layer_targets never lists occupied or visited voxels") {
  Submap sm = make_submap(6, 6, 6);
  std::mt19937 rng(11);
  std::vector<Vec3> pts;
  for (int n = 0; n < 40; ++n)
    pts.push_back(local_center({static_cast<int>(rng() % 6), static_cast<int>(rng() % 6),
                                static_cast<int>(rng() % 6)}));
  sm.insert_points(pts);
  for (int n = 0; n < 20; ++n)
    sm.mark_visited({static_cast<int>(rng() % 6), static_cast<int>(rng() % 6),
                     static_cast<int>(rng() % 6)});
  for (int layer = 0; layer < 6; ++layer)
    for (const auto& v : sm.layer_targets(layer)) {
      CHECK(!sm.occupied(v));
      CHECK(!sm.visited(v));
      CHECK(sm.interesting(v));
    }
}

TEST_CASE("boundary_unvisited walks the layer perimeter") {
  SUBCASE("4x4 layer has 12 perimeter voxels") {
    Submap sm = make_submap(4, 4, 1);
    CHECK(sm.boundary_unvisited(0).size() == 12);
  }
  SUBCASE("1xN layer is all boundary") {
    Submap sm = make_submap(1, 5, 1);
    CHECK(sm.boundary_unvisited(0).size() == 5);
  }
  SUBCASE("fully visited perimeter gives an empty list") {
    Submap sm = make_submap(4, 4, 1);
    for (const auto& v : sm.boundary_unvisited(0)) sm.mark_visited(v);
    CHECK(sm.boundary_unvisited(0).empty());
  }
}

TEST_CASE("attributes only ever flip on, never off") {
  Submap sm = make_submap(8, 8, 8);
  std::mt19937 rng(23);
  auto snapshot = [&] {
    std::vector<std::uint8_t> s;
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j)
        for (int k = 0; k < 8; ++k) s.push_back(sm.attr({i, j, k}));
    return s;
  };
  auto prev = snapshot();
  for (int step = 0; step < 200; ++step) {
    if (rng() % 2) {
      std::vector<Vec3> pts{local_center({static_cast<int>(rng() % 8),
                                          static_cast<int>(rng() % 8),
                                          static_cast<int>(rng() % 8)})};
      sm.insert_points(pts);
    } else {
      sm.mark_visited({static_cast<int>(rng() % 8), static_cast<int>(rng() % 8),
                       static_cast<int>(rng() % 8)});
    }
    auto now = snapshot();
    for (std::size_t c = 0; c < now.size(); ++c)
      REQUIRE((now[c] & prev[c]) == prev[c]);
    prev = now;
  }
}

TEST_CASE("insertion order does not affect the final attribute state") {
  std::mt19937 rng(31);
  std::vector<Vec3> pts;
  for (int n = 0; n < 60; ++n)
    pts.push_back(local_center({static_cast<int>(rng() % 8), static_cast<int>(rng() % 8),
                                static_cast<int>(rng() % 8)}));
  Submap fwd = make_submap(8, 8, 8);
  fwd.insert_points(pts);
  Submap rev = make_submap(8, 8, 8);
  std::vector<Vec3> reversed(pts.rbegin(), pts.rend());
  rev.insert_points(reversed);
  Submap one_by_one = make_submap(8, 8, 8);
  std::shuffle(pts.begin(), pts.end(), rng);
  for (const Vec3& p : pts) {
    std::vector<Vec3> single{p};
    one_by_one.insert_points(single);
  }
  for (int layer = 0; layer < 8; ++layer) {
    CHECK(fwd.dump_layer(layer) == rev.dump_layer(layer));
    CHECK(fwd.dump_layer(layer) == one_by_one.dump_layer(layer));
  }
}

TEST_CASE("every interesting voxel has an occupied face neighbour") {
  Submap sm = make_submap(8, 8, 8);
  std::mt19937 rng(41);
  std::vector<Vec3> pts;
  for (int n = 0; n < 50; ++n)
    pts.push_back(local_center({static_cast<int>(rng() % 8), static_cast<int>(rng() % 8),
                                static_cast<int>(rng() % 8)}));
  sm.insert_points(pts);
  const int off[6][3] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j)
      for (int k = 0; k < 8; ++k) {
        if (!sm.interesting({i, j, k})) continue;
        bool touched = false;
        for (const auto& d : off)
          if (sm.occupied({i + d[0], j + d[1], k + d[2]})) touched = true;
        CHECK(touched);
      }
}

TEST_CASE("dump_layer prints one attribute triple per cell") {
  Submap sm = make_submap(2, 2, 1);
  std::vector<Vec3> pts{local_center({0, 0, 0})};
  sm.insert_points(pts);
  sm.mark_visited({1, 1, 0});
  CHECK(sm.dump_layer(0) == "100,010\n010,001\n");
}

TEST_CASE("global map shares the labelling scheme over a sparse store") {
  Aabb arena{{0, 0, 0}, {20, 20, 20}};
  GlobalMap gm(arena, 2.0);
  CHECK(gm.attr({3, 3, 3}) == 0);
  std::vector<Vec3> pts{{7.0, 7.0, 7.0}};
  auto changed = gm.insert_points(pts);
  CHECK(changed.size() == 7);
  CHECK(gm.occupied({3, 3, 3}));
  CHECK(gm.interesting({2, 3, 3}));
  CHECK(gm.interesting({3, 3, 4}));

  std::vector<Vec3> outside{{-50.0, 0.0, 0.0}};
  CHECK(gm.insert_points(outside).empty());

  gm.mark_visited({1, 1, 1});
  CHECK(gm.visited({1, 1, 1}));
  CHECK_THROWS_AS(gm.mark_visited({99, 0, 0}), std::out_of_range);
}
