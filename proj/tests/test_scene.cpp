#include "doctest.h"
#include "mazebench/generate.hpp"
#include "mazebench/scene.hpp"

using namespace mazebench;

TEST_CASE("difficulty presets scale and pin the regular grid sizes") {
  CHECK(Difficulty::preset(MazeKind::Regular, Grade::Easy).grid_dim == 5);
  CHECK(Difficulty::preset(MazeKind::Regular, Grade::Medium).grid_dim == 6);
  CHECK(Difficulty::preset(MazeKind::Regular, Grade::Hard).grid_dim == 7);
  for (MazeKind k : kAllKinds) {
    const auto e = Difficulty::preset(k, Grade::Easy);
    const auto m = Difficulty::preset(k, Grade::Medium);
    const auto h = Difficulty::preset(k, Grade::Hard);
    CHECK(e.grid_dim < m.grid_dim);
    CHECK(m.grid_dim <= h.grid_dim);
  }
}

TEST_CASE("builtin skins exist and keep key colors separable") {
  const auto ids = Skin::builtin_ids();
  REQUIRE(ids.size() == 3);
  for (MazeKind k : kAllKinds)
    for (const auto& id : ids) {
      const Skin s = Skin::builtin(id, k);
      CHECK(s.skin_id == id);
      // agent/goal/wall must differ by >= 64 in some channel pairwise,
      // otherwise the color tracker cannot separate them
      CHECK(s.colors_distinguishable());
    }
}

TEST_CASE("node labels follow bijective base-26") {
  CHECK(node_label(0) == "A");
  CHECK(node_label(25) == "Z");
  CHECK(node_label(26) == "AA");
  CHECK(node_label(27) == "AB");
  CHECK(node_label(701) == "ZZ");
  CHECK(node_label(702) == "AAA");
}

TEST_CASE("kind and grade names round-trip") {
  for (MazeKind k : kAllKinds) CHECK(maze_kind_from_string(to_string(k)) == k);
  for (Grade g : kAllGrades) CHECK(grade_from_string(to_string(g)) == g);
  CHECK_THROWS(maze_kind_from_string("pacman"));
}

TEST_CASE("isometric step vectors are constant across the lattice") {
  Scene3D s;
  s.nx = 4;
  s.ny = 4;
  s.nz = 3;
  for (int z = 0; z < 3; ++z)
    for (int y = 0; y < 4; ++y)
      for (int x = 0; x < 4; ++x) s.cubes.push_back({x, y, z});
  const RenderSpec rs;
  // forward_right = +x in lattice space; its projected delta must be affine
  const Vec2 d0 = iso_project({1, 0, 0}, s, rs) - iso_project({0, 0, 0}, s, rs);
  for (int z = 0; z < 3; ++z)
    for (int y = 0; y < 3; ++y)
      for (int x = 0; x < 3; ++x) {
        const Vec2 d = iso_project({x + 1, y, z}, s, rs) -
                       iso_project({x, y, z}, s, rs);
        CHECK(d.x == doctest::Approx(d0.x));
        CHECK(d.y == doctest::Approx(d0.y));
      }
  // a z step moves straight up by 3 vertical units
  const Vec2 dz = iso_project({0, 0, 1}, s, rs) - iso_project({0, 0, 0}, s, rs);
  CHECK(dz.x == doctest::Approx(0.0));
  CHECK(dz.y == doctest::Approx(-3.0 * iso::kV));
}

TEST_CASE("manifest json round-trips byte-identically for every kind") {
  for (MazeKind k : kAllKinds) {
    const auto scene = generate_scene(k, Difficulty::preset(k, Grade::Easy),
                                      Skin::builtin("checker", k), 5);
    Manifest m{scene, {}};
    const std::string a = manifest_to_json(m);
    const std::string b = manifest_to_json(manifest_from_json(a));
    CHECK(a == b);
  }
}

TEST_CASE("manifest parse rejects garbage") {
  CHECK_THROWS_AS(manifest_from_json("{not json"), ManifestError);
}

TEST_CASE("generated bboxes sit inside the frame and stay apart") {
  for (MazeKind k : kAllKinds)
    for (Grade g : kAllGrades) {
      const auto s = generate_scene(k, Difficulty::preset(k, g),
                                    Skin::builtin("raw", k), 17);
      const auto inside = [&](const RectI& r) {
        return r.x >= 0 && r.y >= 0 && r.x + r.w <= s.render_spec.width &&
               r.y + r.h <= s.render_spec.height;
      };
      CHECK(inside(s.start_bbox));
      CHECK(inside(s.goal_bbox));
      CHECK(!s.start_bbox.overlaps(s.goal_bbox));
      CHECK(s.render_spec.fps == 24);
      CHECK(s.render_spec.frame_count == 192);
    }
}

TEST_CASE("scene3d cube and ladder lookups agree with the stored sets") {
  const auto s = generate_scene(MazeKind::Maze3D,
                                Difficulty::preset(MazeKind::Maze3D, Grade::Medium),
                                Skin::builtin("raw", MazeKind::Maze3D), 3);
  const Scene3D& g = s.scene3d();
  for (PathPoint c : g.cubes) CHECK(g.has_cube(c));
  CHECK(!g.has_cube({g.nx + 5, 0, 0}));
  for (const auto& [lo, hi] : g.ladders) {
    CHECK(g.has_ladder(lo));
    CHECK(hi == PathPoint{lo.x, lo.y, lo.z + 1});
  }
}
