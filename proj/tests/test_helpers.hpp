#pragma once

// Shared scene builders for tests: small hand-constructed layouts with the
// same bbox conventions as the generator, so renderer/metric code sees
// realistic instances without running the procedural generator.

#include <cmath>
#include <optional>

#include "mazebench/generate.hpp"
#include "mazebench/scene.hpp"

namespace mazebench::testutil {

inline RectI centered_bbox(Vec2 center, int size) {
  return {static_cast<int>(std::lround(center.x - size / 2.0)),
          static_cast<int>(std::lround(center.y - size / 2.0)), size, size};
}

// Open w x h grid field (Blocked cells listed explicitly). Kind defaults to
// Trapfield, the plainest grid family.
inline SceneInstance make_grid_scene(
    int w, int h, PathPoint start, PathPoint goal,
    const std::vector<PathPoint>& blocked = {},
    MazeKind kind = MazeKind::Trapfield,
    std::optional<PathPoint> box = std::nullopt,
    RenderSpec rs = {}) {
  GridScene g;
  g.width = w;
  g.height = h;
  g.cells.assign(static_cast<std::size_t>(w) * h, 0);
  for (PathPoint b : blocked) g.set_blocked(b.x, b.y, true);
  g.start = start;
  g.goal = goal;
  g.box_start = box;

  SceneInstance s;
  s.scene_id = std::string(to_string(kind)) + "_easy_raw_000000";
  s.kind = kind;
  s.difficulty = Difficulty::preset(kind, Grade::Easy);
  s.skin = Skin::builtin("raw", kind);
  s.layout = g;
  s.render_spec = rs;
  const int size = static_cast<int>(std::lround(0.6 * s.cell_px()));
  s.start_bbox = centered_bbox(s.cell_center_px(start), size);
  s.goal_bbox = centered_bbox(s.cell_center_px(goal), size);
  if (box) s.box_bbox = centered_bbox(s.cell_center_px(*box), size);
  return s;
}

}  // namespace mazebench::testutil
