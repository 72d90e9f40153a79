#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "mazebench/geometry.hpp"

namespace mazebench {

enum class MazeKind { Regular, Irregular, Trapfield, Sokoban, Maze3D };
enum class Grade { Easy, Medium, Hard };

const char* to_string(MazeKind k);
const char* to_string(Grade g);
MazeKind maze_kind_from_string(const std::string& s);
Grade grade_from_string(const std::string& s);

inline constexpr std::array<MazeKind, 5> kAllKinds = {
    MazeKind::Regular, MazeKind::Irregular, MazeKind::Trapfield,
    MazeKind::Sokoban, MazeKind::Maze3D};
inline constexpr std::array<Grade, 3> kAllGrades = {Grade::Easy, Grade::Medium,
                                                   Grade::Hard};

struct Difficulty {
  Grade grade = Grade::Easy;
  int grid_dim = 5;        // cells per side; meaning depends on kind
  int branch_factor = 0;   // extra loops / chord edges
  int obstacle_count = 0;  // traps / interior walls

  // Default per-kind parameterization of the three grades.
  static Difficulty preset(MazeKind kind, Grade grade);
};

struct Rgba {
  std::uint8_t r = 0, g = 0, b = 0, a = 255;
  bool operator==(const Rgba&) const = default;
};

enum class SkinPattern { Flat, Checker, Noise };

struct Skin {
  std::string skin_id;
  Rgba path, wall, agent, goal, box, ladder, background;
  SkinPattern pattern = SkinPattern::Flat;
  std::uint64_t pattern_seed = 0;

  // agent/goal/wall must be pairwise separable by >= 64 in some channel,
  // otherwise the color tracker cannot tell them apart.
  bool colors_distinguishable() const;

  // "raw", "checker", "noise" — prompt-faithful base palette per kind.
  static Skin builtin(const std::string& skin_id, MazeKind kind);
  static std::vector<std::string> builtin_ids();
};

// Planar cell scene (Regular, Trapfield, Sokoban). For Regular the lattice
// stores walls as Blocked cells, so a logical N x N maze occupies
// (2N+1) x (2N+1) cells with a Blocked border.
struct GridScene {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> cells;  // 0 = Open, 1 = Blocked
  PathPoint start, goal;
  std::optional<PathPoint> box_start;  // Sokoban only

  bool in_bounds(int x, int y) const {
    return x >= 0 && x < width && y >= 0 && y < height;
  }
  bool blocked(int x, int y) const {
    return !in_bounds(x, y) || cells[static_cast<std::size_t>(y) * width + x] != 0;
  }
  void set_blocked(int x, int y, bool b) {
    cells[static_cast<std::size_t>(y) * width + x] = b ? 1 : 0;
  }
};

// Curve-based node/edge scene (Irregular). Positions live in the unit square.
struct GraphScene {
  struct Node {
    std::string label;
    Vec2 pos;
  };
  struct Edge {
    int a = 0;
    int b = 0;
    Vec2 ctrl;  // quadratic Bezier control point
  };
  std::vector<Node> nodes;
  std::vector<Edge> edges;
  int start_node = 0;
  int goal_node = 0;

  std::vector<std::vector<int>> adjacency() const;
  int node_by_label(const std::string& label) const;  // -1 if absent
};

// Stacked-platform scene (Maze3D). Logical cells; one horizontal step spans
// 2 render grid units, one vertical step spans 3 (a ladder).
struct Scene3D {
  int nx = 0, ny = 0, nz = 0;
  std::vector<PathPoint> cubes;                          // occupied platforms, sorted
  std::vector<std::pair<PathPoint, PathPoint>> ladders;  // lower -> upper cell
  PathPoint start, goal;

  bool has_cube(PathPoint c) const;
  bool has_ladder(PathPoint lower) const;
};

struct RenderSpec {
  int width = 512;
  int height = 512;
  int fps = 24;
  int frame_count = 192;
  bool operator==(const RenderSpec&) const = default;
};

// Base-26 bijective label: 0 -> "A", 25 -> "Z", 26 -> "AA", ...
std::string node_label(int index);

// Fixed isometric projection: cell (x,y,z) -> screen, centered on the scene's
// cube extent. Returns the top-face center of the cube.
Vec2 iso_project(PathPoint cell, const Scene3D& s, const RenderSpec& rs);

namespace iso {
inline constexpr double kU = 24.0;  // px per horizontal grid unit
inline constexpr double kV = 20.0;  // px per vertical grid unit
}  // namespace iso

struct SceneInstance {
  std::string scene_id;
  MazeKind kind = MazeKind::Regular;
  Difficulty difficulty;
  Skin skin;
  std::uint64_t seed = 0;
  std::variant<GridScene, GraphScene, Scene3D> layout;
  RenderSpec render_spec;
  RectI start_bbox, goal_bbox;
  std::optional<RectI> box_bbox;  // Sokoban box, tracked for SR

  const GridScene& grid() const { return std::get<GridScene>(layout); }
  const GraphScene& graph() const { return std::get<GraphScene>(layout); }
  const Scene3D& scene3d() const { return std::get<Scene3D>(layout); }

  // Side length in pixels of one layout cell at the current render_spec.
  double cell_px() const;
  // Pixel center of a layout coordinate (grid cell, node, or 3D cell).
  Vec2 cell_center_px(PathPoint p) const;
};

struct Solution {
  std::vector<std::string> actions;
  std::vector<PathPoint> cell_path;  // includes the start position
  double length_units = 0.0;         // arc length in unit-square space
  int n_steps = 0;

  bool operator==(const Solution&) const = default;
};

struct Manifest {
  SceneInstance scene;
  std::vector<Solution> gt_solutions;
};

// JSON manifest with stable key order; serialize(parse(x)) is byte-identical.
std::string manifest_to_json(const Manifest& m);
Manifest manifest_from_json(const std::string& text);
void write_manifest(const Manifest& m, const std::string& path);
Manifest load_manifest(const std::string& path);

class ManifestError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace mazebench
