#include "mazebench/scene.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace mazebench {

using ordered_json = nlohmann::ordered_json;

double polyline_length(const std::vector<Vec2>& pts) {
  double len = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) len += distance(pts[i - 1], pts[i]);
  return len;
}

static Vec2 bezier_eval(Vec2 a, Vec2 ctrl, Vec2 b, double t) {
  const double u = 1.0 - t;
  return a * (u * u) + ctrl * (2.0 * u * t) + b * (t * t);
}

double bezier_point_distance(Vec2 a, Vec2 ctrl, Vec2 b, Vec2 p, int samples) {
  double best = distance(a, p);
  for (int i = 1; i <= samples; ++i) {
    double t = static_cast<double>(i) / samples;
    best = std::min(best, distance(bezier_eval(a, ctrl, b, t), p));
  }
  return best;
}

std::vector<Vec2> bezier_polyline(Vec2 a, Vec2 ctrl, Vec2 b, int segments) {
  std::vector<Vec2> out;
  out.reserve(segments + 1);
  for (int i = 0; i <= segments; ++i)
    out.push_back(bezier_eval(a, ctrl, b, static_cast<double>(i) / segments));
  return out;
}

const char* to_string(MazeKind k) {
  switch (k) {
    case MazeKind::Regular: return "regular";
    case MazeKind::Irregular: return "irregular";
    case MazeKind::Trapfield: return "trapfield";
    case MazeKind::Sokoban: return "sokoban";
    case MazeKind::Maze3D: return "maze3d";
  }
  return "?";
}

const char* to_string(Grade g) {
  switch (g) {
    case Grade::Easy: return "easy";
    case Grade::Medium: return "medium";
    case Grade::Hard: return "hard";
  }
  return "?";
}

MazeKind maze_kind_from_string(const std::string& s) {
  for (MazeKind k : kAllKinds)
    if (s == to_string(k)) return k;
  throw ManifestError("unknown maze kind: " + s);
}

Grade grade_from_string(const std::string& s) {
  for (Grade g : kAllGrades)
    if (s == to_string(g)) return g;
  throw ManifestError("unknown grade: " + s);
}

Difficulty Difficulty::preset(MazeKind kind, Grade grade) {
  const int gi = static_cast<int>(grade);  // 0, 1, 2
  Difficulty d;
  d.grade = grade;
  switch (kind) {
    case MazeKind::Regular:
      d.grid_dim = 5 + gi;
      d.branch_factor = gi;
      d.obstacle_count = 0;
      break;
    case MazeKind::Trapfield:
      d.grid_dim = 5 + gi;
      d.branch_factor = 0;
      d.obstacle_count = 4 + 3 * gi;
      break;
    case MazeKind::Irregular:
      d.grid_dim = 6 + 2 * gi;  // node count
      d.branch_factor = 1 + gi;
      d.obstacle_count = 0;
      break;
    case MazeKind::Sokoban:
      d.grid_dim = 5 + gi;  // playable interior, border walls added
      d.branch_factor = 0;
      d.obstacle_count = 1 + gi;
      break;
    case MazeKind::Maze3D:
      d.grid_dim = 3 + (gi > 0 ? 1 : 0);  // footprint cells per side
      d.branch_factor = gi;
      d.obstacle_count = 0;
      break;
  }
  return d;
}

static int channel_gap(Rgba a, Rgba b) {
  return std::max({std::abs(int(a.r) - int(b.r)), std::abs(int(a.g) - int(b.g)),
                   std::abs(int(a.b) - int(b.b))});
}

bool Skin::colors_distinguishable() const {
  return channel_gap(agent, goal) >= 64 && channel_gap(agent, wall) >= 64 &&
         channel_gap(goal, wall) >= 64;
}

std::vector<std::string> Skin::builtin_ids() { return {"raw", "checker", "noise"}; }

Skin Skin::builtin(const std::string& skin_id, MazeKind kind) {
  Skin s;
  s.skin_id = skin_id;
  // Prompt-faithful base colors per family.
  switch (kind) {
    case MazeKind::Regular:
      s.path = {245, 245, 245};
      s.wall = {40, 70, 200};
      s.agent = {220, 40, 40};
      s.goal = {40, 180, 70};
      s.background = {18, 20, 34};
      break;
    case MazeKind::Irregular:
      s.path = {245, 245, 245};
      s.wall = {12, 12, 12};
      s.agent = {40, 200, 80};
      s.goal = {220, 40, 40};
      s.background = {12, 12, 12};
      break;
    case MazeKind::Trapfield:
      s.path = {175, 175, 175};
      s.wall = {210, 40, 40};  // trap cells
      s.agent = {50, 90, 220};
      s.goal = {40, 190, 80};
      s.background = {60, 60, 64};
      break;
    case MazeKind::Sokoban:
      s.path = {245, 245, 245};
      s.wall = {120, 120, 126};
      s.agent = {50, 90, 220};
      s.goal = {215, 45, 45};
      s.box = {235, 200, 40};
      s.background = {32, 32, 36};
      break;
    case MazeKind::Maze3D:
      s.path = {150, 150, 156};  // platform cubes
      s.wall = {60, 90, 210};    // start platform
      s.agent = {235, 205, 50};
      s.goal = {215, 45, 45};
      s.ladder = {150, 95, 40};
      s.background = {20, 24, 42};
      break;
  }
  if (skin_id == "raw") {
    s.pattern = SkinPattern::Flat;
  } else if (skin_id == "checker") {
    s.pattern = SkinPattern::Checker;
    s.path = {228, 222, 200};
    s.background = {30, 42, 46};
    if (kind != MazeKind::Trapfield && kind != MazeKind::Irregular)
      s.wall = {36, 96, 92};
  } else if (skin_id == "noise") {
    s.pattern = SkinPattern::Noise;
    s.pattern_seed = 0x6e6f697365ULL;
    s.path = {214, 196, 160};
    s.background = {44, 36, 30};
    if (kind != MazeKind::Trapfield && kind != MazeKind::Irregular)
      s.wall = {122, 58, 34};
  } else {
    throw ManifestError("unknown builtin skin: " + skin_id);
  }
  return s;
}

std::vector<std::vector<int>> GraphScene::adjacency() const {
  std::vector<std::vector<int>> adj(nodes.size());
  for (const Edge& e : edges) {
    adj[e.a].push_back(e.b);
    adj[e.b].push_back(e.a);
  }
  for (auto& v : adj) std::sort(v.begin(), v.end());
  return adj;
}

int GraphScene::node_by_label(const std::string& label) const {
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].label == label) return static_cast<int>(i);
  return -1;
}

bool Scene3D::has_cube(PathPoint c) const {
  return std::binary_search(cubes.begin(), cubes.end(), c);
}

bool Scene3D::has_ladder(PathPoint lower) const {
  for (const auto& [lo, hi] : ladders)
    if (lo == lower) return true;
  return false;
}

std::string node_label(int index) {
  std::string out;
  int n = index + 1;  // bijective base 26
  while (n > 0) {
    int rem = (n - 1) % 26;
    out.insert(out.begin(), static_cast<char>('A' + rem));
    n = (n - 1) / 26;
  }
  return out;
}

// --- pixel geometry -------------------------------------------------------

namespace iso {
// One horizontal move spans 2 grid units, one vertical (ladder) move spans 3.
Vec2 project_raw(double gx, double gy, double gz) {
  return {(gx - gy) * kU, (gx + gy) * kU / 2.0 - gz * kV};
}

Vec2 origin(const Scene3D& s, const RenderSpec& rs) {
  double minx = 1e18, maxx = -1e18, miny = 1e18, maxy = -1e18;
  for (const PathPoint& c : s.cubes) {
    Vec2 p = project_raw(2.0 * c.x, 2.0 * c.y, 3.0 * c.z);
    minx = std::min(minx, p.x);
    maxx = std::max(maxx, p.x);
    miny = std::min(miny, p.y);
    maxy = std::max(maxy, p.y);
  }
  return {rs.width / 2.0 - (minx + maxx) / 2.0,
          rs.height / 2.0 - (miny + maxy) / 2.0};
}
}  // namespace iso

Vec2 iso_project(PathPoint cell, const Scene3D& s, const RenderSpec& rs) {
  Vec2 o = iso::origin(s, rs);
  return o + iso::project_raw(2.0 * cell.x, 2.0 * cell.y, 3.0 * cell.z);
}

double SceneInstance::cell_px() const {
  const double side = std::min(render_spec.width, render_spec.height);
  if (std::holds_alternative<GridScene>(layout)) {
    const GridScene& g = grid();
    return side / std::max(g.width, g.height);
  }
  if (std::holds_alternative<GraphScene>(layout)) return 0.09 * side;
  return 2.0 * iso::kU;  // one horizontal 3D step in screen x
}

Vec2 SceneInstance::cell_center_px(PathPoint p) const {
  if (std::holds_alternative<GridScene>(layout)) {
    const double c = cell_px();
    const GridScene& g = grid();
    const double ox = (render_spec.width - c * g.width) / 2.0;
    const double oy = (render_spec.height - c * g.height) / 2.0;
    return {ox + (p.x + 0.5) * c, oy + (p.y + 0.5) * c};
  }
  if (std::holds_alternative<GraphScene>(layout)) {
    const Vec2 pos = graph().nodes[p.x].pos;
    return {pos.x * render_spec.width, pos.y * render_spec.height};
  }
  // Agent stands on top of the cube.
  Vec2 s = iso_project(p, scene3d(), render_spec);
  return {s.x, s.y - iso::kV};
}

// --- manifest JSON --------------------------------------------------------

static ordered_json rgba_json(Rgba c) {
  return ordered_json::array({c.r, c.g, c.b, c.a});
}
static Rgba rgba_from(const ordered_json& j) {
  return {j.at(0).get<std::uint8_t>(), j.at(1).get<std::uint8_t>(),
          j.at(2).get<std::uint8_t>(), j.at(3).get<std::uint8_t>()};
}
static ordered_json rect_json(const RectI& r) {
  return ordered_json::array({r.x, r.y, r.w, r.h});
}
static RectI rect_from(const ordered_json& j) {
  return {j.at(0).get<int>(), j.at(1).get<int>(), j.at(2).get<int>(),
          j.at(3).get<int>()};
}

static const char* pattern_name(SkinPattern p) {
  switch (p) {
    case SkinPattern::Flat: return "flat";
    case SkinPattern::Checker: return "checker";
    case SkinPattern::Noise: return "noise";
  }
  return "?";
}

static SkinPattern pattern_from(const std::string& s) {
  if (s == "flat") return SkinPattern::Flat;
  if (s == "checker") return SkinPattern::Checker;
  if (s == "noise") return SkinPattern::Noise;
  throw ManifestError("unknown skin pattern: " + s);
}

static ordered_json point_json(const PathPoint& p, MazeKind kind) {
  if (kind == MazeKind::Maze3D) return ordered_json::array({p.x, p.y, p.z});
  if (kind == MazeKind::Irregular) return ordered_json::array({p.x});
  return ordered_json::array({p.x, p.y});
}

static PathPoint point_from(const ordered_json& j) {
  PathPoint p;
  p.x = j.at(0).get<int>();
  if (j.size() > 1) p.y = j.at(1).get<int>();
  if (j.size() > 2) p.z = j.at(2).get<int>();
  return p;
}

static ordered_json layout_json(const SceneInstance& s) {
  ordered_json j;
  if (std::holds_alternative<GridScene>(s.layout)) {
    const GridScene& g = s.grid();
    j["type"] = "grid";
    j["width"] = g.width;
    j["height"] = g.height;
    ordered_json rows = ordered_json::array();
    for (int y = 0; y < g.height; ++y) {
      std::string row(g.width, '.');
      for (int x = 0; x < g.width; ++x)
        if (g.blocked(x, y)) row[x] = '#';
      rows.push_back(row);
    }
    j["cells"] = rows;
    j["start"] = point_json(g.start, s.kind);
    j["goal"] = point_json(g.goal, s.kind);
    if (g.box_start) j["box_start"] = point_json(*g.box_start, s.kind);
  } else if (std::holds_alternative<GraphScene>(s.layout)) {
    const GraphScene& g = s.graph();
    j["type"] = "graph";
    ordered_json nodes = ordered_json::array();
    for (const auto& n : g.nodes) {
      ordered_json nj;
      nj["label"] = n.label;
      nj["pos"] = ordered_json::array({n.pos.x, n.pos.y});
      nodes.push_back(nj);
    }
    j["nodes"] = nodes;
    ordered_json edges = ordered_json::array();
    for (const auto& e : g.edges) {
      ordered_json ej;
      ej["a"] = e.a;
      ej["b"] = e.b;
      ej["ctrl"] = ordered_json::array({e.ctrl.x, e.ctrl.y});
      edges.push_back(ej);
    }
    j["edges"] = edges;
    j["start_node"] = g.start_node;
    j["goal_node"] = g.goal_node;
  } else {
    const Scene3D& g = s.scene3d();
    j["type"] = "grid3d";
    j["dims"] = ordered_json::array({g.nx, g.ny, g.nz});
    ordered_json cubes = ordered_json::array();
    for (const auto& c : g.cubes) cubes.push_back(point_json(c, s.kind));
    j["cubes"] = cubes;
    ordered_json ladders = ordered_json::array();
    for (const auto& [lo, hi] : g.ladders)
      ladders.push_back(ordered_json::array(
          {point_json(lo, s.kind), point_json(hi, s.kind)}));
    j["ladders"] = ladders;
    j["start"] = point_json(g.start, s.kind);
    j["goal"] = point_json(g.goal, s.kind);
  }
  return j;
}

static void layout_from(const ordered_json& j, SceneInstance& s) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "grid") {
    GridScene g;
    g.width = j.at("width").get<int>();
    g.height = j.at("height").get<int>();
    g.cells.assign(static_cast<std::size_t>(g.width) * g.height, 0);
    const auto& rows = j.at("cells");
    for (int y = 0; y < g.height; ++y) {
      const std::string row = rows.at(y).get<std::string>();
      for (int x = 0; x < g.width; ++x) g.set_blocked(x, y, row.at(x) == '#');
    }
    g.start = point_from(j.at("start"));
    g.goal = point_from(j.at("goal"));
    if (j.contains("box_start")) g.box_start = point_from(j.at("box_start"));
    s.layout = std::move(g);
  } else if (type == "graph") {
    GraphScene g;
    for (const auto& nj : j.at("nodes")) {
      GraphScene::Node n;
      n.label = nj.at("label").get<std::string>();
      n.pos = {nj.at("pos").at(0).get<double>(), nj.at("pos").at(1).get<double>()};
      g.nodes.push_back(std::move(n));
    }
    for (const auto& ej : j.at("edges")) {
      GraphScene::Edge e;
      e.a = ej.at("a").get<int>();
      e.b = ej.at("b").get<int>();
      e.ctrl = {ej.at("ctrl").at(0).get<double>(),
                ej.at("ctrl").at(1).get<double>()};
      g.edges.push_back(e);
    }
    g.start_node = j.at("start_node").get<int>();
    g.goal_node = j.at("goal_node").get<int>();
    s.layout = std::move(g);
  } else if (type == "grid3d") {
    Scene3D g;
    g.nx = j.at("dims").at(0).get<int>();
    g.ny = j.at("dims").at(1).get<int>();
    g.nz = j.at("dims").at(2).get<int>();
    for (const auto& cj : j.at("cubes")) g.cubes.push_back(point_from(cj));
    for (const auto& lj : j.at("ladders"))
      g.ladders.emplace_back(point_from(lj.at(0)), point_from(lj.at(1)));
    g.start = point_from(j.at("start"));
    g.goal = point_from(j.at("goal"));
    s.layout = std::move(g);
  } else {
    throw ManifestError("unknown layout type: " + type);
  }
}

std::string manifest_to_json(const Manifest& m) {
  const SceneInstance& s = m.scene;
  ordered_json j;
  j["scene_id"] = s.scene_id;
  j["kind"] = to_string(s.kind);
  {
    ordered_json d;
    d["grade"] = to_string(s.difficulty.grade);
    d["grid_dim"] = s.difficulty.grid_dim;
    d["branch_factor"] = s.difficulty.branch_factor;
    d["obstacle_count"] = s.difficulty.obstacle_count;
    j["difficulty"] = d;
  }
  {
    ordered_json k;
    k["skin_id"] = s.skin.skin_id;
    ordered_json pal;
    pal["path"] = rgba_json(s.skin.path);
    pal["wall"] = rgba_json(s.skin.wall);
    pal["agent"] = rgba_json(s.skin.agent);
    pal["goal"] = rgba_json(s.skin.goal);
    pal["box"] = rgba_json(s.skin.box);
    pal["ladder"] = rgba_json(s.skin.ladder);
    pal["background"] = rgba_json(s.skin.background);
    k["palette"] = pal;
    k["pattern"] = pattern_name(s.skin.pattern);
    k["pattern_seed"] = s.skin.pattern_seed;
    j["skin"] = k;
  }
  j["seed"] = s.seed;
  j["layout"] = layout_json(s);
  {
    ordered_json r;
    r["width"] = s.render_spec.width;
    r["height"] = s.render_spec.height;
    r["fps"] = s.render_spec.fps;
    r["frame_count"] = s.render_spec.frame_count;
    j["render_spec"] = r;
  }
  j["start_bbox"] = rect_json(s.start_bbox);
  j["goal_bbox"] = rect_json(s.goal_bbox);
  if (s.box_bbox) j["box_bbox"] = rect_json(*s.box_bbox);
  ordered_json sols = ordered_json::array();
  for (const Solution& sol : m.gt_solutions) {
    ordered_json sj;
    sj["actions"] = sol.actions;
    ordered_json path = ordered_json::array();
    for (const PathPoint& p : sol.cell_path) path.push_back(point_json(p, s.kind));
    sj["cell_path"] = path;
    sj["length_units"] = sol.length_units;
    sj["n_steps"] = sol.n_steps;
    sols.push_back(sj);
  }
  j["gt_solutions"] = sols;
  return j.dump(2) + "\n";
}

Manifest manifest_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ManifestError(std::string("manifest parse failed: ") + e.what());
  }
  try {
    Manifest m;
    SceneInstance& s = m.scene;
    s.scene_id = j.at("scene_id").get<std::string>();
    s.kind = maze_kind_from_string(j.at("kind").get<std::string>());
    const auto& d = j.at("difficulty");
    s.difficulty.grade = grade_from_string(d.at("grade").get<std::string>());
    s.difficulty.grid_dim = d.at("grid_dim").get<int>();
    s.difficulty.branch_factor = d.at("branch_factor").get<int>();
    s.difficulty.obstacle_count = d.at("obstacle_count").get<int>();
    const auto& k = j.at("skin");
    s.skin.skin_id = k.at("skin_id").get<std::string>();
    const auto& pal = k.at("palette");
    s.skin.path = rgba_from(pal.at("path"));
    s.skin.wall = rgba_from(pal.at("wall"));
    s.skin.agent = rgba_from(pal.at("agent"));
    s.skin.goal = rgba_from(pal.at("goal"));
    s.skin.box = rgba_from(pal.at("box"));
    s.skin.ladder = rgba_from(pal.at("ladder"));
    s.skin.background = rgba_from(pal.at("background"));
    s.skin.pattern = pattern_from(k.at("pattern").get<std::string>());
    s.skin.pattern_seed = k.at("pattern_seed").get<std::uint64_t>();
    s.seed = j.at("seed").get<std::uint64_t>();
    layout_from(j.at("layout"), s);
    const auto& r = j.at("render_spec");
    s.render_spec.width = r.at("width").get<int>();
    s.render_spec.height = r.at("height").get<int>();
    s.render_spec.fps = r.at("fps").get<int>();
    s.render_spec.frame_count = r.at("frame_count").get<int>();
    s.start_bbox = rect_from(j.at("start_bbox"));
    s.goal_bbox = rect_from(j.at("goal_bbox"));
    if (j.contains("box_bbox")) s.box_bbox = rect_from(j.at("box_bbox"));
    for (const auto& sj : j.at("gt_solutions")) {
      Solution sol;
      sol.actions = sj.at("actions").get<std::vector<std::string>>();
      for (const auto& pj : sj.at("cell_path"))
        sol.cell_path.push_back(point_from(pj));
      sol.length_units = sj.at("length_units").get<double>();
      sol.n_steps = sj.at("n_steps").get<int>();
      m.gt_solutions.push_back(std::move(sol));
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ManifestError(std::string("manifest field error: ") + e.what());
  }
}

void write_manifest(const Manifest& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ManifestError("cannot open for write: " + path);
  out << manifest_to_json(m);
}

Manifest load_manifest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ManifestError("cannot open manifest: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return manifest_from_json(ss.str());
}

}  // namespace mazebench
