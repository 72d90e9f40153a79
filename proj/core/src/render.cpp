#include "mazebench/render.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "mazebench/solver.hpp"

namespace fs = std::filesystem;

namespace mazebench {

namespace {

// --- skin patterns --------------------------------------------------------

std::uint32_t pixel_hash(int x, int y, std::uint64_t seed) {
  std::uint64_t h = seed ^ (static_cast<std::uint64_t>(x) * 0x9e3779b97f4a7c15ULL) ^
                    (static_cast<std::uint64_t>(y) * 0xc2b2ae3d27d4eb4fULL);
  h ^= h >> 33;
  h *= 0xff51afd7ed558ccdULL;
  h ^= h >> 33;
  return static_cast<std::uint32_t>(h);
}

Rgba scale_color(Rgba c, double f) {
  auto s = [f](std::uint8_t v) {
    return static_cast<std::uint8_t>(std::clamp(v * f, 0.0, 255.0));
  };
  return {s(c.r), s(c.g), s(c.b), c.a};
}

Rgba pattern_color(const Skin& skin, Rgba base, int x, int y) {
  switch (skin.pattern) {
    case SkinPattern::Flat: return base;
    case SkinPattern::Checker:
      return ((x / 16 + y / 16) % 2) ? base : scale_color(base, 0.82);
    case SkinPattern::Noise: {
      const double f = 0.88 + 0.24 * (pixel_hash(x, y, skin.pattern_seed) % 256) / 255.0;
      return scale_color(base, f);
    }
  }
  return base;
}

void fill_rect_patterned(Image& img, const RectI& r, Rgba base, const Skin& skin) {
  const int x0 = std::max(0, r.x), y0 = std::max(0, r.y);
  const int x1 = std::min(img.width(), r.x + r.w);
  const int y1 = std::min(img.height(), r.y + r.h);
  for (int y = y0; y < y1; ++y)
    for (int x = x0; x < x1; ++x) img.set(x, y, pattern_color(skin, base, x, y));
}

void fill_background(Image& img, const Skin& skin) {
  fill_rect_patterned(img, {0, 0, img.width(), img.height()}, skin.background, skin);
}

// --- 5x7 bitmap font (A-Z), column-major, LSB = top row --------------------

constexpr std::uint8_t kFont5x7[26][5] = {
    {0x7C, 0x12, 0x11, 0x12, 0x7C}, {0x7F, 0x49, 0x49, 0x49, 0x36},
    {0x3E, 0x41, 0x41, 0x41, 0x22}, {0x7F, 0x41, 0x41, 0x22, 0x1C},
    {0x7F, 0x49, 0x49, 0x49, 0x41}, {0x7F, 0x09, 0x09, 0x09, 0x01},
    {0x3E, 0x41, 0x49, 0x49, 0x7A}, {0x7F, 0x08, 0x08, 0x08, 0x7F},
    {0x00, 0x41, 0x7F, 0x41, 0x00}, {0x20, 0x40, 0x41, 0x3F, 0x01},
    {0x7F, 0x08, 0x14, 0x22, 0x41}, {0x7F, 0x40, 0x40, 0x40, 0x40},
    {0x7F, 0x02, 0x0C, 0x02, 0x7F}, {0x7F, 0x04, 0x08, 0x10, 0x7F},
    {0x3E, 0x41, 0x41, 0x41, 0x3E}, {0x7F, 0x09, 0x09, 0x09, 0x06},
    {0x3E, 0x41, 0x51, 0x21, 0x5E}, {0x7F, 0x09, 0x19, 0x29, 0x46},
    {0x46, 0x49, 0x49, 0x49, 0x31}, {0x01, 0x01, 0x7F, 0x01, 0x01},
    {0x3F, 0x40, 0x40, 0x40, 0x3F}, {0x1F, 0x20, 0x40, 0x20, 0x1F},
    {0x3F, 0x40, 0x38, 0x40, 0x3F}, {0x63, 0x14, 0x08, 0x14, 0x63},
    {0x07, 0x08, 0x70, 0x08, 0x07}, {0x61, 0x51, 0x49, 0x45, 0x43}};

// --- grid geometry --------------------------------------------------------

struct GridGeom {
  double cell = 0.0;
  double ox = 0.0, oy = 0.0;
};

GridGeom grid_geom(const SceneInstance& s) {
  const GridScene& g = s.grid();
  GridGeom geo;
  geo.cell = s.cell_px();
  geo.ox = (s.render_spec.width - geo.cell * g.width) / 2.0;
  geo.oy = (s.render_spec.height - geo.cell * g.height) / 2.0;
  return geo;
}

RectI cell_rect(const GridGeom& geo, int x, int y) {
  const int x0 = static_cast<int>(std::lround(geo.ox + x * geo.cell));
  const int y0 = static_cast<int>(std::lround(geo.oy + y * geo.cell));
  const int x1 = static_cast<int>(std::lround(geo.ox + (x + 1) * geo.cell));
  const int y1 = static_cast<int>(std::lround(geo.oy + (y + 1) * geo.cell));
  return {x0, y0, x1 - x0, y1 - y0};
}

void render_grid_cells(Image& img, const SceneInstance& s) {
  const GridScene& g = s.grid();
  const GridGeom geo = grid_geom(s);
  for (int y = 0; y < g.height; ++y)
    for (int x = 0; x < g.width; ++x) {
      const RectI r = cell_rect(geo, x, y);
      const Rgba base = g.blocked(x, y) ? s.skin.wall : s.skin.path;
      fill_rect_patterned(img, r, base, s.skin);
      if (s.kind == MazeKind::Trapfield && g.blocked(x, y)) {
        // X marker on trap cells
        const Rgba dark = scale_color(s.skin.wall, 0.55);
        Vec2 a{r.x + 0.2 * r.w, r.y + 0.2 * r.h};
        Vec2 b{r.x + 0.8 * r.w, r.y + 0.8 * r.h};
        Vec2 c{r.x + 0.8 * r.w, r.y + 0.2 * r.h};
        Vec2 d{r.x + 0.2 * r.w, r.y + 0.8 * r.h};
        img.draw_line(a, b, std::max(2.0, 0.08 * r.w), dark);
        img.draw_line(c, d, std::max(2.0, 0.08 * r.w), dark);
      }
    }
}

Image render_background_grid(const SceneInstance& s) {
  Image img(s.render_spec.width, s.render_spec.height);
  fill_background(img, s.skin);
  render_grid_cells(img, s);
  const double c = s.cell_px();
  if (s.kind == MazeKind::Trapfield) {
    img.fill_circle(s.goal_bbox.center(), 0.35 * c, s.skin.goal);
  } else {
    img.fill_rect(s.goal_bbox, s.skin.goal);
  }
  return img;
}

Image render_background_graph(const SceneInstance& s) {
  const GraphScene& g = s.graph();
  Image img(s.render_spec.width, s.render_spec.height);
  fill_background(img, s.skin);
  const double c = s.cell_px();
  const double w = s.render_spec.width, h = s.render_spec.height;
  auto node_px = [&](int i) {
    return Vec2{g.nodes[i].pos.x * w, g.nodes[i].pos.y * h};
  };
  for (const auto& e : g.edges) {
    auto pts = bezier_polyline(node_px(e.a), Vec2{e.ctrl.x * w, e.ctrl.y * h},
                               node_px(e.b));
    img.draw_polyline(pts, 0.30 * c, s.skin.path);
  }
  for (std::size_t i = 0; i < g.nodes.size(); ++i)
    img.fill_circle(node_px(static_cast<int>(i)), 0.26 * c, s.skin.path);
  img.fill_circle(node_px(g.goal_node), 0.30 * c, s.skin.goal);
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const Rgba ink = static_cast<int>(i) == g.goal_node
                         ? Rgba{255, 255, 255, 255}
                         : s.skin.wall;
    draw_text(img, g.nodes[i].label, node_px(static_cast<int>(i)), 2, ink);
  }
  return img;
}

void draw_cube(Image& img, Vec2 top, Rgba base, const Skin& skin) {
  const double u = iso::kU, v = iso::kV;
  const std::vector<Vec2> top_face = {
      {top.x, top.y - u}, {top.x + 2 * u, top.y}, {top.x, top.y + u},
      {top.x - 2 * u, top.y}};
  const std::vector<Vec2> left_face = {
      {top.x - 2 * u, top.y}, {top.x, top.y + u}, {top.x, top.y + u + 3 * v},
      {top.x - 2 * u, top.y + 3 * v}};
  const std::vector<Vec2> right_face = {
      {top.x, top.y + u}, {top.x + 2 * u, top.y}, {top.x + 2 * u, top.y + 3 * v},
      {top.x, top.y + u + 3 * v}};
  img.fill_polygon(left_face, pattern_color(skin, scale_color(base, 0.78),
                                            static_cast<int>(top.x), 0));
  img.fill_polygon(right_face, pattern_color(skin, scale_color(base, 0.62),
                                             static_cast<int>(top.x), 1));
  img.fill_polygon(top_face, pattern_color(skin, base, static_cast<int>(top.x),
                                           static_cast<int>(top.y)));
}

}  // namespace

Image composite_3d(const Scene3D& scene, const Skin& skin, const RenderSpec& rs) {
  Image img(rs.width, rs.height);
  fill_background(img, skin);

  std::vector<PathPoint> order = scene.cubes;
  // painter's order: lower layers first, back to front within a layer
  std::sort(order.begin(), order.end(), [](const PathPoint& a, const PathPoint& b) {
    if (a.z != b.z) return a.z < b.z;
    if (a.x + a.y != b.x + b.y) return a.x + a.y < b.x + b.y;
    return a.x < b.x;
  });
  for (const PathPoint& c : order) {
    Rgba base = skin.path;
    if (c == scene.start) base = skin.wall;   // start platform
    if (c == scene.goal) base = skin.goal;
    draw_cube(img, iso_project(c, scene, rs), base, skin);
  }
  for (const auto& [lo, hi] : scene.ladders) {
    const Vec2 top_hi = iso_project(hi, scene, rs);
    // rails on the right face of the upper cube
    const Vec2 edge{top_hi.x + iso::kU, top_hi.y + iso::kU / 2.0};
    const double drop = 3.0 * iso::kV;
    img.draw_line({edge.x - 6, edge.y}, {edge.x - 6, edge.y + drop}, 3.0, skin.ladder);
    img.draw_line({edge.x + 6, edge.y}, {edge.x + 6, edge.y + drop}, 3.0, skin.ladder);
    for (double yy = edge.y + 6; yy < edge.y + drop; yy += 10)
      img.draw_line({edge.x - 6, yy}, {edge.x + 6, yy}, 2.0, skin.ladder);
  }
  return img;
}

Image render_background(const SceneInstance& scene) {
  switch (scene.kind) {
    case MazeKind::Irregular: return render_background_graph(scene);
    case MazeKind::Maze3D:
      return composite_3d(scene.scene3d(), scene.skin, scene.render_spec);
    default: return render_background_grid(scene);
  }
}

Image render_static(const SceneInstance& scene) {
  Image img = render_background(scene);
  const double r = 0.3 * scene.cell_px();
  if (scene.kind == MazeKind::Sokoban && scene.box_bbox) {
    const double side = 0.7 * scene.cell_px();
    Vec2 c = scene.box_bbox->center();
    img.fill_rect({static_cast<int>(std::lround(c.x - side / 2)),
                   static_cast<int>(std::lround(c.y - side / 2)),
                   static_cast<int>(std::lround(side)),
                   static_cast<int>(std::lround(side))},
                  scene.skin.box);
  }
  img.fill_circle(scene.start_bbox.center(), r, scene.skin.agent);
  return img;
}

std::vector<Vec2> resample_equidistant(const std::vector<Vec2>& pts, int n) {
  std::vector<Vec2> out;
  out.reserve(n);
  if (pts.empty()) return out;
  std::vector<double> cum{0.0};
  for (std::size_t i = 1; i < pts.size(); ++i)
    cum.push_back(cum.back() + distance(pts[i - 1], pts[i]));
  const double total = cum.back();
  if (total <= 0.0) {
    out.assign(n, pts.front());
    return out;
  }
  std::size_t seg = 0;
  for (int i = 0; i < n; ++i) {
    const double s = total * i / (n - 1);
    while (seg + 1 < cum.size() - 1 && cum[seg + 1] < s) ++seg;
    const double span = cum[seg + 1] - cum[seg];
    const double t = span > 0 ? (s - cum[seg]) / span : 0.0;
    out.push_back(pts[seg] + (pts[seg + 1] - pts[seg]) * t);
  }
  return out;
}

RenderPlan make_render_plan(const SceneInstance& scene, const Solution& sol) {
  RenderPlan plan;
  plan.agent_radius_px = 0.3 * scene.cell_px();
  const int frames = scene.render_spec.frame_count;
  std::vector<Vec2> path = solution_path_px(scene, sol);
  plan.waypoints_px = resample_equidistant(path, frames);

  if (scene.kind == MazeKind::Sokoban) {
    std::vector<Vec2> box = sokoban_box_path_px(scene, sol);
    plan.box_waypoints_px.reserve(frames);
    const int n = sol.n_steps;
    for (int f = 0; f < frames; ++f) {
      if (n == 0) {
        plan.box_waypoints_px.push_back(box.front());
        continue;
      }
      // agent segments are uniform-length cell moves, so time maps linearly
      // onto action index
      const double s = static_cast<double>(f) / (frames - 1) * n;
      const int k = std::min(n - 1, static_cast<int>(s));
      const double t = s - k;
      plan.box_waypoints_px.push_back(box[k] + (box[k + 1] - box[k]) * t);
    }
  }
  return plan;
}

FrameSequence render_solution_video(const SceneInstance& scene, const Solution& sol) {
  const RenderPlan plan = make_render_plan(scene, sol);
  const Image bg = render_background(scene);
  const double w = scene.render_spec.width, h = scene.render_spec.height;
  for (const Vec2& p : plan.waypoints_px)
    if (p.x < 0 || p.y < 0 || p.x >= w || p.y >= h)
      throw PathOutOfBounds("agent path leaves the frame: " + scene.scene_id);

  FrameSequence seq;
  seq.fps = scene.render_spec.fps;
  seq.frames.reserve(plan.waypoints_px.size());
  const double side = 0.7 * scene.cell_px();
  for (std::size_t f = 0; f < plan.waypoints_px.size(); ++f) {
    Image img = bg;
    if (scene.kind == MazeKind::Sokoban) {
      const Vec2 b = plan.box_waypoints_px[f];
      img.fill_rect({static_cast<int>(std::lround(b.x - side / 2)),
                     static_cast<int>(std::lround(b.y - side / 2)),
                     static_cast<int>(std::lround(side)),
                     static_cast<int>(std::lround(side))},
                    scene.skin.box);
    }
    img.fill_circle(plan.waypoints_px[f], plan.agent_radius_px, scene.skin.agent);
    seq.frames.push_back(std::move(img));
  }
  return seq;
}

void write_frame_dir(const FrameSequence& seq, const std::string& scene_id,
                     const std::string& dir) {
  fs::create_directories(dir);
  char name[32];
  for (std::size_t i = 0; i < seq.frames.size(); ++i) {
    std::snprintf(name, sizeof(name), "frame_%05zu.png", i);
    write_png(seq.frames[i], (fs::path(dir) / name).string());
  }
  nlohmann::ordered_json j;
  j["fps"] = seq.fps;
  j["frame_count"] = seq.frames.size();
  j["width"] = seq.frames.empty() ? 0 : seq.frames.front().width();
  j["height"] = seq.frames.empty() ? 0 : seq.frames.front().height();
  j["scene_id"] = scene_id;
  std::ofstream out(fs::path(dir) / "video.json");
  out << j.dump(2) << "\n";
}

LoadedVideo load_frame_dir(const std::string& dir) {
  LoadedVideo v;
  const fs::path meta = fs::path(dir) / "video.json";
  if (fs::exists(meta)) {
    std::ifstream in(meta);
    nlohmann::json j = nlohmann::json::parse(in);
    v.seq.fps = j.value("fps", 24);
    v.scene_id = j.value("scene_id", "");
  }
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ".png") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto& f : files) v.seq.frames.push_back(read_png(f.string()));
  if (v.seq.frames.empty())
    throw ImageError("no frames in directory: " + dir);
  return v;
}

void draw_text(Image& img, const std::string& text, Vec2 center, int scale, Rgba c) {
  const int gw = 5 * scale, gh = 7 * scale, gap = scale;
  const int total_w = static_cast<int>(text.size()) * (gw + gap) - gap;
  int x0 = static_cast<int>(std::lround(center.x - total_w / 2.0));
  const int y0 = static_cast<int>(std::lround(center.y - gh / 2.0));
  for (char ch : text) {
    if (ch < 'A' || ch > 'Z') {
      x0 += gw + gap;
      continue;
    }
    const std::uint8_t* glyph = kFont5x7[ch - 'A'];
    for (int col = 0; col < 5; ++col)
      for (int row = 0; row < 7; ++row)
        if (glyph[col] & (1 << row))
          for (int sy = 0; sy < scale; ++sy)
            for (int sx = 0; sx < scale; ++sx)
              img.set(x0 + col * scale + sx, y0 + row * scale + sy, c);
    x0 += gw + gap;
  }
}

}  // namespace mazebench
