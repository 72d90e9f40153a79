#include "mazebench/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <set>

namespace mazebench {

std::pair<Trajectory, Trajectory> normalize_and_resample(const Trajectory& gen,
                                                         const Trajectory& gt,
                                                         int n_points) {
  Trajectory ugen = gen.to_unit();
  Trajectory ugt = gt.to_unit();
  const double l_gt = ugt.arc_length();
  if (ugt.points.empty() || l_gt <= 0.0)
    throw DegenerateTrajectory("ground-truth trajectory has zero length");
  if (ugen.points.empty())
    throw DegenerateTrajectory("generated trajectory is empty");

  Trajectory gt_rs = ugt;
  gt_rs.points = resample_equidistant(ugt.points, n_points);

  // Interpolate gen at the gt cumulative distances, clipped to gen's length.
  std::vector<double> cum{0.0};
  for (std::size_t i = 1; i < ugen.points.size(); ++i)
    cum.push_back(cum.back() + distance(ugen.points[i - 1], ugen.points[i]));
  const double l_gen = cum.back();

  Trajectory gen_rs = ugen;
  gen_rs.points.clear();
  std::size_t seg = 0;
  for (int i = 0; i < n_points; ++i) {
    const double want = l_gt * i / (n_points - 1);
    const double s = std::min(want, l_gen);
    while (seg + 2 < cum.size() && cum[seg + 1] < s) ++seg;
    if (ugen.points.size() == 1) {
      gen_rs.points.push_back(ugen.points.front());
      continue;
    }
    const double span = cum[seg + 1] - cum[seg];
    const double t = span > 0 ? std::clamp((s - cum[seg]) / span, 0.0, 1.0) : 0.0;
    gen_rs.points.push_back(ugen.points[seg] +
                            (ugen.points[seg + 1] - ugen.points[seg]) * t);
  }
  return {gen_rs, gt_rs};
}

namespace {

// Candidate (cell, pixel-center) pairs for snapping.
std::vector<std::pair<PathPoint, Vec2>> snap_candidates(const SceneInstance& scene) {
  std::vector<std::pair<PathPoint, Vec2>> out;
  if (scene.kind == MazeKind::Irregular) {
    const GraphScene& g = scene.graph();
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      PathPoint p{static_cast<int>(i), 0, 0};
      out.emplace_back(p, scene.cell_center_px(p));
    }
  } else if (scene.kind == MazeKind::Maze3D) {
    for (const PathPoint& c : scene.scene3d().cubes)
      out.emplace_back(c, scene.cell_center_px(c));
  } else {
    const GridScene& g = scene.grid();
    for (int y = 0; y < g.height; ++y)
      for (int x = 0; x < g.width; ++x) {
        PathPoint p{x, y, 0};
        out.emplace_back(p, scene.cell_center_px(p));
      }
  }
  return out;
}

}  // namespace

namespace {

// The isometric projection maps distinct 3D cells to nearby screen points
// (e.g. (x+1,y+1,z+1) lands 12 px from (x,y,z)), so 3D snapping only
// considers cells reachable from the current one.
bool step_allowed_3d(const Scene3D& g, PathPoint from, PathPoint to) {
  const int dx = to.x - from.x, dy = to.y - from.y, dz = to.z - from.z;
  if (dz == 0) return std::abs(dx) + std::abs(dy) == 1;
  if (dx != 0 || dy != 0 || std::abs(dz) != 1) return false;
  return dz == 1 ? g.has_ladder(from) : g.has_ladder(to);
}

// Legal single-step neighbors in deterministic order, traversable cells only.
std::vector<PathPoint> legal_neighbors(const SceneInstance& scene, PathPoint p) {
  std::vector<PathPoint> out;
  switch (scene.kind) {
    case MazeKind::Irregular: {
      const auto adj = scene.graph().adjacency();
      for (int t : adj[static_cast<std::size_t>(p.x)]) out.push_back({t, 0, 0});
      break;
    }
    case MazeKind::Maze3D: {
      const Scene3D& g = scene.scene3d();
      static const PathPoint deltas[] = {{-1, 0, 0}, {1, 0, 0}, {0, -1, 0},
                                         {0, 1, 0},  {0, 0, 1}, {0, 0, -1}};
      for (PathPoint d : deltas) {
        PathPoint q{p.x + d.x, p.y + d.y, p.z + d.z};
        if (g.has_cube(q) && step_allowed_3d(g, p, q)) out.push_back(q);
      }
      break;
    }
    default: {
      const GridScene& g = scene.grid();
      static const PathPoint deltas[] = {{0, -1, 0}, {0, 1, 0}, {-1, 0, 0}, {1, 0, 0}};
      for (PathPoint d : deltas)
        if (!g.blocked(p.x + d.x, p.y + d.y)) out.push_back({p.x + d.x, p.y + d.y, 0});
      break;
    }
  }
  return out;
}

// Shortest legal cell path from a to b, at most max_steps edges; endpoints
// excluded from the result. Empty when none exists within the cap.
std::vector<PathPoint> bridge_cells(const SceneInstance& scene, PathPoint a,
                                    PathPoint b, int max_steps) {
  if (a == b) return {};
  std::map<PathPoint, PathPoint> parent;
  std::deque<std::pair<PathPoint, int>> queue{{a, 0}};
  parent[a] = a;
  while (!queue.empty()) {
    auto [cur, depth] = queue.front();
    queue.pop_front();
    if (depth >= max_steps) continue;
    for (PathPoint n : legal_neighbors(scene, cur)) {
      if (parent.count(n)) continue;
      parent[n] = cur;
      if (n == b) {
        std::vector<PathPoint> path;
        for (PathPoint c = parent[b]; !(c == a); c = parent[c]) path.push_back(c);
        std::reverse(path.begin(), path.end());
        return path;
      }
      queue.emplace_back(n, depth + 1);
    }
  }
  return {};
}

}  // namespace

StepSequence discretize(const Trajectory& traj, const SceneInstance& scene) {
  StepSequence seq;
  if (traj.points.empty()) return seq;
  const auto candidates = snap_candidates(scene);
  const double hysteresis = 0.35 * scene.cell_px();
  const bool is_3d = scene.kind == MazeKind::Maze3D;

  auto nearest = [&](Vec2 p) {
    std::size_t best = 0;
    double bd = std::numeric_limits<double>::max();
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      const double d = distance(candidates[i].second, p);
      if (d < bd) {
        bd = d;
        best = i;
      }
    }
    return std::pair<PathPoint, double>{candidates[best].first, bd};
  };

  // The iso projection maps distinct 3D cells only 12 px apart (less than the
  // hysteresis radius), so 3D snapping only considers the current cell and its
  // legal one-step neighbors; the tracker samples several times per cell move,
  // so legal motion never skips a cell between samples.
  auto snap_3d = [&](Vec2 p, PathPoint cur) {
    std::vector<PathPoint> allowed = legal_neighbors(scene, cur);
    allowed.push_back(cur);
    PathPoint best = cur;
    double bd = std::numeric_limits<double>::max();
    for (PathPoint cell : allowed) {
      const double d = distance(scene.cell_center_px(cell), p);
      if (d < bd) {
        bd = d;
        best = cell;
      }
    }
    return std::pair<PathPoint, double>{best, bd};
  };

  // Densify chords between tracker samples: on large mazes one sample period
  // can cover a full cell pitch, leaving every center outside the hysteresis
  // radius. The agent moves along the chord, so interpolated points are real.
  std::vector<Vec2> pts{traj.points.front()};
  const double max_seg = hysteresis / 2.0;
  for (std::size_t i = 1; i < traj.points.size(); ++i) {
    const Vec2 a = traj.points[i - 1], b = traj.points[i];
    const int segs =
        std::max(1, static_cast<int>(std::ceil(distance(a, b) / max_seg)));
    for (int s = 1; s <= segs; ++s)
      pts.push_back(a + (b - a) * (static_cast<double>(s) / segs));
  }

  PathPoint cur = nearest(pts.front()).first;
  seq.start = cur;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    auto [cell, dist] = is_3d ? snap_3d(pts[i], cur) : nearest(pts[i]);
    if (!(cell == cur) && dist <= hysteresis) {
      // Sparse samples can jump past cell centers; restore the skipped cells
      // when a short legal route exists. Genuine teleports stay as jumps.
      for (PathPoint mid : bridge_cells(scene, cur, cell, 4))
        seq.steps.push_back(mid);
      seq.steps.push_back(cell);
      cur = cell;
    }
  }
  return seq;
}

Trajectory step_path_trajectory(const StepSequence& steps,
                                const SceneInstance& scene) {
  Trajectory t;
  t.space = TrajectorySpace::Pixel;
  t.width = scene.render_spec.width;
  t.height = scene.render_spec.height;
  std::vector<PathPoint> cells{steps.start};
  cells.insert(cells.end(), steps.steps.begin(), steps.steps.end());

  if (scene.kind == MazeKind::Irregular) {
    const GraphScene& g = scene.graph();
    const double w = t.width, h = t.height;
    auto node_px = [&](int idx) {
      return Vec2{g.nodes[idx].pos.x * w, g.nodes[idx].pos.y * h};
    };
    t.points.push_back(node_px(cells.front().x));
    for (std::size_t i = 1; i < cells.size(); ++i) {
      const int a = cells[i - 1].x, b = cells[i].x;
      const GraphScene::Edge* edge = nullptr;
      bool forward = true;
      for (const auto& e : g.edges) {
        if (e.a == a && e.b == b) { edge = &e; forward = true; break; }
        if (e.a == b && e.b == a) { edge = &e; forward = false; break; }
      }
      if (edge) {
        const Vec2 pa = node_px(edge->a), pb = node_px(edge->b);
        const Vec2 ctrl{edge->ctrl.x * w, edge->ctrl.y * h};
        auto pts = forward ? bezier_polyline(pa, ctrl, pb)
                           : bezier_polyline(pb, ctrl, pa);
        t.points.insert(t.points.end(), pts.begin() + 1, pts.end());
      } else {
        // hop along a non-existent edge (illegal rollout): straight chord
        t.points.push_back(node_px(b));
      }
    }
    return t;
  }
  for (PathPoint c : cells) t.points.push_back(scene.cell_center_px(c));
  return t;
}

int select_gt(const Trajectory& gen, const std::vector<Solution>& gts) {
  const double l_gen = gen.to_unit().arc_length();
  int best = 0;
  double best_score = -1.0;
  for (std::size_t i = 0; i < gts.size(); ++i) {
    const double score = 1.0 / (1.0 + std::abs(l_gen - gts[i].length_units));
    // equal-length candidates can differ in the last float bits from
    // summation order; ties must resolve to the lowest index
    if (score > best_score * (1.0 + 1e-9)) {
      best_score = score;
      best = static_cast<int>(i);
    }
  }
  return best;
}

MetricReport compute_metrics(const StepSequence& gen_steps,
                             const Trajectory& gen_traj, const Solution& gt,
                             const RectI& goal_bbox, const RenderSpec& rs,
                             const Trajectory* sr_traj) {
  MetricReport rep;
  const int n = gt.n_steps;

  // longest consecutively-correct prefix; PR = prefix / n
  int prefix = 0;
  for (int j = 1; j <= n; ++j) {
    if (j - 1 >= static_cast<int>(gen_steps.steps.size())) break;
    if (!(gen_steps.steps[j - 1] == gt.cell_path[j])) break;
    prefix = j;
  }
  rep.pr = n > 0 ? static_cast<double>(prefix) / n : 1.0;
  rep.em = (static_cast<int>(gen_steps.steps.size()) == n && prefix == n) ? 1 : 0;

  const Trajectory& sr_src = sr_traj ? *sr_traj : gen_traj;
  if (!sr_src.points.empty()) {
    Vec2 end = sr_src.points.back();
    if (sr_src.space == TrajectorySpace::Unit)
      end = {end.x * rs.width, end.y * rs.height};
    rep.sr = goal_bbox.contains(end) ? 1 : 0;
  }
  // An exact step match ends on the goal cell by definition.
  if (rep.em == 1) rep.sr = 1;

  if (rep.sr == 1) {
    const double l_gen = gen_traj.to_unit().arc_length();
    rep.sd = gt.length_units > 0 ? l_gen / gt.length_units - 1.0 : 0.0;
  }
  return rep;
}

double maze_fidelity(const FrameSequence& video,
                     const std::vector<Trajectory>& moving_tracks,
                     int m_samples, double tau, double dilate_radius_px) {
  const int frames = static_cast<int>(video.frames.size());
  if (m_samples < 1 || frames <= m_samples) return 1.0;
  const Image& first = video.frames.front();

  auto center_at = [&](const Trajectory& t, int frame) {
    if (t.points.empty()) return Vec2{-1e9, -1e9};
    const double s = static_cast<double>(frame) / std::max(1, t.sample_period_frames);
    const int lo = std::min<int>(static_cast<int>(t.points.size()) - 1,
                                 static_cast<int>(s));
    const int hi = std::min<int>(static_cast<int>(t.points.size()) - 1, lo + 1);
    const double f = s - lo;
    return t.points[lo] + (t.points[hi] - t.points[lo]) * f;
  };

  double acc = 0.0;
  for (int k = 1; k <= m_samples; ++k) {
    const int i = static_cast<int>(std::lround(
        static_cast<double>(k) * (frames - 1) / m_samples));
    const Image& img = video.frames[i];

    std::vector<RectI> excluded;
    for (const Trajectory& t : moving_tracks) {
      for (int frame : {0, i}) {
        const Vec2 c = center_at(t, frame);
        const int r = static_cast<int>(std::ceil(dilate_radius_px));
        excluded.push_back({static_cast<int>(c.x) - r, static_cast<int>(c.y) - r,
                            2 * r + 1, 2 * r + 1});
      }
    }

    long long valid = 0, changed = 0;
    for (int y = 0; y < first.height(); ++y)
      for (int x = 0; x < first.width(); ++x) {
        bool skip = false;
        for (const RectI& e : excluded)
          if (e.contains({x + 0.5, y + 0.5})) {
            skip = true;
            break;
          }
        if (skip) continue;
        ++valid;
        if (std::abs(grayscale(first.get(x, y)) - grayscale(img.get(x, y))) > tau)
          ++changed;
      }
    acc += valid > 0 ? 1.0 - static_cast<double>(changed) / valid : 1.0;
  }
  return acc / m_samples;
}

Image render_overlay(const Image& first_frame, const Trajectory& gen,
                     const Trajectory& gt, const RectI& start_bbox,
                     const RectI& goal_bbox) {
  Image img = first_frame;
  auto to_px = [&](const Trajectory& t) {
    std::vector<Vec2> pts = t.points;
    if (t.space == TrajectorySpace::Unit)
      for (Vec2& p : pts) {
        p.x *= img.width();
        p.y *= img.height();
      }
    return pts;
  };
  img.draw_polyline(to_px(gt), 3.0, {0, 200, 0, 255});
  img.draw_polyline(to_px(gen), 3.0, {40, 90, 255, 255});
  img.draw_rect_outline(start_bbox, 3, {240, 220, 40, 255});
  img.draw_rect_outline(goal_bbox, 3, {230, 40, 40, 255});
  return img;
}

}  // namespace mazebench
