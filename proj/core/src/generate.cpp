#include "mazebench/generate.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <optional>
#include <set>

#include "mazebench/rng.hpp"
#include "mazebench/solver.hpp"

namespace mazebench {

namespace {

// --- regular maze ---------------------------------------------------------

// Walls-as-cells lattice: a logical n x n maze occupies (2n+1) x (2n+1)
// cells. Depth-first backtracker, then branch_factor wall openings.
GridScene build_regular(Rng& rng, const Difficulty& d) {
  const int n = d.grid_dim;
  const int w = 2 * n + 1;
  GridScene g;
  g.width = g.height = w;
  g.cells.assign(static_cast<std::size_t>(w) * w, 1);

  auto cell = [](int i, int j) { return PathPoint{2 * i + 1, 2 * j + 1, 0}; };

  std::vector<std::uint8_t> visited(static_cast<std::size_t>(n) * n, 0);
  std::vector<std::pair<int, int>> stack;
  int ci = rng.next_int(0, n - 1), cj = rng.next_int(0, n - 1);
  visited[cj * n + ci] = 1;
  g.set_blocked(cell(ci, cj).x, cell(ci, cj).y, false);
  stack.emplace_back(ci, cj);

  const int dx[4] = {0, 0, -1, 1};
  const int dy[4] = {-1, 1, 0, 0};
  while (!stack.empty()) {
    auto [i, j] = stack.back();
    std::vector<int> dirs = {0, 1, 2, 3};
    rng.shuffle(dirs);
    bool advanced = false;
    for (int dir : dirs) {
      int ni = i + dx[dir], nj = j + dy[dir];
      if (ni < 0 || nj < 0 || ni >= n || nj >= n || visited[nj * n + ni]) continue;
      visited[nj * n + ni] = 1;
      g.set_blocked(cell(ni, nj).x, cell(ni, nj).y, false);
      g.set_blocked(cell(i, j).x + dx[dir], cell(i, j).y + dy[dir], false);
      stack.emplace_back(ni, nj);
      advanced = true;
      break;
    }
    if (!advanced) stack.pop_back();
  }

  // Open extra interior walls to create loops.
  std::vector<std::pair<int, int>> candidates;
  for (int y = 1; y < w - 1; ++y)
    for (int x = 1 + (y % 2); x < w - 1; x += 2) {
      if (!g.blocked(x, y)) continue;
      const bool horiz = !g.blocked(x - 1, y) && !g.blocked(x + 1, y);
      const bool vert = !g.blocked(x, y - 1) && !g.blocked(x, y + 1);
      if (horiz || vert) candidates.emplace_back(x, y);
    }
  rng.shuffle(candidates);
  for (int k = 0; k < d.branch_factor && k < static_cast<int>(candidates.size()); ++k)
    g.set_blocked(candidates[k].first, candidates[k].second, false);

  // Start anywhere; goal at the farthest open cell so corridors stay long.
  int si = rng.next_int(0, n - 1), sj = rng.next_int(0, n - 1);
  g.start = cell(si, sj);
  std::vector<int> dist(static_cast<std::size_t>(w) * w, -1);
  std::deque<PathPoint> q{g.start};
  dist[g.start.y * w + g.start.x] = 0;
  PathPoint far = g.start;
  while (!q.empty()) {
    PathPoint p = q.front();
    q.pop_front();
    if (dist[p.y * w + p.x] > dist[far.y * w + far.x]) far = p;
    for (int dir = 0; dir < 4; ++dir) {
      int nx2 = p.x + dx[dir], ny2 = p.y + dy[dir];
      if (g.blocked(nx2, ny2) || dist[ny2 * w + nx2] >= 0) continue;
      dist[ny2 * w + nx2] = dist[p.y * w + p.x] + 1;
      q.push_back({nx2, ny2, 0});
    }
  }
  g.goal = far;
  return g;
}

// --- trapfield ------------------------------------------------------------

bool grid_reachable(const GridScene& g) {
  std::vector<std::uint8_t> seen(g.cells.size(), 0);
  std::deque<PathPoint> q{g.start};
  seen[g.start.y * g.width + g.start.x] = 1;
  while (!q.empty()) {
    PathPoint p = q.front();
    q.pop_front();
    if (p == g.goal) return true;
    for (const auto& [name, d] : grid_moves()) {
      int nx = p.x + d.x, ny = p.y + d.y;
      if (g.blocked(nx, ny) || seen[ny * g.width + nx]) continue;
      seen[ny * g.width + nx] = 1;
      q.push_back({nx, ny, 0});
    }
  }
  return false;
}

std::optional<GridScene> build_trapfield(Rng& rng, const Difficulty& d) {
  const int w = d.grid_dim;
  GridScene g;
  g.width = g.height = w;
  g.cells.assign(static_cast<std::size_t>(w) * w, 0);

  g.start = {rng.next_int(0, w - 1), rng.next_int(0, w - 1), 0};
  do {
    g.goal = {rng.next_int(0, w - 1), rng.next_int(0, w - 1), 0};
  } while (std::abs(g.goal.x - g.start.x) + std::abs(g.goal.y - g.start.y) <
           w - 1);

  std::vector<PathPoint> open_cells;
  for (int y = 0; y < w; ++y)
    for (int x = 0; x < w; ++x) {
      PathPoint p{x, y, 0};
      if (p == g.start || p == g.goal) continue;
      open_cells.push_back(p);
    }
  rng.shuffle(open_cells);
  if (static_cast<int>(open_cells.size()) < d.obstacle_count) return std::nullopt;
  for (int k = 0; k < d.obstacle_count; ++k)
    g.set_blocked(open_cells[k].x, open_cells[k].y, true);
  if (!grid_reachable(g)) return std::nullopt;
  return g;
}

// --- irregular maze -------------------------------------------------------

constexpr double kRMin = 0.06;       // clearance radius in unit-square space
constexpr double kNodeMargin = 0.12; // keep nodes away from the frame edge

bool edge_clear(const GraphScene& g, int a, int b, Vec2 ctrl) {
  Vec2 pa = g.nodes[a].pos, pb = g.nodes[b].pos;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    if (static_cast<int>(i) == a || static_cast<int>(i) == b) continue;
    if (bezier_point_distance(pa, ctrl, pb, g.nodes[i].pos) < kRMin) return false;
  }
  return true;
}

std::optional<Vec2> pick_ctrl(Rng& rng, const GraphScene& g, int a, int b) {
  Vec2 pa = g.nodes[a].pos, pb = g.nodes[b].pos;
  Vec2 mid = (pa + pb) * 0.5;
  Vec2 dir = pb - pa;
  const double len = dir.norm();
  Vec2 perp{-dir.y / len, dir.x / len};
  for (int t = 0; t < 8; ++t) {
    double off = (rng.next_double() * 2.0 - 1.0) * 0.15 * len;
    Vec2 ctrl = mid + perp * off;
    if (edge_clear(g, a, b, ctrl)) return ctrl;
  }
  return std::nullopt;
}

std::optional<GraphScene> build_irregular(Rng& rng, const Difficulty& d) {
  const int n = d.grid_dim;
  GraphScene g;

  // Poisson-disk dart throwing, min pairwise distance 2 * r_min.
  for (int i = 0; i < n; ++i) {
    bool placed = false;
    for (int t = 0; t < 200 && !placed; ++t) {
      Vec2 p{kNodeMargin + rng.next_double() * (1.0 - 2.0 * kNodeMargin),
             kNodeMargin + rng.next_double() * (1.0 - 2.0 * kNodeMargin)};
      bool ok = true;
      for (const auto& nd : g.nodes)
        if (distance(nd.pos, p) < 2.0 * kRMin) { ok = false; break; }
      if (ok) {
        g.nodes.push_back({node_label(i), p});
        placed = true;
      }
    }
    if (!placed) return std::nullopt;
  }

  // Spanning tree: join each node to the nearest earlier node that admits a
  // clear curve.
  for (int i = 1; i < n; ++i) {
    std::vector<int> order;
    for (int j = 0; j < i; ++j) order.push_back(j);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return distance(g.nodes[a].pos, g.nodes[i].pos) <
             distance(g.nodes[b].pos, g.nodes[i].pos);
    });
    bool connected = false;
    for (int j : order) {
      if (auto ctrl = pick_ctrl(rng, g, j, i)) {
        g.edges.push_back({j, i, *ctrl});
        connected = true;
        break;
      }
    }
    if (!connected) return std::nullopt;
  }

  // Chords for loops.
  auto adjacent = [&](int a, int b) {
    for (const auto& e : g.edges)
      if ((e.a == a && e.b == b) || (e.a == b && e.b == a)) return true;
    return false;
  };
  int added = 0;
  for (int t = 0; t < 30 && added < d.branch_factor; ++t) {
    int a = rng.next_int(0, n - 1), b = rng.next_int(0, n - 1);
    if (a == b || adjacent(a, b)) continue;
    if (a > b) std::swap(a, b);
    if (distance(g.nodes[a].pos, g.nodes[b].pos) > 0.5) continue;
    if (auto ctrl = pick_ctrl(rng, g, a, b)) {
      g.edges.push_back({a, b, *ctrl});
      ++added;
    }
  }

  // Start/goal: the hop-diameter endpoints (lowest indices on ties).
  auto adj = g.adjacency();
  auto bfs_far = [&](int src) {
    std::vector<int> dist(n, -1);
    std::deque<int> q{src};
    dist[src] = 0;
    while (!q.empty()) {
      int u = q.front();
      q.pop_front();
      for (int v : adj[u])
        if (dist[v] < 0) {
          dist[v] = dist[u] + 1;
          q.push_back(v);
        }
    }
    return dist;
  };
  int best_a = 0, best_b = 1, best_d = -1;
  for (int a = 0; a < n; ++a) {
    auto dist = bfs_far(a);
    for (int b = 0; b < n; ++b)
      if (dist[b] > best_d) {
        best_d = dist[b];
        best_a = a;
        best_b = b;
      }
  }
  if (best_d < 2) return std::nullopt;  // degenerate layout
  g.start_node = best_a;
  g.goal_node = best_b;
  return g;
}

// --- sokoban --------------------------------------------------------------

std::optional<GridScene> build_sokoban(Rng& rng, const Difficulty& d) {
  const int w = d.grid_dim + 2;  // playable interior plus border walls
  GridScene g;
  g.width = g.height = w;
  g.cells.assign(static_cast<std::size_t>(w) * w, 0);
  for (int x = 0; x < w; ++x) {
    g.set_blocked(x, 0, true);
    g.set_blocked(x, w - 1, true);
  }
  for (int y = 0; y < w; ++y) {
    g.set_blocked(0, y, true);
    g.set_blocked(w - 1, y, true);
  }
  std::vector<PathPoint> interior;
  for (int y = 1; y < w - 1; ++y)
    for (int x = 1; x < w - 1; ++x) interior.push_back({x, y, 0});
  rng.shuffle(interior);
  for (int k = 0; k < d.obstacle_count && k < static_cast<int>(interior.size()); ++k)
    g.set_blocked(interior[k].x, interior[k].y, true);

  // Reverse play from the solved position: pulls guarantee solvability.
  std::vector<PathPoint> open_cells;
  for (int y = 1; y < w - 1; ++y)
    for (int x = 1; x < w - 1; ++x)
      if (!g.blocked(x, y)) open_cells.push_back({x, y, 0});
  if (open_cells.size() < 4) return std::nullopt;

  PathPoint goal = open_cells[rng.next_below(open_cells.size())];
  PathPoint box = goal;
  std::vector<PathPoint> agent_starts;
  for (const auto& [name, dd] : grid_moves()) {
    PathPoint a{box.x + dd.x, box.y + dd.y, 0};
    if (!g.blocked(a.x, a.y)) agent_starts.push_back(a);
  }
  if (agent_starts.empty()) return std::nullopt;
  PathPoint agent = agent_starts[rng.next_below(agent_starts.size())];

  const int target_pulls = 3 + d.grid_dim / 2 + d.obstacle_count;
  int pulls = 0;
  for (int step = 0; step < 6 * target_pulls && pulls < target_pulls; ++step) {
    const bool want_pull = rng.next_bool(0.7);
    if (want_pull) {
      // A pull needs the agent directly beside the box with free space behind.
      std::vector<PathPoint> dirs;
      for (const auto& [name, dd] : grid_moves()) {
        PathPoint side{box.x + dd.x, box.y + dd.y, 0};
        PathPoint behind{box.x + 2 * dd.x, box.y + 2 * dd.y, 0};
        if (agent == side && !g.blocked(behind.x, behind.y))
          dirs.push_back({dd.x, dd.y, 0});
      }
      if (!dirs.empty()) {
        PathPoint dd = dirs[rng.next_below(dirs.size())];
        box = agent;
        agent = {agent.x + dd.x, agent.y + dd.y, 0};
        ++pulls;
        continue;
      }
    }
    // Otherwise wander (never through the box).
    std::vector<PathPoint> steps;
    for (const auto& [name, dd] : grid_moves()) {
      PathPoint na{agent.x + dd.x, agent.y + dd.y, 0};
      if (!g.blocked(na.x, na.y) && !(na == box)) steps.push_back(na);
    }
    if (steps.empty()) break;
    agent = steps[rng.next_below(steps.size())];
  }
  if (pulls == 0 || box == goal || agent == goal) return std::nullopt;
  g.start = agent;
  g.goal = goal;
  g.box_start = box;
  return g;
}

// --- 3D maze --------------------------------------------------------------

std::vector<PathPoint> grow_layer(Rng& rng, int f, int z, int target) {
  std::vector<PathPoint> cells;
  std::set<std::pair<int, int>> used;
  int cx = rng.next_int(0, f - 1), cy = rng.next_int(0, f - 1);
  cells.push_back({cx, cy, z});
  used.insert({cx, cy});
  while (static_cast<int>(cells.size()) < target) {
    std::vector<PathPoint> frontier;
    for (const auto& c : cells)
      for (const auto& [name, d] : grid_moves()) {
        int nx = c.x + d.x, ny = c.y + d.y;
        if (nx < 0 || ny < 0 || nx >= f || ny >= f) continue;
        if (used.contains({nx, ny})) continue;
        frontier.push_back({nx, ny, z});
      }
    if (frontier.empty()) break;
    PathPoint p = frontier[rng.next_below(frontier.size())];
    cells.push_back(p);
    used.insert({p.x, p.y});
  }
  return cells;
}

std::optional<Scene3D> build_3d(Rng& rng, const Difficulty& d) {
  const int f = d.grid_dim;
  const int nz = d.grade == Grade::Hard ? 3 : 2;
  Scene3D g;
  g.nx = g.ny = f;
  g.nz = nz;
  const int per_layer = std::max(3, (f * f * 3) / 5);

  for (int z = 0; z < nz; ++z) {
    auto layer = grow_layer(rng, f, z, per_layer);
    g.cubes.insert(g.cubes.end(), layer.begin(), layer.end());
  }
  std::sort(g.cubes.begin(), g.cubes.end());

  // Ladders with probability 0.4 per stacked column, at least one per pair
  // of consecutive layers.
  for (int z = 0; z + 1 < nz; ++z) {
    std::vector<PathPoint> eligible;
    for (const auto& c : g.cubes)
      if (c.z == z && g.has_cube({c.x, c.y, z + 1})) eligible.push_back(c);
    if (eligible.empty()) return std::nullopt;
    bool any = false;
    for (const auto& c : eligible)
      if (rng.next_bool(0.4)) {
        g.ladders.emplace_back(c, PathPoint{c.x, c.y, z + 1});
        any = true;
      }
    if (!any) {
      PathPoint c = eligible[rng.next_below(eligible.size())];
      g.ladders.emplace_back(c, PathPoint{c.x, c.y, z + 1});
    }
  }

  std::vector<PathPoint> bottom, top;
  for (const auto& c : g.cubes) {
    if (c.z == 0) bottom.push_back(c);
    if (c.z == nz - 1) top.push_back(c);
  }
  if (bottom.empty() || top.empty()) return std::nullopt;
  g.start = bottom[rng.next_below(bottom.size())];
  for (int t = 0; t < 20; ++t) {
    g.goal = top[rng.next_below(top.size())];
    if (!(g.goal.x == g.start.x && g.goal.y == g.start.y)) break;
  }
  if (g.goal.x == g.start.x && g.goal.y == g.start.y && g.goal.z == g.start.z)
    return std::nullopt;
  return g;
}

// --- bounding boxes and validation ---------------------------------------

RectI centered_bbox(Vec2 center, int size) {
  return {static_cast<int>(std::lround(center.x - size / 2.0)),
          static_cast<int>(std::lround(center.y - size / 2.0)), size, size};
}

bool bbox_in_frame(const RectI& r, const RenderSpec& rs) {
  return r.x >= 0 && r.y >= 0 && r.x + r.w <= rs.width && r.y + r.h <= rs.height;
}

bool assign_bboxes(SceneInstance& s) {
  int size;
  PathPoint start, goal;
  if (std::holds_alternative<GridScene>(s.layout)) {
    size = static_cast<int>(std::lround(0.6 * s.cell_px()));
    start = s.grid().start;
    goal = s.grid().goal;
  } else if (std::holds_alternative<GraphScene>(s.layout)) {
    size = static_cast<int>(std::lround(0.8 * s.cell_px()));
    start = {s.graph().start_node, 0, 0};
    goal = {s.graph().goal_node, 0, 0};
  } else {
    size = 20;
    start = s.scene3d().start;
    goal = s.scene3d().goal;
  }
  s.start_bbox = centered_bbox(s.cell_center_px(start), size);
  s.goal_bbox = centered_bbox(s.cell_center_px(goal), size);
  if (!bbox_in_frame(s.start_bbox, s.render_spec) ||
      !bbox_in_frame(s.goal_bbox, s.render_spec))
    return false;
  if (s.start_bbox.overlaps(s.goal_bbox)) return false;
  if (s.kind == MazeKind::Sokoban) {
    s.box_bbox = centered_bbox(s.cell_center_px(*s.grid().box_start), size);
    if (!bbox_in_frame(*s.box_bbox, s.render_spec)) return false;
    if (s.box_bbox->overlaps(s.start_bbox)) return false;
  }
  return true;
}

}  // namespace

SceneInstance generate_scene(MazeKind kind, const Difficulty& difficulty,
                             const Skin& skin, std::uint64_t seed,
                             const RenderSpec& render) {
  if (!skin.colors_distinguishable())
    throw GenerationExhausted("skin colors not distinguishable: " + skin.skin_id);
  Rng base(seed);
  Rng stream = base.fork(static_cast<std::uint64_t>(kind) * 1000003ULL +
                         static_cast<std::uint64_t>(difficulty.grid_dim));

  for (int attempt = 0; attempt < kGenerationRetryBudget; ++attempt) {
    Rng rng = stream.fork(static_cast<std::uint64_t>(attempt));
    SceneInstance s;
    s.kind = kind;
    s.difficulty = difficulty;
    s.skin = skin;
    s.seed = seed;
    s.render_spec = render;
    s.scene_id = std::string(to_string(kind)) + "_" +
                 to_string(difficulty.grade) + "_" + skin.skin_id + "_s" +
                 std::to_string(seed);

    switch (kind) {
      case MazeKind::Regular:
        s.layout = build_regular(rng, difficulty);
        break;
      case MazeKind::Trapfield: {
        auto g = build_trapfield(rng, difficulty);
        if (!g) continue;
        s.layout = std::move(*g);
        break;
      }
      case MazeKind::Irregular: {
        auto g = build_irregular(rng, difficulty);
        if (!g) continue;
        s.layout = std::move(*g);
        break;
      }
      case MazeKind::Sokoban: {
        auto g = build_sokoban(rng, difficulty);
        if (!g) continue;
        s.layout = std::move(*g);
        break;
      }
      case MazeKind::Maze3D: {
        auto g = build_3d(rng, difficulty);
        if (!g) continue;
        s.layout = std::move(*g);
        break;
      }
    }

    if (!assign_bboxes(s)) continue;
    try {
      solve(s);
    } catch (const Unsolvable&) {
      continue;
    }
    return s;
  }
  throw GenerationExhausted(std::string("no solvable layout within budget: ") +
                            to_string(kind) + "/" +
                            to_string(difficulty.grade) + " seed " +
                            std::to_string(seed));
}

std::string make_scene_id(MazeKind kind, Grade grade, const std::string& skin_id,
                          int index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%06d", index);
  return std::string(to_string(kind)) + "_" + to_string(grade) + "_" + skin_id +
         "_" + buf;
}

std::vector<SceneInstance> enumerate_dataset(const DatasetSpec& spec) {
  if (spec.count_per_cell < 1)
    throw GenerationExhausted("count_per_cell must be >= 1");
  std::vector<SceneInstance> out;
  std::uint64_t index = 0;
  for (MazeKind kind : spec.kinds)
    for (Grade grade : spec.grades)
      for (const std::string& skin_id : spec.skins) {
        Skin skin = Skin::builtin(skin_id, kind);
        Difficulty diff = Difficulty::preset(kind, grade);
        for (int i = 0; i < spec.count_per_cell; ++i, ++index) {
          try {
            SceneInstance s = generate_scene(kind, diff, skin,
                                             spec.base_seed + index, spec.render);
            s.scene_id = make_scene_id(kind, grade, skin_id, i);
            out.push_back(std::move(s));
          } catch (const GenerationExhausted& e) {
            throw GenerationExhausted(
                std::string("cell ") + to_string(kind) + "/" + to_string(grade) +
                "/" + skin_id + " item " + std::to_string(i) + ": " + e.what());
          }
        }
      }
  return out;
}

}  // namespace mazebench
