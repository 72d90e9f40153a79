#include "mazebench/solver.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <queue>
#include <unordered_map>

namespace mazebench {

const std::vector<std::string>& action_vocabulary(MazeKind kind) {
  static const std::vector<std::string> grid = {"up", "down", "left", "right"};
  static const std::vector<std::string> threed = {
      "forward_left", "forward_right", "backward_left",
      "backward_right", "up", "down"};
  static const std::vector<std::string> none = {};
  switch (kind) {
    case MazeKind::Maze3D: return threed;
    case MazeKind::Irregular: return none;
    default: return grid;
  }
}

const std::vector<std::pair<std::string, PathPoint>>& grid_moves() {
  static const std::vector<std::pair<std::string, PathPoint>> moves = {
      {"up", {0, -1, 0}},
      {"down", {0, 1, 0}},
      {"left", {-1, 0, 0}},
      {"right", {1, 0, 0}},
  };
  return moves;
}

const std::vector<std::pair<std::string, PathPoint>>& moves_3d() {
  // Screen-relative horizontal moves under the fixed isometric projection:
  // "forward" decreases x+y (moves up-screen), left/right follow screen x.
  static const std::vector<std::pair<std::string, PathPoint>> moves = {
      {"forward_left", {-1, 0, 0}},
      {"forward_right", {0, -1, 0}},
      {"backward_left", {0, 1, 0}},
      {"backward_right", {1, 0, 0}},
      {"up", {0, 0, 1}},
      {"down", {0, 0, -1}},
  };
  return moves;
}

namespace {

using State = std::int64_t;

struct StateSpace {
  State start;
  std::function<bool(State)> is_goal;
  // (action, successor) pairs; order irrelevant, callers sort by action.
  std::function<std::vector<std::pair<std::string, State>>(State)> neighbors;
  // Predecessor relation for the reverse BFS.
  std::function<std::vector<State>(State)> predecessors;
  std::function<std::vector<State>()> goal_states;
  std::function<PathPoint(State)> agent_cell;
};

StateSpace grid_space(const GridScene& g) {
  StateSpace sp;
  auto enc = [w = g.width](PathPoint p) -> State { return p.y * w + p.x; };
  auto dec = [w = g.width](State s) -> PathPoint {
    return {static_cast<int>(s % w), static_cast<int>(s / w), 0};
  };
  sp.start = enc(g.start);
  State goal = enc(g.goal);
  sp.is_goal = [goal](State s) { return s == goal; };
  sp.goal_states = [goal] { return std::vector<State>{goal}; };
  sp.agent_cell = dec;
  auto step = [&g, enc, dec](State s) {
    std::vector<std::pair<std::string, State>> out;
    PathPoint p = dec(s);
    for (const auto& [name, d] : grid_moves()) {
      int nx = p.x + d.x, ny = p.y + d.y;
      if (!g.blocked(nx, ny)) out.emplace_back(name, enc({nx, ny, 0}));
    }
    return out;
  };
  sp.neighbors = step;
  sp.predecessors = [step](State s) {
    std::vector<State> out;
    for (auto& [name, t] : step(s)) out.push_back(t);  // symmetric moves
    return out;
  };
  return sp;
}

StateSpace graph_space(const GraphScene& g) {
  StateSpace sp;
  auto adj = std::make_shared<std::vector<std::vector<int>>>(g.adjacency());
  auto labels = std::make_shared<std::vector<std::string>>();
  for (const auto& n : g.nodes) labels->push_back(n.label);
  sp.start = g.start_node;
  State goal = g.goal_node;
  sp.is_goal = [goal](State s) { return s == goal; };
  sp.goal_states = [goal] { return std::vector<State>{goal}; };
  sp.agent_cell = [](State s) { return PathPoint{static_cast<int>(s), 0, 0}; };
  sp.neighbors = [adj, labels](State s) {
    std::vector<std::pair<std::string, State>> out;
    for (int t : (*adj)[static_cast<std::size_t>(s)])
      out.emplace_back((*labels)[t], t);
    return out;
  };
  sp.predecessors = [adj](State s) {
    std::vector<State> out;
    for (int t : (*adj)[static_cast<std::size_t>(s)]) out.push_back(t);
    return out;
  };
  return sp;
}

StateSpace space_3d(const Scene3D& g) {
  StateSpace sp;
  auto enc = [&g](PathPoint p) -> State {
    return (static_cast<State>(p.z) * g.ny + p.y) * g.nx + p.x;
  };
  auto dec = [nx = g.nx, ny = g.ny](State s) -> PathPoint {
    return {static_cast<int>(s % nx), static_cast<int>((s / nx) % ny),
            static_cast<int>(s / (static_cast<State>(nx) * ny))};
  };
  sp.start = enc(g.start);
  State goal = enc(g.goal);
  sp.is_goal = [goal](State s) { return s == goal; };
  sp.goal_states = [goal] { return std::vector<State>{goal}; };
  sp.agent_cell = dec;
  auto step = [&g, enc, dec](State s) {
    std::vector<std::pair<std::string, State>> out;
    PathPoint p = dec(s);
    for (const auto& [name, d] : moves_3d()) {
      PathPoint q{p.x + d.x, p.y + d.y, p.z + d.z};
      if (q.x < 0 || q.y < 0 || q.z < 0 || q.x >= g.nx || q.y >= g.ny ||
          q.z >= g.nz)
        continue;
      if (!g.has_cube(q)) continue;
      if (d.z == 1 && !g.has_ladder(p)) continue;  // climb needs a ladder here
      if (d.z == -1 && !g.has_ladder(q)) continue;
      out.emplace_back(name, enc(q));
    }
    return out;
  };
  sp.neighbors = step;
  sp.predecessors = [step](State s) {
    std::vector<State> out;
    for (auto& [name, t] : step(s)) out.push_back(t);  // moves are reversible
    return out;
  };
  return sp;
}

StateSpace sokoban_space(const GridScene& g) {
  StateSpace sp;
  const State n = static_cast<State>(g.width) * g.height;
  auto encc = [w = g.width](PathPoint p) -> State { return p.y * w + p.x; };
  auto decc = [w = g.width](State s) -> PathPoint {
    return {static_cast<int>(s % w), static_cast<int>(s / w), 0};
  };
  State goal_cell = encc(g.goal);
  sp.start = encc(g.start) * n + encc(*g.box_start);
  sp.is_goal = [n, goal_cell](State s) { return s % n == goal_cell; };
  sp.goal_states = [&g, n, goal_cell, encc] {
    std::vector<State> out;
    for (int y = 0; y < g.height; ++y)
      for (int x = 0; x < g.width; ++x)
        if (!g.blocked(x, y) && encc({x, y, 0}) != goal_cell)
          out.push_back(encc({x, y, 0}) * n + goal_cell);
    // Degenerate case: the box may start on the goal.
    out.push_back(goal_cell * n + goal_cell);
    return out;
  };
  sp.agent_cell = [n, decc](State s) { return decc(s / n); };
  sp.neighbors = [&g, n, encc, decc](State s) {
    std::vector<std::pair<std::string, State>> out;
    PathPoint a = decc(s / n), b = decc(s % n);
    for (const auto& [name, d] : grid_moves()) {
      PathPoint na{a.x + d.x, a.y + d.y, 0};
      if (g.blocked(na.x, na.y)) continue;
      if (na == b) {
        PathPoint nb{b.x + d.x, b.y + d.y, 0};
        if (g.blocked(nb.x, nb.y)) continue;
        out.emplace_back(name, encc(na) * n + encc(nb));
      } else {
        out.emplace_back(name, encc(na) * n + encc(b));
      }
    }
    return out;
  };
  sp.predecessors = [&g, n, encc, decc](State s) {
    std::vector<State> out;
    PathPoint a = decc(s / n), b = decc(s % n);
    for (const auto& [name, d] : grid_moves()) {
      PathPoint pa{a.x - d.x, a.y - d.y, 0};  // agent came from pa via d
      if (g.blocked(pa.x, pa.y)) continue;
      if (pa == b) continue;  // agent cannot have stood on the box
      // Plain move: box unchanged; the destination a is never the box cell
      // in a valid state, so pa -> a cannot have been a push.
      out.push_back(encc(pa) * n + encc(b));
      // Push: box moved from a to b with b == a + d.
      if (b.x == a.x + d.x && b.y == a.y + d.y)
        out.push_back(encc(pa) * n + encc(a));
    }
    return out;
  };
  return sp;
}

StateSpace make_space(const SceneInstance& scene) {
  switch (scene.kind) {
    case MazeKind::Irregular: return graph_space(scene.graph());
    case MazeKind::Maze3D: return space_3d(scene.scene3d());
    case MazeKind::Sokoban:
      if (!scene.grid().box_start)
        throw Unsolvable("sokoban scene has no box_start: " + scene.scene_id);
      return sokoban_space(scene.grid());
    default: return grid_space(scene.grid());
  }
}

std::unordered_map<State, int> bfs_dist(
    const std::vector<State>& sources,
    const std::function<std::vector<State>(State)>& next) {
  std::unordered_map<State, int> dist;
  std::deque<State> q;
  for (State s : sources) {
    if (dist.emplace(s, 0).second) q.push_back(s);
  }
  while (!q.empty()) {
    State s = q.front();
    q.pop_front();
    int d = dist[s];
    for (State t : next(s)) {
      if (dist.emplace(t, d + 1).second) q.push_back(t);
    }
  }
  return dist;
}

}  // namespace

std::vector<Solution> solve_all_shortest(const SceneInstance& scene, int cap) {
  StateSpace sp = make_space(scene);

  auto fwd = [&sp](State s) {
    std::vector<State> out;
    for (auto& [a, t] : sp.neighbors(s)) out.push_back(t);
    return out;
  };
  auto dist_start = bfs_dist({sp.start}, fwd);

  int dmin = -1;
  for (State g : sp.goal_states()) {
    auto it = dist_start.find(g);
    if (it != dist_start.end() && (dmin < 0 || it->second < dmin)) dmin = it->second;
  }
  if (dmin < 0) throw Unsolvable("no path to goal: " + scene.scene_id);

  auto dist_goal = bfs_dist(sp.goal_states(), sp.predecessors);

  std::vector<Solution> out;
  std::vector<std::string> actions;
  std::vector<PathPoint> path{sp.agent_cell(sp.start)};

  std::function<void(State, int)> dfs = [&](State s, int depth) {
    if (static_cast<int>(out.size()) >= cap) return;
    if (depth == dmin) {
      if (!sp.is_goal(s)) return;
      Solution sol;
      sol.actions = actions;
      sol.cell_path = path;
      sol.n_steps = static_cast<int>(actions.size());
      sol.length_units = solution_length_units(scene, sol);
      out.push_back(std::move(sol));
      return;
    }
    auto nbrs = sp.neighbors(s);
    std::sort(nbrs.begin(), nbrs.end());
    for (auto& [action, t] : nbrs) {
      auto it = dist_goal.find(t);
      if (it == dist_goal.end() || it->second != dmin - depth - 1) continue;
      actions.push_back(action);
      path.push_back(sp.agent_cell(t));
      dfs(t, depth + 1);
      actions.pop_back();
      path.pop_back();
      if (static_cast<int>(out.size()) >= cap) return;
    }
  };
  dfs(sp.start, 0);
  return out;
}

Solution solve(const SceneInstance& scene) {
  return solve_all_shortest(scene, 1).front();
}

Solution sokoban_state_bfs(const SceneInstance& scene) {
  const GridScene& g = scene.grid();
  if (!g.box_start) throw Unsolvable("no box on board: " + scene.scene_id);
  const std::int64_t n = static_cast<std::int64_t>(g.width) * g.height;
  auto enc = [w = g.width](int x, int y) { return static_cast<std::int64_t>(y) * w + x; };

  struct Node {
    std::int64_t state;
    int parent;   // index into the visit log
    int action;   // index into grid_moves()
  };
  const std::int64_t start =
      enc(g.start.x, g.start.y) * n + enc(g.box_start->x, g.box_start->y);
  const std::int64_t goal_cell = enc(g.goal.x, g.goal.y);

  std::vector<Node> log{{start, -1, -1}};
  std::unordered_map<std::int64_t, int> seen{{start, 0}};
  std::deque<int> q{0};
  int found = -1;
  if (start % n == goal_cell) found = 0;

  while (!q.empty() && found < 0) {
    int cur = q.front();
    q.pop_front();
    const std::int64_t s = log[cur].state;
    const int ax = static_cast<int>((s / n) % g.width);
    const int ay = static_cast<int>((s / n) / g.width);
    const int bx = static_cast<int>((s % n) % g.width);
    const int by = static_cast<int>((s % n) / g.width);
    for (int m = 0; m < 4; ++m) {
      const auto& d = grid_moves()[m].second;
      int nax = ax + d.x, nay = ay + d.y;
      if (g.blocked(nax, nay)) continue;
      int nbx = bx, nby = by;
      if (nax == bx && nay == by) {
        nbx = bx + d.x;
        nby = by + d.y;
        if (g.blocked(nbx, nby)) continue;
      }
      std::int64_t t = enc(nax, nay) * n + enc(nbx, nby);
      if (seen.contains(t)) continue;
      seen.emplace(t, static_cast<int>(log.size()));
      log.push_back({t, cur, m});
      if (enc(nbx, nby) == goal_cell) {
        found = static_cast<int>(log.size()) - 1;
        break;
      }
      q.push_back(static_cast<int>(log.size()) - 1);
      if (log.size() > 1000000) throw BudgetExceeded("sokoban oracle state budget");
    }
  }
  if (found < 0) throw Unsolvable("sokoban oracle: no push plan");

  Solution sol;
  for (int i = found; log[i].parent >= 0; i = log[i].parent) {
    sol.actions.push_back(grid_moves()[log[i].action].first);
    const std::int64_t s = log[i].state;
    sol.cell_path.push_back({static_cast<int>((s / n) % g.width),
                             static_cast<int>((s / n) / g.width), 0});
  }
  std::reverse(sol.actions.begin(), sol.actions.end());
  std::reverse(sol.cell_path.begin(), sol.cell_path.end());
  sol.cell_path.insert(sol.cell_path.begin(), g.start);
  sol.n_steps = static_cast<int>(sol.actions.size());
  sol.length_units = solution_length_units(scene, sol);
  return sol;
}

std::vector<Vec2> solution_path_px(const SceneInstance& scene, const Solution& sol) {
  std::vector<Vec2> out;
  if (scene.kind == MazeKind::Irregular) {
    const GraphScene& g = scene.graph();
    const double w = scene.render_spec.width, h = scene.render_spec.height;
    auto node_px = [&](int idx) {
      return Vec2{g.nodes[idx].pos.x * w, g.nodes[idx].pos.y * h};
    };
    out.push_back(node_px(sol.cell_path.front().x));
    for (std::size_t i = 1; i < sol.cell_path.size(); ++i) {
      int a = sol.cell_path[i - 1].x, b = sol.cell_path[i].x;
      const GraphScene::Edge* edge = nullptr;
      bool forward = true;
      for (const auto& e : g.edges) {
        if (e.a == a && e.b == b) { edge = &e; forward = true; break; }
        if (e.a == b && e.b == a) { edge = &e; forward = false; break; }
      }
      if (!edge) throw Unsolvable("solution uses a non-existent edge");
      Vec2 pa = node_px(edge->a), pb = node_px(edge->b);
      Vec2 ctrl{edge->ctrl.x * w, edge->ctrl.y * h};
      auto pts = forward ? bezier_polyline(pa, ctrl, pb)
                         : bezier_polyline(pb, ctrl, pa);
      out.insert(out.end(), pts.begin() + 1, pts.end());
    }
    return out;
  }
  for (const PathPoint& p : sol.cell_path) out.push_back(scene.cell_center_px(p));
  return out;
}

std::vector<Vec2> sokoban_box_path_px(const SceneInstance& scene, const Solution& sol) {
  const GridScene& g = scene.grid();
  PathPoint agent = g.start;
  PathPoint box = *g.box_start;
  std::vector<Vec2> out{scene.cell_center_px(box)};
  for (const std::string& a : sol.actions) {
    for (const auto& [name, d] : grid_moves()) {
      if (name != a) continue;
      agent.x += d.x;
      agent.y += d.y;
      if (agent == box) {
        box.x += d.x;
        box.y += d.y;
      }
      break;
    }
    out.push_back(scene.cell_center_px(box));
  }
  return out;
}

double solution_length_units(const SceneInstance& scene, const Solution& sol) {
  std::vector<Vec2> px = solution_path_px(scene, sol);
  const double w = scene.render_spec.width, h = scene.render_spec.height;
  double len = 0.0;
  for (std::size_t i = 1; i < px.size(); ++i) {
    Vec2 a{px[i - 1].x / w, px[i - 1].y / h};
    Vec2 b{px[i].x / w, px[i].y / h};
    len += distance(a, b);
  }
  return len;
}

}  // namespace mazebench
