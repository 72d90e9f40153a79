#include "mazebench/actions.hpp"

#include <algorithm>

#include <json.hpp>

#include "mazebench/solver.hpp"

namespace mazebench {

namespace {

std::string strip_code_fences(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  bool at_line_start = true;
  for (std::size_t i = 0; i < text.size();) {
    if (at_line_start && text.compare(i, 3, "```") == 0) {
      // drop the whole fence line
      while (i < text.size() && text[i] != '\n') ++i;
      if (i < text.size()) ++i;
      continue;
    }
    at_line_start = text[i] == '\n';
    out.push_back(text[i]);
    ++i;
  }
  return out;
}

}  // namespace

ActionScript parse_script(const std::string& text, MazeKind kind) {
  ActionScript script;
  script.raw_json = text;

  const std::string clean = strip_code_fences(text);
  const std::size_t open = clean.find_first_of("{[");
  if (open == std::string::npos) throw ParseError("no JSON value in response");
  const std::size_t close = clean.find_last_of("}]");
  if (close == std::string::npos || close < open)
    throw ParseError("unterminated JSON value in response");

  nlohmann::json j;
  try {
    j = nlohmann::json::parse(clean.substr(open, close - open + 1));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }

  nlohmann::json arr;
  if (j.is_array()) {
    arr = j;
  } else if (j.is_object()) {
    if (j.contains("path"))
      arr = j["path"];
    else if (j.contains("actions"))
      arr = j["actions"];
    else
      throw ParseError("response object has neither \"path\" nor \"actions\"");
  } else {
    throw ParseError("response is neither an object nor an array");
  }
  if (!arr.is_array())
    throw ParseError("the action field must be an array of strings, not a single string");

  for (const auto& item : arr) {
    if (!item.is_string())
      throw ParseError("action array contains a non-string element");
    script.actions.push_back(item.get<std::string>());
  }

  const auto& vocab = action_vocabulary(kind);
  std::vector<std::string> offenders;
  for (const std::string& a : script.actions) {
    if (kind == MazeKind::Irregular) {
      if (a.empty() || !std::all_of(a.begin(), a.end(),
                                    [](char c) { return c >= 'A' && c <= 'Z'; }))
        offenders.push_back(a);
    } else if (std::find(vocab.begin(), vocab.end(), a) == vocab.end()) {
      offenders.push_back(a);
    }
  }
  if (!offenders.empty()) {
    std::string msg = "tokens outside the action vocabulary:";
    for (const auto& o : offenders) msg += " \"" + o + "\"";
    throw VocabularyError(msg);
  }
  return script;
}

SimResult simulate(const SceneInstance& scene, const ActionScript& script) {
  SimResult res;

  auto halt = [&](int index) {
    res.terminal = Terminal::IllegalMove;
    res.illegal_index = index;
  };

  if (scene.kind == MazeKind::Irregular) {
    const GraphScene& g = scene.graph();
    const auto adj = g.adjacency();
    int node = g.start_node;
    res.agent_cells.push_back({node, 0, 0});
    std::size_t begin = 0;
    // Accept responses that include the start node; normalize to exclusive.
    if (!script.actions.empty() &&
        script.actions.front() == g.nodes[node].label)
      begin = 1;
    for (std::size_t i = begin; i < script.actions.size(); ++i) {
      const int next = g.node_by_label(script.actions[i]);
      if (next < 0 || !std::binary_search(adj[node].begin(), adj[node].end(), next)) {
        halt(static_cast<int>(i));
        break;
      }
      node = next;
      res.agent_cells.push_back({node, 0, 0});
      res.steps.steps.push_back({node, 0, 0});
    }
    if (res.terminal != Terminal::IllegalMove)
      res.terminal = node == g.goal_node ? Terminal::GoalReached : Terminal::Stopped;
    return res;
  }

  if (scene.kind == MazeKind::Maze3D) {
    const Scene3D& g = scene.scene3d();
    PathPoint pos = g.start;
    res.agent_cells.push_back(pos);
    for (std::size_t i = 0; i < script.actions.size(); ++i) {
      PathPoint d{};
      for (const auto& [name, delta] : moves_3d())
        if (name == script.actions[i]) d = delta;
      PathPoint q{pos.x + d.x, pos.y + d.y, pos.z + d.z};
      const bool ok =
          q.x >= 0 && q.y >= 0 && q.z >= 0 && q.x < g.nx && q.y < g.ny &&
          q.z < g.nz && g.has_cube(q) &&
          (d.z != 1 || g.has_ladder(pos)) && (d.z != -1 || g.has_ladder(q));
      if (!ok) {
        halt(static_cast<int>(i));
        break;
      }
      pos = q;
      res.agent_cells.push_back(pos);
      res.steps.steps.push_back(pos);
    }
    if (res.terminal != Terminal::IllegalMove)
      res.terminal = pos == g.goal ? Terminal::GoalReached : Terminal::Stopped;
    return res;
  }

  const GridScene& g = scene.grid();
  PathPoint agent = g.start;
  PathPoint box = g.box_start.value_or(PathPoint{-1, -1, 0});
  const bool sokoban = scene.kind == MazeKind::Sokoban;
  res.agent_cells.push_back(agent);
  if (sokoban) res.box_cells.push_back(box);

  for (std::size_t i = 0; i < script.actions.size(); ++i) {
    PathPoint d{};
    for (const auto& [name, delta] : grid_moves())
      if (name == script.actions[i]) d = delta;
    PathPoint na{agent.x + d.x, agent.y + d.y, 0};
    if (g.blocked(na.x, na.y)) {
      halt(static_cast<int>(i));
      break;
    }
    if (sokoban && na == box) {
      PathPoint nb{box.x + d.x, box.y + d.y, 0};
      if (g.blocked(nb.x, nb.y)) {
        halt(static_cast<int>(i));
        break;
      }
      box = nb;
    }
    agent = na;
    res.agent_cells.push_back(agent);
    res.steps.steps.push_back(agent);
    if (sokoban) res.box_cells.push_back(box);
  }
  if (res.terminal != Terminal::IllegalMove) {
    const bool done = sokoban ? box == g.goal : agent == g.goal;
    res.terminal = done ? Terminal::GoalReached : Terminal::Stopped;
  }
  return res;
}

MetricReport score_script(const Manifest& manifest, const std::string& response_text) {
  const SceneInstance& scene = manifest.scene;
  MetricReport rep;
  rep.scene_id = scene.scene_id;

  ActionScript script;
  try {
    script = parse_script(response_text, scene.kind);
  } catch (const std::runtime_error& e) {
    rep.error = e.what();
    return rep;
  }

  SimResult sim = simulate(scene, script);

  // Geometric trajectory through the executed cell centers.
  Solution executed;
  executed.cell_path = sim.agent_cells;
  std::vector<Vec2> px = solution_path_px(scene, executed);
  Trajectory traj;
  traj.space = TrajectorySpace::Pixel;
  traj.width = scene.render_spec.width;
  traj.height = scene.render_spec.height;
  traj.points = std::move(px);

  if (manifest.gt_solutions.empty()) {
    rep.error = "manifest carries no ground-truth solutions";
    return rep;
  }
  rep.matched_gt_index = select_gt(traj, manifest.gt_solutions);
  const Solution& gt = manifest.gt_solutions[rep.matched_gt_index];

  if (scene.kind == MazeKind::Sokoban) {
    Trajectory box_traj;
    box_traj.space = TrajectorySpace::Pixel;
    box_traj.width = traj.width;
    box_traj.height = traj.height;
    for (const PathPoint& b : sim.box_cells)
      box_traj.points.push_back(scene.cell_center_px(b));
    MetricReport scored = compute_metrics(sim.steps, traj, gt, scene.goal_bbox,
                                          scene.render_spec, &box_traj);
    scored.scene_id = rep.scene_id;
    scored.matched_gt_index = rep.matched_gt_index;
    return scored;
  }
  MetricReport scored =
      compute_metrics(sim.steps, traj, gt, scene.goal_bbox, scene.render_spec);
  scored.scene_id = rep.scene_id;
  scored.matched_gt_index = rep.matched_gt_index;
  return scored;
}

}  // namespace mazebench
