#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "mazebench/scene.hpp"

namespace mazebench {

class Unsolvable : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class BudgetExceeded : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Action vocabulary for a kind. Graph scenes use node labels instead of a
// fixed vocabulary and return an empty list.
const std::vector<std::string>& action_vocabulary(MazeKind kind);

// Move deltas in fixed expansion order. Grid: up, down, left, right.
// 3D: forward_left, forward_right, backward_left, backward_right, up, down.
const std::vector<std::pair<std::string, PathPoint>>& grid_moves();
const std::vector<std::pair<std::string, PathPoint>>& moves_3d();

// Shortest solution under the kind's move rule; deterministic (ties broken
// lexicographically by action sequence). Sokoban minimizes agent moves.
Solution solve(const SceneInstance& scene);

// All distinct shortest solutions up to `cap`, lexicographic by action
// sequence; front() == solve(scene).
std::vector<Solution> solve_all_shortest(const SceneInstance& scene, int cap);

// Exhaustive (agent, box) BFS, independent of solve(). Test oracle only.
Solution sokoban_state_bfs(const SceneInstance& scene);

// Pixel polyline the agent's center follows when the solution is rendered.
// Graph edges contribute their Bezier arcs; everything else is straight
// segments between cell centers.
std::vector<Vec2> solution_path_px(const SceneInstance& scene, const Solution& sol);

// Sokoban box center polyline over the same action sequence (starts at
// box_start, ends on the goal).
std::vector<Vec2> sokoban_box_path_px(const SceneInstance& scene, const Solution& sol);

// Arc length of the solution's rendered path in unit-square space.
double solution_length_units(const SceneInstance& scene, const Solution& sol);

}  // namespace mazebench
