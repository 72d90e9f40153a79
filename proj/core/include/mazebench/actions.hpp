#pragma once

#include <string>
#include <vector>

#include "mazebench/metrics.hpp"
#include "mazebench/scene.hpp"

namespace mazebench {

class ParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class VocabularyError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct ActionScript {
  std::string scene_id;
  std::vector<std::string> actions;
  std::string raw_json;
};

// Tolerant parse of the model-response protocol: strips code fences, accepts
// either the "path" or "actions" key, validates the vocabulary per kind.
ActionScript parse_script(const std::string& text, MazeKind kind);

enum class Terminal { GoalReached, Stopped, IllegalMove };

struct SimResult {
  StepSequence steps;                // agent cells after the start, as executed
  Terminal terminal = Terminal::Stopped;
  int illegal_index = -1;            // action index that was rejected
  std::vector<PathPoint> agent_cells;  // includes start
  std::vector<PathPoint> box_cells;    // Sokoban: includes box start
};

// Exact simulator. Illegal moves halt the rollout at the last legal state;
// illegality is recorded, not thrown, so partial-credit metrics still apply.
SimResult simulate(const SceneInstance& scene, const ActionScript& script);

// Full pipeline for one textual response: parse, simulate, build the
// geometric trajectory from cell centers, and score against the manifest's
// ground truths. Parse failures yield a zero-score report with `error` set.
MetricReport score_script(const Manifest& manifest, const std::string& response_text);

}  // namespace mazebench
