#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "mazebench/scene.hpp"

namespace mazebench {

class GenerationExhausted : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kGenerationRetryBudget = 1000;

// Deterministic in all four arguments; the returned scene is solvable.
SceneInstance generate_scene(MazeKind kind, const Difficulty& difficulty,
                             const Skin& skin, std::uint64_t seed,
                             const RenderSpec& render = {});

struct DatasetSpec {
  std::vector<MazeKind> kinds{kAllKinds.begin(), kAllKinds.end()};
  std::vector<Grade> grades{kAllGrades.begin(), kAllGrades.end()};
  std::vector<std::string> skins = Skin::builtin_ids();
  int count_per_cell = 176;  // 5 kinds x 3 grades x 3 skins x 176 = 7,920
  std::uint64_t base_seed = 0;
  RenderSpec render;
};

// Full cross product; scene i gets seed base_seed + i, so reruns and
// partial reruns reproduce byte-identical manifests.
std::vector<SceneInstance> enumerate_dataset(const DatasetSpec& spec);

// Scene ids are "<kind>_<grade>_<skin>_<index>" with a zero-padded index.
std::string make_scene_id(MazeKind kind, Grade grade, const std::string& skin_id,
                          int index);

}  // namespace mazebench
