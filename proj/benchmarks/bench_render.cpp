#include <benchmark/benchmark.h>

#include "mazebench/generate.hpp"
#include "mazebench/metrics.hpp"
#include "mazebench/render.hpp"
#include "mazebench/solver.hpp"
#include "mazebench/track.hpp"

using namespace mazebench;

static void BM_RenderBackground(benchmark::State& state) {
  SceneInstance scene =
      generate_scene(MazeKind::Regular, Difficulty::preset(MazeKind::Regular, Grade::Hard),
                     Skin::builtin("noise", MazeKind::Regular), 3);
  for (auto _ : state) benchmark::DoNotOptimize(render_background(scene));
}
BENCHMARK(BM_RenderBackground);

static void BM_RenderVideo(benchmark::State& state) {
  SceneInstance scene =
      generate_scene(MazeKind::Regular, Difficulty::preset(MazeKind::Regular, Grade::Easy),
                     Skin::builtin("raw", MazeKind::Regular), 3);
  Solution sol = solve(scene);
  for (auto _ : state)
    benchmark::DoNotOptimize(render_solution_video(scene, sol));
}
BENCHMARK(BM_RenderVideo);

static void BM_TrackVideo(benchmark::State& state) {
  SceneInstance scene =
      generate_scene(MazeKind::Regular, Difficulty::preset(MazeKind::Regular, Grade::Easy),
                     Skin::builtin("raw", MazeKind::Regular), 3);
  FrameSequence seq = render_solution_video(scene, solve(scene));
  for (auto _ : state)
    benchmark::DoNotOptimize(track(seq, scene.start_bbox));
}
BENCHMARK(BM_TrackVideo);
