#include <benchmark/benchmark.h>

#include "mazebench/generate.hpp"
#include "mazebench/solver.hpp"

using namespace mazebench;

static SceneInstance make_scene(MazeKind kind, Grade grade, std::uint64_t seed) {
  return generate_scene(kind, Difficulty::preset(kind, grade),
                        Skin::builtin("raw", kind), seed);
}

static void BM_GenerateRegularHard(benchmark::State& state) {
  std::uint64_t seed = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(make_scene(MazeKind::Regular, Grade::Hard, seed++));
}
BENCHMARK(BM_GenerateRegularHard);

static void BM_SolveRegularHard(benchmark::State& state) {
  SceneInstance scene = make_scene(MazeKind::Regular, Grade::Hard, 7);
  for (auto _ : state) benchmark::DoNotOptimize(solve(scene));
}
BENCHMARK(BM_SolveRegularHard);

static void BM_SolveAllShortestRegular(benchmark::State& state) {
  SceneInstance scene = make_scene(MazeKind::Regular, Grade::Hard, 7);
  for (auto _ : state) benchmark::DoNotOptimize(solve_all_shortest(scene, 16));
}
BENCHMARK(BM_SolveAllShortestRegular);

static void BM_SolveSokobanHard(benchmark::State& state) {
  SceneInstance scene = make_scene(MazeKind::Sokoban, Grade::Hard, 11);
  for (auto _ : state) benchmark::DoNotOptimize(solve(scene));
}
BENCHMARK(BM_SolveSokobanHard);

BENCHMARK_MAIN();
