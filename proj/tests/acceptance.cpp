// Acceptance checks: one pass/fail line per criterion, exit 1 on any failure.
//
// The runtime budgets assume 8 cores; measured wall time is normalized by
// (cores_used / 8) so the verdict is stable on smaller machines.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "mazebench/actions.hpp"
#include "mazebench/batch.hpp"
#include "mazebench/generate.hpp"
#include "mazebench/judge.hpp"
#include "mazebench/metrics.hpp"
#include "mazebench/render.hpp"
#include "mazebench/rng.hpp"
#include "mazebench/solver.hpp"
#include "oracles.hpp"
#include "test_helpers.hpp"

using namespace mazebench;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

int worker_count() {
  const int hw = static_cast<int>(std::thread::hardware_concurrency());
  return std::max(1, std::min(hw, 8));
}

std::string fmt(double v, int prec = 2) {
  std::ostringstream os;
  os.precision(prec);
  os << std::fixed << v;
  return os.str();
}

// --- criterion 1: dataset constants and generation runtime -----------------

Outcome criterion1() {
  Outcome o;
  const DatasetSpec def;
  const auto scenes = enumerate_dataset(def);
  if (scenes.size() != 7920) {
    o.pass = false;
    o.detail += "default dataset has " + std::to_string(scenes.size()) +
                " instances (want 7920); ";
  }
  int bad_spec = 0;
  for (const auto& s : scenes)
    if (s.render_spec.fps != 24 || s.render_spec.frame_count != 192 ||
        s.render_spec.width != 512 || s.render_spec.height != 512)
      ++bad_spec;
  if (bad_spec) {
    o.pass = false;
    o.detail += std::to_string(bad_spec) + " scenes off 512x512@24fps/192f; ";
  }
  const int easy = Difficulty::preset(MazeKind::Regular, Grade::Easy).grid_dim;
  const int hard = Difficulty::preset(MazeKind::Regular, Grade::Hard).grid_dim;
  if (easy != 5 || hard != 7) {
    o.pass = false;
    o.detail += "regular grids easy=" + std::to_string(easy) + " hard=" +
                std::to_string(hard) + " (want 5/7); ";
  }

  // timed 150-instance smoke generation (manifests + rendered frames)
  DatasetSpec smoke;
  smoke.skins = {"raw"};
  smoke.count_per_cell = 10;  // 5 kinds x 3 grades x 10 = 150
  const fs::path dir = fs::temp_directory_path() / "mb_accept_smoke";
  fs::remove_all(dir);
  const int jobs = worker_count();
  const auto t0 = std::chrono::steady_clock::now();
  const auto res = run_generate(smoke, dir.string(), jobs);
  const double elapsed = seconds_since(t0);
  fs::remove_all(dir);
  const double on8 = elapsed * jobs / 8.0;  // normalized to 8 cores
  const double full_est = on8 * 7920.0 / 150.0;
  if (res.failures || res.instances != 150) {
    o.pass = false;
    o.detail += "smoke generation failed (" + std::to_string(res.failures) +
                " failures); ";
  }
  if (on8 >= 120.0) {
    o.pass = false;
    o.detail += "smoke " + fmt(on8) + "s on 8 cores (budget 120s); ";
  }
  if (full_est >= 3600.0) {
    o.pass = false;
    o.detail += "full-dataset estimate " + fmt(full_est) + "s (budget 3600s); ";
  }
  if (o.pass)
    o.detail = "7920 instances, 512x512@24fps/192f, grids 5x5->7x7, smoke " +
               fmt(on8) + "s/8-core (est. full " + fmt(full_est / 60.0) +
               " min)";
  return o;
}

// --- criterion 2: round-trip self-consistency -------------------------------

Outcome criterion2() {
  Outcome o;
  int total = 0, perfect = 0, sd_bad = 0, mf_bad = 0;
  double worst_sd = 0.0, worst_mf = 1.0;
  std::vector<std::pair<MazeKind, Grade>> cells;
  for (MazeKind k : kAllKinds)
    for (Grade g : kAllGrades) cells.emplace_back(k, g);

  std::vector<MetricReport> rows(cells.size() * 30);
  parallel_for(rows.size(), worker_count(), [&](std::size_t i) {
    const auto [kind, grade] = cells[i / 30];
    const std::uint64_t seed = 40000 + i % 30;
    const auto scene = generate_scene(kind, Difficulty::preset(kind, grade),
                                      Skin::builtin("raw", kind), seed);
    Manifest m{scene, solve_all_shortest(scene, 16)};
    const auto video = render_solution_video(scene, m.gt_solutions.front());
    rows[i] = evaluate_video(m, video);
  });
  for (const MetricReport& r : rows) {
    ++total;
    if (r.em == 1 && r.sr == 1 && r.pr >= 1.0) ++perfect;
    if (r.sr == 1) {
      const double sd = r.sd ? std::abs(*r.sd) : 1e9;
      worst_sd = std::max(worst_sd, sd);
      if (sd > 0.05) ++sd_bad;
    }
    const double mf = r.mf ? *r.mf : 0.0;
    worst_mf = std::min(worst_mf, mf);
    if (mf < 0.99) ++mf_bad;
  }
  const double rate = 100.0 * perfect / total;
  o.pass = total == 450 && rate >= 99.0 && sd_bad == 0 && mf_bad == 0;
  o.detail = std::to_string(perfect) + "/" + std::to_string(total) +
             " perfect (" + fmt(rate, 1) + "%), max|SD|=" + fmt(worst_sd, 4) +
             ", min MF=" + fmt(worst_mf, 4);
  return o;
}

// --- criterion 3: solver optimality oracle ----------------------------------

Outcome criterion3() {
  Outcome o;
  int checked = 0, mismatched = 0;
  for (MazeKind k : kAllKinds) {
    // stay within the brute-force budget: presets with grid_dim <= 6
    std::vector<Difficulty> pool;
    for (Grade g : kAllGrades) {
      const Difficulty d = Difficulty::preset(k, g);
      if (d.grid_dim <= 6) pool.push_back(d);
    }
    if (pool.empty()) pool.push_back(Difficulty::preset(k, Grade::Easy));
    for (int i = 0; i < 200; ++i) {
      const auto s = generate_scene(k, pool[i % pool.size()],
                                    Skin::builtin("raw", k), 50000 + i);
      const int got = solve(s).n_steps;
      const int want = k == MazeKind::Sokoban ? sokoban_state_bfs(s).n_steps
                                              : oracle::shortest_len(s);
      ++checked;
      if (got != want) ++mismatched;
    }
  }
  int soko_mismatch = 0;
  for (int i = 0; i < 100; ++i) {
    const auto s = generate_scene(
        MazeKind::Sokoban, Difficulty::preset(MazeKind::Sokoban, Grade::Easy),
        Skin::builtin("raw", MazeKind::Sokoban), 60000 + i);
    if (solve(s).n_steps != sokoban_state_bfs(s).n_steps) ++soko_mismatch;
  }
  o.pass = mismatched == 0 && soko_mismatch == 0;
  o.detail = std::to_string(checked) + " instances vs brute force (" +
             std::to_string(mismatched) + " mismatches), 100 sokoban vs " +
             "state BFS (" + std::to_string(soko_mismatch) + " mismatches)";
  return o;
}

// --- criterion 4: metric formula pins ----------------------------------------

SceneInstance open_grid(int w, int h, PathPoint start, PathPoint goal) {
  return testutil::make_grid_scene(w, h, start, goal);
}

Outcome criterion4() {
  Outcome o;
  const auto s = open_grid(4, 4, {0, 0, 0}, {3, 0, 0});
  const Solution gt = solve(s);
  if (gt.n_steps != 3) return {false, "fixture grid not 3 steps"};

  // PR = 1/3 for a one-step-correct prefix on n=3
  StepSequence one;
  one.start = gt.cell_path.front();
  one.steps = {gt.cell_path[1], {1, 2, 0}};
  const auto rep_pr =
      compute_metrics(one, step_path_trajectory(one, s), gt, s.goal_bbox,
                      s.render_spec);
  if (std::abs(rep_pr.pr - 1.0 / 3.0) > 1e-9) {
    o.pass = false;
    o.detail += "PR(1-correct,n=3)=" + fmt(rep_pr.pr, 4) + " (want 1/3); ";
  }
  if (rep_pr.em != 0) {
    o.pass = false;
    o.detail += "EM should be 0 on a diverging path; ";
  }

  // identity: EM=SR=PR=1, SD=0
  StepSequence id;
  id.start = gt.cell_path.front();
  id.steps.assign(gt.cell_path.begin() + 1, gt.cell_path.end());
  const auto rep_id = compute_metrics(id, step_path_trajectory(id, s), gt,
                                      s.goal_bbox, s.render_spec);
  if (rep_id.em != 1 || rep_id.sr != 1 || rep_id.pr < 1.0 || !rep_id.sd ||
      std::abs(*rep_id.sd) > 1e-9) {
    o.pass = false;
    o.detail += "identity not perfect; ";
  }

  // SD = 0.2 when L_gen = 1.2 L_gt
  {
    Trajectory gen;
    gen.space = TrajectorySpace::Unit;
    gen.width = gen.height = 1;
    gen.points = {{0.0, 0.0}, {0.0, 0.6}, {0.0, 0.0}};  // arc length 1.2
    Solution g2;
    g2.length_units = 1.0;
    StepSequence none;
    const auto rep = compute_metrics(none, gen, g2, RectI{0, 0, 1, 1},
                                     RenderSpec{1, 1, 24, 8});
    if (!rep.sd || std::abs(*rep.sd - 0.2) > 1e-6) {
      o.pass = false;
      o.detail += "SD(1.2 L_gt) != 0.2; ";
    }
  }

  // MF = 0.5 for a half-changed frame at M=1
  {
    FrameSequence v;
    v.frames.push_back(Image(64, 64, {0, 0, 0, 255}));
    Image half(64, 64, {0, 0, 0, 255});
    for (int y = 0; y < 32; ++y)
      for (int x = 0; x < 64; ++x) half.set(x, y, {255, 255, 255, 255});
    v.frames.push_back(std::move(half));
    const double mf = maze_fidelity(v, {}, 1, 25.0, 0.0);
    if (std::abs(mf - 0.5) > 1e-9) {
      o.pass = false;
      o.detail += "MF(half-changed, M=1)=" + fmt(mf, 4) + " (want 0.5); ";
    }
  }

  // PR identity on 1,000 random sequences
  {
    const auto big = open_grid(16, 16, {0, 15, 0}, {15, 15, 0});
    std::mt19937 rng(11);
    int pr_bad = 0;
    for (int trial = 0; trial < 1000; ++trial) {
      const int n = 1 + static_cast<int>(rng() % 8);
      std::vector<int> gtv(n), gen(rng() % (n + 3));
      for (int& v : gtv) v = static_cast<int>(rng() % 3);
      for (int& v : gen) v = static_cast<int>(rng() % 3);
      int prefix = 0;
      while (prefix < n && prefix < static_cast<int>(gen.size()) &&
             gen[prefix] == gtv[prefix])
        ++prefix;
      Solution sol;
      sol.cell_path = {{0, 15, 0}};
      for (int v : gtv)
        sol.cell_path.push_back({v, static_cast<int>(sol.cell_path.size()), 0});
      sol.n_steps = n;
      sol.length_units = 1.0;
      StepSequence gs;
      gs.start = sol.cell_path.front();
      for (std::size_t i = 0; i < gen.size(); ++i)
        gs.steps.push_back({gen[i], static_cast<int>(i) + 1, 0});
      Trajectory u;
      u.space = TrajectorySpace::Unit;
      u.width = u.height = 1;
      u.points = {{0.0, 0.0}, {1.0, 0.0}};
      const auto rep = compute_metrics(gs, u, sol, big.goal_bbox, big.render_spec);
      if (std::abs(rep.pr - static_cast<double>(prefix) / n) > 1e-9) ++pr_bad;
    }
    if (pr_bad) {
      o.pass = false;
      o.detail += std::to_string(pr_bad) + "/1000 PR identity failures; ";
    }
  }
  if (o.pass)
    o.detail = "PR=1/3 pin, SD=0.2 pin, MF=0.5 pin, identity, "
               "PR identity on 1000 random sequences";
  return o;
}

// --- criterion 5: perturbation sensitivity ----------------------------------

Outcome criterion5() {
  Outcome o;
  const auto s = generate_scene(MazeKind::Regular,
                                Difficulty::preset(MazeKind::Regular, Grade::Easy),
                                Skin::builtin("raw", MazeKind::Regular), 4);
  const Solution gt = solve(s);
  Trajectory clean;
  clean.space = TrajectorySpace::Pixel;
  clean.width = s.render_spec.width;
  clean.height = s.render_spec.height;
  clean.points = resample_equidistant(solution_path_px(s, gt), 48);

  // wall-crossing detour through an adjacent blocked cell
  const GridScene& g = s.grid();
  const PathPoint mid = gt.cell_path[gt.cell_path.size() / 2];
  PathPoint wall = mid;
  for (auto [dx, dy] : {std::pair{0, -1}, {0, 1}, {-1, 0}, {1, 0}})
    if (g.blocked(mid.x + dx, mid.y + dy)) {
      wall = {mid.x + dx, mid.y + dy, 0};
      break;
    }
  if (wall == mid) return {false, "no blocked neighbor found for the detour"};
  Trajectory detoured = clean;
  detoured.points.insert(detoured.points.begin() + detoured.points.size() / 2,
                         {s.cell_center_px(mid), s.cell_center_px(wall),
                          s.cell_center_px(mid)});
  const StepSequence dsteps = discretize(detoured, s);
  const auto drep = compute_metrics(dsteps, step_path_trajectory(dsteps, s), gt,
                                    s.goal_bbox, s.render_spec, &detoured);
  const bool detour_ok = drep.em == 0 && drep.sr == 1 && drep.sd && *drep.sd > 0.0;
  if (!detour_ok) {
    o.pass = false;
    o.detail += "wall detour: em=" + std::to_string(drep.em) + " sr=" +
                std::to_string(drep.sr) + " sd=" +
                (drep.sd ? fmt(*drep.sd, 4) : "null") + "; ";
  }

  // truncate the last 20%
  Trajectory cut = clean;
  cut.points.resize(cut.points.size() * 4 / 5);
  const StepSequence csteps = discretize(cut, s);
  const auto crep = compute_metrics(csteps, step_path_trajectory(csteps, s), gt,
                                    s.goal_bbox, s.render_spec, &cut);
  const bool cut_ok = crep.sr == 0 && !crep.sd.has_value();
  if (!cut_ok) {
    o.pass = false;
    o.detail += "truncation: sr=" + std::to_string(crep.sr) + " sd defined=" +
                std::to_string(crep.sd.has_value()) + "; ";
  }
  if (o.pass)
    o.detail = "wall detour EM=0/SR=1/SD=" + fmt(*drep.sd, 3) +
               ", 20% truncation SR=0/SD undefined";
  return o;
}

// --- criterion 6: pass@K behavior --------------------------------------------

Outcome criterion6() {
  Outcome o;
  Rng rng(123);
  const int scenes = 500, max_k = 16;
  std::vector<std::vector<MetricReport>> attempts(max_k);
  for (int a = 0; a < max_k; ++a)
    for (int i = 0; i < scenes; ++i) {
      MetricReport r;
      r.scene_id = "regular_easy_raw_" + std::to_string(100000 + i);
      r.sr = rng.next_bool(0.3) ? 1 : 0;
      r.em = r.sr && rng.next_bool(0.5) ? 1 : 0;
      r.pr = rng.next_double();
      attempts[a].push_back(r);
    }
  const PassKReport rep = compute_passk(attempts, {1, 4, 8, 12, 16});
  double worst = 0.0;
  bool monotone = true;
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    const double want = 1.0 - std::pow(0.7, rep.rows[i].k);
    worst = std::max(worst, std::abs(rep.rows[i].sr_pct / 100.0 - want));
    if (i && (rep.rows[i].sr_pct < rep.rows[i - 1].sr_pct ||
              rep.rows[i].em_pct < rep.rows[i - 1].em_pct ||
              rep.rows[i].pr_pct < rep.rows[i - 1].pr_pct))
      monotone = false;
  }
  o.pass = worst <= 0.05 && monotone;
  o.detail = "max |pass@K - (1-0.7^K)| = " + fmt(worst, 4) +
             (monotone ? ", monotone in K" : ", NOT monotone");
  return o;
}

// --- criterion 7: action-verifier fidelity -----------------------------------

Outcome criterion7() {
  Outcome o;
  const auto scenes = enumerate_dataset(DatasetSpec{});
  std::atomic<int> solutions{0}, failures{0};
  parallel_for(scenes.size(), worker_count(), [&](std::size_t i) {
    const SceneInstance& s = scenes[i];
    for (const Solution& sol : solve_all_shortest(s, 16)) {
      ActionScript script;
      script.actions = sol.actions;
      const SimResult r = simulate(s, script);
      ++solutions;
      if (r.terminal != Terminal::GoalReached || r.illegal_index != -1)
        ++failures;
    }
  });
  if (failures) {
    o.pass = false;
    o.detail += std::to_string(failures.load()) + " GT replays failed; ";
  }

  // malformed scripts: zero-score reports, never exceptions
  const auto s = open_grid(5, 5, {0, 0, 0}, {4, 4, 0});
  Manifest m{s, solve_all_shortest(s, 16)};
  int crashes = 0, nonzero = 0;
  for (const char* bad :
       {"", "{", "[1,2,3]", R"({"path":"up"})", R"({"path":[1,2]})",
        R"({"path":["teleport"]})", "\xff\xfe garbage", R"({"route":[]})"}) {
    try {
      const MetricReport rep = score_script(m, bad);
      if (rep.em != 0 || rep.sr != 0 || rep.pr != 0.0 || rep.error.empty())
        ++nonzero;
    } catch (...) {
      ++crashes;
    }
  }
  if (crashes || nonzero) {
    o.pass = false;
    o.detail += std::to_string(crashes) + " crashes / " +
                std::to_string(nonzero) + " non-zero reports on malformed input";
  }
  if (o.pass)
    o.detail = std::to_string(solutions.load()) +
               " GT solutions replayed to the goal across all " +
               std::to_string(scenes.size()) +
               " instances; malformed scripts score zero without crashing";
  return o;
}

// --- criterion 8: judge client contract ---------------------------------------

Outcome criterion8() {
  Outcome o;
  const char* all_ones =
      R"({"motion_continuity":1,"temporal_consistency":1,"trajectory_rationality":1,)"
      R"("structural_consistency":1,"interactional_rationality":1})";
  const auto s = generate_scene(MazeKind::Trapfield,
                                Difficulty::preset(MazeKind::Trapfield, Grade::Easy),
                                Skin::builtin("raw", MazeKind::Trapfield), 7);
  Manifest m{s, solve_all_shortest(s, 16)};
  const auto video = render_solution_video(s, m.gt_solutions.front());
  JudgeConfig cfg;
  cfg.backoff_ms = 1;

  MockJudgeBackend ones({all_ones});
  const MetricReport good = evaluate_video(m, video, "", &ones, cfg);
  if (!good.vlm_score || *good.vlm_score != 5) {
    o.pass = false;
    o.detail += "all-ones mock gave vlm_score " +
                (good.vlm_score ? std::to_string(*good.vlm_score)
                                : std::string("null")) +
                " (want 5); ";
  }

  MockJudgeBackend down({all_ones}, 99);  // transport always fails
  const MetricReport failed = evaluate_video(m, video, "", &down, cfg);
  if (failed.vlm_score.has_value()) {
    o.pass = false;
    o.detail += "transport failure produced a vlm_score instead of null; ";
  }
  if (failed.sr != 1) {
    o.pass = false;
    o.detail += "judge outage must not break the geometric metrics; ";
  }

  const BatchReport agg = aggregate({good, failed});
  const AggregateRow& row = agg.aggregates.front();
  if (row.vlm_count != 1 || !row.mean_vlm ||
      std::abs(*row.mean_vlm - 5.0) > 1e-9) {
    o.pass = false;
    o.detail += "aggregate counted null vlm_scores (count=" +
                std::to_string(row.vlm_count) + ")";
  }
  if (o.pass)
    o.detail = "all-ones mock -> 5; transport failure -> null vlm_score, "
               "excluded from aggregates";
  return o;
}

}  // namespace

int main() {
  const struct {
    const char* name;
    Outcome (*fn)();
  } criteria[] = {
      {"dataset constants & generation runtime", criterion1},
      {"round-trip self-consistency", criterion2},
      {"solver optimality oracle", criterion3},
      {"metric formula suite", criterion4},
      {"perturbation sensitivity", criterion5},
      {"pass@K behavior", criterion6},
      {"action-verifier fidelity", criterion7},
      {"judge client contract", criterion8},
  };
  int failures = 0;
  int n = 0;
  for (const auto& c : criteria) {
    ++n;
    Outcome o;
    try {
      o = c.fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failures;
    std::printf("criterion %d (%s): %s — %s\n", n, c.name,
                o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
