#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "mazebench/batch.hpp"
#include "mazebench/config.hpp"
#include "mazebench/render.hpp"

namespace fs = std::filesystem;
using namespace mazebench;

namespace {

// Exit codes: 0 success, 2 partial (some instances failed), 1 fatal.
constexpr int kOk = 0;
constexpr int kFatal = 1;
constexpr int kPartial = 2;

struct CommonFlags {
  std::string config_path;
  std::string out_dir;
  std::vector<std::string> kinds, difficulties, skins;
  long long seed = -1;
  int jobs = -1;
  int count = -1;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_path, "TOML or JSON config file");
  cmd->add_option("--out", f.out_dir, "output directory");
  cmd->add_option("--seed", f.seed, "base seed override");
  cmd->add_option("--jobs", f.jobs, "worker threads (0 = all cores)");
  cmd->add_option("--kinds", f.kinds,
                  "maze kinds (regular irregular trapfield sokoban maze3d)");
  cmd->add_option("--difficulties", f.difficulties,
                  "difficulty grades (easy medium hard)");
  cmd->add_option("--skins", f.skins, "skin ids (raw checker noise)");
  cmd->add_option("--count", f.count, "instances per (kind, grade, skin) cell");
}

RunConfig resolve(const CommonFlags& f) {
  RunConfig cfg;
  if (!f.config_path.empty()) cfg = load_config(f.config_path);
  if (!f.out_dir.empty()) cfg.out_dir = f.out_dir;
  if (f.seed >= 0) cfg.dataset.base_seed = static_cast<std::uint64_t>(f.seed);
  if (f.jobs >= 0) cfg.jobs = f.jobs;
  if (f.count >= 0) cfg.dataset.count_per_cell = f.count;
  if (!f.kinds.empty()) {
    cfg.dataset.kinds.clear();
    for (const std::string& s : f.kinds)
      cfg.dataset.kinds.push_back(maze_kind_from_string(s));
  }
  if (!f.difficulties.empty()) {
    cfg.dataset.grades.clear();
    for (const std::string& s : f.difficulties)
      cfg.dataset.grades.push_back(grade_from_string(s));
  }
  if (!f.skins.empty()) cfg.dataset.skins = f.skins;
  return cfg;
}

void snapshot(const RunConfig& cfg) {
  fs::create_directories(cfg.out_dir);
  write_resolved_config(cfg, (fs::path(cfg.out_dir) / "resolved_config.toml").string());
}

std::unique_ptr<JudgeBackend> make_backend(const std::string& name,
                                           const std::string& model) {
  if (name == "mock")
    return std::make_unique<MockJudgeBackend>(std::vector<std::string>{
        R"({"motion_continuity":1,"temporal_consistency":1,)"
        R"("trajectory_rationality":1,"structural_consistency":1,)"
        R"("interactional_rationality":1})"});
  if (name == "http") {
    auto b = HttpJudgeBackend::from_env();
    if (!model.empty())
      b = std::make_unique<HttpJudgeBackend>(std::getenv("JUDGE_ENDPOINT"),
                                             std::getenv("JUDGE_API_KEY")
                                                 ? std::getenv("JUDGE_API_KEY")
                                                 : "",
                                             model);
    return b;
  }
  throw ConfigError("unknown judge backend: " + name + " (use mock or http)");
}

void print_summary(const BatchReport& rep) {
  int errors = 0;
  for (const MetricReport& r : rep.per_instance)
    if (!r.error.empty()) ++errors;
  std::cout << rep.per_instance.size() << " instances, " << errors
            << " with errors\n";
  for (const AggregateRow& a : rep.aggregates) {
    std::cout << "  " << a.kind << "/" << a.grade << "/" << a.skin << " n="
              << a.count << " EM=" << a.em_pct << " SR=" << a.sr_pct
              << " PR=" << a.pr_pct;
    if (a.mean_sd) std::cout << " SD=" << *a.mean_sd;
    if (a.mean_mf) std::cout << " MF=" << *a.mean_mf;
    if (a.mean_vlm) std::cout << " VLM=" << *a.mean_vlm;
    std::cout << "\n";
  }
}

int batch_exit_code(const BatchReport& rep) {
  int errors = 0;
  for (const MetricReport& r : rep.per_instance)
    if (!r.error.empty()) ++errors;
  if (errors == 0) return kOk;
  return errors == static_cast<int>(rep.per_instance.size()) ? kFatal : kPartial;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Procedural maze benchmark toolkit"};
  app.require_subcommand(1);

  CommonFlags flags;

  auto* gen = app.add_subcommand("generate", "Generate manifests and GT videos");
  add_common(gen, flags);
  bool no_videos = false;
  gen->add_flag("--no-videos", no_videos, "write manifests only");

  auto* eval = app.add_subcommand("evaluate", "Score rollout frame directories");
  add_common(eval, flags);
  std::string dataset_dir, rollout_dir, judge_name = "none";
  eval->add_option("--dataset", dataset_dir, "generated dataset directory")->required();
  eval->add_option("--rollouts", rollout_dir, "directory of rollout frame dirs")->required();
  bool no_overlays = false;
  eval->add_flag("--no-overlays", no_overlays, "skip diagnostic overlays");
  eval->add_option("--judge", judge_name, "vlm judge backend: none, mock, http");

  auto* verify = app.add_subcommand("verify-actions",
                                    "Score textual action scripts (JSONL)");
  add_common(verify, flags);
  std::string jsonl_in;
  verify->add_option("--dataset", dataset_dir, "generated dataset directory")->required();
  verify->add_option("--in", jsonl_in, "JSONL of {scene_id, response_text}")->required();

  auto* judge_cmd = app.add_subcommand("judge", "Judge one video via the VLM protocol");
  add_common(judge_cmd, flags);
  std::string video_dir, judge_backend = "mock", judge_model;
  judge_cmd->add_option("--video", video_dir, "frame directory")->required();
  judge_cmd->add_option("--backend", judge_backend, "mock or http");
  judge_cmd->add_option("--model", judge_model, "judge model name (http)");

  auto* passk_cmd = app.add_subcommand("passk", "Best-of-K aggregation");
  add_common(passk_cmd, flags);
  std::vector<std::string> attempt_dirs;
  std::vector<int> k_values;
  passk_cmd->add_option("--attempts", attempt_dirs,
                        "attempt dirs (rollouts, or prior evaluate outputs)")
      ->required();
  passk_cmd->add_option("--dataset", dataset_dir,
                        "dataset dir (needed when attempts are raw rollouts)");
  passk_cmd->add_option("--k", k_values, "K values (default 1 4 8 12 16)");

  auto* report_cmd = app.add_subcommand("report", "Emit tables and plots");
  add_common(report_cmd, flags);
  std::string batch_path, baseline_path;
  report_cmd->add_option("--batch", batch_path, "batch_report.json")->required();
  report_cmd->add_option("--baseline", baseline_path,
                         "second batch_report.json for delta columns");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      RunConfig cfg = resolve(flags);
      if (no_videos) cfg.videos = false;
      snapshot(cfg);
      GenerateResult res =
          run_generate(cfg.dataset, cfg.out_dir, cfg.jobs, cfg.videos);
      std::cout << "generated " << res.instances << " instances, "
                << res.failures << " failures\n";
      for (const std::string& e : res.errors) std::cerr << "  " << e << "\n";
      if (res.failures == 0) return kOk;
      return res.instances > 0 ? kPartial : kFatal;
    }

    if (eval->parsed()) {
      RunConfig cfg = resolve(flags);
      if (cfg.out_dir == "out" && flags.out_dir.empty()) cfg.out_dir = "eval_out";
      snapshot(cfg);
      EvaluateOptions opt;
      opt.dataset_dir = dataset_dir;
      opt.rollout_dir = rollout_dir;
      opt.out_dir = cfg.out_dir;
      opt.jobs = cfg.jobs;
      opt.write_overlays = cfg.overlays && !no_overlays;
      std::unique_ptr<JudgeBackend> backend;
      if (judge_name != "none") {
        backend = make_backend(judge_name, cfg.judge_model);
        opt.judge = backend.get();
        opt.judge_config.raw_log_dir =
            (fs::path(cfg.out_dir) / cfg.judge_raw_dir).string();
      }
      BatchReport rep = run_evaluate(opt);
      if (rep.per_instance.empty())
        std::cerr << "warning: no rollout directories under " << rollout_dir << "\n";
      print_summary(rep);
      write_report_files(rep, cfg.out_dir);
      return batch_exit_code(rep);
    }

    if (verify->parsed()) {
      RunConfig cfg = resolve(flags);
      if (cfg.out_dir == "out" && flags.out_dir.empty()) cfg.out_dir = "verify_out";
      snapshot(cfg);
      const std::string out_jsonl =
          (fs::path(cfg.out_dir) / "verify_report.jsonl").string();
      BatchReport rep = run_verify_actions(dataset_dir, jsonl_in, out_jsonl);
      std::ofstream batch_out(fs::path(cfg.out_dir) / "batch_report.json");
      batch_out << batch_report_to_json(rep) << "\n";
      print_summary(rep);
      return batch_exit_code(rep);
    }

    if (judge_cmd->parsed()) {
      RunConfig cfg = resolve(flags);
      LoadedVideo video = load_frame_dir(video_dir);
      auto backend = make_backend(judge_backend, judge_model);
      JudgeConfig jc;
      if (!flags.out_dir.empty())
        jc.raw_log_dir = (fs::path(flags.out_dir) / cfg.judge_raw_dir).string();
      RuleDimensions d = judge_video(video.seq, *backend, jc,
                                     default_judge_prompt(), video.scene_id);
      std::cout << "{\"motion_continuity\": " << d.motion_continuity
                << ", \"temporal_consistency\": " << d.temporal_consistency
                << ", \"trajectory_rationality\": " << d.trajectory_rationality
                << ", \"structural_consistency\": " << d.structural_consistency
                << ", \"interactional_rationality\": " << d.interactional_rationality
                << ", \"vlm_score\": " << d.vlm_score() << "}\n";
      return kOk;
    }

    if (passk_cmd->parsed()) {
      RunConfig cfg = resolve(flags);
      if (!k_values.empty()) cfg.k_values = k_values;
      if (cfg.out_dir == "out" && flags.out_dir.empty()) cfg.out_dir = "passk_out";
      snapshot(cfg);
      std::vector<std::vector<MetricReport>> attempts;
      for (std::size_t a = 0; a < attempt_dirs.size(); ++a) {
        const fs::path prior = fs::path(attempt_dirs[a]) / "batch_report.json";
        BatchReport rep;
        if (fs::exists(prior)) {
          rep = load_batch_report(prior.string());
        } else {
          if (dataset_dir.empty())
            throw ConfigError("--dataset is required for raw rollout attempts");
          EvaluateOptions opt;
          opt.dataset_dir = dataset_dir;
          opt.rollout_dir = attempt_dirs[a];
          opt.out_dir =
              (fs::path(cfg.out_dir) / ("attempt_" + std::to_string(a))).string();
          opt.jobs = cfg.jobs;
          opt.write_overlays = false;
          rep = run_evaluate(opt);
        }
        attempts.push_back(std::move(rep.per_instance));
      }
      PassKReport rep = compute_passk(attempts, cfg.k_values);
      const std::string json = passk_report_to_json(rep);
      std::ofstream out(fs::path(cfg.out_dir) / "passk_report.json");
      out << json << "\n";
      std::cout << json << "\n";
      return kOk;
    }

    if (report_cmd->parsed()) {
      RunConfig cfg = resolve(flags);
      if (cfg.out_dir == "out" && flags.out_dir.empty()) cfg.out_dir = "report_out";
      BatchReport rep = load_batch_report(batch_path);
      if (!baseline_path.empty()) {
        BatchReport base = load_batch_report(baseline_path);
        write_report_files(rep, cfg.out_dir, &base);
      } else {
        write_report_files(rep, cfg.out_dir);
      }
      std::cout << "wrote report.md, report.csv and plots to " << cfg.out_dir << "\n";
      return kOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFatal;
  }
  return kFatal;
}
