#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mazebench/actions.hpp"
#include "mazebench/generate.hpp"
#include "mazebench/judge.hpp"
#include "mazebench/metrics.hpp"

namespace mazebench {

class InsufficientAttempts : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Per-(kind, difficulty, skin) summary, recomputable from the instance rows.
struct AggregateRow {
  std::string kind, grade, skin;
  int count = 0;
  int error_count = 0;
  double em_pct = 0.0, sr_pct = 0.0, pr_pct = 0.0;  // means x100
  std::optional<double> mean_sd;   // over rows where SD is defined
  int sd_count = 0;
  std::optional<double> mean_mf;
  int mf_count = 0;
  std::optional<double> mean_vlm;  // nulls excluded, never counted as 0
  int vlm_count = 0;
};

struct BatchReport {
  std::vector<MetricReport> per_instance;
  std::vector<AggregateRow> aggregates;  // sorted by (kind, grade, skin)
};

// Recompute aggregates from the rows; groups parsed from scene ids.
BatchReport aggregate(std::vector<MetricReport> rows);

// "<kind>_<grade>_<skin>_<index>" -> components; false when malformed.
bool split_scene_id(const std::string& scene_id, std::string& kind,
                    std::string& grade, std::string& skin);

std::string metric_report_to_json(const MetricReport& rep);
MetricReport metric_report_from_json(const std::string& text);
std::string batch_report_to_json(const BatchReport& rep);

// Reads the per-instance rows and recomputes the aggregates.
BatchReport batch_report_from_json(const std::string& text);
BatchReport load_batch_report(const std::string& path);

// Runs fn(i) for i in [0, n) on up to `jobs` worker threads pulling from a
// shared counter. jobs <= 1 runs inline. Exceptions propagate.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);

struct GenerateResult {
  int instances = 0;
  int failures = 0;
  std::vector<std::string> errors;
};

using ProgressFn = std::function<void(const std::string& scene_id)>;

// Writes out_dir/manifests/scene_<id>.json and, when render_videos,
// out_dir/videos/<id>/ frame directories. Deterministic in the spec.
GenerateResult run_generate(const DatasetSpec& spec, const std::string& out_dir,
                            int jobs, bool render_videos = true,
                            const ProgressFn& progress = nullptr);

struct EvaluateOptions {
  std::string dataset_dir;  // manifests/ under it, or the flat directory
  std::string rollout_dir;  // one frame directory per scene_id
  std::string out_dir;      // reports + overlays; empty = no files
  int jobs = 1;
  bool write_overlays = true;
  JudgeBackend* judge = nullptr;  // optional vlm_score per video
  JudgeConfig judge_config;
};

// Full tracking pipeline for one rollout video. overlay_path may be empty.
MetricReport evaluate_video(const Manifest& manifest, const FrameSequence& video,
                            const std::string& overlay_path = "",
                            JudgeBackend* judge = nullptr,
                            const JudgeConfig& judge_config = {});

// Batch evaluation; per-instance failures become error rows, the batch
// continues. Writes report_<scene_id>.json per row plus batch_report.json.
BatchReport run_evaluate(const EvaluateOptions& opt);

// JSONL in: {"scene_id": ..., "response_text": ...} per line.
// JSONL out: one MetricReport object per line (written when out path given).
BatchReport run_verify_actions(const std::string& dataset_dir,
                               const std::string& jsonl_in,
                               const std::string& jsonl_out = "");

// Finds the manifest for a scene id under dataset_dir.
Manifest load_manifest_for(const std::string& dataset_dir,
                           const std::string& scene_id);

struct PassKRow {
  int k = 0;
  double em_pct = 0.0, sr_pct = 0.0, pr_pct = 0.0;
  std::optional<double> mean_abs_sd;  // best |SD| among SR=1 attempts
  int sd_count = 0;
};

struct PassKReport {
  std::vector<int> k_values;
  std::vector<PassKRow> rows;  // one per k, same order as k_values
  int scenes = 0;
};

// attempts[a] holds attempt a's per-instance rows; scenes are matched by
// scene_id across attempts and the first K attempts form each pool.
// Throws InsufficientAttempts when a scene has fewer than max(k) attempts.
PassKReport compute_passk(const std::vector<std::vector<MetricReport>>& attempts,
                          const std::vector<int>& k_values);

std::string passk_report_to_json(const PassKReport& rep);

// report.md + report.csv (metric x kind matrices) and SVG line plots of each
// metric against difficulty. `baseline` adds side-by-side delta columns.
void write_report_files(const BatchReport& report, const std::string& out_dir,
                        const BatchReport* baseline = nullptr);

}  // namespace mazebench
