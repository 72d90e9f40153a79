#include "mazebench/batch.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "mazebench/render.hpp"
#include "mazebench/solver.hpp"
#include "mazebench/track.hpp"

namespace fs = std::filesystem;

namespace mazebench {

namespace {

constexpr int kGtCandidateCap = 16;

}  // namespace

bool split_scene_id(const std::string& scene_id, std::string& kind,
                    std::string& grade, std::string& skin) {
  std::vector<std::string> parts;
  std::size_t begin = 0;
  while (true) {
    const std::size_t sep = scene_id.find('_', begin);
    parts.push_back(scene_id.substr(begin, sep - begin));
    if (sep == std::string::npos) break;
    begin = sep + 1;
  }
  if (parts.size() != 4) return false;
  kind = parts[0];
  grade = parts[1];
  skin = parts[2];
  return true;
}

BatchReport aggregate(std::vector<MetricReport> rows) {
  BatchReport rep;
  rep.per_instance = std::move(rows);

  struct Acc {
    int count = 0, errors = 0;
    double em = 0, sr = 0, pr = 0;
    double sd = 0;
    int sd_n = 0;
    double mf = 0;
    int mf_n = 0;
    double vlm = 0;
    int vlm_n = 0;
  };
  std::map<std::tuple<std::string, std::string, std::string>, Acc> groups;
  for (const MetricReport& r : rep.per_instance) {
    std::string kind = "?", grade = "?", skin = "?";
    split_scene_id(r.scene_id, kind, grade, skin);
    Acc& a = groups[{kind, grade, skin}];
    ++a.count;
    if (!r.error.empty()) ++a.errors;
    a.em += r.em;
    a.sr += r.sr;
    a.pr += r.pr;
    if (r.sd) {
      a.sd += *r.sd;
      ++a.sd_n;
    }
    if (r.mf) {
      a.mf += *r.mf;
      ++a.mf_n;
    }
    if (r.vlm_score) {
      a.vlm += *r.vlm_score;
      ++a.vlm_n;
    }
  }
  for (const auto& [key, a] : groups) {
    AggregateRow row;
    std::tie(row.kind, row.grade, row.skin) = key;
    row.count = a.count;
    row.error_count = a.errors;
    row.em_pct = 100.0 * a.em / a.count;
    row.sr_pct = 100.0 * a.sr / a.count;
    row.pr_pct = 100.0 * a.pr / a.count;
    row.sd_count = a.sd_n;
    if (a.sd_n > 0) row.mean_sd = a.sd / a.sd_n;
    row.mf_count = a.mf_n;
    if (a.mf_n > 0) row.mean_mf = a.mf / a.mf_n;
    row.vlm_count = a.vlm_n;
    if (a.vlm_n > 0) row.mean_vlm = a.vlm / a.vlm_n;
    rep.aggregates.push_back(std::move(row));
  }
  return rep;
}

namespace {

nlohmann::ordered_json report_json(const MetricReport& r) {
  nlohmann::ordered_json j;
  j["scene_id"] = r.scene_id;
  j["em"] = r.em;
  j["sr"] = r.sr;
  j["pr"] = r.pr;
  if (r.sd)
    j["sd"] = *r.sd;
  else
    j["sd"] = nullptr;
  if (r.mf)
    j["mf"] = *r.mf;
  else
    j["mf"] = nullptr;
  if (r.vlm_score)
    j["vlm_score"] = *r.vlm_score;
  else
    j["vlm_score"] = nullptr;
  j["matched_gt_index"] = r.matched_gt_index;
  j["diagnostics"] = r.diagnostics;
  j["error"] = r.error;
  return j;
}

MetricReport report_from(const nlohmann::json& j) {
  MetricReport r;
  r.scene_id = j.at("scene_id").get<std::string>();
  r.em = j.at("em").get<int>();
  r.sr = j.at("sr").get<int>();
  r.pr = j.at("pr").get<double>();
  if (j.contains("sd") && !j["sd"].is_null()) r.sd = j["sd"].get<double>();
  if (j.contains("mf") && !j["mf"].is_null()) r.mf = j["mf"].get<double>();
  if (j.contains("vlm_score") && !j["vlm_score"].is_null())
    r.vlm_score = j["vlm_score"].get<int>();
  if (j.contains("matched_gt_index")) r.matched_gt_index = j["matched_gt_index"].get<int>();
  if (j.contains("diagnostics")) r.diagnostics = j["diagnostics"].get<std::string>();
  if (j.contains("error")) r.error = j["error"].get<std::string>();
  return r;
}

}  // namespace

std::string metric_report_to_json(const MetricReport& rep) {
  return report_json(rep).dump(2);
}

MetricReport metric_report_from_json(const std::string& text) {
  return report_from(nlohmann::json::parse(text));
}

std::string batch_report_to_json(const BatchReport& rep) {
  nlohmann::ordered_json j;
  j["per_instance"] = nlohmann::ordered_json::array();
  for (const MetricReport& r : rep.per_instance)
    j["per_instance"].push_back(report_json(r));
  j["aggregates"] = nlohmann::ordered_json::array();
  for (const AggregateRow& a : rep.aggregates) {
    nlohmann::ordered_json row;
    row["kind"] = a.kind;
    row["difficulty"] = a.grade;
    row["skin"] = a.skin;
    row["count"] = a.count;
    row["error_count"] = a.error_count;
    row["em_pct"] = a.em_pct;
    row["sr_pct"] = a.sr_pct;
    row["pr_pct"] = a.pr_pct;
    row["mean_sd"] = a.mean_sd ? nlohmann::ordered_json(*a.mean_sd)
                               : nlohmann::ordered_json(nullptr);
    row["sd_count"] = a.sd_count;
    row["mean_mf"] = a.mean_mf ? nlohmann::ordered_json(*a.mean_mf)
                               : nlohmann::ordered_json(nullptr);
    row["mf_count"] = a.mf_count;
    row["mean_vlm"] = a.mean_vlm ? nlohmann::ordered_json(*a.mean_vlm)
                                 : nlohmann::ordered_json(nullptr);
    row["vlm_count"] = a.vlm_count;
    j["aggregates"].push_back(std::move(row));
  }
  return j.dump(2);
}

BatchReport batch_report_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ManifestError(std::string("batch report malformed: ") + e.what());
  }
  std::vector<MetricReport> rows;
  for (const auto& r : j.at("per_instance")) rows.push_back(report_from(r));
  return aggregate(std::move(rows));
}

BatchReport load_batch_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ManifestError("cannot open batch report: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return batch_report_from_json(ss.str());
}

void parallel_for(std::size_t n, int jobs,
                  const std::function<void(std::size_t)>& fn) {
  if (jobs <= 0) jobs = static_cast<int>(std::thread::hardware_concurrency());
  if (jobs <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex err_mutex;
  std::exception_ptr error;
  auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!error) error = std::current_exception();
        next.store(n);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const int workers = static_cast<int>(std::min<std::size_t>(jobs, n));
  for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

GenerateResult run_generate(const DatasetSpec& spec, const std::string& out_dir,
                            int jobs, bool render_videos,
                            const ProgressFn& progress) {
  struct Cell {
    MazeKind kind;
    Grade grade;
    std::string skin_id;
    int item;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  std::uint64_t index = 0;
  for (MazeKind kind : spec.kinds)
    for (Grade grade : spec.grades)
      for (const std::string& skin_id : spec.skins)
        for (int i = 0; i < spec.count_per_cell; ++i, ++index)
          cells.push_back({kind, grade, skin_id, i, spec.base_seed + index});

  const fs::path manifests = fs::path(out_dir) / "manifests";
  const fs::path videos = fs::path(out_dir) / "videos";
  fs::create_directories(manifests);
  if (render_videos) fs::create_directories(videos);

  GenerateResult result;
  std::mutex mutex;
  parallel_for(cells.size(), jobs, [&](std::size_t ci) {
    const Cell& c = cells[ci];
    const std::string scene_id = make_scene_id(c.kind, c.grade, c.skin_id, c.item);
    try {
      const Skin skin = Skin::builtin(c.skin_id, c.kind);
      const Difficulty diff = Difficulty::preset(c.kind, c.grade);
      SceneInstance scene = generate_scene(c.kind, diff, skin, c.seed, spec.render);
      scene.scene_id = scene_id;

      Manifest m;
      m.gt_solutions = solve_all_shortest(scene, kGtCandidateCap);
      m.scene = std::move(scene);
      write_manifest(m, (manifests / ("scene_" + scene_id + ".json")).string());

      if (render_videos) {
        FrameSequence seq = render_solution_video(m.scene, m.gt_solutions.front());
        write_frame_dir(seq, scene_id, (videos / scene_id).string());
      }
      std::lock_guard<std::mutex> lock(mutex);
      ++result.instances;
      if (progress) progress(scene_id);
    } catch (const std::exception& e) {
      std::lock_guard<std::mutex> lock(mutex);
      ++result.failures;
      result.errors.push_back(scene_id + ": " + e.what());
    }
  });
  return result;
}

Manifest load_manifest_for(const std::string& dataset_dir,
                           const std::string& scene_id) {
  const std::string name = "scene_" + scene_id + ".json";
  for (const fs::path p : {fs::path(dataset_dir) / "manifests" / name,
                           fs::path(dataset_dir) / name}) {
    if (fs::exists(p)) return load_manifest(p.string());
  }
  throw ManifestError("no manifest for scene " + scene_id + " under " + dataset_dir);
}

MetricReport evaluate_video(const Manifest& manifest, const FrameSequence& video,
                            const std::string& overlay_path, JudgeBackend* judge,
                            const JudgeConfig& judge_config) {
  const SceneInstance& scene = manifest.scene;
  MetricReport rep;
  rep.scene_id = scene.scene_id;
  try {
    if (manifest.gt_solutions.empty())
      throw ManifestError("manifest carries no ground-truth solutions");

    Trajectory traj = track(video, scene.start_bbox);
    StepSequence steps = discretize(traj, scene);
    // L_gen from the snapped step path: raw tracker chords cut corners, which
    // biases length comparisons against the rendered-geometry GT lengths.
    Trajectory step_traj = step_path_trajectory(steps, scene);
    rep.matched_gt_index = select_gt(step_traj, manifest.gt_solutions);
    const Solution& gt = manifest.gt_solutions[rep.matched_gt_index];

    std::vector<Trajectory> moving{traj};
    std::optional<Trajectory> box_traj;
    if (scene.kind == MazeKind::Sokoban && scene.box_bbox) {
      box_traj = track(video, *scene.box_bbox);
      moving.push_back(*box_traj);
    }

    MetricReport scored =
        compute_metrics(steps, step_traj, gt, scene.goal_bbox,
                        scene.render_spec, box_traj ? &*box_traj : &traj);
    rep.em = scored.em;
    rep.sr = scored.sr;
    rep.pr = scored.pr;
    rep.sd = scored.sd;

    const double agent_radius = 0.3 * scene.cell_px();
    rep.mf = maze_fidelity(video, moving, kMfSamples, kMfTau, 2.0 * agent_radius);

    if (!overlay_path.empty()) {
      Trajectory gt_traj;
      gt_traj.space = TrajectorySpace::Pixel;
      gt_traj.width = scene.render_spec.width;
      gt_traj.height = scene.render_spec.height;
      gt_traj.points = solution_path_px(scene, gt);
      Image overlay = render_overlay(video.frames.front(), traj, gt_traj,
                                     scene.start_bbox, scene.goal_bbox);
      write_png(overlay, overlay_path);
      rep.diagnostics = overlay_path;
    }

    if (judge) {
      try {
        rep.vlm_score =
            judge_video(video, *judge, judge_config, default_judge_prompt(),
                        scene.scene_id).vlm_score();
      } catch (const std::exception&) {
        rep.vlm_score = std::nullopt;  // excluded from aggregates, never 0
      }
    }
  } catch (const std::exception& e) {
    rep.error = e.what();
  }
  return rep;
}

BatchReport run_evaluate(const EvaluateOptions& opt) {
  std::vector<fs::path> rollouts;
  if (fs::exists(opt.rollout_dir))
    for (const auto& entry : fs::directory_iterator(opt.rollout_dir))
      if (entry.is_directory()) rollouts.push_back(entry.path());
  std::sort(rollouts.begin(), rollouts.end());

  if (!opt.out_dir.empty()) fs::create_directories(opt.out_dir);

  std::vector<MetricReport> rows(rollouts.size());
  parallel_for(rollouts.size(), opt.jobs, [&](std::size_t i) {
    const std::string fallback_id = rollouts[i].filename().string();
    MetricReport& rep = rows[i];
    try {
      LoadedVideo video = load_frame_dir(rollouts[i].string());
      const std::string scene_id =
          video.scene_id.empty() ? fallback_id : video.scene_id;
      Manifest manifest = load_manifest_for(opt.dataset_dir, scene_id);
      std::string overlay;
      if (!opt.out_dir.empty() && opt.write_overlays)
        overlay = (fs::path(opt.out_dir) / ("overlay_" + scene_id + ".png")).string();
      rep = evaluate_video(manifest, video.seq, overlay, opt.judge,
                           opt.judge_config);
    } catch (const std::exception& e) {
      rep.scene_id = fallback_id;
      rep.error = e.what();
    }
    if (!opt.out_dir.empty()) {
      std::ofstream out(fs::path(opt.out_dir) /
                        ("report_" + rep.scene_id + ".json"));
      out << metric_report_to_json(rep) << "\n";
    }
  });

  BatchReport report = aggregate(std::move(rows));
  if (!opt.out_dir.empty()) {
    std::ofstream out(fs::path(opt.out_dir) / "batch_report.json");
    out << batch_report_to_json(report) << "\n";
  }
  return report;
}

BatchReport run_verify_actions(const std::string& dataset_dir,
                               const std::string& jsonl_in,
                               const std::string& jsonl_out) {
  std::ifstream in(jsonl_in);
  if (!in) throw ManifestError("cannot open responses file: " + jsonl_in);

  std::vector<MetricReport> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    MetricReport rep;
    try {
      const nlohmann::json j = nlohmann::json::parse(line);
      rep.scene_id = j.at("scene_id").get<std::string>();
      const std::string text = j.at("response_text").get<std::string>();
      Manifest manifest = load_manifest_for(dataset_dir, rep.scene_id);
      rep = score_script(manifest, text);
    } catch (const std::exception& e) {
      if (rep.scene_id.empty())
        rep.scene_id = "line_" + std::to_string(line_no);
      rep.error = e.what();
    }
    rows.push_back(std::move(rep));
  }

  if (!jsonl_out.empty()) {
    fs::path out_path(jsonl_out);
    if (out_path.has_parent_path()) fs::create_directories(out_path.parent_path());
    std::ofstream out(out_path);
    for (const MetricReport& r : rows) out << report_json(r).dump() << "\n";
  }
  return aggregate(std::move(rows));
}

PassKReport compute_passk(const std::vector<std::vector<MetricReport>>& attempts,
                          const std::vector<int>& k_values) {
  PassKReport rep;
  rep.k_values = k_values;
  if (k_values.empty()) return rep;
  const int max_k = *std::max_element(k_values.begin(), k_values.end());

  // scene_id -> rows ordered by attempt index
  std::map<std::string, std::vector<const MetricReport*>> pools;
  std::vector<std::string> order;
  for (const auto& attempt : attempts)
    for (const MetricReport& r : attempt) {
      auto [it, fresh] = pools.try_emplace(r.scene_id);
      if (fresh) order.push_back(r.scene_id);
      it->second.push_back(&r);
    }
  for (const std::string& id : order)
    if (static_cast<int>(pools[id].size()) < max_k)
      throw InsufficientAttempts("scene " + id + " has " +
                                 std::to_string(pools[id].size()) +
                                 " attempts, need " + std::to_string(max_k));
  rep.scenes = static_cast<int>(order.size());

  for (int k : k_values) {
    PassKRow row;
    row.k = k;
    if (order.empty()) {
      rep.rows.push_back(row);
      continue;
    }
    double em = 0, sr = 0, pr = 0, sd = 0;
    int sd_n = 0;
    for (const std::string& id : order) {
      const auto& pool = pools[id];
      int best_em = 0, best_sr = 0;
      double best_pr = 0;
      std::optional<double> best_abs_sd;
      for (int a = 0; a < k; ++a) {
        const MetricReport& r = *pool[a];
        best_em = std::max(best_em, r.em);
        best_sr = std::max(best_sr, r.sr);
        best_pr = std::max(best_pr, r.pr);
        if (r.sr == 1 && r.sd) {
          const double abs_sd = std::abs(*r.sd);
          if (!best_abs_sd || abs_sd < *best_abs_sd) best_abs_sd = abs_sd;
        }
      }
      em += best_em;
      sr += best_sr;
      pr += best_pr;
      if (best_abs_sd) {
        sd += *best_abs_sd;
        ++sd_n;
      }
    }
    const double n = static_cast<double>(order.size());
    row.em_pct = 100.0 * em / n;
    row.sr_pct = 100.0 * sr / n;
    row.pr_pct = 100.0 * pr / n;
    row.sd_count = sd_n;
    if (sd_n > 0) row.mean_abs_sd = sd / sd_n;
    rep.rows.push_back(row);
  }
  return rep;
}

std::string passk_report_to_json(const PassKReport& rep) {
  nlohmann::ordered_json j;
  j["scenes"] = rep.scenes;
  j["rows"] = nlohmann::ordered_json::array();
  for (const PassKRow& r : rep.rows) {
    nlohmann::ordered_json row;
    row["k"] = r.k;
    row["em_pct"] = r.em_pct;
    row["sr_pct"] = r.sr_pct;
    row["pr_pct"] = r.pr_pct;
    row["mean_abs_sd"] = r.mean_abs_sd ? nlohmann::ordered_json(*r.mean_abs_sd)
                                       : nlohmann::ordered_json(nullptr);
    row["sd_count"] = r.sd_count;
    j["rows"].push_back(std::move(row));
  }
  return j.dump(2);
}

namespace {

struct KindSummary {
  int count = 0;
  double em = 0, sr = 0, pr = 0;
  double sd = 0;
  int sd_n = 0;
  double mf = 0;
  int mf_n = 0;
  double vlm = 0;
  int vlm_n = 0;
};

// weighted roll-up of aggregate rows by a key extractor
template <typename KeyFn>
std::map<std::string, KindSummary> roll_up(const BatchReport& rep, KeyFn key) {
  std::map<std::string, KindSummary> out;
  for (const AggregateRow& a : rep.aggregates) {
    KindSummary& s = out[key(a)];
    s.count += a.count;
    s.em += a.em_pct / 100.0 * a.count;
    s.sr += a.sr_pct / 100.0 * a.count;
    s.pr += a.pr_pct / 100.0 * a.count;
    if (a.mean_sd) {
      s.sd += *a.mean_sd * a.sd_count;
      s.sd_n += a.sd_count;
    }
    if (a.mean_mf) {
      s.mf += *a.mean_mf * a.mf_count;
      s.mf_n += a.mf_count;
    }
    if (a.mean_vlm) {
      s.vlm += *a.mean_vlm * a.vlm_count;
      s.vlm_n += a.vlm_count;
    }
  }
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", v);
  return buf;
}

std::string fmt3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

std::string metric_value(const KindSummary& s, const std::string& metric) {
  if (s.count == 0) return "-";
  if (metric == "EM") return fmt(100.0 * s.em / s.count);
  if (metric == "SR") return fmt(100.0 * s.sr / s.count);
  if (metric == "PR") return fmt(100.0 * s.pr / s.count);
  if (metric == "SD") return s.sd_n > 0 ? fmt3(s.sd / s.sd_n) : "-";
  if (metric == "MF") return s.mf_n > 0 ? fmt3(s.mf / s.mf_n) : "-";
  if (metric == "VLM") return s.vlm_n > 0 ? fmt3(s.vlm / s.vlm_n) : "-";
  return "-";
}

double metric_number(const KindSummary& s, const std::string& metric) {
  if (s.count == 0) return 0.0;
  if (metric == "EM") return 100.0 * s.em / s.count;
  if (metric == "SR") return 100.0 * s.sr / s.count;
  if (metric == "PR") return 100.0 * s.pr / s.count;
  return 0.0;
}

void write_svg_plot(const std::string& path, const std::string& metric,
                    const std::vector<std::string>& kinds,
                    const std::map<std::string, std::map<std::string, KindSummary>>&
                        by_kind_grade) {
  static const std::vector<std::string> grades = {"easy", "medium", "hard"};
  static const std::vector<std::string> palette = {"#2c7fb8", "#d95f02", "#1b9e77",
                                                   "#7570b3", "#e7298a"};
  const int w = 520, h = 360, ml = 60, mr = 140, mt = 30, mb = 50;
  const int pw = w - ml - mr, ph = h - mt - mb;

  std::ofstream out(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
      << "\" height=\"" << h << "\">\n";
  out << "<rect width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << ml << "\" y=\"20\" font-family=\"sans-serif\" "
         "font-size=\"14\">" << metric << " vs difficulty</text>\n";
  for (int g = 0; g <= 4; ++g) {
    const double y = mt + ph - ph * g / 4.0;
    out << "<line x1=\"" << ml << "\" y1=\"" << y << "\" x2=\"" << ml + pw
        << "\" y2=\"" << y << "\" stroke=\"#dddddd\"/>\n";
    out << "<text x=\"" << ml - 8 << "\" y=\"" << y + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << 25 * g << "</text>\n";
  }
  for (std::size_t gi = 0; gi < grades.size(); ++gi) {
    const double x = ml + pw * gi / (grades.size() - 1.0);
    out << "<text x=\"" << x << "\" y=\"" << mt + ph + 20
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\">" << grades[gi] << "</text>\n";
  }
  for (std::size_t ki = 0; ki < kinds.size(); ++ki) {
    const auto it = by_kind_grade.find(kinds[ki]);
    if (it == by_kind_grade.end()) continue;
    std::string points;
    for (std::size_t gi = 0; gi < grades.size(); ++gi) {
      const auto git = it->second.find(grades[gi]);
      if (git == it->second.end()) continue;
      const double v = metric_number(git->second, metric);
      const double x = ml + pw * gi / (grades.size() - 1.0);
      const double y = mt + ph - ph * v / 100.0;
      points += std::to_string(x) + "," + std::to_string(y) + " ";
    }
    const std::string& color = palette[ki % palette.size()];
    out << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"2\" points=\"" << points << "\"/>\n";
    out << "<text x=\"" << ml + pw + 10 << "\" y=\"" << mt + 16 + 16 * ki
        << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" << color
        << "\">" << kinds[ki] << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace

void write_report_files(const BatchReport& report, const std::string& out_dir,
                        const BatchReport* baseline) {
  fs::create_directories(out_dir);
  static const std::vector<std::string> metrics = {"EM", "SR", "PR",
                                                   "SD", "MF", "VLM"};

  auto by_kind = roll_up(report, [](const AggregateRow& a) { return a.kind; });
  std::map<std::string, KindSummary> base_by_kind;
  if (baseline)
    base_by_kind = roll_up(*baseline, [](const AggregateRow& a) { return a.kind; });

  std::vector<std::string> kinds;
  for (const auto& [k, _] : by_kind) kinds.push_back(k);

  // metric x kind matrix, CSV and Markdown
  {
    std::ofstream csv(fs::path(out_dir) / "report.csv");
    csv << "metric";
    for (const std::string& k : kinds) {
      csv << "," << k;
      if (baseline) csv << "," << k << "_delta";
    }
    csv << "\n";
    for (const std::string& m : metrics) {
      csv << m;
      for (const std::string& k : kinds) {
        csv << "," << metric_value(by_kind[k], m);
        if (baseline) {
          const auto it = base_by_kind.find(k);
          if (it != base_by_kind.end() && by_kind[k].count > 0 &&
              (m == "EM" || m == "SR" || m == "PR"))
            csv << ","
                << fmt(metric_number(by_kind[k], m) -
                       metric_number(it->second, m));
          else
            csv << ",-";
        }
      }
      csv << "\n";
    }
  }
  {
    std::ofstream md(fs::path(out_dir) / "report.md");
    md << "# Batch report\n\n";
    md << "| metric |";
    for (const std::string& k : kinds) {
      md << " " << k << " |";
      if (baseline) md << " " << k << " delta |";
    }
    md << "\n|---|";
    for (std::size_t i = 0; i < kinds.size() * (baseline ? 2 : 1); ++i) md << "---|";
    md << "\n";
    for (const std::string& m : metrics) {
      md << "| " << m << " |";
      for (const std::string& k : kinds) {
        md << " " << metric_value(by_kind[k], m) << " |";
        if (baseline) {
          const auto it = base_by_kind.find(k);
          if (it != base_by_kind.end() && by_kind[k].count > 0 &&
              (m == "EM" || m == "SR" || m == "PR"))
            md << " "
               << fmt(metric_number(by_kind[k], m) -
                      metric_number(it->second, m))
               << " |";
          else
            md << " - |";
        }
      }
      md << "\n";
    }
    md << "\nRows: EM/SR/PR are percentages; SD, MF, VLM are means over the "
          "instances where they are defined.\n";
  }

  // per-(kind, grade) roll-up for the difficulty plots
  std::map<std::string, std::map<std::string, KindSummary>> by_kind_grade;
  for (const AggregateRow& a : report.aggregates) {
    BatchReport one;
    one.aggregates.push_back(a);
    auto rolled = roll_up(one, [](const AggregateRow& r) { return r.grade; });
    for (auto& [grade, s] : rolled) {
      KindSummary& dst = by_kind_grade[a.kind][grade];
      dst.count += s.count;
      dst.em += s.em;
      dst.sr += s.sr;
      dst.pr += s.pr;
    }
  }
  for (const std::string& m : {std::string("EM"), std::string("SR"), std::string("PR")})
    write_svg_plot((fs::path(out_dir) / ("plot_" + m + ".svg")).string(), m,
                   kinds, by_kind_grade);
}

}  // namespace mazebench
