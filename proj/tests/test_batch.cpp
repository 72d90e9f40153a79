#include <atomic>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "json.hpp"
#include "mazebench/batch.hpp"
#include "mazebench/config.hpp"
#include "mazebench/rng.hpp"

using namespace mazebench;
namespace fs = std::filesystem;

namespace {

MetricReport row(const std::string& id, int em, int sr, double pr,
                 std::optional<double> sd = std::nullopt,
                 std::optional<double> mf = std::nullopt,
                 std::optional<int> vlm = std::nullopt) {
  MetricReport r;
  r.scene_id = id;
  r.em = em;
  r.sr = sr;
  r.pr = pr;
  r.sd = sd;
  r.mf = mf;
  r.vlm_score = vlm;
  return r;
}

}  // namespace

TEST_CASE("scene ids split into their components") {
  std::string k, g, s;
  REQUIRE(split_scene_id("maze3d_medium_noise_000007", k, g, s));
  CHECK(k == "maze3d");
  CHECK(g == "medium");
  CHECK(s == "noise");
  CHECK(!split_scene_id("only_two_parts", k, g, s));
  CHECK(!split_scene_id("", k, g, s));
}

TEST_CASE("aggregate groups rows and excludes null metrics") {
  std::vector<MetricReport> rows{
      row("regular_easy_raw_000000", 1, 1, 1.0, 0.0, 1.0, 5),
      row("regular_easy_raw_000001", 0, 1, 0.5, 0.2, 0.9, std::nullopt),
      row("regular_easy_raw_000002", 0, 0, 0.0, std::nullopt, 0.8, 3),
      row("sokoban_hard_noise_000000", 1, 1, 1.0, 0.0, 1.0, std::nullopt),
  };
  const BatchReport rep = aggregate(rows);
  REQUIRE(rep.aggregates.size() == 2);
  const AggregateRow& reg = rep.aggregates[0].kind == "regular"
                                ? rep.aggregates[0]
                                : rep.aggregates[1];
  CHECK(reg.count == 3);
  CHECK(reg.em_pct == doctest::Approx(100.0 / 3.0));
  CHECK(reg.sr_pct == doctest::Approx(200.0 / 3.0));
  CHECK(reg.pr_pct == doctest::Approx(50.0));
  REQUIRE(reg.mean_sd.has_value());
  CHECK(reg.sd_count == 2);  // the SR=0 row is excluded
  CHECK(*reg.mean_sd == doctest::Approx(0.1));
  // vlm nulls are excluded from the mean, never counted as zero
  CHECK(reg.vlm_count == 2);
  REQUIRE(reg.mean_vlm.has_value());
  CHECK(*reg.mean_vlm == doctest::Approx(4.0));
}

TEST_CASE("metric reports round-trip through json including nulls") {
  MetricReport r = row("trapfield_easy_raw_000004", 0, 0, 0.25);
  r.error = "track failed";
  r.matched_gt_index = 2;
  const MetricReport back = metric_report_from_json(metric_report_to_json(r));
  CHECK(back.scene_id == r.scene_id);
  CHECK(back.em == 0);
  CHECK(back.pr == doctest::Approx(0.25));
  CHECK(!back.sd.has_value());
  CHECK(!back.mf.has_value());
  CHECK(!back.vlm_score.has_value());
  CHECK(back.matched_gt_index == 2);
  CHECK(back.error == "track failed");
}

TEST_CASE("batch reports round-trip and recompute their aggregates") {
  std::vector<MetricReport> rows{row("regular_easy_raw_000000", 1, 1, 1.0, 0.0),
                                 row("regular_easy_raw_000001", 0, 1, 0.5, 0.4)};
  const BatchReport rep = aggregate(rows);
  const BatchReport back = batch_report_from_json(batch_report_to_json(rep));
  REQUIRE(back.per_instance.size() == 2);
  REQUIRE(back.aggregates.size() == 1);
  CHECK(back.aggregates[0].em_pct == doctest::Approx(rep.aggregates[0].em_pct));
  CHECK(back.aggregates[0].sd_count == 2);
}

TEST_CASE("parallel_for covers the range exactly once and propagates errors") {
  std::vector<std::atomic<int>> hits(500);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i]++; });
  for (const auto& h : hits) CHECK(h.load() == 1);

  CHECK_THROWS_AS(parallel_for(10, 4,
                               [](std::size_t i) {
                                 if (i == 7) throw std::runtime_error("boom");
                               }),
                  std::runtime_error);
}

TEST_CASE("pass@k takes the best of the first K attempts") {
  // two scenes, two attempts: scene A fails then succeeds, scene B always fails
  std::vector<std::vector<MetricReport>> attempts(2);
  attempts[0] = {row("regular_easy_raw_000000", 0, 0, 0.2),
                 row("regular_easy_raw_000001", 0, 0, 0.0)};
  attempts[1] = {row("regular_easy_raw_000000", 0, 1, 0.6, 0.3),
                 row("regular_easy_raw_000001", 0, 0, 0.1)};
  const PassKReport rep = compute_passk(attempts, {1, 2});
  REQUIRE(rep.rows.size() == 2);
  CHECK(rep.scenes == 2);
  CHECK(rep.rows[0].k == 1);
  CHECK(rep.rows[0].sr_pct == doctest::Approx(0.0));  // K=1 = attempt #1
  CHECK(rep.rows[1].sr_pct == doctest::Approx(50.0));
  CHECK(rep.rows[1].pr_pct == doctest::Approx((0.6 + 0.1) / 2 * 100));
  REQUIRE(rep.rows[1].mean_abs_sd.has_value());
  CHECK(*rep.rows[1].mean_abs_sd == doctest::Approx(0.3));

  SUBCASE("too few attempts for max(k) throws") {
    CHECK_THROWS_AS(compute_passk(attempts, {1, 4}), InsufficientAttempts);
  }
}

TEST_CASE("pass@k is non-decreasing in K on random pools") {
  Rng rng(21);
  std::vector<std::vector<MetricReport>> attempts(16);
  for (int a = 0; a < 16; ++a)
    for (int s = 0; s < 40; ++s) {
      const int sr = rng.next_bool(0.4) ? 1 : 0;
      attempts[a].push_back(row("regular_easy_raw_" + std::to_string(100000 + s),
                                sr && rng.next_bool(0.5) ? 1 : 0, sr,
                                rng.next_double(),
                                sr ? std::optional<double>(rng.next_double())
                                   : std::nullopt));
    }
  const PassKReport rep = compute_passk(attempts, {1, 4, 8, 12, 16});
  for (std::size_t i = 1; i < rep.rows.size(); ++i) {
    CHECK(rep.rows[i].em_pct >= rep.rows[i - 1].em_pct);
    CHECK(rep.rows[i].sr_pct >= rep.rows[i - 1].sr_pct);
    CHECK(rep.rows[i].pr_pct >= rep.rows[i - 1].pr_pct);
  }
}

TEST_CASE("pass@k matches the independence law on a synthetic pool") {
  // per-attempt SR probability 0.3 -> pass@K ~= 1 - 0.7^K
  Rng rng(99);
  const int scenes = 500;
  std::vector<std::vector<MetricReport>> attempts(16);
  for (int a = 0; a < 16; ++a)
    for (int s = 0; s < scenes; ++s)
      attempts[a].push_back(row("regular_easy_raw_" + std::to_string(100000 + s),
                                0, rng.next_bool(0.3) ? 1 : 0, 0.0));
  const PassKReport rep = compute_passk(attempts, {1, 4, 8, 12, 16});
  for (const PassKRow& r : rep.rows) {
    const double expected = 1.0 - std::pow(0.7, r.k);
    CHECK(r.sr_pct / 100.0 == doctest::Approx(expected).epsilon(0.17));
    CHECK(std::abs(r.sr_pct / 100.0 - expected) <= 0.05);
  }
}

TEST_CASE("config files parse from toml and json with overrides intact") {
  const std::string toml = R"(
out = "results"
jobs = 3
overlays = false

[dataset]
kinds = ["regular", "sokoban"]
difficulties = ["easy"]
skins = ["raw"]
count = 2
seed = 77

[passk]
k = [1, 2]

[judge]
backend = "mock"
)";
  const RunConfig cfg = parse_config_toml(toml);
  CHECK(cfg.out_dir == "results");
  CHECK(cfg.jobs == 3);
  CHECK(!cfg.overlays);
  CHECK(cfg.dataset.kinds ==
        std::vector<MazeKind>{MazeKind::Regular, MazeKind::Sokoban});
  CHECK(cfg.dataset.grades == std::vector<Grade>{Grade::Easy});
  CHECK(cfg.dataset.count_per_cell == 2);
  CHECK(cfg.dataset.base_seed == 77);
  CHECK(cfg.k_values == std::vector<int>{1, 2});

  SUBCASE("the resolved snapshot parses back to the same config") {
    const RunConfig back = parse_config_toml(resolved_config_toml(cfg));
    CHECK(back.out_dir == cfg.out_dir);
    CHECK(back.jobs == cfg.jobs);
    CHECK(back.dataset.kinds == cfg.dataset.kinds);
    CHECK(back.dataset.count_per_cell == cfg.dataset.count_per_cell);
    CHECK(back.k_values == cfg.k_values);
  }

  SUBCASE("json spelling of the same shape parses identically") {
    const RunConfig j = parse_config_json(R"({
      "out": "results", "jobs": 3,
      "dataset": {"kinds": ["regular", "sokoban"], "count": 2, "seed": 77}
    })");
    CHECK(j.out_dir == "results");
    CHECK(j.dataset.kinds == cfg.dataset.kinds);
    CHECK(j.dataset.base_seed == 77);
  }

  SUBCASE("unknown keys are rejected") {
    CHECK_THROWS_AS(parse_config_toml("speling_mistake = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_json(R"({"dataset": {"sede": 1}})"), ConfigError);
  }
}

TEST_CASE("report files are written with fixed columns") {
  std::vector<MetricReport> rows{row("regular_easy_raw_000000", 1, 1, 1.0, 0.0, 1.0),
                                 row("maze3d_hard_noise_000000", 0, 1, 0.5, 0.1, 0.95)};
  const BatchReport rep = aggregate(rows);
  const fs::path dir = fs::temp_directory_path() / "mb_report_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  write_report_files(rep, dir.string());
  CHECK(fs::exists(dir / "report.csv"));
  CHECK(fs::exists(dir / "report.md"));
  CHECK(fs::exists(dir / "plot_EM.svg"));
  CHECK(fs::exists(dir / "plot_SR.svg"));
  CHECK(fs::exists(dir / "plot_PR.svg"));
  std::ifstream csv(dir / "report.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header.find("metric") != std::string::npos);

  SUBCASE("empty batches emit headers only") {
    const fs::path ed = dir / "empty";
    fs::create_directories(ed);
    write_report_files(aggregate({}), ed.string());
    std::ifstream ecsv(ed / "report.csv");
    std::string line;
    int lines = 0;
    while (std::getline(ecsv, line)) ++lines;
    CHECK(lines >= 1);  // header present
  }

  SUBCASE("a baseline adds delta columns") {
    write_report_files(rep, dir.string(), &rep);
    std::ifstream md(dir / "report.md");
    std::string all((std::istreambuf_iterator<char>(md)),
                    std::istreambuf_iterator<char>());
    CHECK(all.find("delta") != std::string::npos);
  }
  fs::remove_all(dir);
}

TEST_CASE("verify-actions runs end to end over jsonl files") {
  const fs::path dir = fs::temp_directory_path() / "mb_verify_test";
  fs::remove_all(dir);
  fs::create_directories(dir);

  DatasetSpec spec;
  spec.kinds = {MazeKind::Trapfield};
  spec.grades = {Grade::Easy};
  spec.skins = {"raw"};
  spec.count_per_cell = 1;
  const auto res = run_generate(spec, (dir / "ds").string(), 1,
                                /*render_videos=*/false);
  CHECK(res.instances == 1);
  CHECK(res.failures == 0);

  const Manifest m =
      load_manifest_for((dir / "ds").string(), "trapfield_easy_raw_000000");
  const nlohmann::json script = {{"path", m.gt_solutions.front().actions}};
  const nlohmann::json good = {{"scene_id", "trapfield_easy_raw_000000"},
                               {"response_text", script.dump()}};
  std::ofstream jin(dir / "in.jsonl");
  jin << good.dump() << "\n";
  jin << R"({"scene_id":"trapfield_easy_raw_000000","response_text":"garbage"})"
      << "\n";
  jin.close();

  const BatchReport rep = run_verify_actions((dir / "ds").string(),
                                             (dir / "in.jsonl").string(),
                                             (dir / "out.jsonl").string());
  REQUIRE(rep.per_instance.size() == 2);
  CHECK(rep.per_instance[0].em == 1);
  CHECK(rep.per_instance[1].em == 0);
  CHECK(!rep.per_instance[1].error.empty());

  std::ifstream jout(dir / "out.jsonl");
  int lines = 0;
  std::string line;
  while (std::getline(jout, line)) ++lines;
  CHECK(lines == 2);
  fs::remove_all(dir);
}
