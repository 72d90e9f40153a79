#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "mazebench/judge.hpp"

using namespace mazebench;
namespace fs = std::filesystem;

namespace {

const char* kAllOnes =
    R"({"motion_continuity":1,"temporal_consistency":1,"trajectory_rationality":1,)"
    R"("structural_consistency":1,"interactional_rationality":1})";

FrameSequence tiny_video(int frames = 20) {
  FrameSequence v;
  v.fps = 24;
  for (int i = 0; i < frames; ++i) v.frames.push_back(Image(16, 16, {0, 0, 0, 255}));
  return v;
}

JudgeConfig fast_config() {
  JudgeConfig cfg;
  cfg.backoff_ms = 1;  // keep retry tests quick
  return cfg;
}

}  // namespace

TEST_CASE("vlm_score sums the five binary dimensions") {
  RuleDimensions all{1, 1, 1, 1, 1};
  CHECK(all.vlm_score() == 5);
  RuleDimensions one_zero{1, 1, 1, 1, 0};
  CHECK(one_zero.vlm_score() == 4);
  CHECK(RuleDimensions{}.vlm_score() == 0);
}

TEST_CASE("parse_judge_response handles strict and wrapped JSON") {
  CHECK(parse_judge_response(kAllOnes).vlm_score() == 5);

  const std::string wrapped = "The video looks coherent.\n```json\n" +
                              std::string(kAllOnes) + "\n```\nHope that helps!";
  CHECK(parse_judge_response(wrapped).vlm_score() == 5);

  // booleans tolerated
  CHECK(parse_judge_response(
            R"({"motion_continuity":true,"temporal_consistency":false,)"
            R"("trajectory_rationality":true,"structural_consistency":true,)"
            R"("interactional_rationality":true})")
            .vlm_score() == 4);

  CHECK_THROWS_AS(parse_judge_response("no json here"), JudgeMalformed);
  CHECK_THROWS_AS(parse_judge_response(R"({"motion_continuity":1})"),
                  JudgeMalformed);
}

TEST_CASE("mock backend: all-ones gives vlm_score 5") {
  MockJudgeBackend mock({kAllOnes});
  const RuleDimensions d = judge_video(tiny_video(), mock, fast_config());
  CHECK(d.vlm_score() == 5);
  CHECK(mock.calls() == 1);
}

TEST_CASE("judge retries transport failures with backoff and recovers") {
  MockJudgeBackend mock({kAllOnes}, 2);  // fail twice, then succeed
  const RuleDimensions d = judge_video(tiny_video(), mock, fast_config());
  CHECK(d.vlm_score() == 5);
  CHECK(mock.calls() == 3);
}

TEST_CASE("exhausted transport raises JudgeUnavailable") {
  MockJudgeBackend mock({kAllOnes}, 99);
  CHECK_THROWS_AS(judge_video(tiny_video(), mock, fast_config()), JudgeUnavailable);
  CHECK(mock.calls() == 3);  // bounded by max_attempts
}

TEST_CASE("persistent garbage raises JudgeMalformed") {
  MockJudgeBackend mock({"I cannot rate this video."});
  CHECK_THROWS_AS(judge_video(tiny_video(), mock, fast_config()), JudgeMalformed);
  CHECK(mock.calls() == 3);
}

TEST_CASE("keyframes are capped at the configured maximum") {
  struct CountingBackend : JudgeBackend {
    std::size_t frames_seen = 0;
    std::string send(const std::string&,
                     const std::vector<const Image*>& keyframes) override {
      frames_seen = keyframes.size();
      return kAllOnes;
    }
  } backend;
  judge_video(tiny_video(100), backend, fast_config());
  CHECK(backend.frames_seen == 16);
  judge_video(tiny_video(5), backend, fast_config());
  CHECK(backend.frames_seen == 5);  // short videos send every frame
}

TEST_CASE("raw responses are logged for audit") {
  const fs::path dir = fs::temp_directory_path() / "mb_judge_raw_test";
  fs::remove_all(dir);
  JudgeConfig cfg = fast_config();
  cfg.raw_log_dir = dir.string();
  MockJudgeBackend mock({kAllOnes}, 1);  // one failure, then success
  judge_video(tiny_video(), mock, cfg, default_judge_prompt(), "vid42");
  int logs = 0;
  for (const auto& e : fs::directory_iterator(dir)) {
    CHECK(e.path().filename().string().starts_with("vid42_attempt"));
    ++logs;
  }
  CHECK(logs >= 1);  // the successful attempt is recorded
  fs::remove_all(dir);
}

TEST_CASE("the judging prompt names all five dimensions") {
  const std::string p = default_judge_prompt();
  for (const char* key : {"motion_continuity", "temporal_consistency",
                          "trajectory_rationality", "structural_consistency",
                          "interactional_rationality"})
    CHECK(p.find(key) != std::string::npos);
}

TEST_CASE("base64 encodes the classic vectors") {
  auto enc = [](const std::string& s) {
    return base64_encode(reinterpret_cast<const std::uint8_t*>(s.data()), s.size());
  };
  CHECK(enc("Man") == "TWFu");
  CHECK(enc("Ma") == "TWE=");
  CHECK(enc("M") == "TQ==");
  CHECK(enc("") == "");
}
