#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mazebench/render.hpp"

namespace mazebench {

class JudgeUnavailable : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class JudgeMalformed : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct RuleDimensions {
  int motion_continuity = 0;
  int temporal_consistency = 0;
  int trajectory_rationality = 0;
  int structural_consistency = 0;
  int interactional_rationality = 0;

  int vlm_score() const {
    return motion_continuity + temporal_consistency + trajectory_rationality +
           structural_consistency + interactional_rationality;
  }
};

// Transport abstraction: one call = one judgment request.
class JudgeBackend {
public:
  virtual ~JudgeBackend() = default;
  virtual std::string send(const std::string& prompt,
                           const std::vector<const Image*>& keyframes) = 0;
};

// Scripted backend for tests: returns canned responses in order, repeating
// the last one; can be told to fail (throw) for the first n calls.
class MockJudgeBackend : public JudgeBackend {
public:
  explicit MockJudgeBackend(std::vector<std::string> responses,
                            int failures_before_success = 0)
      : responses_(std::move(responses)), failures_(failures_before_success) {}
  std::string send(const std::string&, const std::vector<const Image*>&) override;
  int calls() const { return calls_; }

private:
  std::vector<std::string> responses_;
  int failures_ = 0;
  int calls_ = 0;
};

// Reference HTTP transport: POSTs {model, prompt, frames:[base64 png]} as
// JSON to $JUDGE_ENDPOINT with bearer $JUDGE_API_KEY.
class HttpJudgeBackend : public JudgeBackend {
public:
  HttpJudgeBackend(std::string endpoint, std::string api_key,
                   std::string model = "");
  static std::unique_ptr<HttpJudgeBackend> from_env();
  std::string send(const std::string& prompt,
                   const std::vector<const Image*>& keyframes) override;

private:
  std::string endpoint_;
  std::string api_key_;
  std::string model_;
};

struct JudgeConfig {
  int max_keyframes = 16;
  int max_attempts = 3;
  int backoff_ms = 200;  // doubled per retry
  std::string raw_log_dir;  // when set, raw responses are written here
};

std::string default_judge_prompt();

// Extract the five binary fields from a response that may wrap the JSON in
// prose or code fences.
RuleDimensions parse_judge_response(const std::string& text);

// Sends the judging prompt with up to 16 uniformly sampled keyframes;
// retries with exponential backoff. Throws JudgeUnavailable / JudgeMalformed
// after the attempts are exhausted; callers record a null vlm_score then.
RuleDimensions judge_video(const FrameSequence& video, JudgeBackend& backend,
                           const JudgeConfig& cfg = {},
                           const std::string& prompt = default_judge_prompt(),
                           const std::string& video_id = "");

std::string base64_encode(const std::uint8_t* data, std::size_t len);

}  // namespace mazebench
