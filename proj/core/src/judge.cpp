#include "mazebench/judge.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <thread>

#include <png.h>

#include <httplib.h>
#include <json.hpp>

namespace fs = std::filesystem;

namespace mazebench {

std::string MockJudgeBackend::send(const std::string&,
                                   const std::vector<const Image*>&) {
  ++calls_;
  if (failures_ > 0) {
    --failures_;
    throw JudgeUnavailable("mock transport failure");
  }
  if (responses_.empty()) throw JudgeUnavailable("mock has no responses");
  const std::size_t idx =
      std::min<std::size_t>(calls_ - 1, responses_.size() - 1);
  return responses_[idx];
}

std::string base64_encode(const std::uint8_t* data, std::size_t len) {
  static const char* alphabet =
      "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::string out;
  out.reserve((len + 2) / 3 * 4);
  for (std::size_t i = 0; i < len; i += 3) {
    std::uint32_t n = data[i] << 16;
    if (i + 1 < len) n |= data[i + 1] << 8;
    if (i + 2 < len) n |= data[i + 2];
    out.push_back(alphabet[(n >> 18) & 63]);
    out.push_back(alphabet[(n >> 12) & 63]);
    out.push_back(i + 1 < len ? alphabet[(n >> 6) & 63] : '=');
    out.push_back(i + 2 < len ? alphabet[n & 63] : '=');
  }
  return out;
}

namespace {

void png_vector_write(png_structp png, png_bytep data, png_size_t len) {
  auto* buf = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
  buf->insert(buf->end(), data, data + len);
}

std::vector<std::uint8_t> png_encode(const Image& img) {
  std::vector<std::uint8_t> buf;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr,
                                            nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  if (!png || !info || setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw ImageError("png encode failed");
  }
  png_set_write_fn(png, &buf, png_vector_write, nullptr);
  png_set_IHDR(png, info, img.width(), img.height(), 8, PNG_COLOR_TYPE_RGBA,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  std::vector<png_bytep> rows(img.height());
  for (int y = 0; y < img.height(); ++y)
    rows[y] = const_cast<png_bytep>(img.data() + static_cast<std::size_t>(y) *
                                                     img.width() * 4);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return buf;
}

std::string strip_fences(const std::string& text) {
  std::string out;
  bool at_line_start = true;
  for (std::size_t i = 0; i < text.size();) {
    if (at_line_start && text.compare(i, 3, "```") == 0) {
      while (i < text.size() && text[i] != '\n') ++i;
      if (i < text.size()) ++i;
      continue;
    }
    at_line_start = text[i] == '\n';
    out.push_back(text[i++]);
  }
  return out;
}

}  // namespace

HttpJudgeBackend::HttpJudgeBackend(std::string endpoint, std::string api_key,
                                   std::string model)
    : endpoint_(std::move(endpoint)), api_key_(std::move(api_key)),
      model_(std::move(model)) {}

std::unique_ptr<HttpJudgeBackend> HttpJudgeBackend::from_env() {
  const char* ep = std::getenv("JUDGE_ENDPOINT");
  if (!ep) throw JudgeUnavailable("JUDGE_ENDPOINT is not set");
  const char* key = std::getenv("JUDGE_API_KEY");
  return std::make_unique<HttpJudgeBackend>(ep, key ? key : "");
}

std::string HttpJudgeBackend::send(const std::string& prompt,
                                   const std::vector<const Image*>& keyframes) {
  // split endpoint into scheme://host[:port] and path
  std::string rest = endpoint_;
  const auto scheme_pos = rest.find("://");
  if (scheme_pos != std::string::npos) rest = rest.substr(scheme_pos + 3);
  const auto slash = rest.find('/');
  const std::string host = rest.substr(0, slash);
  const std::string path = slash == std::string::npos ? "/" : rest.substr(slash);

  nlohmann::json body;
  if (!model_.empty()) body["model"] = model_;
  body["prompt"] = prompt;
  nlohmann::json frames = nlohmann::json::array();
  for (const Image* img : keyframes) {
    auto png = png_encode(*img);
    frames.push_back(base64_encode(png.data(), png.size()));
  }
  body["frames"] = frames;

  httplib::Client cli(("http://" + host).c_str());
  cli.set_read_timeout(120, 0);
  httplib::Headers headers;
  if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);
  auto res = cli.Post(path.c_str(), headers, body.dump(), "application/json");
  if (!res || res->status < 200 || res->status >= 300)
    throw JudgeUnavailable("judge endpoint returned " +
                           std::string(res ? std::to_string(res->status)
                                           : "no response"));
  return res->body;
}

std::string default_judge_prompt() {
  return
      "You are shown keyframes sampled from a generated maze-solving video.\n"
      "Judge whether the video obeys the scene's physical and structural "
      "rules.\n\n"
      "Score each of the five dimensions with a binary value: 1 if the "
      "behavior is reasonable, 0 if it is not.\n"
      "1. motion_continuity: the moving subject travels smoothly, without "
      "teleporting, disappearing, or reappearing.\n"
      "2. temporal_consistency: the subject keeps a consistent appearance "
      "(shape, color, size) across frames.\n"
      "3. trajectory_rationality: the subject follows a sensible route along "
      "the traversable areas toward the goal.\n"
      "4. structural_consistency: the maze layout does not change between "
      "frames.\n"
      "5. interactional_rationality: interactions between the subject and "
      "the maze are physically plausible (no passing through walls or "
      "obstacles).\n\n"
      "Return strict JSON with exactly these five keys and 0/1 values:\n"
      "{\"motion_continuity\": 0, \"temporal_consistency\": 0, "
      "\"trajectory_rationality\": 0, \"structural_consistency\": 0, "
      "\"interactional_rationality\": 0}\n"
      "Do not add any other text.\n";
}

RuleDimensions parse_judge_response(const std::string& text) {
  const std::string clean = strip_fences(text);
  const auto open = clean.find('{');
  const auto close = clean.rfind('}');
  if (open == std::string::npos || close == std::string::npos || close < open)
    throw JudgeMalformed("no JSON object in judge response");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(clean.substr(open, close - open + 1));
  } catch (const nlohmann::json::exception& e) {
    throw JudgeMalformed(std::string("judge JSON malformed: ") + e.what());
  }
  auto field = [&](const char* name) {
    if (!j.contains(name)) throw JudgeMalformed(std::string("missing field ") + name);
    const auto& v = j[name];
    int x;
    if (v.is_boolean())
      x = v.get<bool>() ? 1 : 0;
    else if (v.is_number_integer())
      x = v.get<int>();
    else
      throw JudgeMalformed(std::string("non-integer field ") + name);
    if (x != 0 && x != 1)
      throw JudgeMalformed(std::string("field out of range ") + name);
    return x;
  };
  RuleDimensions d;
  d.motion_continuity = field("motion_continuity");
  d.temporal_consistency = field("temporal_consistency");
  d.trajectory_rationality = field("trajectory_rationality");
  d.structural_consistency = field("structural_consistency");
  d.interactional_rationality = field("interactional_rationality");
  return d;
}

RuleDimensions judge_video(const FrameSequence& video, JudgeBackend& backend,
                           const JudgeConfig& cfg, const std::string& prompt,
                           const std::string& video_id) {
  std::vector<const Image*> keyframes;
  const int total = static_cast<int>(video.frames.size());
  const int n = std::min(cfg.max_keyframes, total);
  for (int i = 0; i < n; ++i) {
    const int idx = n > 1 ? static_cast<int>(std::lround(
                                static_cast<double>(i) * (total - 1) / (n - 1)))
                          : 0;
    keyframes.push_back(&video.frames[idx]);
  }

  bool parse_failure = false;
  std::string last_error;
  for (int attempt = 0; attempt < cfg.max_attempts; ++attempt) {
    if (attempt > 0)
      std::this_thread::sleep_for(
          std::chrono::milliseconds(cfg.backoff_ms << (attempt - 1)));
    std::string raw;
    try {
      raw = backend.send(prompt, keyframes);
    } catch (const std::exception& e) {
      parse_failure = false;
      last_error = e.what();
      continue;
    }
    if (!cfg.raw_log_dir.empty()) {
      fs::create_directories(cfg.raw_log_dir);
      const std::string name = (video_id.empty() ? "judge" : video_id) +
                               "_attempt" + std::to_string(attempt) + ".txt";
      std::ofstream out(fs::path(cfg.raw_log_dir) / name);
      out << raw;
    }
    try {
      return parse_judge_response(raw);
    } catch (const JudgeMalformed& e) {
      parse_failure = true;
      last_error = e.what();
    }
  }
  if (parse_failure) throw JudgeMalformed("judge response unusable: " + last_error);
  throw JudgeUnavailable("judge transport exhausted: " + last_error);
}

}  // namespace mazebench
