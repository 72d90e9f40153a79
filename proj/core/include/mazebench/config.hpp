#pragma once

#include <string>
#include <vector>

#include "mazebench/generate.hpp"

namespace mazebench {

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Resolved run configuration: file values overlaid by CLI flags. Every run
// writes the resolved snapshot next to its outputs.
struct RunConfig {
  DatasetSpec dataset;
  std::string out_dir = "out";
  int jobs = 0;  // 0 = all hardware threads
  bool overlays = true;
  bool videos = true;  // generate: render GT frame directories
  std::vector<int> k_values{1, 4, 8, 12, 16};
  std::string judge_backend = "mock";  // "mock" | "http"
  std::string judge_model;
  std::string judge_raw_dir = "judge_raw";
};

// Accepts a TOML subset (sections, strings, ints, bools, one-line arrays)
// or JSON with the same shape; load_config dispatches on the .json extension.
RunConfig parse_config_toml(const std::string& text);
RunConfig parse_config_json(const std::string& text);
RunConfig load_config(const std::string& path);

std::string resolved_config_toml(const RunConfig& cfg);
void write_resolved_config(const RunConfig& cfg, const std::string& path);

}  // namespace mazebench
