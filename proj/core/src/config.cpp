#include "mazebench/config.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace mazebench {

namespace {

struct TomlValue {
  enum Kind { String, Integer, Boolean, Array } kind = String;
  std::string str;
  long long num = 0;
  bool flag = false;
  std::vector<TomlValue> items;
};

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

TomlValue parse_value(const std::string& raw, int line_no) {
  const std::string v = trim(raw);
  if (v.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty value");
  TomlValue out;
  if (v.front() == '"') {
    if (v.size() < 2 || v.back() != '"')
      throw ConfigError("line " + std::to_string(line_no) + ": unterminated string");
    out.kind = TomlValue::String;
    out.str = v.substr(1, v.size() - 2);
    return out;
  }
  if (v == "true" || v == "false") {
    out.kind = TomlValue::Boolean;
    out.flag = v == "true";
    return out;
  }
  if (v.front() == '[') {
    if (v.back() != ']')
      throw ConfigError("line " + std::to_string(line_no) + ": arrays must close on the same line");
    out.kind = TomlValue::Array;
    std::string body = v.substr(1, v.size() - 2);
    std::string item;
    int depth = 0;
    bool in_str = false;
    auto flush = [&]() {
      const std::string t = trim(item);
      if (!t.empty()) out.items.push_back(parse_value(t, line_no));
      item.clear();
    };
    for (char c : body) {
      if (c == '"') in_str = !in_str;
      if (!in_str && depth == 0 && c == ',') {
        flush();
        continue;
      }
      if (!in_str && c == '[') ++depth;
      if (!in_str && c == ']') --depth;
      item.push_back(c);
    }
    flush();
    return out;
  }
  try {
    std::size_t used = 0;
    out.num = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    out.kind = TomlValue::Integer;
    return out;
  } catch (const std::exception&) {
    throw ConfigError("line " + std::to_string(line_no) + ": cannot parse value: " + v);
  }
}

// key path "section.key" -> value
std::map<std::string, TomlValue> parse_toml_flat(const std::string& text) {
  std::map<std::string, TomlValue> out;
  std::istringstream in(text);
  std::string line, section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) {
      bool in_str = false;
      std::size_t cut = std::string::npos;
      for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') in_str = !in_str;
        if (line[i] == '#' && !in_str) {
          cut = i;
          break;
        }
      }
      if (cut != std::string::npos) line = line.substr(0, cut);
    }
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '[') {
      if (t.back() != ']')
        throw ConfigError("line " + std::to_string(line_no) + ": bad section header");
      section = trim(t.substr(1, t.size() - 2));
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(t.substr(0, eq));
    if (key.empty())
      throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    const std::string full = section.empty() ? key : section + "." + key;
    out[full] = parse_value(t.substr(eq + 1), line_no);
  }
  return out;
}

std::vector<std::string> as_string_list(const TomlValue& v, const std::string& key) {
  if (v.kind != TomlValue::Array)
    throw ConfigError(key + " must be an array of strings");
  std::vector<std::string> out;
  for (const TomlValue& item : v.items) {
    if (item.kind != TomlValue::String)
      throw ConfigError(key + " must be an array of strings");
    out.push_back(item.str);
  }
  return out;
}

std::vector<int> as_int_list(const TomlValue& v, const std::string& key) {
  if (v.kind != TomlValue::Array)
    throw ConfigError(key + " must be an array of integers");
  std::vector<int> out;
  for (const TomlValue& item : v.items) {
    if (item.kind != TomlValue::Integer)
      throw ConfigError(key + " must be an array of integers");
    out.push_back(static_cast<int>(item.num));
  }
  return out;
}

long long as_int(const TomlValue& v, const std::string& key) {
  if (v.kind != TomlValue::Integer) throw ConfigError(key + " must be an integer");
  return v.num;
}

std::string as_string(const TomlValue& v, const std::string& key) {
  if (v.kind != TomlValue::String) throw ConfigError(key + " must be a string");
  return v.str;
}

bool as_bool(const TomlValue& v, const std::string& key) {
  if (v.kind != TomlValue::Boolean) throw ConfigError(key + " must be true or false");
  return v.flag;
}

RunConfig apply_flat(const std::map<std::string, TomlValue>& kv) {
  RunConfig cfg;
  for (const auto& [key, v] : kv) {
    if (key == "out") {
      cfg.out_dir = as_string(v, key);
    } else if (key == "jobs") {
      cfg.jobs = static_cast<int>(as_int(v, key));
    } else if (key == "overlays") {
      cfg.overlays = as_bool(v, key);
    } else if (key == "videos") {
      cfg.videos = as_bool(v, key);
    } else if (key == "dataset.kinds") {
      cfg.dataset.kinds.clear();
      for (const std::string& s : as_string_list(v, key))
        cfg.dataset.kinds.push_back(maze_kind_from_string(s));
    } else if (key == "dataset.difficulties") {
      cfg.dataset.grades.clear();
      for (const std::string& s : as_string_list(v, key))
        cfg.dataset.grades.push_back(grade_from_string(s));
    } else if (key == "dataset.skins") {
      cfg.dataset.skins = as_string_list(v, key);
    } else if (key == "dataset.count") {
      cfg.dataset.count_per_cell = static_cast<int>(as_int(v, key));
    } else if (key == "dataset.seed") {
      cfg.dataset.base_seed = static_cast<std::uint64_t>(as_int(v, key));
    } else if (key == "dataset.width") {
      cfg.dataset.render.width = static_cast<int>(as_int(v, key));
    } else if (key == "dataset.height") {
      cfg.dataset.render.height = static_cast<int>(as_int(v, key));
    } else if (key == "dataset.fps") {
      cfg.dataset.render.fps = static_cast<int>(as_int(v, key));
    } else if (key == "dataset.frames") {
      cfg.dataset.render.frame_count = static_cast<int>(as_int(v, key));
    } else if (key == "passk.k") {
      cfg.k_values = as_int_list(v, key);
    } else if (key == "judge.backend") {
      cfg.judge_backend = as_string(v, key);
    } else if (key == "judge.model") {
      cfg.judge_model = as_string(v, key);
    } else if (key == "judge.raw_dir") {
      cfg.judge_raw_dir = as_string(v, key);
    } else {
      throw ConfigError("unknown config key: " + key);
    }
  }
  return cfg;
}

void flatten_json(const nlohmann::json& j, const std::string& prefix,
                  std::map<std::string, TomlValue>& out) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    const nlohmann::json& v = it.value();
    TomlValue tv;
    if (v.is_object()) {
      flatten_json(v, key, out);
      continue;
    }
    if (v.is_string()) {
      tv.kind = TomlValue::String;
      tv.str = v.get<std::string>();
    } else if (v.is_boolean()) {
      tv.kind = TomlValue::Boolean;
      tv.flag = v.get<bool>();
    } else if (v.is_number_integer()) {
      tv.kind = TomlValue::Integer;
      tv.num = v.get<long long>();
    } else if (v.is_array()) {
      tv.kind = TomlValue::Array;
      for (const auto& item : v) {
        TomlValue e;
        if (item.is_string()) {
          e.kind = TomlValue::String;
          e.str = item.get<std::string>();
        } else if (item.is_number_integer()) {
          e.kind = TomlValue::Integer;
          e.num = item.get<long long>();
        } else {
          throw ConfigError(key + ": unsupported array element type");
        }
        tv.items.push_back(e);
      }
    } else {
      throw ConfigError(key + ": unsupported value type");
    }
    out[key] = tv;
  }
}

}  // namespace

RunConfig parse_config_toml(const std::string& text) {
  return apply_flat(parse_toml_flat(text));
}

RunConfig parse_config_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config JSON malformed: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config root must be an object");
  std::map<std::string, TomlValue> flat;
  flatten_json(j, "", flat);
  return apply_flat(flat);
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  const bool json = path.size() >= 5 && path.rfind(".json") == path.size() - 5;
  return json ? parse_config_json(ss.str()) : parse_config_toml(ss.str());
}

std::string resolved_config_toml(const RunConfig& cfg) {
  std::ostringstream out;
  auto str_list = [](const std::vector<std::string>& xs) {
    std::string s = "[";
    for (std::size_t i = 0; i < xs.size(); ++i)
      s += (i ? ", \"" : "\"") + xs[i] + "\"";
    return s + "]";
  };
  out << "out = \"" << cfg.out_dir << "\"\n";
  out << "jobs = " << cfg.jobs << "\n";
  out << "overlays = " << (cfg.overlays ? "true" : "false") << "\n";
  out << "videos = " << (cfg.videos ? "true" : "false") << "\n\n";
  out << "[dataset]\n";
  std::vector<std::string> kinds, grades;
  for (MazeKind k : cfg.dataset.kinds) kinds.push_back(to_string(k));
  for (Grade g : cfg.dataset.grades) grades.push_back(to_string(g));
  out << "kinds = " << str_list(kinds) << "\n";
  out << "difficulties = " << str_list(grades) << "\n";
  out << "skins = " << str_list(cfg.dataset.skins) << "\n";
  out << "count = " << cfg.dataset.count_per_cell << "\n";
  out << "seed = " << cfg.dataset.base_seed << "\n";
  out << "width = " << cfg.dataset.render.width << "\n";
  out << "height = " << cfg.dataset.render.height << "\n";
  out << "fps = " << cfg.dataset.render.fps << "\n";
  out << "frames = " << cfg.dataset.render.frame_count << "\n\n";
  out << "[passk]\n";
  out << "k = [";
  for (std::size_t i = 0; i < cfg.k_values.size(); ++i)
    out << (i ? ", " : "") << cfg.k_values[i];
  out << "]\n\n";
  out << "[judge]\n";
  out << "backend = \"" << cfg.judge_backend << "\"\n";
  out << "model = \"" << cfg.judge_model << "\"\n";
  out << "raw_dir = \"" << cfg.judge_raw_dir << "\"\n";
  return out.str();
}

void write_resolved_config(const RunConfig& cfg, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write resolved config: " + path);
  out << resolved_config_toml(cfg);
}

}  // namespace mazebench
