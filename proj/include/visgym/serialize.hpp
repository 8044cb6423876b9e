#pragma once

#include <fstream>
#include <optional>
#include <string>
#include <unordered_set>

#include <json.hpp>

#include "visgym/core.hpp"

namespace visgym {

using Json = nlohmann::json;

inline Json to_json(const EpisodeConfig& cfg) {
  Json j;
  j["env_id"] = cfg.env_id;
  j["difficulty"] = to_string(cfg.difficulty);
  j["seed"] = cfg.seed;
  if (!cfg.params.empty()) j["params"] = cfg.params;
  if (cfg.max_steps) j["max_steps"] = *cfg.max_steps;
  j["feedback_enabled"] = cfg.feedback_enabled;
  j["text_mode"] = cfg.text_mode;
  j["goal_observation"] = cfg.goal_observation;
  if (cfg.history_window) j["history_window"] = *cfg.history_window;
  if (!cfg.assets_dir.empty()) j["assets_dir"] = cfg.assets_dir;
  return j;
}

inline EpisodeConfig episode_config_from_json(const Json& j) {
  EpisodeConfig cfg;
  cfg.env_id = j.at("env_id").get<std::string>();
  if (j.contains("difficulty")) {
    std::string d = j["difficulty"].get<std::string>();
    if (d != "easy" && d != "hard") throw ConfigError("unknown difficulty '" + d + "'");
    cfg.difficulty = d == "hard" ? Difficulty::hard : Difficulty::easy;
  }
  if (j.contains("params"))
    for (auto& [k, v] : j["params"].items()) cfg.params[k] = v.get<double>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("max_steps")) cfg.max_steps = j["max_steps"].get<int>();
  if (j.contains("feedback_enabled")) cfg.feedback_enabled = j["feedback_enabled"].get<bool>();
  if (j.contains("text_mode")) cfg.text_mode = j["text_mode"].get<bool>();
  if (j.contains("goal_observation")) cfg.goal_observation = j["goal_observation"].get<bool>();
  if (j.contains("history_window") && !j["history_window"].is_null())
    cfg.history_window = j["history_window"].get<int>();
  if (j.contains("assets_dir")) cfg.assets_dir = j["assets_dir"].get<std::string>();
  return cfg;
}

/// Accepts {"digests": [...]}, an eval summary with "episodes": [{"initial_state_digest": ...}],
/// or a bare JSON array of digest strings.
inline std::unordered_set<std::string> load_digest_manifest(const std::string& path) {
  std::unordered_set<std::string> out;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open manifest: " + path);
  Json j = Json::parse(in);
  if (j.is_array()) {
    for (auto& v : j) out.insert(v.get<std::string>());
  } else if (j.contains("digests")) {
    for (auto& v : j["digests"]) out.insert(v.get<std::string>());
  } else if (j.contains("episodes")) {
    for (auto& e : j["episodes"])
      if (e.contains("initial_state_digest")) out.insert(e["initial_state_digest"].get<std::string>());
  }
  return out;
}

}  // namespace visgym
