#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "visgym/actions.hpp"
#include "visgym/render.hpp"
#include "visgym/rng.hpp"

namespace visgym {

// ---------------------------------------------------------------------------
// Feedback vocabulary shared across environments.
// ---------------------------------------------------------------------------
namespace feedback {
inline constexpr const char* kInvalidFormat = "invalid format";
inline constexpr const char* kInvalidAction = "invalid action";
inline constexpr const char* kExecuted = "executed";
inline constexpr const char* kStopped = "stopped";
inline constexpr const char* kWall = "Cannot move into a wall.";
inline constexpr const char* kBlocked = "blocked: cells occupied";
inline constexpr const char* kCannotPlace = "cannot place: overlap or out of bounds";
inline constexpr const char* kPatchNotOnGrid = "patch not on grid";
inline constexpr const char* kNoStickAtSource = "no stick at source";
inline constexpr const char* kDestinationOccupied = "destination occupied";
inline constexpr const char* kNothingToUndo = "nothing to undo";
inline constexpr const char* kNotAPermutation = "payload is not a permutation";
}  // namespace feedback

inline double normalize_angle_360(double deg) {
  double a = std::fmod(deg, 360.0);
  return a < 0 ? a + 360.0 : a;
}

inline double normalize_angle_180(double deg) {
  double a = std::fmod(deg + 180.0, 360.0);
  if (a < 0) a += 360.0;
  return a - 180.0;  // [-180, 180)
}

/// Circular distance with period 360, always in [0, 180].
inline double angular_distance(double a, double b) {
  double d = std::fabs(normalize_angle_360(a) - normalize_angle_360(b));
  return d > 180.0 ? 360.0 - d : d;
}

/// Operator mistakes (bad env id, parameter out of documented range). These
/// are hard errors, unlike agent mistakes which flow back as feedback.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Difficulty { easy, hard };

inline std::string to_string(Difficulty d) { return d == Difficulty::easy ? "easy" : "hard"; }

/// Per-turn percept. Exactly one of image/text_view is present depending on
/// the episode's observation mode.
struct Observation {
  std::optional<Canvas> image;
  std::optional<std::string> text_view;
  std::string feedback;
  int steps_remaining = 0;
};

struct StepOutcome {
  Observation observation;
  int reward = 0;  // 1 only on a terminating step
  bool terminated = false;
  bool truncated = false;
};

struct EpisodeConfig {
  std::string env_id;
  Difficulty difficulty = Difficulty::easy;
  std::map<std::string, double> params;  // explicit overrides of the preset
  std::uint64_t seed = 0;
  std::optional<int> max_steps;  // defaults: 20 easy / 30 hard
  bool feedback_enabled = true;
  bool text_mode = false;
  bool goal_observation = false;
  std::optional<int> history_window;  // nullopt = unbounded
  std::string assets_dir;            // image-backed envs; empty = synthetic

  int resolved_max_steps() const {
    if (max_steps) {
      if (*max_steps < 1) throw ConfigError("parameter out of range: max_steps must be >= 1");
      return *max_steps;
    }
    return difficulty == Difficulty::hard ? 30 : 20;
  }
};

struct TurnRecord {
  Observation observation;  // what the agent saw when choosing the action
  std::string raw_action;
  std::optional<ActionCall> parsed;
  std::string feedback;  // what the agent was shown afterwards
};

struct Trajectory {
  std::string instruction;
  std::string env_id;
  Difficulty difficulty = Difficulty::easy;
  std::map<std::string, double> params;
  std::uint64_t seed = 0;
  std::string initial_state_digest;
  std::vector<TurnRecord> turns;
  int reward = 0;
  bool terminated = false;
  bool truncated = false;
  std::string note;  // e.g. transport failure cause
};

/// Instruction-adjacent view: the last `window` turns (current turn counts as
/// one); nullopt returns everything. window < 1 is rejected.
inline std::vector<TurnRecord> build_history(const Trajectory& traj, std::optional<int> window) {
  if (window && *window < 1) throw std::invalid_argument("build_history: window must be >= 1");
  std::size_t n = traj.turns.size();
  std::size_t keep = window ? std::min<std::size_t>(std::size_t(*window), n) : n;
  return std::vector<TurnRecord>(traj.turns.end() - std::ptrdiff_t(keep), traj.turns.end());
}

// ---------------------------------------------------------------------------
// Solver plan types (implementations live with each environment's solver).
// ---------------------------------------------------------------------------

struct SolverPlan {
  std::vector<ActionCall> actions;  // last action is stop
  std::string strategy;
  std::uint64_t seed = 0;

  int non_stop_actions() const {
    int n = 0;
    for (const auto& a : actions)
      if (a.name != "stop") ++n;
    return n;
  }
};

struct SolverOptions {
  std::string strategy;                 // empty = environment default
  std::optional<int> target_steps;      // >= minimal plan length when set
  std::uint64_t seed = 0;
};

// ---------------------------------------------------------------------------
// Environment interface
// ---------------------------------------------------------------------------

/// One live task instance. Implementations are value-semantics wrappers over
/// plain state structs; the episode drives them through this interface.
class EnvInstance {
 public:
  virtual ~EnvInstance() = default;

  virtual std::string instruction(bool text_mode) const = 0;
  virtual std::vector<PayloadSchema> schemas() const = 0;

  /// Applies a validated, normalized, non-stop action; returns env feedback.
  virtual std::string apply(const ActionCall& call) = 0;

  virtual bool success() const = 0;

  virtual Canvas render_image() const = 0;
  virtual std::optional<CharGrid> render_text() const { return std::nullopt; }

  virtual Canvas goal_image() const = 0;
  virtual std::optional<CharGrid> goal_text() const { return std::nullopt; }

  /// Canonical serialization of the mutable + generated state; hashed for the
  /// SFT overlap filter.
  virtual std::string state_digest() const = 0;

  virtual SolverPlan solve(const SolverOptions& opts) const = 0;
};

struct ParamSpec {
  std::string name;
  double lo = 0, hi = 0;
  double easy = 0, hard = 0;
  bool integer = true;
  std::string doc;
};

struct ResolvedConfig {
  std::map<std::string, double> params;
  std::uint64_t seed = 0;
  std::string assets_dir;
  int step_budget = 19;  // actions available before stop; generation caps plans to fit

  double real(const std::string& name) const { return params.at(name); }
  int integer(const std::string& name) const { return int(params.at(name)); }
};

struct EnvDef {
  std::string id;
  std::string title;
  std::vector<ParamSpec> params;
  bool supports_text = false;
  std::string actions_doc;  // short signature summary for `list`
  std::function<std::unique_ptr<EnvInstance>(const ResolvedConfig&)> make;

  std::map<std::string, double> preset(Difficulty d) const {
    std::map<std::string, double> out;
    for (const auto& p : params) out[p.name] = (d == Difficulty::hard ? p.hard : p.easy);
    return out;
  }
};

/// Merge preset + explicit params, enforce documented ranges.
inline ResolvedConfig resolve_params(const EnvDef& def, const EpisodeConfig& cfg) {
  ResolvedConfig rc;
  rc.params = def.preset(cfg.difficulty);
  rc.seed = cfg.seed;
  rc.assets_dir = cfg.assets_dir;
  rc.step_budget = cfg.resolved_max_steps() - 1;
  for (const auto& [k, v] : cfg.params) {
    const ParamSpec* spec = nullptr;
    for (const auto& p : def.params)
      if (p.name == k) spec = &p;
    if (!spec) throw ConfigError("unknown parameter '" + k + "' for env '" + def.id + "'");
    if (v < spec->lo || v > spec->hi)
      throw ConfigError("parameter out of range: " + k + "=" + std::to_string(v) + " (allowed [" +
                        std::to_string(spec->lo) + ", " + std::to_string(spec->hi) + "])");
    if (spec->integer && v != double(std::int64_t(v)))
      throw ConfigError("parameter out of range: " + k + " must be an integer");
    rc.params[k] = v;
  }
  return rc;
}

inline std::string fnv1a64_hex(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[std::size_t(i)] = digits[h & 0xF];
    h >>= 4;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Episode: the generic step function.
// ---------------------------------------------------------------------------

class Episode {
 public:
  /// Generates the environment from the seed and assembles the instruction;
  /// throws ConfigError for operator mistakes.
  static Episode start(const EpisodeConfig& cfg, const EnvDef& def) {
    if (cfg.text_mode && !def.supports_text)
      throw ConfigError("env '" + def.id + "' has no text mode");
    Episode ep;
    ep.cfg_ = cfg;
    ep.max_steps_ = cfg.resolved_max_steps();
    ep.steps_remaining_ = ep.max_steps_;
    ep.env_ = def.make(resolve_params(def, cfg));
    ep.schemas_ = ep.env_->schemas();
    ep.instruction_ = ep.env_->instruction(cfg.text_mode);
    if (cfg.goal_observation) {
      ep.goal_ = ep.render_goal();
      if (cfg.text_mode && ep.goal_ && ep.goal_->text_view)
        ep.instruction_ += "\n\nGoal state (you are done when the observation matches it):\n" +
                           *ep.goal_->text_view;
      else if (ep.goal_)
        ep.instruction_ += "\n\nThe goal observation (the solved state) is attached.";
    }
    ep.current_obs_ = ep.render_observation("", ep.steps_remaining_);
    ep.traj_.instruction = ep.instruction_;
    ep.traj_.env_id = cfg.env_id;
    ep.traj_.difficulty = cfg.difficulty;
    ep.traj_.params = cfg.params;
    ep.traj_.seed = cfg.seed;
    ep.traj_.initial_state_digest = fnv1a64_hex(ep.env_->state_digest());
    return ep;
  }

  const std::string& instruction() const { return instruction_; }
  const Observation& observation() const { return current_obs_; }
  const std::optional<Observation>& goal() const { return goal_; }
  const Trajectory& trajectory() const { return traj_; }
  Trajectory& trajectory() { return traj_; }
  const EnvInstance& env() const { return *env_; }
  const EpisodeConfig& config() const { return cfg_; }
  const std::vector<PayloadSchema>& schemas() const { return schemas_; }
  int max_steps() const { return max_steps_; }
  int steps_remaining() const { return steps_remaining_; }
  bool finished() const { return finished_; }

  /// Exactly one of {invalid format, invalid action, applied} happens per
  /// call; reward is computed only when stop terminates the episode. Invalid
  /// turns consume the step budget.
  StepOutcome step(std::string_view raw_action) {
    if (finished_) throw std::logic_error("step() on a finished episode");
    --steps_remaining_;

    StepOutcome out;
    std::optional<ActionCall> parsed;
    std::string env_feedback;

    ExtractResult extracted = extract_action(raw_action);
    if (is_parse_error(extracted)) {
      env_feedback = feedback::kInvalidFormat;
    } else {
      ActionCall call = std::get<ActionCall>(std::move(extracted));
      if (auto violation = validate(call, schemas_)) {
        parsed = std::move(call);
        env_feedback = std::string(feedback::kInvalidAction) + ": " + *violation;
      } else {
        ActionCall norm = normalize(call, schemas_);
        parsed = norm;
        if (norm.name == "stop") {
          out.terminated = true;
          out.reward = env_->success() ? 1 : 0;
          env_feedback = feedback::kStopped;
        } else {
          env_feedback = env_->apply(norm);
        }
      }
    }

    if (!out.terminated && steps_remaining_ == 0) out.truncated = true;
    finished_ = out.terminated || out.truncated;

    std::string visible = cfg_.feedback_enabled ? env_feedback : std::string();
    TurnRecord rec{current_obs_, std::string(raw_action), parsed, visible};
    traj_.turns.push_back(rec);

    out.observation = render_observation(visible, steps_remaining_);
    current_obs_ = out.observation;

    if (finished_) {
      traj_.reward = out.reward;
      traj_.terminated = out.terminated;
      traj_.truncated = out.truncated;
    }
    return out;
  }

  /// The observation the env would emit in its solved configuration.
  std::optional<Observation> goal_observation() const { return render_goal(); }

 private:
  Episode() = default;

  Observation render_observation(const std::string& fb, int steps_left) const {
    Observation obs;
    if (cfg_.text_mode) {
      auto grid = env_->render_text();
      if (!grid) throw std::logic_error("text mode without text renderer");
      obs.text_view = ascii_frame(*grid);
    } else {
      obs.image = env_->render_image();
    }
    obs.feedback = fb;
    obs.steps_remaining = steps_left;
    return obs;
  }

  std::optional<Observation> render_goal() const {
    Observation obs;
    if (cfg_.text_mode) {
      auto grid = env_->goal_text();
      if (!grid) return std::nullopt;
      obs.text_view = ascii_frame(*grid);
    } else {
      obs.image = env_->goal_image();
    }
    obs.steps_remaining = 0;
    return obs;
  }

  EpisodeConfig cfg_;
  std::unique_ptr<EnvInstance> env_;
  std::vector<PayloadSchema> schemas_;
  std::string instruction_;
  Observation current_obs_;
  std::optional<Observation> goal_;
  Trajectory traj_;
  int max_steps_ = 0;
  int steps_remaining_ = 0;
  bool finished_ = false;
};

}  // namespace visgym
