#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <thread>
#include <unordered_set>
#include <vector>

#include "visgym/envs.hpp"
#include "visgym/png.hpp"
#include "visgym/serialize.hpp"

namespace visgym {

// ---------------------------------------------------------------------------
// Agent contract
// ---------------------------------------------------------------------------

/// What an agent sees each turn: the instruction, the window-limited prior
/// turns, and the current observation (the window's own turn).
struct AgentView {
  const std::string* instruction = nullptr;
  std::span<const TurnRecord> history;
  const Observation* current = nullptr;
  const Observation* goal = nullptr;  // present with the goal-observation toggle
  int turn_index = 0;
};

/// Thrown by transports when the peer goes away; the episode ends truncated.
class TransportClosed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Agent {
 public:
  virtual ~Agent() = default;
  /// Called once after reset. Oracle agents may read the env state here.
  virtual void begin_episode(const Episode&) {}
  virtual std::string act(const AgentView& view) = 0;
  virtual void end_episode(const Trajectory&) {}
};

using AgentFactory = std::function<std::unique_ptr<Agent>(std::uint64_t episode_seed)>;

// ---------------------------------------------------------------------------
// Built-in agents
// ---------------------------------------------------------------------------

/// Replays the oracle plan for the episode's generated state.
class SolverAgent final : public Agent {
 public:
  explicit SolverAgent(std::string strategy = "", std::optional<int> target_steps = {})
      : strategy_(std::move(strategy)), target_steps_(target_steps) {}

  void begin_episode(const Episode& ep) override {
    SolverOptions opts;
    opts.strategy = strategy_;
    opts.target_steps = target_steps_;
    opts.seed = Rng::derive(ep.config().seed, "agent.solver").next();
    plan_ = ep.env().solve(opts);
    next_ = 0;
  }

  std::string act(const AgentView&) override {
    if (next_ >= plan_.actions.size()) return "('stop',)";
    return canonical_repr(plan_.actions[next_++]);
  }

  const SolverPlan& plan() const { return plan_; }

 private:
  std::string strategy_;
  std::optional<int> target_steps_;
  SolverPlan plan_;
  std::size_t next_ = 0;
};

/// Uniform schema-valid action; stop with probability 0.05.
class RandomAgent final : public Agent {
 public:
  explicit RandomAgent(std::uint64_t seed) : rng_(Rng::derive(seed, "agent.random")) {}

  void begin_episode(const Episode& ep) override { schemas_ = ep.schemas(); }

  std::string act(const AgentView&) override {
    if (rng_.chance(0.05)) return "('stop',)";
    std::vector<const PayloadSchema*> nonstop;
    for (const auto& s : schemas_)
      if (s.action != "stop") nonstop.push_back(&s);
    if (nonstop.empty()) return "('stop',)";
    const PayloadSchema& schema = *nonstop[rng_.below(nonstop.size())];
    ActionCall call{schema.action, {}};
    for (const auto& arg : schema.args) call.payload.push_back(sample_arg(arg));
    return canonical_repr(call);
  }

 private:
  Value sample_arg(const ArgSpec& arg) {
    auto range_of = [&](std::size_t i) {
      if (arg.ranges.empty()) return Interval{-10, 10};
      return arg.ranges.size() == 1 ? arg.ranges[0] : arg.ranges[i];
    };
    switch (arg.kind) {
      case ArgKind::Int: {
        auto r = range_of(0);
        return Value{std::int64_t(rng_.range_int(int(r.lo), int(r.hi)))};
      }
      case ArgKind::Real: {
        auto r = range_of(0);
        // Stay in a human-sized band even when the schema is effectively open.
        double lo = std::max(r.lo, -180.0), hi = std::min(r.hi, 180.0);
        return Value{rng_.range_real(lo, hi)};
      }
      case ArgKind::Pair: {
        std::vector<Scalar> items;
        for (std::size_t i = 0; i < 2; ++i) {
          auto r = range_of(i);
          items.emplace_back(std::int64_t(rng_.range_int(int(r.lo), int(r.hi))));
        }
        return Value{std::move(items)};
      }
      case ArgKind::IntList: {
        std::vector<Scalar> items;
        if (arg.permutation) {
          std::vector<std::int64_t> p(std::size_t(std::max(arg.len, 0)));
          for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::int64_t(i);
          rng_.shuffle(p);
          for (auto v : p) items.emplace_back(v);
        } else {
          for (int i = 0; i < arg.len; ++i) {
            auto r = range_of(std::size_t(i));
            items.emplace_back(std::int64_t(rng_.range_int(int(r.lo), int(r.hi))));
          }
        }
        return Value{std::move(items)};
      }
      case ArgKind::RealList:
      default: {
        std::vector<Scalar> items;
        for (int i = 0; i < arg.len; ++i) {
          auto r = range_of(std::size_t(i));
          double lo = std::max(r.lo, -180.0), hi = std::min(r.hi, 180.0);
          items.emplace_back(rng_.range_real(lo, hi));
        }
        return Value{std::move(items)};
      }
    }
  }

  Rng rng_{0};
  std::vector<PayloadSchema> schemas_;
};

/// Plays a fixed action list, then stop forever.
class ScriptedAgent final : public Agent {
 public:
  explicit ScriptedAgent(std::vector<std::string> actions) : actions_(std::move(actions)) {}

  std::string act(const AgentView&) override {
    if (next_ >= actions_.size()) return "('stop',)";
    return actions_[next_++];
  }

 private:
  std::vector<std::string> actions_;
  std::size_t next_ = 0;
};

// ---------------------------------------------------------------------------
// Episode runner
// ---------------------------------------------------------------------------

/// reset -> (window -> agent -> step) until terminated or truncated. The
/// agent sees (window - 1) prior turns plus the current observation; window
/// unbounded shows everything. Transport failures end the episode truncated
/// with a note.
inline Trajectory run_episode(const EpisodeConfig& cfg, Agent& agent) {
  Episode ep = start_episode(cfg);
  agent.begin_episode(ep);
  while (!ep.finished()) {
    AgentView view;
    view.instruction = &ep.instruction();
    const auto& turns = ep.trajectory().turns;
    std::size_t keep = cfg.history_window ? std::min<std::size_t>(std::size_t(std::max(*cfg.history_window - 1, 0)), turns.size())
                                          : turns.size();
    view.history = std::span<const TurnRecord>(turns.data() + turns.size() - keep, keep);
    view.current = &ep.observation();
    if (ep.goal()) view.goal = &*ep.goal();
    view.turn_index = int(turns.size());
    std::string raw;
    try {
      raw = agent.act(view);
    } catch (const TransportClosed& e) {
      Trajectory traj = ep.trajectory();
      traj.truncated = true;
      traj.terminated = false;
      traj.reward = 0;
      traj.note = std::string("transport failure: ") + e.what();
      return traj;
    }
    ep.step(raw);
  }
  agent.end_episode(ep.trajectory());
  return ep.trajectory();
}

// ---------------------------------------------------------------------------
// Batched evaluation
// ---------------------------------------------------------------------------

struct EpisodeResult {
  std::uint64_t seed = 0;
  int reward = 0;
  int steps = 0;
  bool truncated = false;
  std::string initial_state_digest;
};

struct EvalSummary {
  std::string env_id;
  Difficulty difficulty = Difficulty::easy;
  int episodes = 0;
  int successes = 0;
  double success_rate = 0;
  double mean_steps_success = 0;
  std::map<int, int> step_histogram;  // steps taken, successful episodes
  std::vector<EpisodeResult> results;
};

/// Independent episodes, deterministic regardless of parallelism; per-episode
/// seeds are taken from the configs (the CLI assigns base_seed + index).
inline EvalSummary run_batch(const std::vector<EpisodeConfig>& configs, const AgentFactory& factory,
                             int parallelism = 1) {
  if (configs.empty()) throw std::invalid_argument("run_batch: empty config list");
  std::vector<EpisodeResult> results(configs.size());
  std::atomic<std::size_t> cursor{0};
  auto worker = [&] {
    while (true) {
      std::size_t i = cursor.fetch_add(1);
      if (i >= configs.size()) return;
      auto agent = factory(configs[i].seed);
      Trajectory traj = run_episode(configs[i], *agent);
      results[i] = {configs[i].seed, traj.reward, int(traj.turns.size()), traj.truncated,
                    traj.initial_state_digest};
    }
  };
  int threads = std::max(1, std::min<int>(parallelism, int(configs.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  EvalSummary summary;
  summary.env_id = configs.front().env_id;
  summary.difficulty = configs.front().difficulty;
  summary.episodes = int(configs.size());
  long step_total = 0;
  for (const auto& r : results) {
    if (r.reward == 1) {
      ++summary.successes;
      step_total += r.steps;
      summary.step_histogram[r.steps]++;
    }
  }
  summary.success_rate = double(summary.successes) / double(summary.episodes);
  summary.mean_steps_success = summary.successes ? double(step_total) / summary.successes : 0.0;
  summary.results = std::move(results);
  return summary;
}

inline Json to_json(const EvalSummary& s) {
  Json j;
  j["env_id"] = s.env_id;
  j["difficulty"] = to_string(s.difficulty);
  j["episodes"] = s.episodes;
  j["successes"] = s.successes;
  j["success_rate"] = s.success_rate;
  j["mean_steps_success"] = s.mean_steps_success;
  Json hist = Json::object();
  for (auto [steps, count] : s.step_histogram) hist[std::to_string(steps)] = count;
  j["step_histogram"] = hist;
  Json eps = Json::array();
  for (const auto& r : s.results) {
    eps.push_back({{"seed", r.seed},
                   {"reward", r.reward},
                   {"steps", r.steps},
                   {"truncated", r.truncated},
                   {"initial_state_digest", r.initial_state_digest}});
  }
  j["episodes_detail"] = eps;
  return j;
}

// ---------------------------------------------------------------------------
// SFT export
// ---------------------------------------------------------------------------

struct SftExportStats {
  int exported = 0;
  int dropped_failed = 0;
  int dropped_overlap = 0;
};

/// Keep reward-1 trajectories whose initial-state digest is not in the test
/// manifest; write JSON-lines with PNG observations in a sibling images/
/// directory referenced by relative path.
inline SftExportStats export_sft(const std::vector<Trajectory>& trajectories,
                                 const std::unordered_set<std::string>& test_manifest,
                                 const std::filesystem::path& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir / "images");
  std::ofstream out(out_dir / "sft.jsonl");
  if (!out) throw std::runtime_error("cannot write " + (out_dir / "sft.jsonl").string());
  SftExportStats stats;
  int index = 0;
  for (const auto& traj : trajectories) {
    if (traj.reward != 1) {
      ++stats.dropped_failed;
      continue;
    }
    if (test_manifest.count(traj.initial_state_digest)) {
      ++stats.dropped_overlap;
      continue;
    }
    Json messages = Json::array();
    messages.push_back({{"role", "system"}, {"content", traj.instruction}});
    for (std::size_t t = 0; t < traj.turns.size(); ++t) {
      const TurnRecord& turn = traj.turns[t];
      Json user{{"role", "user"}};
      std::string content;
      if (turn.observation.text_view) {
        content = *turn.observation.text_view;
      } else {
        char name[64];
        std::snprintf(name, sizeof name, "ep%05d_t%02d.png", index, int(t));
        save_png(out_dir / "images" / name, *turn.observation.image);
        user["image"] = std::string("images/") + name;
        content = "<image>";
      }
      if (!turn.observation.feedback.empty()) content += "\nfeedback: " + turn.observation.feedback;
      content += "\nsteps remaining: " + std::to_string(turn.observation.steps_remaining);
      user["content"] = content;
      messages.push_back(user);
      messages.push_back({{"role", "assistant"}, {"content", turn.raw_action}});
    }
    Json rec;
    rec["messages"] = messages;
    rec["metadata"] = {{"env", traj.env_id},
                       {"difficulty", to_string(traj.difficulty)},
                       {"params", traj.params},
                       {"seed", traj.seed},
                       {"initial_state_digest", traj.initial_state_digest},
                       {"reward", traj.reward}};
    if (!traj.note.empty()) rec["metadata"]["note"] = traj.note;
    out << rec.dump() << "\n";
    ++stats.exported;
    ++index;
  }
  return stats;
}

}  // namespace visgym
