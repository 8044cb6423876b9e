// Operator entry point: enumerate environments, run rollouts and
// evaluations, invoke solvers, export SFT data, serve the wire protocol and
// dump renders. Exit codes: 0 success, 1 usage error, 2 runtime failure.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "visgym/harness.hpp"
#include "visgym/image_io.hpp"
#include "visgym/wire.hpp"

namespace fs = std::filesystem;
using namespace visgym;

namespace {

struct CommonFlags {
  std::string env;
  std::string difficulty = "easy";
  std::vector<std::string> params;
  std::uint64_t seed = 0;
  int episodes = 70;
  std::string agent = "solver";
  std::string history_window = "inf";
  bool no_feedback = false;
  bool text_mode = false;
  bool goal_obs = false;
  std::string assets;
  std::string out_dir = "out";
  int parallelism = 1;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool needs_env = true) {
  auto* env = cmd->add_option("--env", f.env, "environment id (see `list`)");
  if (needs_env) env->required();
  cmd->add_option("--difficulty", f.difficulty, "easy or hard")->check(CLI::IsMember({"easy", "hard"}));
  cmd->add_option("--param", f.params, "explicit parameter k=v (repeatable, overrides the preset)");
  cmd->add_option("--seed", f.seed, "base seed");
  cmd->add_option("--agent", f.agent,
                  "solver[:strategy] | random | scripted:<a1;a2;...> | external:<host:port|stdio>");
  cmd->add_option("--history-window", f.history_window, "1, 2, 4, any positive integer, or inf");
  cmd->add_flag("--no-feedback", f.no_feedback, "remove textual env feedback");
  cmd->add_flag("--text-mode", f.text_mode, "ASCII observations (supported envs only)");
  cmd->add_flag("--goal-obs", f.goal_obs, "attach the solved-state observation to the instruction");
  cmd->add_option("--assets", f.assets, "asset directory (default $VISGYM_ASSETS, else synthetic)");
  cmd->add_option("--out", f.out_dir, "output directory");
}

EpisodeConfig make_config(const CommonFlags& f) {
  EpisodeConfig cfg;
  cfg.env_id = f.env;
  cfg.difficulty = f.difficulty == "hard" ? Difficulty::hard : Difficulty::easy;
  for (const auto& kv : f.params) {
    auto pos = kv.find('=');
    if (pos == std::string::npos) throw ConfigError("bad --param '" + kv + "', expected k=v");
    cfg.params[kv.substr(0, pos)] = std::stod(kv.substr(pos + 1));
  }
  cfg.seed = f.seed;
  cfg.feedback_enabled = !f.no_feedback;
  cfg.text_mode = f.text_mode;
  cfg.goal_observation = f.goal_obs;
  if (f.history_window != "inf") cfg.history_window = std::stoi(f.history_window);
  cfg.assets_dir = f.assets;
  if (cfg.assets_dir.empty())
    if (const char* env = std::getenv("VISGYM_ASSETS")) cfg.assets_dir = env;
  return cfg;
}

/// "solver", "solver:sos", "random", "scripted:...", "external:host:port".
AgentFactory make_agent_factory(const std::string& spec) {
  if (spec == "solver" || spec.rfind("solver:", 0) == 0) {
    std::string strategy = spec.size() > 7 ? spec.substr(7) : "";
    return [strategy](std::uint64_t) { return std::make_unique<SolverAgent>(strategy); };
  }
  if (spec == "random") {
    return [](std::uint64_t seed) { return std::make_unique<RandomAgent>(seed); };
  }
  if (spec.rfind("scripted:", 0) == 0) {
    std::vector<std::string> actions;
    std::string body = spec.substr(9);
    std::size_t start = 0;
    while (start <= body.size()) {
      auto pos = body.find(';', start);
      actions.push_back(body.substr(start, pos == std::string::npos ? pos : pos - start));
      if (pos == std::string::npos) break;
      start = pos + 1;
    }
    return [actions](std::uint64_t) { return std::make_unique<ScriptedAgent>(actions); };
  }
  if (spec.rfind("external:", 0) == 0) {
    std::string addr = spec.substr(9);
    if (addr == "stdio") {
      return [](std::uint64_t) {
        return std::make_unique<ExternalAgent>(std::make_unique<StdioTransport>());
      };
    }
    auto colon = addr.rfind(':');
    if (colon == std::string::npos) throw ConfigError("external agent address must be host:port or stdio");
    std::string host = addr.substr(0, colon);
    int port = std::stoi(addr.substr(colon + 1));
    return [host, port](std::uint64_t) {
      return std::make_unique<ExternalAgent>(TcpTransport::connect_to(host, port));
    };
  }
  throw ConfigError("unknown agent spec '" + spec + "'");
}

void write_observation(const Observation& obs, const fs::path& stem) {
  if (obs.image) save_png(fs::path(stem.string() + ".png"), *obs.image);
  if (obs.text_view) {
    std::ofstream txt(stem.string() + ".txt");
    txt << *obs.text_view << "\n";
  }
}

int cmd_list() {
  std::printf("%-22s %-28s %-52s %s\n", "id", "title", "actions", "parameters (easy / hard)");
  for (const auto& def : env_registry()) {
    std::string params;
    for (const auto& p : def.params) {
      if (!params.empty()) params += ", ";
      char buf[96];
      std::snprintf(buf, sizeof buf, "%s=%g/%g", p.name.c_str(), p.easy, p.hard);
      params += buf;
    }
    std::printf("%-22s %-28s %-52s %s\n", def.id.c_str(), def.title.c_str(), def.actions_doc.c_str(),
                params.c_str());
    std::printf("%-22s %-28s text_mode=%s\n", "", "", def.supports_text ? "yes" : "no");
  }
  return 0;
}

int cmd_rollout(const CommonFlags& flags) {
  EpisodeConfig cfg = make_config(flags);
  fs::create_directories(flags.out_dir);
  auto factory = make_agent_factory(flags.agent);
  Episode probe = start_episode(cfg);  // initial frame dump
  write_observation(probe.observation(), fs::path(flags.out_dir) / "turn_00");
  auto agent = factory(cfg.seed);
  Trajectory traj = run_episode(cfg, *agent);

  Json turns = Json::array();
  for (std::size_t t = 0; t < traj.turns.size(); ++t) {
    const auto& turn = traj.turns[t];
    char stem[32];
    std::snprintf(stem, sizeof stem, "turn_%02d", int(t + 1));
    Json j{{"raw_action", turn.raw_action},
           {"feedback", turn.feedback},
           {"parsed", turn.parsed ? Json(canonical_repr(*turn.parsed)) : Json(nullptr)}};
    turns.push_back(j);
  }
  // Frames after each action.
  {
    Episode replay = start_episode(cfg);
    int t = 1;
    for (const auto& turn : traj.turns) {
      StepOutcome out = replay.step(turn.raw_action);
      char stem[32];
      std::snprintf(stem, sizeof stem, "turn_%02d", t++);
      write_observation(out.observation, fs::path(flags.out_dir) / stem);
      if (replay.finished()) break;
    }
  }
  Json doc{{"config", to_json(cfg)},
           {"instruction", traj.instruction},
           {"initial_state_digest", traj.initial_state_digest},
           {"turns", turns},
           {"reward", traj.reward},
           {"terminated", traj.terminated},
           {"truncated", traj.truncated}};
  std::ofstream out(fs::path(flags.out_dir) / "trajectory.json");
  out << doc.dump(2) << "\n";
  std::printf("reward %d after %zu turns -> %s/trajectory.json\n", traj.reward, traj.turns.size(),
              flags.out_dir.c_str());
  return 0;
}

int cmd_solve(const CommonFlags& flags, const std::string& strategy, int target_steps, bool verify) {
  EpisodeConfig cfg = make_config(flags);
  Episode ep = start_episode(cfg);
  SolverOptions opts;
  opts.strategy = strategy;
  if (target_steps > 0) opts.target_steps = target_steps;
  opts.seed = Rng::derive(cfg.seed, "cli.solve").next();
  SolverPlan plan = ep.env().solve(opts);
  for (const auto& a : plan.actions) std::printf("%s\n", canonical_repr(a).c_str());
  if (verify) {
    bool ok = verify_plan(cfg, plan);
    std::printf("plan verified: reward %d\n", ok ? 1 : 0);
    return ok ? 0 : 2;
  }
  return 0;
}

int cmd_eval(const CommonFlags& flags, const std::string& manifest_out) {
  EpisodeConfig base = make_config(flags);
  std::vector<EpisodeConfig> configs;
  for (int i = 0; i < flags.episodes; ++i) {
    EpisodeConfig cfg = base;
    cfg.seed = base.seed + std::uint64_t(i);
    configs.push_back(cfg);
  }
  EvalSummary summary = run_batch(configs, make_agent_factory(flags.agent), flags.parallelism);
  std::printf("%-22s %-5s episodes %-4d success_rate %.2f mean_steps %.2f\n", summary.env_id.c_str(),
              to_string(summary.difficulty).c_str(), summary.episodes, summary.success_rate,
              summary.mean_steps_success);
  fs::create_directories(flags.out_dir);
  std::ofstream out(fs::path(flags.out_dir) / "summary.json");
  out << to_json(summary).dump(2) << "\n";
  if (!manifest_out.empty()) {
    Json digests = Json::array();
    for (const auto& r : summary.results) digests.push_back(r.initial_state_digest);
    std::ofstream m(manifest_out);
    m << Json{{"digests", digests}}.dump(2) << "\n";
  }
  return 0;
}

int cmd_export_sft(const CommonFlags& flags, const std::string& strategy, const std::string& manifest,
                   int target_steps) {
  EpisodeConfig base = make_config(flags);
  std::vector<Trajectory> trajectories;
  for (int i = 0; i < flags.episodes; ++i) {
    EpisodeConfig cfg = base;
    cfg.seed = base.seed + std::uint64_t(i);
    SolverAgent agent(strategy, target_steps > 0 ? std::optional<int>(target_steps) : std::nullopt);
    trajectories.push_back(run_episode(cfg, agent));
  }
  std::unordered_set<std::string> test_manifest;
  if (!manifest.empty()) test_manifest = load_digest_manifest(manifest);
  auto stats = export_sft(trajectories, test_manifest, flags.out_dir);
  std::printf("exported %d records (%d failed dropped, %d overlap dropped) -> %s/sft.jsonl\n",
              stats.exported, stats.dropped_failed, stats.dropped_overlap, flags.out_dir.c_str());
  return 0;
}

int cmd_serve(const CommonFlags& flags, int port) {
  EpisodeConfig base = make_config(flags);
  TcpListener listener(port);
  std::printf("listening on port %d; one connection per episode, %d episode(s), env %s\n",
              listener.port(), flags.episodes, base.env_id.c_str());
  std::fflush(stdout);
  serve_episodes(listener, base, flags.episodes, std::cout);
  return 0;
}

int cmd_render(const CommonFlags& flags) {
  EpisodeConfig cfg = make_config(flags);
  fs::create_directories(flags.out_dir);
  Episode ep = start_episode(cfg);
  fs::path stem = fs::path(flags.out_dir) / (cfg.env_id + "_" + std::to_string(cfg.seed));
  write_observation(ep.observation(), stem);
  if (cfg.goal_observation) {
    if (auto goal = ep.goal_observation()) write_observation(*goal, fs::path(stem.string() + "_goal"));
  }
  std::ofstream inst(stem.string() + "_instruction.txt");
  inst << ep.instruction() << "\n";
  std::printf("wrote %s.*\n", stem.string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"visgym: interactive visual decision-making environments"};
  app.require_subcommand(1);

  CommonFlags flags;

  auto* list = app.add_subcommand("list", "enumerate environments, parameters and actions");

  auto* rollout = app.add_subcommand("rollout", "run one episode and dump trajectory + frames");
  add_common(rollout, flags);

  auto* solve = app.add_subcommand("solve", "print a solver plan (optionally verify by replay)");
  std::string solve_strategy;
  int solve_target = 0;
  bool solve_verify = false;
  add_common(solve, flags);
  solve->add_option("--strategy", solve_strategy, "solver strategy (env-specific)");
  solve->add_option("--target-steps", solve_target, "pad the plan to this many non-stop actions");
  solve->add_flag("--verify", solve_verify, "replay the plan through the step engine");

  auto* eval = app.add_subcommand("eval", "run a batch of episodes and summarize");
  std::string manifest_out;
  add_common(eval, flags);
  eval->add_option("--episodes", flags.episodes, "episode count (default 70)");
  eval->add_option("--parallelism", flags.parallelism, "worker threads");
  eval->add_option("--write-manifest", manifest_out, "write initial-state digests to this file");

  auto* export_sft_cmd = app.add_subcommand("export-sft", "solver trajectories -> filtered JSONL");
  std::string sft_strategy, sft_manifest;
  int sft_target = 0;
  add_common(export_sft_cmd, flags);
  export_sft_cmd->add_option("--episodes", flags.episodes, "trajectories to generate");
  export_sft_cmd->add_option("--strategy", sft_strategy, "solver strategy");
  export_sft_cmd->add_option("--target-steps", sft_target, "pad plans to this length");
  export_sft_cmd->add_option("--test-manifest", sft_manifest, "digest manifest for the overlap filter");

  auto* serve = app.add_subcommand("serve", "listen for wire-protocol agents");
  int port = 0;
  add_common(serve, flags);
  serve->add_option("--port", port, "TCP port (0 = ephemeral)");
  serve->add_option("--episodes", flags.episodes, "episodes to serve before exiting");

  auto* render = app.add_subcommand("render", "dump the initial observation for a seed");
  add_common(render, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);  // prints usage to the error stream; nonzero on error
  }

  try {
    if (list->parsed()) return cmd_list();
    if (rollout->parsed()) return cmd_rollout(flags);
    if (solve->parsed()) return cmd_solve(flags, solve_strategy, solve_target, solve_verify);
    if (eval->parsed()) return cmd_eval(flags, manifest_out);
    if (export_sft_cmd->parsed()) return cmd_export_sft(flags, sft_strategy, sft_manifest, sft_target);
    if (serve->parsed()) return cmd_serve(flags, port);
    if (render->parsed()) return cmd_render(flags);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "runtime failure: %s\n", e.what());
    return 2;
  }
  return 0;
}
