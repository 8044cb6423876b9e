#include <catch2/catch_amalgamated.hpp>

#include "visgym/envs.hpp"
#include "visgym/serialize.hpp"

using namespace visgym;

namespace {

EpisodeConfig maze_cfg(std::uint64_t seed = 7, Difficulty d = Difficulty::easy) {
  EpisodeConfig cfg;
  cfg.env_id = "maze2d";
  cfg.difficulty = d;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("reset produces instruction and a 9x9 maze image on the easy preset") {
  Episode ep = start_episode(maze_cfg());
  REQUIRE(ep.instruction().find("move(d)") != std::string::npos);
  REQUIRE(ep.instruction().find("stop()") != std::string::npos);
  REQUIRE(ep.observation().image.has_value());
  // 9x9 payload + wall ring + view ring at 32 px per cell.
  REQUIRE(ep.observation().image->width() == (9 + 4) * 32);
  REQUIRE(ep.observation().image->height() == (9 + 4) * 32);
  REQUIRE(ep.observation().steps_remaining == 20);
}

TEST_CASE("reset is deterministic: identical seeds give identical bytes") {
  Episode a = start_episode(maze_cfg());
  Episode b = start_episode(maze_cfg());
  REQUIRE(a.instruction() == b.instruction());
  REQUIRE(*a.observation().image == *b.observation().image);
  REQUIRE(a.trajectory().initial_state_digest == b.trajectory().initial_state_digest);
}

TEST_CASE("degenerate explicit parameter is rejected") {
  EpisodeConfig cfg;
  cfg.env_id = "sliding_block";
  cfg.params["sm"] = 0;
  REQUIRE_THROWS_WITH(start_episode(cfg), Catch::Matchers::ContainsSubstring("parameter out of range"));
}

TEST_CASE("unknown env id is rejected") {
  EpisodeConfig cfg;
  cfg.env_id = "no_such_env";
  REQUIRE_THROWS_AS(start_episode(cfg), ConfigError);
}

TEST_CASE("unknown parameter name is rejected") {
  EpisodeConfig cfg = maze_cfg();
  cfg.params["bogus"] = 1;
  REQUIRE_THROWS_AS(start_episode(cfg), ConfigError);
}

TEST_CASE("text mode on an unsupported env is an operator error") {
  EpisodeConfig cfg;
  cfg.env_id = "mental_rotation_3d";
  cfg.text_mode = true;
  REQUIRE_THROWS_AS(start_episode(cfg), ConfigError);
}

TEST_CASE("invalid format leaves the state unchanged and costs a step") {
  Episode ep = start_episode(maze_cfg());
  Canvas before = *ep.observation().image;
  StepOutcome out = ep.step("hello world");
  REQUIRE(out.reward == 0);
  REQUIRE(out.observation.feedback == "invalid format");
  REQUIRE(!out.terminated);
  REQUIRE(*out.observation.image == before);
  REQUIRE(out.observation.steps_remaining == 19);
}

TEST_CASE("invalid action names the violation") {
  Episode ep = start_episode(maze_cfg());
  StepOutcome out = ep.step("('move', 7)");
  REQUIRE(out.observation.feedback.rfind("invalid action", 0) == 0);
  REQUIRE(out.observation.feedback.find("direction out of range") != std::string::npos);
}

TEST_CASE("wall bump feedback matches verbatim") {
  // Probe seeds until the initial cell has a blocked direction (nearly all do).
  for (std::uint64_t seed = 0; seed < 16; ++seed) {
    Episode ep = start_episode(maze_cfg(seed));
    bool found = false;
    for (int d = 0; d < 4 && !found; ++d) {
      Episode probe = start_episode(maze_cfg(seed));
      StepOutcome out = probe.step("('move', " + std::to_string(d) + ")");
      if (out.observation.feedback == "Cannot move into a wall.") found = true;
    }
    if (found) return;
  }
  FAIL("no wall bump found across 16 seeds");
}

TEST_CASE("reward only at stop; reaching the goal does not terminate") {
  EpisodeConfig cfg = maze_cfg(3);
  Episode ep = start_episode(cfg);
  SolverPlan plan = ep.env().solve({});
  for (std::size_t i = 0; i + 1 < plan.actions.size(); ++i) {
    StepOutcome out = ep.step(canonical_repr(plan.actions[i]));
    REQUIRE(!out.terminated);
    REQUIRE(out.reward == 0);
  }
  REQUIRE(ep.env().success());
  StepOutcome last = ep.step("('stop',)");
  REQUIRE(last.terminated);
  REQUIRE(last.reward == 1);
  REQUIRE(!last.truncated);
}

TEST_CASE("stop away from the goal terminates with reward 0") {
  Episode ep = start_episode(maze_cfg(5));
  StepOutcome out = ep.step("('stop',)");
  REQUIRE(out.terminated);
  REQUIRE(out.reward == 0);
}

TEST_CASE("budget exhaustion truncates with reward 0 even when solved") {
  EpisodeConfig cfg = maze_cfg(3);
  Episode probe = start_episode(cfg);
  SolverPlan plan = probe.env().solve({});
  int moves = plan.non_stop_actions();
  cfg.max_steps = moves;  // exactly enough to reach the goal, not to stop
  Episode ep = start_episode(cfg);
  StepOutcome out;
  for (int i = 0; i < moves; ++i) out = ep.step(canonical_repr(plan.actions[std::size_t(i)]));
  REQUIRE(ep.env().success());
  REQUIRE(out.truncated);
  REQUIRE(!out.terminated);
  REQUIRE(out.reward == 0);
  REQUIRE(int(ep.trajectory().turns.size()) == moves);
}

TEST_CASE("stepping a finished episode is a usage error") {
  EpisodeConfig cfg = maze_cfg();
  Episode ep = start_episode(cfg);
  ep.step("('stop',)");
  REQUIRE_THROWS_AS(ep.step("('stop',)"), std::logic_error);
}

TEST_CASE("invalid turns consume the budget and can truncate") {
  EpisodeConfig cfg = maze_cfg();
  cfg.max_steps = 3;
  Episode ep = start_episode(cfg);
  ep.step("???");
  ep.step("???");
  StepOutcome out = ep.step("???");
  REQUIRE(out.truncated);
  REQUIRE(ep.trajectory().turns.size() == 3);
}

TEST_CASE("parsed is recorded exactly when format was valid") {
  EpisodeConfig cfg = maze_cfg();
  Episode ep = start_episode(cfg);
  ep.step("gibberish");
  ep.step("('move', 9)");  // invalid action, still parsed
  const auto& turns = ep.trajectory().turns;
  REQUIRE(!turns[0].parsed.has_value());
  REQUIRE(turns[0].feedback == "invalid format");
  REQUIRE(turns[1].parsed.has_value());
}

TEST_CASE("max_steps defaults differ by difficulty") {
  REQUIRE(start_episode(maze_cfg(1, Difficulty::easy)).max_steps() == 20);
  REQUIRE(start_episode(maze_cfg(1, Difficulty::hard)).max_steps() == 30);
}

TEST_CASE("build_history windows") {
  Trajectory traj;
  for (int i = 0; i < 6; ++i) {
    TurnRecord rec;
    rec.raw_action = "a" + std::to_string(i);
    traj.turns.push_back(rec);
  }
  auto w1 = build_history(traj, 1);
  REQUIRE(w1.size() == 1);
  REQUIRE(w1[0].raw_action == "a5");
  REQUIRE(build_history(traj, std::nullopt).size() == 6);
  Trajectory two;
  two.turns = {traj.turns[0], traj.turns[1]};
  REQUIRE(build_history(two, 4).size() == 2);
  REQUIRE_THROWS_AS(build_history(traj, 0), std::invalid_argument);
}

TEST_CASE("history windows nest as suffixes") {
  Trajectory traj;
  for (int i = 0; i < 7; ++i) {
    TurnRecord rec;
    rec.raw_action = std::to_string(i);
    traj.turns.push_back(rec);
  }
  for (int k = 1; k <= 7; ++k) {
    for (int k2 = k; k2 <= 8; ++k2) {
      auto small = build_history(traj, k);
      auto big = build_history(traj, k2);
      REQUIRE(small.size() <= big.size());
      for (std::size_t i = 0; i < small.size(); ++i)
        REQUIRE(small[small.size() - 1 - i].raw_action == big[big.size() - 1 - i].raw_action);
    }
  }
}

TEST_CASE("goal observation exists for every env and differs from the start") {
  for (const auto& def : env_registry()) {
    EpisodeConfig cfg;
    cfg.env_id = def.id;
    cfg.seed = 11;
    Episode ep = start_episode(cfg);
    auto goal = ep.goal_observation();
    INFO(def.id);
    REQUIRE(goal.has_value());
    REQUIRE(goal->image.has_value());
  }
}

TEST_CASE("maze goal shows the agent at the target") {
  EpisodeConfig cfg = maze_cfg(3);
  Episode ep = start_episode(cfg);
  auto goal = ep.goal_observation();
  SolverPlan plan = ep.env().solve({});
  for (std::size_t i = 0; i + 1 < plan.actions.size(); ++i) ep.step(canonical_repr(plan.actions[i]));
  // Now that the agent stands on the target, the live render equals the goal.
  REQUIRE(*ep.observation().image == *goal->image);
}

TEST_CASE("goal toggle attaches the goal ascii to the instruction in text mode") {
  EpisodeConfig cfg = maze_cfg();
  cfg.text_mode = true;
  cfg.goal_observation = true;
  Episode ep = start_episode(cfg);
  REQUIRE(ep.instruction().find("Goal state") != std::string::npos);
  REQUIRE(ep.goal().has_value());
}

TEST_CASE("episode config serializes and parses back") {
  EpisodeConfig cfg;
  cfg.env_id = "jigsaw";
  cfg.difficulty = Difficulty::hard;
  cfg.params["nr"] = 2;
  cfg.seed = 99;
  cfg.max_steps = 12;
  cfg.feedback_enabled = false;
  cfg.text_mode = false;
  cfg.goal_observation = true;
  cfg.history_window = 4;
  EpisodeConfig back = episode_config_from_json(to_json(cfg));
  REQUIRE(back.env_id == cfg.env_id);
  REQUIRE(back.difficulty == cfg.difficulty);
  REQUIRE(back.params == cfg.params);
  REQUIRE(back.seed == cfg.seed);
  REQUIRE(back.max_steps == cfg.max_steps);
  REQUIRE(back.feedback_enabled == cfg.feedback_enabled);
  REQUIRE(back.goal_observation == cfg.goal_observation);
  REQUIRE(back.history_window == cfg.history_window);
}

TEST_CASE("difficulty presets match the published configuration table") {
  struct Row {
    const char* env;
    const char* param;
    double easy, hard;
  };
  const Row rows[] = {
      {"maze2d", "mw", 9, 11},          {"maze2d", "mh", 9, 11},
      {"maze3d", "mw", 7, 9},           {"maze3d", "mh", 7, 9},
      {"sliding_block", "sm", 30, 90},  {"patch_reassembly", "gr", 6, 8},
      {"patch_reassembly", "gc", 6, 8}, {"patch_reassembly", "np", 5, 6},
      {"matchstick_equation", "bm", 1, 2},
      {"matchstick_rotation", "pt", 10, 5},
      {"matchstick_rotation", "at", 15, 10},
      {"mental_rotation_2d", "at", 10.0, 5.0},
      {"mental_rotation_3d", "ns", 4, 6},
      {"jigsaw", "nr", 2, 3},           {"jigsaw", "nc", 2, 3},
      {"zoom_in", "zv", 4, 5},          {"video_unshuffle", "nf", 4, 5},
      {"colorization", "ar", 11, 16},
  };
  for (const auto& row : rows) {
    const EnvDef& def = find_env(row.env);
    auto easy = def.preset(Difficulty::easy);
    auto hard = def.preset(Difficulty::hard);
    INFO(row.env << "." << row.param);
    REQUIRE(easy.at(row.param) == row.easy);
    REQUIRE(hard.at(row.param) == row.hard);
  }
}
