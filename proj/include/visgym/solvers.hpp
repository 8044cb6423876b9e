#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "visgym/core.hpp"
#include "visgym/env/image_tasks.hpp"
#include "visgym/env/matchstick_equation.hpp"
#include "visgym/env/matchstick_rotation.hpp"
#include "visgym/env/maze.hpp"
#include "visgym/env/mr3d.hpp"
#include "visgym/env/patch.hpp"
#include "visgym/env/sliding.hpp"

namespace visgym {

namespace detail {

inline ActionCall stop_call() { return make_call("stop"); }

[[noreturn]] inline void bad_strategy(const std::string& env, const std::string& s) {
  throw std::invalid_argument("unknown solver strategy '" + s + "' for " + env);
}

inline void check_target(std::optional<int> target, int base, int step, const char* env) {
  if (!target) return;
  if (*target < base || (*target - base) % step != 0)
    throw std::invalid_argument(std::string(env) + ": target_steps must be base + k*" +
                                std::to_string(step) + " (base " + std::to_string(base) + ")");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Maze 2D / Maze 3D
// ---------------------------------------------------------------------------

/// Shortest move sequence by breadth-first search; padding inserts reversible
/// move pairs at valid path locations.
inline SolverPlan solve_maze2d(const MazeState& st, const SolverOptions& opts = {}) {
  auto path = maze_shortest_path(st, st.agent, st.target);
  auto dirs = maze_path_dirs(path);
  int base = int(dirs.size());
  detail::check_target(opts.target_steps, base, 2, "maze2d");
  int pairs = opts.target_steps ? (*opts.target_steps - base) / 2 : 0;

  Rng rng = Rng::derive(opts.seed, "solve.maze2d");
  // Expand to (cell, dir) steps, then insert pairs at random positions.
  struct Step { std::pair<int, int> at; int dir; };
  std::vector<Step> steps;
  for (std::size_t i = 0; i < dirs.size(); ++i) steps.push_back({path[i], dirs[std::size_t(i)]});
  for (int k = 0; k < pairs; ++k) {
    std::size_t pos = std::size_t(rng.below(steps.size() + 1));
    std::pair<int, int> cell = pos < steps.size() ? steps[pos].at : st.target;
    std::vector<int> legal;
    for (int d = 0; d < 4; ++d)
      if (maze_can_move(st, cell, d)) legal.push_back(d);
    int d = legal[rng.below(legal.size())];
    steps.insert(steps.begin() + std::ptrdiff_t(pos),
                 {Step{cell, d},
                  Step{{cell.first + 2 * kDirDr[d], cell.second + 2 * kDirDc[d]}, kOppositeDir[d]}});
  }
  SolverPlan plan;
  plan.strategy = "shortest";
  plan.seed = opts.seed;
  for (const auto& s : steps) plan.actions.push_back(make_call("move", {s.dir}));
  plan.actions.push_back(detail::stop_call());
  return plan;
}

/// Path converted to turn/move actions accounting for the current
/// orientation; padding inserts reversible turn pairs.
inline SolverPlan solve_maze3d(const MazeState& st, const SolverOptions& opts = {}) {
  auto dirs = maze_path_dirs(maze_shortest_path(st, st.agent, st.target));
  auto acts = maze_path_to_actions(dirs, st.heading);
  int base = int(acts.size());
  detail::check_target(opts.target_steps, base, 2, "maze3d");
  int pairs = opts.target_steps ? (*opts.target_steps - base) / 2 : 0;

  SolverPlan plan;
  plan.strategy = "shortest";
  plan.seed = opts.seed;
  for (const auto& [name, arg] : acts) plan.actions.push_back(make_call(name, {arg}));
  Rng rng = Rng::derive(opts.seed, "solve.maze3d");
  for (int k = 0; k < pairs; ++k) {
    std::size_t pos = std::size_t(rng.below(plan.actions.size() + 1));
    bool left_first = rng.chance(0.5);
    ActionCall a = make_call("turn", {left_first ? 0 : 1});
    ActionCall b = make_call("turn", {left_first ? 1 : 0});
    plan.actions.insert(plan.actions.begin() + std::ptrdiff_t(pos), {a, b});
  }
  plan.actions.push_back(detail::stop_call());
  return plan;
}

// ---------------------------------------------------------------------------
// Sliding Block
// ---------------------------------------------------------------------------

/// Budgeted BFS over canonical board hashes; inverse-shuffle replay when the
/// budget runs out. Padding samples back-and-forth pairs at intermediate
/// board states.
inline SolverPlan solve_sliding(const SlidingState& st, const SolverOptions& opts = {}) {
  auto bfs = detail::sliding_bfs(st.board, st.target, st.num_blocks);
  std::vector<std::pair<int, int>> moves = bfs.found ? bfs.moves : st.inverse_shuffle;
  int base = int(moves.size());
  detail::check_target(opts.target_steps, base, 2, "sliding");
  int pairs = opts.target_steps ? (*opts.target_steps - base) / 2 : 0;

  Rng rng = Rng::derive(opts.seed, "solve.sliding");
  for (int k = 0; k < pairs; ++k) {
    // Reconstruct intermediate boards and collect (index, move) options.
    std::size_t pos = std::size_t(rng.below(moves.size() + 1));
    SlidingState::Board board = st.board;
    for (std::size_t i = 0; i < pos; ++i) detail::sliding_do_move(board, moves[i].first, moves[i].second);
    std::vector<std::pair<int, int>> options;
    for (int b = 0; b < st.num_blocks; ++b)
      for (int d = 0; d < 4; ++d)
        if (detail::sliding_move_ok(board, b, d)) options.push_back({b, d});
    auto [b, d] = options[rng.below(options.size())];
    moves.insert(moves.begin() + std::ptrdiff_t(pos), {{b, d}, {b, kOppositeDir[d]}});
  }
  SolverPlan plan;
  plan.strategy = bfs.found ? "bfs" : "inverse_shuffle";
  plan.seed = opts.seed;
  for (auto [b, d] : moves) plan.actions.push_back(make_call("move", {b, d}));
  plan.actions.push_back(detail::stop_call());
  return plan;
}

// ---------------------------------------------------------------------------
// Patch Reassembly
// ---------------------------------------------------------------------------

namespace detail {

/// Exact-cover backtracking ordered by the first uncovered cell; returns
/// anchors per patch.
inline bool patch_tile_search(const PatchState& st, std::vector<std::int8_t>& occ,
                              std::vector<std::optional<std::pair<int, int>>>& anchors,
                              std::vector<int>& order) {
  int cell = -1;
  for (int i = 0; i < st.rows * st.cols; ++i)
    if (occ[std::size_t(i)] < 0) {
      cell = i;
      break;
    }
  if (cell < 0) return true;
  int r = cell / st.cols, c = cell % st.cols;
  for (int p = 0; p < st.np; ++p) {
    if (anchors[std::size_t(p)]) continue;
    // Anchor placements covering (r, c): the anchor is the first shape cell,
    // so anchoring at (r - dr, c - dc) puts shape cell (dr, dc) on the hole.
    for (auto [dr, dc] : st.shapes[std::size_t(p)]) {
      int ar = r - dr, ac = c - dc;
      bool fits = true;
      for (auto [sr, sc] : st.shapes[std::size_t(p)]) {
        int rr = ar + sr, cc = ac + sc;
        if (rr < 0 || cc < 0 || rr >= st.rows || cc >= st.cols ||
            occ[std::size_t(rr) * st.cols + cc] >= 0) {
          fits = false;
          break;
        }
      }
      if (!fits) continue;
      for (auto [sr, sc] : st.shapes[std::size_t(p)]) occ[std::size_t(ar + sr) * st.cols + (ac + sc)] = std::int8_t(p);
      anchors[std::size_t(p)] = {{ar, ac}};
      order.push_back(p);
      if (patch_tile_search(st, occ, anchors, order)) return true;
      for (auto [sr, sc] : st.shapes[std::size_t(p)]) occ[std::size_t(ar + sr) * st.cols + (ac + sc)] = -1;
      anchors[std::size_t(p)] = std::nullopt;
      order.pop_back();
    }
  }
  return false;
}

}  // namespace detail

/// Backtracking exact tiling; padding inserts mistake-and-correct placements,
/// falling back to remove + re-place pairs.
inline SolverPlan solve_patch(const PatchState& st, const SolverOptions& opts = {}) {
  auto occ = detail::patch_occupancy(st);
  std::vector<std::optional<std::pair<int, int>>> anchors(std::size_t(st.np));
  std::vector<int> order;
  for (int p = 0; p < st.np; ++p) anchors[std::size_t(p)] = st.placed[std::size_t(p)];
  SolverPlan plan;
  plan.strategy = "backtracking";
  plan.seed = opts.seed;
  std::vector<ActionCall> base_actions;
  if (!detail::patch_tile_search(st, occ, anchors, order)) {
    // No tiling extends the current placement; clear the board first.
    for (int p = 0; p < st.np; ++p)
      if (st.placed[std::size_t(p)]) base_actions.push_back(make_call("remove", {p}));
    occ.assign(std::size_t(st.rows) * st.cols, -1);
    anchors.assign(std::size_t(st.np), std::nullopt);
    order.clear();
    if (!detail::patch_tile_search(st, occ, anchors, order))
      throw std::logic_error("patch: no exact tiling found");
  }
  for (int p : order)
    base_actions.push_back(make_call("place", {p, anchors[std::size_t(p)]->first, anchors[std::size_t(p)]->second}));

  int base = int(base_actions.size());
  detail::check_target(opts.target_steps, base, 2, "patch");
  int pairs = opts.target_steps ? (*opts.target_steps - base) / 2 : 0;
  Rng rng = Rng::derive(opts.seed, "solve.patch");
  for (int k = 0; k < pairs; ++k) {
    // Pick a `place` action; insert a wrong placement + remove right before
    // it, or fall back to remove + duplicate place right after it.
    std::vector<std::size_t> place_idx;
    for (std::size_t i = 0; i < base_actions.size(); ++i)
      if (base_actions[i].name == "place") place_idx.push_back(i);
    std::size_t idx = place_idx[rng.below(place_idx.size())];
    const ActionCall& correct = base_actions[idx];
    int p = int(std::get<std::int64_t>(correct.payload[0]));
    // Board occupancy just before that action.
    PatchState sim = st;
    for (std::size_t i = 0; i < idx; ++i) {
      const auto& a = base_actions[i];
      int q = int(std::get<std::int64_t>(a.payload[0]));
      if (a.name == "remove") sim.placed[std::size_t(q)] = std::nullopt;
      else
        sim.placed[std::size_t(q)] = {{int(std::get<std::int64_t>(a.payload[1])),
                                       int(std::get<std::int64_t>(a.payload[2]))}};
    }
    auto sim_occ = detail::patch_occupancy(sim);
    std::vector<std::pair<int, int>> wrong;
    int cr = int(std::get<std::int64_t>(correct.payload[1])), cc = int(std::get<std::int64_t>(correct.payload[2]));
    for (int r = 0; r < st.rows; ++r) {
      for (int c = 0; c < st.cols; ++c) {
        if (r == cr && c == cc) continue;
        bool fits = true;
        for (auto [dr, dc] : st.shapes[std::size_t(p)]) {
          int rr = r + dr, ccx = c + dc;
          if (rr < 0 || ccx < 0 || rr >= st.rows || ccx >= st.cols ||
              sim_occ[std::size_t(rr) * st.cols + ccx] >= 0) {
            fits = false;
            break;
          }
        }
        if (fits) wrong.push_back({r, c});
      }
    }
    if (!wrong.empty()) {
      auto [wr, wc] = wrong[rng.below(wrong.size())];
      ActionCall mistake = make_call("place", {p, wr, wc});
      ActionCall correct_it = make_call("remove", {p});
      base_actions.insert(base_actions.begin() + std::ptrdiff_t(idx), {mistake, correct_it});
    } else {
      ActionCall rem = make_call("remove", {p});
      ActionCall again = correct;
      base_actions.insert(base_actions.begin() + std::ptrdiff_t(idx) + 1, {rem, again});
    }
  }
  plan.actions = std::move(base_actions);
  plan.actions.push_back(detail::stop_call());
  return plan;
}

// ---------------------------------------------------------------------------
// Matchstick Equation
// ---------------------------------------------------------------------------

namespace detail {

/// Optimal relocation list onto the nearest valid equation.
inline std::vector<std::array<int, 4>> equation_optimal_moves(const EquationState& st, Rng* rng = nullptr) {
  auto targets = valid_targets(st);
  const std::vector<std::uint8_t>* best = nullptr;
  int best_d = 1 << 30;
  for (const auto& t : targets) {
    int d = stick_distance(st.occupancy, t);
    if (d < best_d) {
      best_d = d;
      best = &t;
    }
  }
  if (!best) throw std::logic_error("equation: no reachable valid equation");
  std::vector<std::array<int, 2>> extra, missing;
  for (int i = 0; i < st.positions(); ++i) {
    for (int s = 0; s < glyph_slot_count(st.layout[std::size_t(i)]); ++s) {
      bool have = st.occupancy[std::size_t(i)] & (1u << s);
      bool want = (*best)[std::size_t(i)] & (1u << s);
      if (have && !want) extra.push_back({i, s});
      if (!have && want) missing.push_back({i, s});
    }
  }
  if (rng) {
    for (std::size_t i = extra.size(); i > 1; --i) std::swap(extra[i - 1], extra[rng->below(i)]);
    for (std::size_t i = missing.size(); i > 1; --i) std::swap(missing[i - 1], missing[rng->below(i)]);
  }
  std::vector<std::array<int, 4>> moves;
  for (std::size_t k = 0; k < extra.size(); ++k)
    moves.push_back({extra[k][0], extra[k][1], missing[k][0], missing[k][1]});
  return moves;
}

inline ActionCall equation_move_call(const std::array<int, 4>& m) {
  ActionCall c{"move", {}};
  c.payload.push_back(list_value({m[0], m[1], m[2], m[3]}));
  return c;
}

inline void equation_apply_raw(EquationState& st, const std::array<int, 4>& m) {
  st.occupancy[std::size_t(m[0])] &= std::uint8_t(~(1u << m[1]));
  st.occupancy[std::size_t(m[2])] |= std::uint8_t(1u << m[3]);
}

}  // namespace detail

/// Strategies: `bfs` = shortest relocation sequence; `dfs` = depth-limited
/// exploration emitting its wrong turns and undos; `sos` = shortest path with
/// random reversible detours to reach target_steps.
inline SolverPlan solve_equation(const EquationState& st, const SolverOptions& opts = {}) {
  std::string strategy = opts.strategy.empty() ? "bfs" : opts.strategy;
  Rng rng = Rng::derive(opts.seed, "solve.equation");
  SolverPlan plan;
  plan.strategy = strategy;
  plan.seed = opts.seed;

  if (strategy == "bfs") {
    for (const auto& m : detail::equation_optimal_moves(st)) plan.actions.push_back(detail::equation_move_call(m));
    plan.actions.push_back(detail::stop_call());
    return plan;
  }

  if (strategy == "sos") {
    auto optimal = detail::equation_optimal_moves(st, &rng);
    int base = int(optimal.size());
    detail::check_target(opts.target_steps, base, 2, "equation sos");
    int detours = opts.target_steps ? (*opts.target_steps - base) / 2 : int(rng.below(2)) + 1;
    if (!opts.target_steps && detours * 2 + base > 18) detours = 0;
    std::vector<int> detour_at(std::size_t(base) + 1, 0);
    for (int k = 0; k < detours; ++k) detour_at[std::size_t(rng.below(std::uint64_t(base) + 1))]++;
    EquationState sim = st;
    for (int i = 0; i <= base; ++i) {
      for (int k = 0; k < detour_at[std::size_t(i)]; ++k) {
        // Random legal relocation, immediately undone.
        std::vector<std::array<int, 2>> occupied, empty;
        for (int p = 0; p < sim.positions(); ++p)
          for (int s = 0; s < glyph_slot_count(sim.layout[std::size_t(p)]); ++s) {
            if (sim.occupancy[std::size_t(p)] & (1u << s)) occupied.push_back({p, s});
            else empty.push_back({p, s});
          }
        auto src = occupied[rng.below(occupied.size())];
        auto dst = empty[rng.below(empty.size())];
        plan.actions.push_back(detail::equation_move_call({src[0], src[1], dst[0], dst[1]}));
        plan.actions.push_back(make_call("undo"));
      }
      if (i < base) {
        plan.actions.push_back(detail::equation_move_call(optimal[std::size_t(i)]));
        detail::equation_apply_raw(sim, optimal[std::size_t(i)]);
      }
    }
    plan.actions.push_back(detail::stop_call());
    return plan;
  }

  if (strategy == "dfs") {
    // Depth-limited exploration: wrong relocations are tried, found wanting
    // and undone; admissible pruning keeps the trace within the episode.
    EquationState sim = st;
    std::function<bool(int)> explore = [&](int remaining) -> bool {
      if (equation_valid(sim)) return true;
      if (remaining == 0) return false;
      // Wrong turns first (up to two that cannot finish in time), then a move
      // that stays on an optimal path.
      std::vector<std::array<int, 2>> occupied, empty;
      for (int p = 0; p < sim.positions(); ++p)
        for (int s = 0; s < glyph_slot_count(sim.layout[std::size_t(p)]); ++s) {
          if (sim.occupancy[std::size_t(p)] & (1u << s)) occupied.push_back({p, s});
          else empty.push_back({p, s});
        }
      int wrong_budget = int(rng.below(3));
      for (int w = 0; w < wrong_budget; ++w) {
        auto src = occupied[rng.below(occupied.size())];
        auto dst = empty[rng.below(empty.size())];
        std::array<int, 4> m{src[0], src[1], dst[0], dst[1]};
        EquationState probe = sim;
        detail::equation_apply_raw(probe, m);
        auto dist = equation_min_solution_distance(probe);
        if (dist && *dist <= remaining - 1) continue;  // accidentally good; not a wrong turn
        plan.actions.push_back(detail::equation_move_call(m));
        detail::equation_apply_raw(sim, m);
        plan.actions.push_back(make_call("undo"));
        detail::equation_apply_raw(sim, {m[2], m[3], m[0], m[1]});
      }
      auto optimal = detail::equation_optimal_moves(sim, &rng);
      auto m = optimal.front();
      plan.actions.push_back(detail::equation_move_call(m));
      detail::equation_apply_raw(sim, m);
      if (explore(remaining - 1)) return true;
      plan.actions.push_back(make_call("undo"));
      detail::equation_apply_raw(sim, {m[2], m[3], m[0], m[1]});
      return false;
    };
    explore(st.bm);
    plan.actions.push_back(detail::stop_call());
    return plan;
  }

  detail::bad_strategy("equation", strategy);
}

// ---------------------------------------------------------------------------
// Matchstick Rotation
// ---------------------------------------------------------------------------

/// `3_moves`: two stochastic translation splits toward the target, then one
/// exact aligning move. `probe_then_solve`: two unit-scale probes along +x
/// and +y, then one exact corrective move (the oracle reads the true scale;
/// the plan structure mirrors the inference an agent must make).
inline SolverPlan solve_rotation(const RotationState& st, const SolverOptions& opts = {}) {
  std::string strategy = opts.strategy.empty() ? "probe_then_solve" : opts.strategy;
  Rng rng = Rng::derive(opts.seed, "solve.rotation");
  SolverPlan plan;
  plan.strategy = strategy;
  plan.seed = opts.seed;

  double dtheta = normalize_angle_180(st.target.theta - st.current.theta);
  const double s = st.hidden_scale;

  if (strategy == "probe_then_solve") {
    plan.actions.push_back(make_call_reals("move", {1, 0, 0}));
    plan.actions.push_back(make_call_reals("move", {0, 1, 0}));
    double x = st.current.x + s, y = st.current.y + s;  // where the probes land
    plan.actions.push_back(make_call_reals("move", {(st.target.x - x) / s, (st.target.y - y) / s, dtheta}));
    plan.actions.push_back(detail::stop_call());
    return plan;
  }
  if (strategy == "3_moves") {
    double dx = st.target.x - st.current.x, dy = st.target.y - st.current.y;
    double f1 = rng.range_real(0.2, 0.45), f2 = rng.range_real(0.2, 0.45);
    plan.actions.push_back(make_call_reals("move", {f1 * dx / s, f1 * dy / s, 0}));
    plan.actions.push_back(make_call_reals("move", {f2 * dx / s, f2 * dy / s, 0}));
    plan.actions.push_back(
        make_call_reals("move", {(1 - f1 - f2) * dx / s, (1 - f1 - f2) * dy / s, dtheta}));
    plan.actions.push_back(detail::stop_call());
    return plan;
  }
  detail::bad_strategy("rotation", strategy);
}

// ---------------------------------------------------------------------------
// Mental Rotation 2D
// ---------------------------------------------------------------------------

/// Stochastically divides the total rotation into `steps` parts that sum to
/// the exact correction.
inline SolverPlan solve_mr2d(const MR2DState& st, const SolverOptions& opts = {}) {
  int steps = opts.target_steps.value_or(1);
  if (steps < 1) throw std::invalid_argument("mr2d: steps must be >= 1");
  Rng rng = Rng::derive(opts.seed, "solve.mr2d");
  double total = -st.residual;
  SolverPlan plan;
  plan.strategy = "split";
  plan.seed = opts.seed;
  std::vector<double> weights;
  double sum = 0;
  for (int i = 0; i < steps; ++i) {
    weights.push_back(0.1 + rng.unit());
    sum += weights.back();
  }
  double emitted = 0;
  for (int i = 0; i < steps; ++i) {
    double part = i + 1 == steps ? total - emitted : total * weights[std::size_t(i)] / sum;
    emitted += part;
    plan.actions.push_back(make_call_reals("rotate", {part}));
  }
  plan.actions.push_back(detail::stop_call());
  return plan;
}

// ---------------------------------------------------------------------------
// Mental Rotation 3D
// ---------------------------------------------------------------------------

namespace detail {

/// Decompose delta into Rz(yaw) * Ry(pitch) * Rx(roll) angles in degrees.
inline std::array<double, 3> yaw_pitch_roll(const Mat3& delta) {
  const double rad2deg = 180.0 / 3.14159265358979323846;
  double sy = -delta.m[6];
  sy = std::clamp(sy, -1.0, 1.0);
  double pitch = std::asin(sy);
  double yaw, roll;
  if (std::fabs(std::cos(pitch)) > 1e-9) {
    yaw = std::atan2(delta.m[3], delta.m[0]);
    roll = std::atan2(delta.m[7], delta.m[8]);
  } else {
    yaw = std::atan2(-delta.m[1], delta.m[4]);
    roll = 0;
  }
  return {yaw * rad2deg, pitch * rad2deg, roll * rad2deg};
}

}  // namespace detail

/// `solve_only`: one corrective rotation per axis. `rotate_then_solve`: four
/// 90-degree rotations around an axis before each correction, exposing the
/// full geometry.
inline SolverPlan solve_mr3d(const MR3DState& st, const SolverOptions& opts = {}) {
  std::string strategy = opts.strategy.empty() ? "solve_only" : opts.strategy;
  SolverPlan plan;
  plan.strategy = strategy;
  plan.seed = opts.seed;
  Mat3 delta = st.current.transposed() * st.target;
  auto [yaw, pitch, roll] = detail::yaw_pitch_roll(delta);
  bool reveal = strategy == "rotate_then_solve";
  if (!reveal && strategy != "solve_only") detail::bad_strategy("mr3d", strategy);
  auto axis_block = [&](int axis, double angle) {
    for (int k = 0; reveal && k < 4; ++k) {
      double p[3] = {0, 0, 0};
      p[axis] = 90;
      plan.actions.push_back(make_call_reals("rotate", {p[0], p[1], p[2]}));
    }
    double p[3] = {0, 0, 0};
    p[axis] = angle;
    plan.actions.push_back(make_call_reals("rotate", {p[0], p[1], p[2]}));
  };
  axis_block(0, yaw);
  axis_block(1, pitch);
  axis_block(2, roll);
  plan.actions.push_back(detail::stop_call());
  return plan;
}

// ---------------------------------------------------------------------------
// Permutation tasks (Jigsaw, Zoom-In, Video Unshuffle)
// ---------------------------------------------------------------------------

/// `reorder`: one permutation payload. `swap`: selection-sort swaps. Padding
/// inserts a swap immediately re-swapped.
inline SolverPlan solve_permutation(const PermutationState& st, bool coordinate_pairs,
                                    const SolverOptions& opts = {}) {
  std::string strategy = opts.strategy.empty() ? "reorder" : opts.strategy;
  Rng rng = Rng::derive(opts.seed, "solve.permutation");
  SolverPlan plan;
  plan.strategy = strategy;
  plan.seed = opts.seed;
  const int n = st.size();

  auto swap_call = [&](int i, int j) {
    if (!coordinate_pairs) return make_call("swap", {i, j});
    ActionCall c{"swap", {}};
    c.payload.push_back(list_value({i / st.grid_cols, i % st.grid_cols}));
    c.payload.push_back(list_value({j / st.grid_cols, j % st.grid_cols}));
    return c;
  };

  std::vector<ActionCall> actions;
  if (strategy == "reorder") {
    std::vector<std::int64_t> p(static_cast<std::size_t>(n));
    for (int slot = 0; slot < n; ++slot) p[std::size_t(st.perm[std::size_t(slot)])] = slot;
    ActionCall call{"reorder", {}};
    std::vector<Scalar> items(p.begin(), p.end());
    call.payload.push_back(Value{std::move(items)});
    actions.push_back(std::move(call));
  } else if (strategy == "swap") {
    auto perm = st.perm;
    for (int i = 0; i < n; ++i) {
      if (perm[std::size_t(i)] == st.goal[std::size_t(i)]) continue;
      int j = i;
      for (int k = i + 1; k < n; ++k)
        if (perm[std::size_t(k)] == st.goal[std::size_t(i)]) j = k;
      actions.push_back(swap_call(i, j));
      std::swap(perm[std::size_t(i)], perm[std::size_t(j)]);
    }
  } else {
    detail::bad_strategy("permutation", strategy);
  }

  int base = int(actions.size());
  detail::check_target(opts.target_steps, base, 2, "permutation");
  int pairs = opts.target_steps ? (*opts.target_steps - base) / 2 : 0;
  for (int k = 0; k < pairs; ++k) {
    std::size_t pos = std::size_t(rng.below(actions.size() + 1));
    int i = int(rng.below(std::uint64_t(n)));
    int j = (i + 1 + int(rng.below(std::uint64_t(n) - 1))) % n;
    actions.insert(actions.begin() + std::ptrdiff_t(pos), {swap_call(i, j), swap_call(i, j)});
  }
  plan.actions = std::move(actions);
  plan.actions.push_back(detail::stop_call());
  return plan;
}

// ---------------------------------------------------------------------------
// Colorization
// ---------------------------------------------------------------------------

/// Splits the hue and saturation deficits into incremental actions; pads with
/// canceling rotate/saturate pairs when already in radius or when extra steps
/// are requested.
inline SolverPlan solve_colorize(const ColorState& st, const SolverOptions& opts = {}) {
  Rng rng = Rng::derive(opts.seed, "solve.colorize");
  SolverPlan plan;
  plan.strategy = "incremental";
  plan.seed = opts.seed;
  double hue = -st.hue_offset, sat = -st.sat_offset;
  const double hue_step = 30, sat_step = 15;
  int hue_parts = std::max(std::fabs(hue) > 1e-12 ? 1 : 0, int(std::ceil(std::fabs(hue) / hue_step)));
  int sat_parts = std::max(std::fabs(sat) > 1e-12 ? 1 : 0, int(std::ceil(std::fabs(sat) / sat_step)));
  int base = hue_parts + sat_parts;
  int target = opts.target_steps.value_or(base);
  if (opts.target_steps && *opts.target_steps < std::max(base, 1))
    throw std::invalid_argument("colorize: target_steps below minimal plan");
  // Grow by splitting parts further; equalize roughly between channels.
  while (hue_parts + sat_parts < target && (std::fabs(hue) > 1e-12 || std::fabs(sat) > 1e-12)) {
    if ((std::fabs(hue) > 1e-12 && hue_parts <= sat_parts) || std::fabs(sat) <= 1e-12) ++hue_parts;
    else ++sat_parts;
  }
  auto emit_split = [&](const char* name, double total, int parts) {
    double done = 0;
    for (int i = 0; i < parts; ++i) {
      double part = i + 1 == parts ? total - done : total / parts * rng.range_real(0.7, 1.3);
      done += part;
      plan.actions.push_back(make_call_reals(name, {part}));
    }
  };
  emit_split("rotate", hue, hue_parts);
  emit_split("saturate", sat, sat_parts);
  // Canceling pairs when the split alone cannot reach the target count.
  while (int(plan.actions.size()) < target) {
    bool use_hue = rng.chance(0.5);
    double amount = rng.range_real(5, 20);
    if (int(plan.actions.size()) + 2 > target) break;
    plan.actions.push_back(make_call_reals(use_hue ? "rotate" : "saturate", {amount}));
    plan.actions.push_back(make_call_reals(use_hue ? "rotate" : "saturate", {-amount}));
  }
  plan.actions.push_back(detail::stop_call());
  return plan;
}

}  // namespace visgym
