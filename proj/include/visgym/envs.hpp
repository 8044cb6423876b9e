#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "visgym/core.hpp"
#include "visgym/solvers.hpp"

namespace visgym {

// ---------------------------------------------------------------------------
// Shared instruction fragments
// ---------------------------------------------------------------------------

namespace detail {

inline std::string instruction_header(const std::string& task_text) {
  return task_text +
         "\n\nActions are function calls written as text, e.g. ('move', 2) or move(2). "
         "Only the last complete call in your reply is executed. Numbers may be signed "
         "and may carry a decimal point. You must finish with stop(); the task is scored "
         "only when you stop, and the reward is 1 only if the goal condition holds at "
         "that moment. Each reply consumes one step, including malformed or invalid "
         "ones; the feedback reports the remaining steps.";
}

inline std::string dir_legend() { return "d is a direction: 0 = up, 1 = right, 2 = down, 3 = left."; }

}  // namespace detail

// ---------------------------------------------------------------------------
// Adapters
// ---------------------------------------------------------------------------

namespace detail {

class Maze2DEnv final : public EnvInstance {
 public:
  explicit Maze2DEnv(const ResolvedConfig& rc)
      : state_(maze_generate(rc.integer("mw"), rc.integer("mh"), rc.seed, rc.step_budget, false)) {}

  std::string instruction(bool text_mode) const override {
    std::string obs = text_mode
                          ? "The maze is drawn in ASCII: '#' walls, ' ' free cells, 'A' you, 'T' the target."
                          : "The image shows a top-down maze; the blue 'A' square is you, the red 'T' square "
                            "is the target.";
    return instruction_header(
               "Navigate the maze to the target cell, then stop. " + obs) +
           "\n\nFunctions:\n  move(d): step one cell. " + dir_legend() +
           " Moving into a wall leaves you in place.\n  stop(): end the episode.";
  }

  std::vector<PayloadSchema> schemas() const override {
    return {PayloadSchema{"move", {ArgSpec{ArgKind::Int, "direction", 0, {{0, 3}}}}, "move(d)"},
            stop_schema()};
  }

  std::string apply(const ActionCall& call) override { return maze2d_apply(state_, call); }
  bool success() const override { return maze_success(state_); }
  Canvas render_image() const override { return maze2d_render(state_); }
  std::optional<CharGrid> render_text() const override { return maze2d_ascii(state_); }
  Canvas goal_image() const override { return maze2d_render(state_, true); }
  std::optional<CharGrid> goal_text() const override { return maze2d_ascii(state_, true); }
  std::string state_digest() const override { return maze_digest(state_); }
  SolverPlan solve(const SolverOptions& opts) const override {
    if (!opts.strategy.empty() && opts.strategy != "shortest") bad_strategy("maze2d", opts.strategy);
    return solve_maze2d(state_, opts);
  }

  const MazeState& state() const { return state_; }

 private:
  MazeState state_;
};

class Maze3DEnv final : public EnvInstance {
 public:
  explicit Maze3DEnv(const ResolvedConfig& rc)
      : state_(maze_generate(rc.integer("mw"), rc.integer("mh"), rc.seed, rc.step_budget, true)) {}

  std::string instruction(bool) const override {
    return instruction_header(
               "You are inside a maze, seeing a first-person view along your heading. Reach the "
               "cell with the red target panel, then stop. Dark side panels are openings into "
               "side corridors; gray is wall.") +
           "\n\nFunctions:\n  move(0): step one cell forward (blocked by walls).\n  turn(d): d = 0 "
           "turn left 90 degrees, d = 1 turn right 90 degrees, d = 2 turn around.\n  stop(): end "
           "the episode.";
  }

  std::vector<PayloadSchema> schemas() const override {
    return {PayloadSchema{"move", {ArgSpec{ArgKind::Int, "argument", 0, {{0, 0}}}}, "move(0)"},
            PayloadSchema{"turn", {ArgSpec{ArgKind::Int, "turn direction", 0, {{0, 2}}}}, "turn(d)"},
            stop_schema()};
  }

  std::string apply(const ActionCall& call) override { return maze3d_apply(state_, call); }
  bool success() const override { return maze_success(state_); }
  Canvas render_image() const override { return maze3d_render(state_); }
  Canvas goal_image() const override { return maze3d_render(state_, true); }
  std::string state_digest() const override { return maze_digest(state_); }
  SolverPlan solve(const SolverOptions& opts) const override {
    if (!opts.strategy.empty() && opts.strategy != "shortest") bad_strategy("maze3d", opts.strategy);
    return solve_maze3d(state_, opts);
  }

  const MazeState& state() const { return state_; }

 private:
  MazeState state_;
};

class SlidingEnv final : public EnvInstance {
 public:
  explicit SlidingEnv(const ResolvedConfig& rc)
      : state_(sliding_generate(rc.integer("sm"), rc.seed, rc.step_budget)) {}

  std::string instruction(bool text_mode) const override {
    std::string obs = text_mode ? "The board is drawn twice in ASCII: the target arrangement on the "
                                  "left, the current one on the right; digits are block ids, '.' is "
                                  "an empty cell."
                                : "The image shows the target arrangement on the left and the current "
                                  "board on the right; each block carries its id digit.";
    return instruction_header("Slide the blocks on the 4x5 board until it matches the target "
                              "arrangement exactly, then stop. " +
                              obs) +
           "\n\nFunctions:\n  move(b, d): slide block b one cell. " + dir_legend() +
           " The move fails if any destination cell is occupied by another block or off the "
           "board.\n  stop(): end the episode.";
  }

  std::vector<PayloadSchema> schemas() const override {
    return {PayloadSchema{"move",
                          {ArgSpec{ArgKind::Int, "block", 0, {{0, double(state_.num_blocks - 1)}}},
                           ArgSpec{ArgKind::Int, "direction", 0, {{0, 3}}}},
                          "move(b, d)"},
            stop_schema()};
  }

  std::string apply(const ActionCall& call) override { return sliding_apply(state_, call); }
  bool success() const override { return sliding_success(state_); }
  Canvas render_image() const override { return sliding_render(state_); }
  std::optional<CharGrid> render_text() const override { return sliding_ascii(state_); }
  Canvas goal_image() const override { return sliding_render(state_, true); }
  std::optional<CharGrid> goal_text() const override { return sliding_ascii(state_, true); }
  std::string state_digest() const override { return sliding_digest(state_); }
  SolverPlan solve(const SolverOptions& opts) const override {
    if (!opts.strategy.empty() && opts.strategy != "bfs") bad_strategy("sliding_block", opts.strategy);
    return solve_sliding(state_, opts);
  }

  const SlidingState& state() const { return state_; }

 private:
  SlidingState state_;
};

class PatchEnv final : public EnvInstance {
 public:
  explicit PatchEnv(const ResolvedConfig& rc)
      : state_(patch_generate(rc.integer("gr"), rc.integer("gc"), rc.integer("np"), rc.seed)) {}

  std::string instruction(bool text_mode) const override {
    std::string anchor = text_mode
                             ? "the anchor cell for each parked patch is marked with a '*' instead of "
                               "its ID number"
                             : "the anchor is the cell that shows the patch's ID number";
    return instruction_header(
               "Place every parked patch onto the grid so the patches tile it exactly, then stop. "
               "Patches never rotate. Each patch is addressed by its anchor, its topmost then "
               "leftmost cell; " +
               anchor + ". Coordinates are (row, col), zero-based from the top-left.") +
           "\n\nFunctions:\n  place(p, r, c): put parked patch p with its anchor on cell (r, c); "
           "fails on overlap or out of bounds.\n  remove(p): send placed patch p back to the "
           "parked area.\n  stop(): end the episode.";
  }

  std::vector<PayloadSchema> schemas() const override {
    double pmax = double(state_.np - 1);
    return {PayloadSchema{"place",
                          {ArgSpec{ArgKind::Int, "patch", 0, {{0, pmax}}},
                           ArgSpec{ArgKind::Int, "row", 0, {{0, double(state_.rows - 1)}}},
                           ArgSpec{ArgKind::Int, "col", 0, {{0, double(state_.cols - 1)}}}},
                          "place(p, r, c)"},
            PayloadSchema{"remove", {ArgSpec{ArgKind::Int, "patch", 0, {{0, pmax}}}}, "remove(p)"},
            stop_schema()};
  }

  std::string apply(const ActionCall& call) override { return patch_apply(state_, call); }
  bool success() const override { return patch_success(state_); }
  Canvas render_image() const override { return patch_render(state_); }
  std::optional<CharGrid> render_text() const override { return patch_ascii(state_); }
  Canvas goal_image() const override { return patch_render(state_, true); }
  std::optional<CharGrid> goal_text() const override { return patch_ascii(state_, true); }
  std::string state_digest() const override { return patch_digest(state_); }
  SolverPlan solve(const SolverOptions& opts) const override {
    if (!opts.strategy.empty() && opts.strategy != "backtracking") bad_strategy("patch", opts.strategy);
    return solve_patch(state_, opts);
  }

  const PatchState& state() const { return state_; }

 private:
  PatchState state_;
};

class EquationEnv final : public EnvInstance {
 public:
  explicit EquationEnv(const ResolvedConfig& rc) : state_(equation_generate(rc.integer("bm"), rc.seed)) {}

  std::string instruction(bool) const override {
    return instruction_header(
               "The display shows an arithmetic equation built from matchsticks, but it is wrong. "
               "Relocate sticks (never add or remove any) until it reads as a true equation, then "
               "stop. Positions are indexed left to right by the footer digits.\n\n"
               "Stick slots per position kind:\n"
               "  digit positions (7 segments):\n"
               "      0 top, 1 top-right, 2 bottom-right, 3 bottom, 4 bottom-left, 5 top-left, 6 middle\n"
               "  operator position (between the two left numbers):\n"
               "      0 middle bar ('-'), 1 vertical bar (with 0 forms '+'), 2 and 3 the two "
               "diagonals of 'x'\n"
               "  relation position ('='): 0 top bar, 1 bottom bar") +
           "\n\nFunctions:\n  move([i, s, j, t]): take the stick at position i slot s and put it at "
           "position j slot t.\n  undo(): revert your latest move.\n  stop(): end the episode.";
  }

  std::vector<PayloadSchema> schemas() const override {
    double pmax = double(state_.positions() - 1);
    return {PayloadSchema{"move",
                          {ArgSpec{ArgKind::IntList, "move payload", 4,
                                   {{0, pmax}, {0, 6}, {0, pmax}, {0, 6}}}},
                          "move([i, s, j, t])"},
            PayloadSchema{"undo", {}, "undo()"}, stop_schema()};
  }

  std::string apply(const ActionCall& call) override { return equation_apply(state_, call); }
  bool success() const override { return equation_valid(state_); }
  Canvas render_image() const override { return equation_render(state_); }
  std::optional<CharGrid> render_text() const override { return equation_ascii(state_); }
  Canvas goal_image() const override { return equation_render(state_, true); }
  std::optional<CharGrid> goal_text() const override { return equation_ascii(state_, true); }
  std::string state_digest() const override { return equation_digest(state_); }
  SolverPlan solve(const SolverOptions& opts) const override { return solve_equation(state_, opts); }

  const EquationState& state() const { return state_; }

 private:
  EquationState state_;
};

class RotationEnv final : public EnvInstance {
 public:
  explicit RotationEnv(const ResolvedConfig& rc)
      : state_(rotation_generate(rc.real("sr_lo"), rc.real("sr_hi"), rc.real("pt"), rc.real("at"),
                                 rc.seed)) {}

  std::string instruction(bool) const override {
    return instruction_header(
               "Move and rotate the solid stick until it lies on the outlined target pose, then "
               "stop. The head dot marks the stick's front, so orientation matters over a full 360 "
               "degrees. Commanded translations are multiplied by a hidden scale factor before "
               "they take effect; rotation is applied exactly as commanded. Success requires the "
               "position error within " +
               std::to_string(int(state_.pt)) + " pixels and the angle error within " +
               std::to_string(int(state_.at)) + " degrees.") +
           "\n\nFunctions:\n  move([dx, dy, dtheta]): translate by (dx, dy) scaled by the hidden "
           "factor (x grows right, y grows down) and rotate by dtheta degrees "
           "(counterclockwise on screen is negative y rotation; angles wrap at 360).\n  stop(): "
           "end the episode.";
  }

  std::vector<PayloadSchema> schemas() const override {
    return {PayloadSchema{"move",
                          {ArgSpec{ArgKind::RealList, "move payload", 3,
                                   {{-448, 448}, {-448, 448}, {-10000, 10000}}}},
                          "move([dx, dy, dtheta])"},
            stop_schema()};
  }

  std::string apply(const ActionCall& call) override { return rotation_apply(state_, call); }
  bool success() const override { return rotation_success(state_); }
  Canvas render_image() const override { return rotation_render(state_); }
  Canvas goal_image() const override { return rotation_render(state_, true); }
  std::string state_digest() const override { return rotation_digest(state_); }
  SolverPlan solve(const SolverOptions& opts) const override { return solve_rotation(state_, opts); }

  const RotationState& state() const { return state_; }

 private:
  RotationState state_;
};

class MR2DEnv final : public EnvInstance {
 public:
  explicit MR2DEnv(const ResolvedConfig& rc)
      : state_(mr2d_make(pick_asset(rc.assets_dir, rc.seed), rc.real("at"), rc.seed)) {}

  std::string instruction(bool) const override {
    return instruction_header(
               "The left panel shows a rotated copy of the right panel's image. Rotate the left "
               "image until it is upright like the target, then stop. Success requires the "
               "residual angle within " +
               std::to_string(state_.at) + " degrees.") +
           "\n\nFunctions:\n  rotate(theta): rotate the current image by theta degrees "
           "(positive = clockwise on screen).\n  stop(): end the episode.";
  }

  std::vector<PayloadSchema> schemas() const override {
    return {PayloadSchema{"rotate", {ArgSpec{ArgKind::Real, "angle", 0, {{-100000, 100000}}}}, "rotate(theta)"},
            stop_schema()};
  }

  std::string apply(const ActionCall& call) override { return mr2d_apply(state_, call); }
  bool success() const override { return mr2d_success(state_); }
  Canvas render_image() const override { return mr2d_render(state_); }
  Canvas goal_image() const override { return mr2d_render(state_, true); }
  std::string state_digest() const override {
    char buf[64];
    std::snprintf(buf, sizeof buf, ":r%.6f:at%.2f", state_.residual, state_.at);
    return "mr2d:" + fnv1a64_hex(std::string(state_.upright.raw().begin(), state_.upright.raw().end())) +
           buf;
  }
  SolverPlan solve(const SolverOptions& opts) const override { return solve_mr2d(state_, opts); }

  const MR2DState& state() const { return state_; }

 private:
  MR2DState state_;
};

class MR3DEnv final : public EnvInstance {
 public:
  explicit MR3DEnv(const ResolvedConfig& rc)
      : state_(mr3d_generate(rc.integer("ns"), rc.integer("lr_lo"), rc.integer("lr_hi"), rc.real("at"),
                             rc.seed)) {}

  std::string instruction(bool) const override {
    return instruction_header(
               "Two views of the same cube snake are shown: your current orientation on the left, "
               "the target orientation on the right. Rotate the object until the orientations "
               "match within " +
               std::to_string(int(state_.at)) +
               " degrees, then stop.") +
           "\n\nFunctions:\n  rotate([dy, dp, dr]): intrinsic rotations in degrees, composed in "
           "payload order: yaw dy about the body z axis, pitch dp about the body y axis, roll dr "
           "about the body x axis.\n  stop(): end the episode.";
  }

  std::vector<PayloadSchema> schemas() const override {
    return {PayloadSchema{"rotate",
                          {ArgSpec{ArgKind::RealList, "rotation payload", 3,
                                   {{-100000, 100000}, {-100000, 100000}, {-100000, 100000}}}},
                          "rotate([dy, dp, dr])"},
            stop_schema()};
  }

  std::string apply(const ActionCall& call) override { return mr3d_apply(state_, call); }
  bool success() const override { return mr3d_success(state_); }
  Canvas render_image() const override { return mr3d_render(state_); }
  Canvas goal_image() const override { return mr3d_render(state_, true); }
  std::string state_digest() const override { return mr3d_digest(state_); }
  SolverPlan solve(const SolverOptions& opts) const override { return solve_mr3d(state_, opts); }

  const MR3DState& state() const { return state_; }

 private:
  MR3DState state_;
};

class JigsawEnv final : public EnvInstance {
 public:
  explicit JigsawEnv(const ResolvedConfig& rc)
      : nr_(rc.integer("nr")),
        nc_(rc.integer("nc")),
        state_(jigsaw_make(pick_asset(rc.assets_dir, rc.seed), nr_, nc_, rc.seed)) {}

  std::string instruction(bool) const override {
    return instruction_header(
               "The image was cut into " + std::to_string(nr_) + "x" + std::to_string(nc_) +
               " tiles and the tiles were shuffled. Restore the original image, then stop. Tiles "
               "are addressed as (row, col), zero-based from the top-left.") +
           "\n\nFunctions:\n  swap((r1, c1), (r2, c2)): exchange the tiles at the two positions.\n  "
           "reorder([...]): full rearrangement; entry i (row-major position i) names the position "
           "whose current tile should move there.\n  stop(): end the episode.";
  }

  std::vector<PayloadSchema> schemas() const override {
    double rmax = nr_ - 1, cmax = nc_ - 1;
    return {PayloadSchema{"swap",
                          {ArgSpec{ArgKind::Pair, "first tile", 2, {{0, rmax}, {0, cmax}}},
                           ArgSpec{ArgKind::Pair, "second tile", 2, {{0, rmax}, {0, cmax}}}},
                          "swap((r1, c1), (r2, c2))"},
            PayloadSchema{"reorder",
                          {ArgSpec{ArgKind::IntList, "permutation", nr_ * nc_,
                                   {{0, double(nr_ * nc_ - 1)}}, true}},
                          "reorder([...])"},
            stop_schema()};
  }

  std::string apply(const ActionCall& call) override { return permute_apply(state_, call); }
  bool success() const override { return permute_success(state_); }
  Canvas render_image() const override { return permute_render(state_); }
  Canvas goal_image() const override { return permute_render(state_, true); }
  std::string state_digest() const override { return permute_digest("jigsaw", state_); }
  SolverPlan solve(const SolverOptions& opts) const override {
    return solve_permutation(state_, true, opts);
  }

  const PermutationState& state() const { return state_; }

 private:
  int nr_, nc_;
  PermutationState state_;
};

/// Shared by Zoom-In and Video Unshuffle (index-addressed slots in a row).
class RowPermutationEnv : public EnvInstance {
 public:
  std::vector<PayloadSchema> schemas() const override {
    double mx = double(state_.size() - 1);
    return {PayloadSchema{"swap",
                          {ArgSpec{ArgKind::Int, "first slot", 0, {{0, mx}}},
                           ArgSpec{ArgKind::Int, "second slot", 0, {{0, mx}}}},
                          "swap(i, j)"},
            PayloadSchema{"reorder",
                          {ArgSpec{ArgKind::IntList, "permutation", state_.size(), {{0, mx}}, true}},
                          "reorder([...])"},
            stop_schema()};
  }

  std::string apply(const ActionCall& call) override { return permute_apply(state_, call); }
  bool success() const override { return permute_success(state_); }
  Canvas render_image() const override { return permute_render(state_); }
  Canvas goal_image() const override { return permute_render(state_, true); }
  SolverPlan solve(const SolverOptions& opts) const override {
    return solve_permutation(state_, false, opts);
  }

  const PermutationState& state() const { return state_; }

 protected:
  PermutationState state_;
};

class ZoomEnv final : public RowPermutationEnv {
 public:
  explicit ZoomEnv(const ResolvedConfig& rc) {
    ZoomParams zp;
    zp.zv = rc.integer("zv");
    zp.zg = rc.real("zg");
    zp.zs = rc.real("zs");
    zp.mz = rc.real("mz");
    zp.nest = rc.integer("nest") != 0;
    state_ = zoom_make(pick_asset(rc.assets_dir, rc.seed), zp, rc.seed);
  }

  std::string instruction(bool) const override {
    return instruction_header(
               "The labeled tiles are crops of one image at increasing zoom levels, shown in "
               "shuffled order. Arrange them so slot 0 holds the widest (fully zoomed-out) view "
               "and each later slot zooms in further, then stop.") +
           "\n\nFunctions:\n  swap(i, j): exchange the tiles in slots i and j.\n  reorder([...]): "
           "full rearrangement; entry i names the slot whose current tile should move to slot "
           "i.\n  stop(): end the episode.";
  }

  std::string state_digest() const override { return permute_digest("zoom", state_); }
};

class VideoEnv final : public RowPermutationEnv {
 public:
  explicit VideoEnv(const ResolvedConfig& rc) {
    int nf = rc.integer("nf");
    auto files = list_frame_files(rc.assets_dir);
    std::vector<Canvas> clip;
    if (files.empty()) {
      clip = synth_video_frames(rc.seed, std::max(nf * 3, 12));
    } else {
      for (const auto& f : files) clip.push_back(fit_square(load_image(f), kWorkingRes));
    }
    state_ = video_make(clip, nf, SamplingStrategy(rc.integer("ss")), rc.real("mfd"), rc.seed);
  }

  std::string instruction(bool) const override {
    return instruction_header(
               "The labeled tiles are frames sampled from one video, shown in shuffled order. "
               "Arrange them in chronological order (earliest in slot 0), then stop.") +
           "\n\nFunctions:\n  swap(i, j): exchange the tiles in slots i and j.\n  reorder([...]): "
           "full rearrangement; entry i names the slot whose current tile should move to slot "
           "i.\n  stop(): end the episode.";
  }

  std::string state_digest() const override { return permute_digest("video", state_); }
};

class ColorizeEnv final : public EnvInstance {
 public:
  explicit ColorizeEnv(const ResolvedConfig& rc)
      : state_(colorize_make(pick_asset(rc.assets_dir, rc.seed), rc.real("ar"), rc.seed)) {}

  std::string instruction(bool) const override {
    return instruction_header(
               "The image's colors were shifted in hue and saturation. Restore natural colors, "
               "then stop. Success requires both the remaining hue offset and the remaining "
               "saturation offset within " +
               std::to_string(int(state_.ar)) + " (degrees / percentage points).") +
           "\n\nFunctions:\n  rotate(theta): shift the hue by theta degrees (wraps at 360).\n  "
           "saturate(delta): shift the saturation by delta percentage points.\n  stop(): end the "
           "episode.";
  }

  std::vector<PayloadSchema> schemas() const override {
    return {PayloadSchema{"rotate", {ArgSpec{ArgKind::Real, "angle", 0, {{-100000, 100000}}}, }, "rotate(theta)"},
            PayloadSchema{"saturate", {ArgSpec{ArgKind::Real, "delta", 0, {{-1000, 1000}}}}, "saturate(delta)"},
            stop_schema()};
  }

  std::string apply(const ActionCall& call) override { return colorize_apply(state_, call); }
  bool success() const override { return colorize_success(state_); }
  Canvas render_image() const override { return colorize_render(state_); }
  Canvas goal_image() const override { return colorize_render(state_, true); }
  std::string state_digest() const override {
    char buf[96];
    std::snprintf(buf, sizeof buf, ":h%.6f:s%.6f:ar%.2f", state_.hue_offset, state_.sat_offset, state_.ar);
    return "colorize:" +
           fnv1a64_hex(std::string(state_.original.raw().begin(), state_.original.raw().end())) + buf;
  }
  SolverPlan solve(const SolverOptions& opts) const override { return solve_colorize(state_, opts); }

  const ColorState& state() const { return state_; }

 private:
  ColorState state_;
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Registry
// ---------------------------------------------------------------------------

namespace detail {

template <class Env>
std::unique_ptr<EnvInstance> make_env(const ResolvedConfig& rc) {
  return std::make_unique<Env>(rc);
}

}  // namespace detail

/// The twelve built-in environments with the easy/hard parameter presets.
inline const std::vector<EnvDef>& env_registry() {
  static const std::vector<EnvDef> defs = [] {
    std::vector<EnvDef> v;
    v.push_back({"maze2d",
                 "Maze 2D",
                 {{"mw", 5, 51, 9, 11, true, "maze width (odd)"},
                  {"mh", 5, 51, 9, 11, true, "maze height (odd)"}},
                 true,
                 "move(d); stop()",
                 detail::make_env<detail::Maze2DEnv>});
    v.push_back({"maze3d",
                 "Maze 3D",
                 {{"mw", 5, 51, 7, 9, true, "maze width (odd)"},
                  {"mh", 5, 51, 7, 9, true, "maze height (odd)"}},
                 false,
                 "move(0); turn(d); stop()",
                 detail::make_env<detail::Maze3DEnv>});
    v.push_back({"sliding_block",
                 "Sliding Block",
                 {{"sm", 1, 10000, 30, 90, true, "number of shuffle moves"}},
                 true,
                 "move(b, d); stop()",
                 detail::make_env<detail::SlidingEnv>});
    v.push_back({"patch_reassembly",
                 "Patch Reassembly",
                 {{"gr", 2, 12, 6, 8, true, "grid rows"},
                  {"gc", 2, 12, 6, 8, true, "grid cols"},
                  {"np", 2, 10, 5, 6, true, "number of patches"}},
                 true,
                 "place(p, r, c); remove(p); stop()",
                 detail::make_env<detail::PatchEnv>});
    v.push_back({"matchstick_equation",
                 "Matchstick Equation",
                 {{"bm", 1, 2, 1, 2, true, "number of break moves"}},
                 true,
                 "move([i, s, j, t]); undo(); stop()",
                 detail::make_env<detail::EquationEnv>});
    v.push_back({"matchstick_rotation",
                 "Matchstick Rotation",
                 {{"pt", 1, 100, 10, 5, false, "position tolerance (px)"},
                  {"at", 1, 179, 15, 10, false, "angular tolerance (deg)"},
                  {"sr_lo", 0.05, 10, 0.5, 0.5, false, "hidden scale range low"},
                  {"sr_hi", 0.05, 10, 2.0, 2.0, false, "hidden scale range high"}},
                 false,
                 "move([dx, dy, dtheta]); stop()",
                 detail::make_env<detail::RotationEnv>});
    v.push_back({"mental_rotation_2d",
                 "Mental Rotation 2D",
                 {{"at", 0.5, 170, 10.0, 5.0, false, "angular tolerance (deg)"}},
                 false,
                 "rotate(theta); stop()",
                 detail::make_env<detail::MR2DEnv>});
    v.push_back({"mental_rotation_3d",
                 "Mental Rotation 3D (Cube)",
                 {{"ns", 2, 12, 4, 6, true, "number of segments"},
                  {"lr_lo", 2, 6, 2, 2, true, "segment length range low"},
                  {"lr_hi", 2, 6, 4, 4, true, "segment length range high"},
                  {"at", 1, 90, 15, 10, false, "angular tolerance (deg)"}},
                 false,
                 "rotate([dy, dp, dr]); stop()",
                 detail::make_env<detail::MR3DEnv>});
    v.push_back({"jigsaw",
                 "Jigsaw",
                 {{"nr", 1, 6, 2, 3, true, "tile rows"}, {"nc", 1, 6, 2, 3, true, "tile cols"}},
                 false,
                 "swap((r1, c1), (r2, c2)); reorder([...]); stop()",
                 detail::make_env<detail::JigsawEnv>});
    v.push_back({"zoom_in",
                 "Zoom-In Puzzle",
                 {{"zv", 2, 8, 4, 5, true, "number of views"},
                  {"zg", 1.05, 4, 1.5, 1.5, false, "zoom gap"},
                  {"zs", 0, 2, 0.5, 0.5, false, "zoom variability"},
                  {"mz", 1, 3, 1.2, 1.2, false, "minimum zoom"},
                  {"nest", 0, 1, 1, 1, true, "nested crops"}},
                 false,
                 "swap(i, j); reorder([...]); stop()",
                 detail::make_env<detail::ZoomEnv>});
    v.push_back({"video_unshuffle",
                 "Video Unshuffle",
                 {{"nf", 2, 8, 4, 5, true, "number of frames"},
                  {"ss", 0, 1, 0, 0, true, "sampling strategy (0 uniform, 1 random-ordered)"},
                  {"mfd", 0, 50, 5, 5, false, "minimum frame-diff threshold"}},
                 false,
                 "swap(i, j); reorder([...]); stop()",
                 detail::make_env<detail::VideoEnv>});
    v.push_back({"colorization",
                 "Colorization",
                 {{"ar", 1, 50, 11, 16, false, "accuracy radius"}},
                 false,
                 "rotate(theta); saturate(delta); stop()",
                 detail::make_env<detail::ColorizeEnv>});
    return v;
  }();
  return defs;
}

inline const EnvDef& find_env(const std::string& env_id) {
  for (const auto& def : env_registry())
    if (def.id == env_id) return def;
  throw ConfigError("unknown environment '" + env_id + "'");
}

/// [OP] reset, wired through the registry.
inline Episode start_episode(const EpisodeConfig& cfg) { return Episode::start(cfg, find_env(cfg.env_id)); }

/// Replays a plan through the real step engine (fresh episode from the same
/// config) and reports whether it ends with reward 1.
inline bool verify_plan(const EpisodeConfig& cfg, const SolverPlan& plan) {
  Episode ep = start_episode(cfg);
  for (const auto& action : plan.actions) {
    if (ep.finished()) return false;
    StepOutcome out = ep.step(canonical_repr(action));
    if (out.terminated) return out.reward == 1;
  }
  return false;
}

}  // namespace visgym
