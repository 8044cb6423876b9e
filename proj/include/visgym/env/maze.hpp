#pragma once

#include <algorithm>
#include <array>
#include <deque>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "visgym/core.hpp"
#include "visgym/render.hpp"
#include "visgym/rng.hpp"

namespace visgym {

// Direction encoding shared by both maze variants and the sliding board:
// 0 = up, 1 = right, 2 = down, 3 = left.
inline constexpr int kDirDr[4] = {-1, 0, 1, 0};
inline constexpr int kDirDc[4] = {0, 1, 0, -1};

/// Odd-lattice maze. The payload is mw x mh characters with lattice cells at
/// odd grid coordinates; the stored grid adds one enclosing wall ring, and
/// the views add a second ring (doubled border).
struct MazeState {
  int payload_w = 0, payload_h = 0;  // mw, mh
  int rows = 0, cols = 0;            // payload + one wall ring
  std::vector<std::uint8_t> wall;    // rows*cols, 1 = wall
  std::pair<int, int> agent;         // (row, col), odd coordinates
  std::pair<int, int> target;
  int heading = 0;  // 0=N 1=E 2=S 3=W; used by the first-person variant

  bool is_wall(int r, int c) const {
    if (r < 0 || c < 0 || r >= rows || c >= cols) return true;
    return wall[std::size_t(r) * cols + c] != 0;
  }
  void set_wall(int r, int c, bool w) { wall[std::size_t(r) * cols + c] = w ? 1 : 0; }
};

inline bool maze_can_move(const MazeState& st, std::pair<int, int> from, int d) {
  int mr = from.first + kDirDr[d], mc = from.second + kDirDc[d];
  int nr = from.first + 2 * kDirDr[d], nc = from.second + 2 * kDirDc[d];
  return !st.is_wall(mr, mc) && !st.is_wall(nr, nc);
}

/// Shortest cell path agent -> target (inclusive); empty when already there.
inline std::vector<std::pair<int, int>> maze_shortest_path(const MazeState& st, std::pair<int, int> from,
                                                           std::pair<int, int> to) {
  std::vector<int> prev(std::size_t(st.rows) * st.cols, -2);
  std::deque<std::pair<int, int>> q{from};
  prev[std::size_t(from.first) * st.cols + from.second] = -1;
  while (!q.empty()) {
    auto [r, c] = q.front();
    q.pop_front();
    if (std::pair{r, c} == to) break;
    for (int d = 0; d < 4; ++d) {
      if (!maze_can_move(st, {r, c}, d)) continue;
      int nr = r + 2 * kDirDr[d], nc = c + 2 * kDirDc[d];
      if (prev[std::size_t(nr) * st.cols + nc] != -2) continue;
      prev[std::size_t(nr) * st.cols + nc] = (r * st.cols + c) * 4 + d;
      q.push_back({nr, nc});
    }
  }
  std::vector<std::pair<int, int>> path;
  int cur = to.first * st.cols + to.second;
  if (prev[std::size_t(cur)] == -2) return path;  // unreachable
  path.push_back(to);
  while (prev[std::size_t(cur)] != -1) {
    cur = prev[std::size_t(cur)] / 4;
    path.push_back({cur / st.cols, cur % st.cols});
  }
  std::reverse(path.begin(), path.end());
  return path;
}

/// Directions along a cell path.
inline std::vector<int> maze_path_dirs(const std::vector<std::pair<int, int>>& path) {
  std::vector<int> dirs;
  for (std::size_t i = 1; i < path.size(); ++i) {
    int dr = (path[i].first - path[i - 1].first) / 2, dc = (path[i].second - path[i - 1].second) / 2;
    for (int d = 0; d < 4; ++d)
      if (kDirDr[d] == dr && kDirDc[d] == dc) dirs.push_back(d);
  }
  return dirs;
}

/// First-person action sequence (turns + moves) that follows the path from
/// the given heading. Pairs of (name, payload) with name "turn" or "move".
inline std::vector<std::pair<const char*, int>> maze_path_to_actions(const std::vector<int>& dirs,
                                                                     int heading) {
  std::vector<std::pair<const char*, int>> actions;
  for (int d : dirs) {
    int delta = ((d - heading) % 4 + 4) % 4;
    if (delta == 1) actions.push_back({"turn", 1});
    else if (delta == 3) actions.push_back({"turn", 0});
    else if (delta == 2) actions.push_back({"turn", 2});
    actions.push_back({"move", 0});
    heading = d;
  }
  return actions;
}

/// Perfect maze by randomized depth-first carving; agent and target on
/// distinct cells with shortest-path distance >= (mw+mh)/2 grid units and a
/// solver plan that fits within max_plan_actions (stop excluded).
inline MazeState maze_generate(int mw, int mh, std::uint64_t seed, int max_plan_actions = 19,
                               bool first_person = false) {
  if (mw < 5 || mh < 5 || mw % 2 == 0 || mh % 2 == 0)
    throw ConfigError("parameter out of range: maze dims must be odd and >= 5");
  MazeState st;
  st.payload_w = mw;
  st.payload_h = mh;
  st.cols = mw + 2;
  st.rows = mh + 2;
  const int cw = (mw + 1) / 2, ch = (mh + 1) / 2;  // lattice cells

  for (std::uint64_t attempt = 0;; ++attempt) {
    Rng rng = Rng::derive(seed, "maze.gen", attempt);
    st.wall.assign(std::size_t(st.rows) * st.cols, 1);

    auto cell_rc = [&](int ci, int cj) { return std::pair<int, int>{1 + 2 * ci, 1 + 2 * cj}; };
    std::vector<std::uint8_t> visited(std::size_t(cw) * ch, 0);
    std::vector<std::pair<int, int>> stack;
    int si = int(rng.below(std::uint64_t(ch))), sj = int(rng.below(std::uint64_t(cw)));
    stack.push_back({si, sj});
    visited[std::size_t(si) * cw + sj] = 1;
    auto [r0, c0] = cell_rc(si, sj);
    st.set_wall(r0, c0, false);
    while (!stack.empty()) {
      auto [ci, cj] = stack.back();
      int order[4] = {0, 1, 2, 3};
      for (int k = 3; k > 0; --k) std::swap(order[k], order[rng.below(std::uint64_t(k) + 1)]);
      bool advanced = false;
      for (int k = 0; k < 4 && !advanced; ++k) {
        int d = order[k];
        int ni = ci + kDirDr[d], nj = cj + kDirDc[d];
        if (ni < 0 || nj < 0 || ni >= ch || nj >= cw) continue;
        if (visited[std::size_t(ni) * cw + nj]) continue;
        visited[std::size_t(ni) * cw + nj] = 1;
        auto [ar, ac] = cell_rc(ci, cj);
        auto [br, bc] = cell_rc(ni, nj);
        st.set_wall((ar + br) / 2, (ac + bc) / 2, false);
        st.set_wall(br, bc, false);
        stack.push_back({ni, nj});
        advanced = true;
      }
      if (!advanced) stack.pop_back();
    }

    // Pick agent/target: BFS in lattice-cell moves from a random agent cell.
    std::vector<std::pair<int, int>> cells;
    for (int ci = 0; ci < ch; ++ci)
      for (int cj = 0; cj < cw; ++cj) cells.push_back(cell_rc(ci, cj));
    rng.shuffle(cells);
    const int min_dist = (mw + mh) / 2;  // grid units; one cell move covers 2
    for (const auto& start : cells) {
      std::vector<int> dist(std::size_t(st.rows) * st.cols, -1);
      std::deque<std::pair<int, int>> q{start};
      dist[std::size_t(start.first) * st.cols + start.second] = 0;
      while (!q.empty()) {
        auto [r, c] = q.front();
        q.pop_front();
        for (int d = 0; d < 4; ++d) {
          int nr = r + 2 * kDirDr[d], nc = c + 2 * kDirDc[d];
          if (nr < 0 || nc < 0 || nr >= st.rows || nc >= st.cols) continue;
          if (st.is_wall(r + kDirDr[d], c + kDirDc[d]) || st.is_wall(nr, nc)) continue;
          if (dist[std::size_t(nr) * st.cols + nc] >= 0) continue;
          dist[std::size_t(nr) * st.cols + nc] = dist[std::size_t(r) * st.cols + c] + 1;
          q.push_back({nr, nc});
        }
      }
      int heading = int(rng.below(4));
      std::vector<std::pair<int, int>> far;
      for (const auto& cell : cells) {
        int d = dist[std::size_t(cell.first) * st.cols + cell.second];
        if (d <= 0 || 2 * d < min_dist) continue;
        int plan_len = d;
        if (first_person) {
          auto dirs = maze_path_dirs(maze_shortest_path(st, start, cell));
          plan_len = int(maze_path_to_actions(dirs, heading).size());
        }
        if (plan_len <= max_plan_actions) far.push_back(cell);
      }
      if (!far.empty()) {
        st.agent = start;
        st.target = far[rng.below(far.size())];
        st.heading = heading;
        return st;
      }
    }
    // No admissible pair in this carving (tiny mazes); carve again.
  }
}

/// move(d): one lattice cell in direction d, or a wall bump.
inline std::string maze2d_apply(MazeState& st, const ActionCall& call) {
  int d = int(std::get<std::int64_t>(call.payload[0]));
  if (!maze_can_move(st, st.agent, d)) return feedback::kWall;
  st.agent = {st.agent.first + 2 * kDirDr[d], st.agent.second + 2 * kDirDc[d]};
  return feedback::kExecuted;
}

/// turn(d): 0 = left, 1 = right, 2 = around; move(0): advance along heading.
inline std::string maze3d_apply(MazeState& st, const ActionCall& call) {
  if (call.name == "turn") {
    int d = int(std::get<std::int64_t>(call.payload[0]));
    st.heading = (st.heading + (d == 0 ? 3 : d == 1 ? 1 : 2)) % 4;
    return feedback::kExecuted;
  }
  if (!maze_can_move(st, st.agent, st.heading)) return feedback::kWall;
  st.agent = {st.agent.first + 2 * kDirDr[st.heading], st.agent.second + 2 * kDirDc[st.heading]};
  return feedback::kExecuted;
}

inline bool maze_success(const MazeState& st) { return st.agent == st.target; }

/// '#' wall, ' ' free, 'A' agent, 'T' target, doubled outer border.
inline CharGrid maze2d_ascii(const MazeState& st, bool agent_at_target = false) {
  std::vector<std::string> rows(std::size_t(st.rows) + 2, std::string(std::size_t(st.cols) + 2, '#'));
  for (int r = 0; r < st.rows; ++r)
    for (int c = 0; c < st.cols; ++c)
      if (!st.is_wall(r, c)) rows[std::size_t(r) + 1][std::size_t(c) + 1] = ' ';
  auto agent = agent_at_target ? st.target : st.agent;
  rows[std::size_t(st.target.first) + 1][std::size_t(st.target.second) + 1] = 'T';
  rows[std::size_t(agent.first) + 1][std::size_t(agent.second) + 1] = 'A';
  return CharGrid{std::move(rows)};
}

inline constexpr int kMazeCellPx = 32;

inline Canvas maze2d_render(const MazeState& st, bool agent_at_target = false) {
  const Color wall_col{44, 48, 58}, free_col{238, 240, 244};
  const Color agent_col{58, 120, 237}, target_col{228, 74, 58};
  const int W = (st.cols + 2) * kMazeCellPx, H = (st.rows + 2) * kMazeCellPx;
  Canvas canvas(W, H, wall_col);
  for (int r = 0; r < st.rows; ++r)
    for (int c = 0; c < st.cols; ++c)
      if (!st.is_wall(r, c))
        fill_rect(canvas, (c + 1) * kMazeCellPx, (r + 1) * kMazeCellPx, kMazeCellPx, kMazeCellPx, free_col);
  auto draw_marker = [&](std::pair<int, int> cell, Color col, char letter) {
    int x = (cell.second + 1) * kMazeCellPx, y = (cell.first + 1) * kMazeCellPx;
    fill_rect(canvas, x + 4, y + 4, kMazeCellPx - 8, kMazeCellPx - 8, col);
    std::string s(1, letter);
    draw_text(canvas, x + (kMazeCellPx - 10) / 2, y + (kMazeCellPx - 14) / 2, s, Color{255, 255, 255}, 2);
  };
  draw_marker(st.target, target_col, 'T');
  draw_marker(agent_at_target ? st.target : st.agent, agent_col, 'A');
  return canvas;
}

/// One-point-perspective corridor view along the agent's heading, up to six
/// cells deep; flat colors, side openings, target drawn as a colored panel
/// when in line of sight.
inline Canvas maze3d_render(const MazeState& st, bool agent_at_target = false) {
  const int W = 320, H = 240;
  const Color ceiling{210, 214, 222}, floor{96, 100, 112};
  const Color wall_front{152, 156, 168}, wall_side{120, 124, 136};
  const Color opening{70, 74, 86}, target_col{228, 74, 58};
  Canvas canvas(W, H, ceiling);
  fill_rect(canvas, 0, H / 2, W, H - H / 2, floor);

  auto agent = agent_at_target ? st.target : st.agent;
  const int h = st.heading;
  auto cell_at = [&](int steps) {
    return std::pair<int, int>{agent.first + 2 * steps * kDirDr[h], agent.second + 2 * steps * kDirDc[h]};
  };
  // Free run length ahead (capped at 6 cells).
  int run = 0;
  while (run < 6) {
    auto cur = cell_at(run);
    if (!maze_can_move(st, cur, h)) break;
    ++run;
  }
  // Screen rectangle for a plane at distance d cells from the agent; the
  // adjacent wall face (d = 0.5) exactly fills the viewport.
  auto plane = [&](double d) {
    double s = 0.5 / std::max(d, 0.2);
    double hw = (W / 2.0) * s, hh = (H / 2.0) * s;
    return std::array<double, 4>{W / 2.0 - hw, H / 2.0 - hh, W / 2.0 + hw, H / 2.0 + hh};
  };
  int left_dir = (h + 3) % 4, right_dir = (h + 1) % 4;

  // Far to near: far wall first, then each cell's side surfaces.
  auto far_plane = plane(run + 0.5);
  {
    auto p = far_plane;
    fill_rect(canvas, int(std::lround(p[0])), int(std::lround(p[1])),
              int(std::lround(p[2] - p[0])), int(std::lround(p[3] - p[1])), wall_front);
  }
  for (int i = run; i >= 0; --i) {
    auto cell = cell_at(i);
    auto near = plane(i - 0.5), far = plane(i + 0.5);
    if (i == 0) near = {W / 2.0 - W * 1.5, H / 2.0 - H * 1.5, W / 2.0 + W * 1.5, H / 2.0 + H * 1.5};
    bool left_open = maze_can_move(st, cell, left_dir);
    bool right_open = maze_can_move(st, cell, right_dir);
    // Ceiling / floor trapezoids for this segment.
    PointF ceil_quad[4] = {{near[0], near[1]}, {far[0], far[1]}, {far[2], far[1]}, {near[2], near[1]}};
    fill_polygon(canvas, ceil_quad, ceiling);
    PointF floor_quad[4] = {{near[0], near[3]}, {far[0], far[3]}, {far[2], far[3]}, {near[2], near[3]}};
    fill_polygon(canvas, floor_quad, floor);
    PointF lq[4] = {{near[0], near[1]}, {far[0], far[1]}, {far[0], far[3]}, {near[0], near[3]}};
    fill_polygon(canvas, lq, left_open ? opening : wall_side);
    PointF rq[4] = {{near[2], near[1]}, {far[2], far[1]}, {far[2], far[3]}, {near[2], near[3]}};
    fill_polygon(canvas, rq, right_open ? opening : wall_side);
    if (cell == st.target && !agent_at_target) {
      // Vertical panel centered at this depth.
      double cx = W / 2.0, midw = (far[2] - far[0]) * 0.35, top = far[1] + (far[3] - far[1]) * 0.2;
      fill_rect(canvas, int(cx - midw / 2), int(top), int(midw), int(far[3] - top), target_col);
    }
  }
  if (agent_at_target) {
    // Standing on the target: panel fills the lower view.
    fill_rect(canvas, W / 2 - 70, H - 60, 140, 50, target_col);
  }
  return canvas;
}

inline std::string maze_digest(const MazeState& st) {
  std::string out = "maze:" + std::to_string(st.payload_w) + "x" + std::to_string(st.payload_h) + ":";
  for (auto w : st.wall) out += w ? '1' : '0';
  out += ":a" + std::to_string(st.agent.first) + "," + std::to_string(st.agent.second);
  out += ":t" + std::to_string(st.target.first) + "," + std::to_string(st.target.second);
  out += ":h" + std::to_string(st.heading);
  return out;
}

}  // namespace visgym
