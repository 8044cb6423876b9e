#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <map>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "visgym/core.hpp"
#include "visgym/env/maze.hpp"  // direction deltas
#include "visgym/render.hpp"
#include "visgym/rng.hpp"

namespace visgym {

/// Klotski-style board: 4 wide x 5 tall, connected polyomino blocks of size
/// 1..4 labeled 0..9, exactly two empty cells.
struct SlidingState {
  static constexpr int kRows = 5, kCols = 4, kCells = kRows * kCols;
  using Board = std::array<std::int8_t, kCells>;  // block id, -1 = empty

  Board board{};
  Board target{};
  int num_blocks = 0;
  std::vector<std::pair<int, int>> inverse_shuffle;  // (block, dir) replay witness

  static int idx(int r, int c) { return r * kCols + c; }
};

namespace detail {

inline std::vector<int> sliding_block_cells(const SlidingState::Board& b, int block) {
  std::vector<int> cells;
  for (int i = 0; i < SlidingState::kCells; ++i)
    if (b[i] == block) cells.push_back(i);
  return cells;
}

inline bool sliding_move_ok(const SlidingState::Board& b, int block, int d) {
  for (int i = 0; i < SlidingState::kCells; ++i) {
    if (b[i] != block) continue;
    int r = i / SlidingState::kCols + kDirDr[d];
    int c = i % SlidingState::kCols + kDirDc[d];
    if (r < 0 || c < 0 || r >= SlidingState::kRows || c >= SlidingState::kCols) return false;
    std::int8_t dest = b[SlidingState::idx(r, c)];
    if (dest != -1 && dest != block) return false;
  }
  return true;
}

inline void sliding_do_move(SlidingState::Board& b, int block, int d) {
  auto cells = sliding_block_cells(b, block);
  for (int i : cells) b[std::size_t(i)] = -1;
  for (int i : cells) {
    int r = i / SlidingState::kCols + kDirDr[d];
    int c = i % SlidingState::kCols + kDirDc[d];
    b[std::size_t(SlidingState::idx(r, c))] = std::int8_t(block);
  }
}

inline std::uint64_t sliding_key(const SlidingState::Board& b) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (auto v : b) {
    h ^= std::uint8_t(v + 1);
    h *= 0x100000001b3ull;
  }
  return h;
}

/// Random exact tiling of the board with polyominoes of size 1..4 and two
/// holes; at most 10 blocks so ids stay single digits.
inline bool sliding_try_tiling(Rng& rng, SlidingState::Board& out, int& count) {
  out.fill(-2);  // unassigned
  int h1 = int(rng.below(SlidingState::kCells));
  int h2 = int(rng.below(SlidingState::kCells));
  if (h1 == h2) return false;
  out[std::size_t(h1)] = out[std::size_t(h2)] = -1;
  count = 0;
  for (int start = 0; start < SlidingState::kCells; ++start) {
    if (out[std::size_t(start)] != -2) continue;
    if (count >= 10) return false;
    int want = 1 + int(rng.below(4));
    if (want == 1 && rng.chance(0.5)) want = 2 + int(rng.below(3));  // bias toward bigger pieces
    std::vector<int> grown{start};
    out[std::size_t(start)] = std::int8_t(count);
    while (int(grown.size()) < want) {
      std::vector<int> frontier;
      for (int cell : grown) {
        for (int d = 0; d < 4; ++d) {
          int r = cell / SlidingState::kCols + kDirDr[d];
          int c = cell % SlidingState::kCols + kDirDc[d];
          if (r < 0 || c < 0 || r >= SlidingState::kRows || c >= SlidingState::kCols) continue;
          if (out[std::size_t(SlidingState::idx(r, c))] == -2) frontier.push_back(SlidingState::idx(r, c));
        }
      }
      if (frontier.empty()) break;
      int cell = frontier[rng.below(frontier.size())];
      out[std::size_t(cell)] = std::int8_t(count);
      grown.push_back(cell);
    }
    ++count;
  }
  return count <= 10;
}

struct SlidingBfsResult {
  bool found = false;
  bool budget_exhausted = false;
  std::vector<std::pair<int, int>> moves;  // (block, dir)
};

/// Shortest move sequence between two boards; canonical-hash visited set with
/// a node budget.
inline SlidingBfsResult sliding_bfs(const SlidingState::Board& from, const SlidingState::Board& to,
                                    int num_blocks, std::size_t node_budget = 500000) {
  SlidingBfsResult res;
  if (from == to) {
    res.found = true;
    return res;
  }
  struct Node {
    SlidingState::Board board;
    int parent;
    std::int8_t block, dir;
  };
  std::vector<Node> nodes;
  nodes.push_back({from, -1, -1, -1});
  std::unordered_set<std::uint64_t> seen{sliding_key(from)};
  std::size_t head = 0;
  while (head < nodes.size()) {
    if (nodes.size() > node_budget) {
      res.budget_exhausted = true;
      return res;
    }
    SlidingState::Board cur = nodes[head].board;
    for (int b = 0; b < num_blocks; ++b) {
      for (int d = 0; d < 4; ++d) {
        if (!sliding_move_ok(cur, b, d)) continue;
        SlidingState::Board next = cur;
        sliding_do_move(next, b, d);
        if (!seen.insert(sliding_key(next)).second) continue;
        nodes.push_back({next, int(head), std::int8_t(b), std::int8_t(d)});
        if (next == to) {
          for (int i = int(nodes.size()) - 1; i > 0; i = nodes[std::size_t(i)].parent)
            res.moves.push_back({nodes[std::size_t(i)].block, nodes[std::size_t(i)].dir});
          std::reverse(res.moves.begin(), res.moves.end());
          res.found = true;
          return res;
        }
      }
    }
    ++head;
  }
  return res;  // target unreachable (cannot happen for shuffled boards)
}

}  // namespace detail

inline constexpr int kOppositeDir[4] = {2, 3, 0, 1};

/// Random tiling -> sm legal shuffle moves that never immediately undo the
/// previous move. Generation certifies (via the solver's budgeted BFS) that
/// the scramble is solvable within `max_plan_moves`.
inline SlidingState sliding_generate(int sm, std::uint64_t seed, int max_plan_moves = 19) {
  if (sm < 1) throw ConfigError("parameter out of range: sm must be >= 1");
  for (std::uint64_t attempt = 0;; ++attempt) {
    Rng rng = Rng::derive(seed, "sliding.gen", attempt);
    SlidingState st;
    int count = 0;
    if (!detail::sliding_try_tiling(rng, st.target, count)) continue;
    st.num_blocks = count;
    st.board = st.target;
    int last_block = -1, last_dir = -1;
    std::vector<std::pair<int, int>> forward;
    for (int step = 0; step < sm; ++step) {
      std::vector<std::pair<int, int>> moves;
      for (int b = 0; b < count; ++b)
        for (int d = 0; d < 4; ++d)
          if (!(b == last_block && d == kOppositeDir[last_dir < 0 ? 0 : last_dir] && last_dir >= 0) &&
              detail::sliding_move_ok(st.board, b, d))
            moves.push_back({b, d});
      if (moves.empty()) break;
      auto [b, d] = moves[rng.below(moves.size())];
      detail::sliding_do_move(st.board, b, d);
      forward.push_back({b, d});
      last_block = b;
      last_dir = d;
    }
    if (int(forward.size()) < sm || st.board == st.target) continue;
    st.inverse_shuffle.clear();
    for (auto it = forward.rbegin(); it != forward.rend(); ++it)
      st.inverse_shuffle.push_back({it->first, kOppositeDir[it->second]});
    auto bfs = detail::sliding_bfs(st.board, st.target, st.num_blocks);
    if (!bfs.found || int(bfs.moves.size()) > max_plan_moves) continue;
    return st;
  }
}

/// move(b, d): slide block b one cell if every destination cell is empty or
/// its own.
inline std::string sliding_apply(SlidingState& st, const ActionCall& call) {
  int b = int(std::get<std::int64_t>(call.payload[0]));
  int d = int(std::get<std::int64_t>(call.payload[1]));
  if (!detail::sliding_move_ok(st.board, b, d)) return feedback::kBlocked;
  detail::sliding_do_move(st.board, b, d);
  return feedback::kExecuted;
}

inline bool sliding_success(const SlidingState& st) { return st.board == st.target; }

/// Two labeled columns, digits for block ids, '.' for empty.
inline CharGrid sliding_ascii(const SlidingState& st, bool solved_view = false) {
  std::vector<std::string> rows;
  rows.push_back("Target Current");
  rows.push_back("-----------");
  const auto& cur = solved_view ? st.target : st.board;
  for (int r = 0; r < SlidingState::kRows; ++r) {
    std::string line;
    for (int c = 0; c < SlidingState::kCols; ++c) {
      auto v = st.target[std::size_t(SlidingState::idx(r, c))];
      line += v < 0 ? '.' : char('0' + v);
    }
    line += " | ";
    for (int c = 0; c < SlidingState::kCols; ++c) {
      auto v = cur[std::size_t(SlidingState::idx(r, c))];
      line += v < 0 ? '.' : char('0' + v);
    }
    rows.push_back(line);
  }
  return CharGrid::from_lines(std::move(rows));
}

inline Canvas sliding_board_render(const SlidingState::Board& board) {
  const int px = 32;
  Canvas canvas(SlidingState::kCols * px, SlidingState::kRows * px, Color{30, 32, 38});
  for (int r = 0; r < SlidingState::kRows; ++r) {
    for (int c = 0; c < SlidingState::kCols; ++c) {
      auto v = board[std::size_t(SlidingState::idx(r, c))];
      if (v < 0) continue;
      Color col = kBlockPalette[v];
      fill_rect(canvas, c * px + 1, r * px + 1, px - 2, px - 2, col);
      std::string label(1, char('0' + v));
      draw_text(canvas, c * px + px / 2 - 5, r * px + px / 2 - 7, label, Color{20, 20, 24}, 2);
    }
  }
  return canvas;
}

inline Canvas sliding_render(const SlidingState& st, bool solved_view = false) {
  return compose_side_by_side(sliding_board_render(st.target),
                              sliding_board_render(solved_view ? st.target : st.board), "Target",
                              "Current");
}

inline std::string sliding_digest(const SlidingState& st) {
  std::string out = "sliding:";
  for (auto v : st.board) out += char('a' + v + 1);
  out += ":";
  for (auto v : st.target) out += char('a' + v + 1);
  return out;
}

}  // namespace visgym
