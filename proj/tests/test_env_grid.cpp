#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "oracle_helpers.hpp"
#include "visgym/env/maze.hpp"
#include "visgym/env/patch.hpp"
#include "visgym/env/sliding.hpp"

using namespace visgym;

// ---------------------------------------------------------------------------
// Maze
// ---------------------------------------------------------------------------

TEST_CASE("maze sizes match presets and the frame adds a doubled border") {
  MazeState easy = maze_generate(9, 9, 1);
  auto frame = ascii_frame(maze2d_ascii(easy));
  // (9+4) rows of (9+4) characters.
  REQUIRE(frame.size() == 13 * 13 + 12);
  MazeState hard = maze_generate(11, 11, 1, 29);
  REQUIRE(hard.cols == 13);
}

TEST_CASE("maze rejects even or too-small dims") {
  REQUIRE_THROWS_AS(maze_generate(8, 9, 1), ConfigError);
  REQUIRE_THROWS_AS(maze_generate(3, 9, 1), ConfigError);
}

TEST_CASE("target is reachable from the agent (flood fill oracle)") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    MazeState st = maze_generate(9, 9, seed);
    auto parsed = oracle::parse_maze_ascii(ascii_frame(maze2d_ascii(st)));
    REQUIRE(parsed.agent.first >= 0);
    REQUIRE(parsed.target.first >= 0);
    REQUIRE(oracle::maze_reachable(parsed, parsed.agent, parsed.target));
  }
}

TEST_CASE("carved maze is perfect: free cells form a tree") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    MazeState st = maze_generate(9, 9, seed);
    // Count lattice cells and carved connections; a tree has cells-1 edges.
    int cells = 0, edges = 0;
    for (int r = 1; r < st.rows; r += 2)
      for (int c = 1; c < st.cols; c += 2) {
        if (!st.is_wall(r, c)) ++cells;
        if (c + 2 < st.cols && !st.is_wall(r, c + 1)) ++edges;
        if (r + 2 < st.rows && !st.is_wall(r + 1, c)) ++edges;
      }
    REQUIRE(cells == 25);
    REQUIRE(edges == cells - 1);
  }
}

TEST_CASE("freshly generated maze keeps the agent away from the target") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    MazeState st = maze_generate(9, 9, seed);
    REQUIRE(!maze_success(st));
    auto parsed = oracle::parse_maze_ascii(ascii_frame(maze2d_ascii(st)));
    int moves = oracle::maze_cell_distance(parsed, parsed.agent, parsed.target);
    REQUIRE(2 * moves >= (9 + 9) / 2);
  }
}

TEST_CASE("move semantics: corridor moves shift one cell, walls bounce") {
  MazeState st = maze_generate(9, 9, 4);
  auto start = st.agent;
  int open = -1, blocked = -1;
  for (int d = 0; d < 4; ++d) {
    if (maze_can_move(st, st.agent, d) && open < 0) open = d;
    if (!maze_can_move(st, st.agent, d) && blocked < 0) blocked = d;
  }
  REQUIRE(open >= 0);
  if (blocked >= 0) {
    REQUIRE(maze2d_apply(st, make_call("move", {blocked})) == "Cannot move into a wall.");
    REQUIRE(st.agent == start);
  }
  REQUIRE(maze2d_apply(st, make_call("move", {open})) == "executed");
  REQUIRE(st.agent != start);
  REQUIRE(maze2d_apply(st, make_call("move", {kOppositeDir[open]})) == "executed");
  REQUIRE(st.agent == start);
}

TEST_CASE("ascii view is stable and carries markers inside a doubled border") {
  MazeState st = maze_generate(5, 5, 2024);
  std::string frame = ascii_frame(maze2d_ascii(st));
  MazeState again = maze_generate(5, 5, 2024);
  REQUIRE(frame == ascii_frame(maze2d_ascii(again)));
  REQUIRE(frame.find('A') != std::string::npos);
  REQUIRE(frame.find('T') != std::string::npos);
  auto parsed = oracle::parse_maze_ascii(frame);
  for (int c = 0; c < int(parsed.rows[0].size()); ++c) REQUIRE(parsed.rows[0][std::size_t(c)] == '#');
}

TEST_CASE("maze3d turn algebra") {
  MazeState st = maze_generate(7, 7, 9, 19, true);
  st.heading = 0;  // N
  maze3d_apply(st, make_call("turn", {1}));
  REQUIRE(st.heading == 1);  // E
  maze3d_apply(st, make_call("turn", {0}));
  REQUIRE(st.heading == 0);
  maze3d_apply(st, make_call("turn", {2}));
  REQUIRE(st.heading == 2);
  maze3d_apply(st, make_call("turn", {2}));
  REQUIRE(st.heading == 0);
}

TEST_CASE("maze3d wall bump shares the maze2d message") {
  MazeState st = maze_generate(7, 7, 9, 19, true);
  for (int d = 0; d < 4; ++d) {
    if (!maze_can_move(st, st.agent, d)) {
      st.heading = d;
      REQUIRE(maze3d_apply(st, make_call("move", {0})) == "Cannot move into a wall.");
      return;
    }
  }
  SUCCEED("agent spawned at a full junction");
}

TEST_CASE("maze3d render: adjacent wall fills the viewport") {
  MazeState st = maze_generate(7, 7, 9, 19, true);
  for (int d = 0; d < 4; ++d) {
    if (!maze_can_move(st, st.agent, d)) {
      st.heading = d;
      Canvas view = maze3d_render(st);
      REQUIRE(view.width() == 320);
      REQUIRE(view.height() == 240);
      Color front = view.get(160, 120);
      REQUIRE(view.get(5, 120) == front);
      REQUIRE(view.get(314, 120) == front);
      REQUIRE(view.get(160, 5) == front);
      return;
    }
  }
  SUCCEED("agent spawned at a full junction");
}

TEST_CASE("maze3d render differs between open and blocked headings") {
  MazeState st = maze_generate(7, 7, 9, 19, true);
  int open = -1, blocked = -1;
  for (int d = 0; d < 4; ++d) {
    if (maze_can_move(st, st.agent, d) && open < 0) open = d;
    if (!maze_can_move(st, st.agent, d) && blocked < 0) blocked = d;
  }
  if (open < 0 || blocked < 0) {
    SUCCEED("degenerate junction");
    return;
  }
  st.heading = open;
  Canvas a = maze3d_render(st);
  st.heading = blocked;
  Canvas b = maze3d_render(st);
  REQUIRE(!(a == b));
}

// ---------------------------------------------------------------------------
// Sliding block
// ---------------------------------------------------------------------------

TEST_CASE("sliding generation invariants") {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    SlidingState st = sliding_generate(30, seed);
    int empties = 0;
    std::set<int> ids;
    for (auto v : st.board) {
      if (v < 0) ++empties;
      else ids.insert(v);
    }
    REQUIRE(empties == 2);
    REQUIRE(int(ids.size()) == st.num_blocks);
    REQUIRE(st.num_blocks <= 10);
    for (int b = 0; b < st.num_blocks; ++b) {
      auto cur = detail::sliding_block_cells(st.board, b);
      auto tgt = detail::sliding_block_cells(st.target, b);
      REQUIRE(cur.size() == tgt.size());
      REQUIRE(!cur.empty());
      REQUIRE(cur.size() <= 4);
    }
    REQUIRE(!sliding_success(st));
  }
}

TEST_CASE("sliding blocks are connected polyominoes") {
  SlidingState st = sliding_generate(30, 3);
  for (int b = 0; b < st.num_blocks; ++b) {
    auto cells = detail::sliding_block_cells(st.board, b);
    std::set<int> todo(cells.begin(), cells.end());
    std::vector<int> stack{*todo.begin()};
    todo.erase(todo.begin());
    while (!stack.empty()) {
      int cell = stack.back();
      stack.pop_back();
      for (int d = 0; d < 4; ++d) {
        int r = cell / 4 + kDirDr[d], c = cell % 4 + kDirDc[d];
        if (r < 0 || c < 0 || r >= 5 || c >= 4) continue;
        int n = r * 4 + c;
        if (todo.count(n)) {
          todo.erase(n);
          stack.push_back(n);
        }
      }
    }
    REQUIRE(todo.empty());
  }
}

TEST_CASE("replaying the inverse shuffle reaches the target") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SlidingState st = sliding_generate(30, seed);
    REQUIRE(int(st.inverse_shuffle.size()) <= 30);
    SlidingState::Board b = st.board;
    for (auto [blk, dir] : st.inverse_shuffle) {
      REQUIRE(detail::sliding_move_ok(b, blk, dir));
      detail::sliding_do_move(b, blk, dir);
    }
    REQUIRE(b == st.target);
  }
}

TEST_CASE("sliding apply: legal slide, blocked slide, inverse restores") {
  SlidingState st = sliding_generate(30, 7);
  SlidingState::Board before = st.board;
  int block = -1, dir = -1;
  for (int b = 0; b < st.num_blocks && block < 0; ++b)
    for (int d = 0; d < 4 && block < 0; ++d)
      if (detail::sliding_move_ok(st.board, b, d)) {
        block = b;
        dir = d;
      }
  REQUIRE(block >= 0);
  REQUIRE(sliding_apply(st, make_call("move", {block, dir})) == "executed");
  REQUIRE(sliding_apply(st, make_call("move", {block, kOppositeDir[dir]})) == "executed");
  REQUIRE(st.board == before);

  int bblock = -1, bdir = -1;
  for (int b = 0; b < st.num_blocks && bblock < 0; ++b)
    for (int d = 0; d < 4 && bblock < 0; ++d)
      if (!detail::sliding_move_ok(st.board, b, d)) {
        bblock = b;
        bdir = d;
      }
  REQUIRE(bblock >= 0);
  REQUIRE(sliding_apply(st, make_call("move", {bblock, bdir})) == "blocked: cells occupied");
  REQUIRE(st.board == before);
}

TEST_CASE("sliding ascii layout matches the two-column format") {
  SlidingState st = sliding_generate(30, 5);
  auto grid = sliding_ascii(st);
  auto frame = ascii_frame(grid);
  REQUIRE(grid.rows.size() == 7);
  REQUIRE(grid.rows[0].rfind("Target Current", 0) == 0);
  REQUIRE(grid.rows[1].rfind("-----------", 0) == 0);
  auto parsed = oracle::parse_sliding_ascii(frame);
  REQUIRE(parsed.target == oracle::board_string(st.target));
  REQUIRE(parsed.current == oracle::board_string(st.board));
  REQUIRE(frame == ascii_frame(sliding_ascii(sliding_generate(30, 5))));
}

TEST_CASE("sliding success is cell-for-cell equality") {
  SlidingState st = sliding_generate(30, 9);
  REQUIRE(!sliding_success(st));
  for (auto [blk, dir] : st.inverse_shuffle) detail::sliding_do_move(st.board, blk, dir);
  REQUIRE(sliding_success(st));
}

// ---------------------------------------------------------------------------
// Patch reassembly
// ---------------------------------------------------------------------------

TEST_CASE("generated patches partition the grid exactly") {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    PatchState st = patch_generate(6, 6, 5, seed);
    std::set<std::pair<int, int>> covered;
    std::size_t total = 0;
    for (int p = 0; p < st.np; ++p) {
      const auto& shape = st.shapes[std::size_t(p)];
      REQUIRE(!shape.empty());
      REQUIRE(shape[0] == std::pair<int, int>{0, 0});
      auto anchor = st.gen_anchor[std::size_t(p)];
      for (auto [dr, dc] : shape) {
        auto cell = std::pair<int, int>{anchor.first + dr, anchor.second + dc};
        REQUIRE(cell.first >= 0);
        REQUIRE(cell.second >= 0);
        REQUIRE(cell.first < 6);
        REQUIRE(cell.second < 6);
        covered.insert(cell);
      }
      total += shape.size();
    }
    REQUIRE(total == 36);
    REQUIRE(covered.size() == 36);  // disjoint and covering
  }
}

TEST_CASE("generated patches are connected") {
  PatchState st = patch_generate(8, 8, 6, 3);
  for (int p = 0; p < st.np; ++p) {
    const auto& shape = st.shapes[std::size_t(p)];
    std::set<std::pair<int, int>> todo(shape.begin(), shape.end());
    std::vector<std::pair<int, int>> stack{*todo.begin()};
    todo.erase(todo.begin());
    while (!stack.empty()) {
      auto [r, c] = stack.back();
      stack.pop_back();
      for (int d = 0; d < 4; ++d) {
        auto n = std::pair<int, int>{r + kDirDr[d], c + kDirDc[d]};
        if (todo.count(n)) {
          todo.erase(n);
          stack.push_back(n);
        }
      }
    }
    REQUIRE(todo.empty());
  }
}

TEST_CASE("patch apply: place at generating anchor, overlap rejection, remove") {
  PatchState st = patch_generate(6, 6, 5, 11);
  auto a1 = st.gen_anchor[1];
  REQUIRE(patch_apply(st, make_call("place", {1, a1.first, a1.second})) == "executed");
  auto a0 = st.gen_anchor[0];  // occupied by patch 0
  REQUIRE(patch_apply(st, make_call("place", {2, a0.first, a0.second})) ==
          "cannot place: overlap or out of bounds");
  REQUIRE(patch_apply(st, make_call("remove", {1})) == "executed");
  REQUIRE(patch_apply(st, make_call("remove", {1})) == "patch not on grid");
  REQUIRE(patch_apply(st, make_call("place", {1, a1.first, a1.second})) == "executed");
}

TEST_CASE("patch success accepts exactly covered grids only") {
  PatchState st = patch_generate(6, 6, 5, 13);
  REQUIRE(!patch_success(st));
  for (int p = 1; p < st.np; ++p) {
    auto a = st.gen_anchor[std::size_t(p)];
    REQUIRE(patch_apply(st, make_call("place", {p, a.first, a.second})) == "executed");
  }
  REQUIRE(patch_success(st));
  patch_apply(st, make_call("remove", {2}));
  REQUIRE(!patch_success(st));
}

TEST_CASE("patch ascii reconstructs the logical state") {
  PatchState st = patch_generate(6, 6, 5, 17);
  auto a3 = st.gen_anchor[3];
  patch_apply(st, make_call("place", {3, a3.first, a3.second}));
  auto frame = ascii_frame(patch_ascii(st));
  REQUIRE(frame.find("--- Parked Patches ---") != std::string::npos);
  auto parsed = oracle::parse_patch_ascii(frame);
  REQUIRE(int(parsed.grid.size()) == 6);
  auto occ = detail::patch_occupancy(st);
  for (int r = 0; r < 6; ++r)
    for (int c = 0; c < 6; ++c) {
      char expect = occ[std::size_t(r) * 6 + c] < 0 ? '.' : char('0' + occ[std::size_t(r) * 6 + c]);
      REQUIRE(parsed.grid[std::size_t(r)][std::size_t(c)] == expect);
    }
  for (int p = 0; p < st.np; ++p) {
    if (st.placed[std::size_t(p)]) continue;
    REQUIRE(parsed.parked_shapes.count(p) == 1);
    auto shape = parsed.parked_shapes[p];
    std::sort(shape.begin(), shape.end());
    auto expect = st.shapes[std::size_t(p)];
    std::sort(expect.begin(), expect.end());
    REQUIRE(shape == expect);
  }
  int stars = 0;
  for (char ch : frame) stars += ch == '*';
  int parked = 0;
  for (int p = 0; p < st.np; ++p) parked += !st.placed[std::size_t(p)];
  REQUIRE(stars == parked);
}

TEST_CASE("patch np bounds are validated") {
  REQUIRE_THROWS_AS(patch_generate(6, 6, 1, 1), ConfigError);
  REQUIRE_THROWS_AS(patch_generate(3, 3, 11, 1), ConfigError);
}
