// Test-side oracles, kept independent of the implementation paths they check:
// ASCII parsers that reconstruct logical state from rendered frames, and
// plain brute-force searches used to cross-check solver optimality.
#pragma once

#include <deque>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "visgym/env/matchstick_equation.hpp"
#include "visgym/env/maze.hpp"
#include "visgym/env/patch.hpp"
#include "visgym/env/sliding.hpp"
#include "visgym/render.hpp"

namespace oracle {

// ---------------------------------------------------------------------------
// Maze
// ---------------------------------------------------------------------------

struct ParsedMaze {
  std::vector<std::string> rows;  // '#' / ' ' with the doubled border stripped once
  std::pair<int, int> agent{-1, -1}, target{-1, -1};

  bool wall(int r, int c) const { return rows[std::size_t(r)][std::size_t(c)] == '#'; }
};

inline ParsedMaze parse_maze_ascii(const std::string& frame) {
  ParsedMaze parsed;
  std::vector<std::string> lines;
  std::string cur;
  for (char ch : frame) {
    if (ch == '\n') {
      lines.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  lines.push_back(cur);
  // Strip the extra view ring; what remains is the state grid.
  for (std::size_t r = 1; r + 1 < lines.size(); ++r) parsed.rows.push_back(lines[r].substr(1, lines[r].size() - 2));
  for (int r = 0; r < int(parsed.rows.size()); ++r) {
    for (int c = 0; c < int(parsed.rows[std::size_t(r)].size()); ++c) {
      char& ch = parsed.rows[std::size_t(r)][std::size_t(c)];
      if (ch == 'A') {
        parsed.agent = {r, c};
        ch = ' ';
      } else if (ch == 'T') {
        parsed.target = {r, c};
        ch = ' ';
      }
    }
  }
  return parsed;
}

/// Flood fill over free grid characters.
inline bool maze_reachable(const ParsedMaze& m, std::pair<int, int> from, std::pair<int, int> to) {
  std::set<std::pair<int, int>> seen{from};
  std::deque<std::pair<int, int>> q{from};
  int rows = int(m.rows.size()), cols = int(m.rows[0].size());
  while (!q.empty()) {
    auto [r, c] = q.front();
    q.pop_front();
    if (std::pair{r, c} == to) return true;
    static const int dr[4] = {-1, 0, 1, 0}, dc[4] = {0, 1, 0, -1};
    for (int d = 0; d < 4; ++d) {
      int nr = r + dr[d], nc = c + dc[d];
      if (nr < 0 || nc < 0 || nr >= rows || nc >= cols) continue;
      if (m.wall(nr, nc) || seen.count({nr, nc})) continue;
      seen.insert({nr, nc});
      q.push_back({nr, nc});
    }
  }
  return false;
}

/// Shortest path in lattice-cell moves over the parsed character grid.
inline int maze_cell_distance(const ParsedMaze& m, std::pair<int, int> from, std::pair<int, int> to) {
  std::map<std::pair<int, int>, int> dist{{from, 0}};
  std::deque<std::pair<int, int>> q{from};
  int rows = int(m.rows.size()), cols = int(m.rows[0].size());
  while (!q.empty()) {
    auto cell = q.front();
    q.pop_front();
    if (cell == to) return dist[cell];
    static const int dr[4] = {-1, 0, 1, 0}, dc[4] = {0, 1, 0, -1};
    for (int d = 0; d < 4; ++d) {
      int mr = cell.first + dr[d], mc = cell.second + dc[d];
      int nr = cell.first + 2 * dr[d], nc = cell.second + 2 * dc[d];
      if (nr < 0 || nc < 0 || nr >= rows || nc >= cols) continue;
      if (m.wall(mr, mc) || m.wall(nr, nc)) continue;
      if (dist.count({nr, nc})) continue;
      dist[{nr, nc}] = dist[cell] + 1;
      q.push_back({nr, nc});
    }
  }
  return -1;
}

// ---------------------------------------------------------------------------
// Sliding board
// ---------------------------------------------------------------------------

struct ParsedBoards {
  std::string target, current;  // 20 chars each, '.' or digit
};

inline ParsedBoards parse_sliding_ascii(const std::string& frame) {
  ParsedBoards out;
  std::vector<std::string> lines;
  std::string cur;
  for (char ch : frame) {
    if (ch == '\n') {
      lines.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  lines.push_back(cur);
  for (std::size_t r = 2; r < lines.size() && r < 7; ++r) {
    out.target += lines[r].substr(0, 4);
    out.current += lines[r].substr(7, 4);
  }
  return out;
}

/// Plain breadth-first count of the fewest single-cell block slides between
/// two labeled boards, written against string states only.
inline int sliding_min_moves(const std::string& from, const std::string& to) {
  constexpr int R = 5, C = 4;
  if (from == to) return 0;
  std::map<std::string, int> dist{{from, 0}};
  std::deque<std::string> q{from};
  static const int dr[4] = {-1, 0, 1, 0}, dc[4] = {0, 1, 0, -1};
  while (!q.empty()) {
    std::string b = q.front();
    q.pop_front();
    std::set<char> blocks(b.begin(), b.end());
    blocks.erase('.');
    for (char id : blocks) {
      for (int d = 0; d < 4; ++d) {
        bool ok = true;
        std::string next(std::size_t(R * C), '.');
        for (int i = 0; i < R * C && ok; ++i) {
          if (b[std::size_t(i)] != id) continue;
          int r = i / C + dr[d], c = i % C + dc[d];
          if (r < 0 || c < 0 || r >= R || c >= C) ok = false;
          else if (b[std::size_t(r * C + c)] != '.' && b[std::size_t(r * C + c)] != id) ok = false;
        }
        if (!ok) continue;
        for (int i = 0; i < R * C; ++i)
          if (b[std::size_t(i)] != id && b[std::size_t(i)] != '.') next[std::size_t(i)] = b[std::size_t(i)];
        for (int i = 0; i < R * C; ++i) {
          if (b[std::size_t(i)] != id) continue;
          int r = i / C + dr[d], c = i % C + dc[d];
          next[std::size_t(r * C + c)] = id;
        }
        if (dist.count(next)) continue;
        dist[next] = dist[b] + 1;
        if (next == to) return dist[next];
        q.push_back(next);
      }
    }
  }
  return -1;
}

inline std::string board_string(const visgym::SlidingState::Board& b) {
  std::string s;
  for (auto v : b) s += v < 0 ? '.' : char('0' + v);
  return s;
}

// ---------------------------------------------------------------------------
// Patch grid
// ---------------------------------------------------------------------------

struct ParsedPatch {
  std::vector<std::string> grid;                                    // digits and '.'
  std::map<int, std::vector<std::pair<int, int>>> parked_shapes;    // offsets from '*'
};

inline ParsedPatch parse_patch_ascii(const std::string& frame) {
  ParsedPatch out;
  std::vector<std::string> lines;
  std::string cur;
  for (char ch : frame) {
    if (ch == '\n') {
      lines.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  lines.push_back(cur);
  std::size_t i = 2;  // header + divider
  for (; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    auto bar = line.find('|');
    if (bar == std::string::npos) break;
    std::string row;
    for (std::size_t c = bar + 2; c < line.size(); c += 3) row += line[c];
    out.grid.push_back(row);
  }
  // Parked sections: "Patch N:" followed by shape rows indented two spaces.
  for (; i < lines.size(); ++i) {
    if (lines[i].rfind("Patch ", 0) != 0) continue;
    int id = std::stoi(lines[i].substr(6));
    std::vector<std::string> box;
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      const std::string& l = lines[j];
      bool blank = l.find_first_not_of(' ') == std::string::npos;
      if (blank || l.rfind("Patch ", 0) == 0) break;
      box.push_back(l.substr(2));
    }
    std::pair<int, int> anchor{-1, -1};
    std::vector<std::pair<int, int>> cells;
    for (int r = 0; r < int(box.size()); ++r)
      for (int c = 0; c < int(box[std::size_t(r)].size()); ++c) {
        char ch = box[std::size_t(r)][std::size_t(c)];
        if (ch == '*') anchor = {r, c};
        if (ch == '*' || ch == char('0' + id)) cells.push_back({r, c});
      }
    for (auto& [r, c] : cells) {
      r -= anchor.first;
      c -= anchor.second;
    }
    out.parked_shapes[id] = cells;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Matchstick equation
// ---------------------------------------------------------------------------

/// Reads stick occupancy back from the rendered frame, given the per-position
/// glyph classes (immutable episode structure).
inline std::vector<std::uint8_t> parse_equation_ascii(const visgym::CharGrid& grid,
                                                      const std::vector<visgym::GlyphClass>& layout) {
  using visgym::GlyphClass;
  std::vector<std::uint8_t> occ(layout.size(), 0);
  for (int p = 0; p < int(layout.size()); ++p) {
    int base = p * 6;
    auto at = [&](int r, int c) { return grid.rows[std::size_t(r)][std::size_t(base + c)]; };
    switch (layout[std::size_t(p)]) {
      case GlyphClass::digit: {
        if (at(0, 2) == '-') occ[std::size_t(p)] |= 0x01;
        if (at(1, 4) == '|') occ[std::size_t(p)] |= 0x02;
        if (at(4, 4) == '|') occ[std::size_t(p)] |= 0x04;
        if (at(5, 2) == '-') occ[std::size_t(p)] |= 0x08;
        if (at(4, 0) == '|') occ[std::size_t(p)] |= 0x10;
        if (at(1, 0) == '|') occ[std::size_t(p)] |= 0x20;
        if (at(2, 2) == '-') occ[std::size_t(p)] |= 0x40;
        break;
      }
      case GlyphClass::op: {
        if (at(2, 2) == '-') occ[std::size_t(p)] |= 0x01;
        if (at(1, 2) == '|') occ[std::size_t(p)] |= 0x02;
        if (at(3, 3) == '\\') occ[std::size_t(p)] |= 0x04;
        if (at(3, 1) == '/') occ[std::size_t(p)] |= 0x08;
        break;
      }
      case GlyphClass::relation: {
        if (at(2, 2) == '-') occ[std::size_t(p)] |= 0x01;
        if (at(3, 2) == '-') occ[std::size_t(p)] |= 0x02;
        break;
      }
    }
  }
  return occ;
}

/// True relocation-graph BFS (depth-limited) returning the fewest moves to a
/// valid equation; the production solver uses target enumeration instead.
inline int equation_bfs_min_moves(const visgym::EquationState& start, int max_depth) {
  using visgym::EquationState;
  if (visgym::equation_valid(start)) return 0;
  std::set<std::vector<std::uint8_t>> seen{start.occupancy};
  std::deque<std::pair<std::vector<std::uint8_t>, int>> q{{start.occupancy, 0}};
  while (!q.empty()) {
    auto [occ, depth] = q.front();
    q.pop_front();
    if (depth >= max_depth) continue;
    for (int i = 0; i < int(occ.size()); ++i) {
      for (int s = 0; s < visgym::glyph_slot_count(start.layout[std::size_t(i)]); ++s) {
        if (!(occ[std::size_t(i)] & (1u << s))) continue;
        for (int j = 0; j < int(occ.size()); ++j) {
          for (int t = 0; t < visgym::glyph_slot_count(start.layout[std::size_t(j)]); ++t) {
            if (occ[std::size_t(j)] & (1u << t)) continue;
            if (i == j && s == t) continue;
            auto next = occ;
            next[std::size_t(i)] &= std::uint8_t(~(1u << s));
            next[std::size_t(j)] |= std::uint8_t(1u << t);
            if (seen.count(next)) continue;
            seen.insert(next);
            EquationState probe = start;
            probe.occupancy = next;
            if (visgym::equation_valid(probe)) return depth + 1;
            q.push_back({next, depth + 1});
          }
        }
      }
    }
  }
  return -1;
}

}  // namespace oracle
