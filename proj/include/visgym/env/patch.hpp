#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "visgym/core.hpp"
#include "visgym/env/maze.hpp"  // direction deltas
#include "visgym/render.hpp"
#include "visgym/rng.hpp"

namespace visgym {

/// Exact partition of an R x C grid into np connected polyominoes. Patches
/// are addressed by their anchor: topmost, then leftmost cell.
struct PatchState {
  int rows = 0, cols = 0, np = 0;
  // Per patch: cell offsets relative to the anchor, sorted row-major;
  // offsets[0] is always (0, 0).
  std::vector<std::vector<std::pair<int, int>>> shapes;
  std::vector<std::optional<std::pair<int, int>>> placed;  // anchor or parked
  std::vector<std::pair<int, int>> gen_anchor;             // generating placement

  bool in_bounds(int r, int c) const { return r >= 0 && c >= 0 && r < rows && c < cols; }
};

namespace detail {

inline std::vector<std::int8_t> patch_occupancy(const PatchState& st) {
  std::vector<std::int8_t> occ(std::size_t(st.rows) * st.cols, -1);
  for (int p = 0; p < st.np; ++p) {
    if (!st.placed[std::size_t(p)]) continue;
    auto [ar, ac] = *st.placed[std::size_t(p)];
    for (auto [dr, dc] : st.shapes[std::size_t(p)]) occ[std::size_t(ar + dr) * st.cols + (ac + dc)] = std::int8_t(p);
  }
  return occ;
}

}  // namespace detail

/// Partition by seeded multi-source random accretion; patch 0 starts placed,
/// the rest parked.
inline PatchState patch_generate(int rows, int cols, int np, std::uint64_t seed) {
  if (np < 2 || np > rows * cols || np > 10)
    throw ConfigError("parameter out of range: np must be in [2, min(grid cells, 10)]");
  PatchState st;
  st.rows = rows;
  st.cols = cols;
  st.np = np;
  Rng rng = Rng::derive(seed, "patch.gen");
  std::vector<std::int8_t> owner(std::size_t(rows) * cols, -1);
  // np distinct seed cells.
  std::vector<int> cells(std::size_t(rows) * cols);
  for (int i = 0; i < rows * cols; ++i) cells[std::size_t(i)] = i;
  rng.shuffle(cells);
  for (int p = 0; p < np; ++p) owner[std::size_t(cells[std::size_t(p)])] = std::int8_t(p);
  int assigned = np;
  while (assigned < rows * cols) {
    // Random unassigned cell adjacent to a region, random neighboring owner.
    std::vector<std::pair<int, int>> frontier;  // (cell, owner)
    for (int i = 0; i < rows * cols; ++i) {
      if (owner[std::size_t(i)] >= 0) continue;
      for (int d = 0; d < 4; ++d) {
        int r = i / cols + kDirDr[d], c = i % cols + kDirDc[d];
        if (!st.in_bounds(r, c)) continue;
        if (owner[std::size_t(r) * cols + c] >= 0) frontier.push_back({i, owner[std::size_t(r) * cols + c]});
      }
    }
    auto [cell, p] = frontier[rng.below(frontier.size())];
    owner[std::size_t(cell)] = std::int8_t(p);
    ++assigned;
  }
  st.shapes.assign(std::size_t(np), {});
  st.gen_anchor.assign(std::size_t(np), {0, 0});
  for (int p = 0; p < np; ++p) {
    std::vector<std::pair<int, int>> abs_cells;
    for (int i = 0; i < rows * cols; ++i)
      if (owner[std::size_t(i)] == p) abs_cells.push_back({i / cols, i % cols});
    std::sort(abs_cells.begin(), abs_cells.end());  // row-major; first is the anchor
    auto anchor = abs_cells.front();
    st.gen_anchor[std::size_t(p)] = anchor;
    for (auto [r, c] : abs_cells) st.shapes[std::size_t(p)].push_back({r - anchor.first, c - anchor.second});
  }
  st.placed.assign(std::size_t(np), std::nullopt);
  st.placed[0] = st.gen_anchor[0];
  return st;
}

/// place(p, r, c) anchors a parked patch; remove(p) parks a placed one.
inline std::string patch_apply(PatchState& st, const ActionCall& call) {
  int p = int(std::get<std::int64_t>(call.payload[0]));
  if (call.name == "remove") {
    if (!st.placed[std::size_t(p)]) return feedback::kPatchNotOnGrid;
    st.placed[std::size_t(p)] = std::nullopt;
    return feedback::kExecuted;
  }
  int r = int(std::get<std::int64_t>(call.payload[1]));
  int c = int(std::get<std::int64_t>(call.payload[2]));
  if (st.placed[std::size_t(p)]) return "patch already on grid";
  auto occ = detail::patch_occupancy(st);
  for (auto [dr, dc] : st.shapes[std::size_t(p)]) {
    int rr = r + dr, cc = c + dc;
    if (!st.in_bounds(rr, cc) || occ[std::size_t(rr) * st.cols + cc] >= 0) return feedback::kCannotPlace;
  }
  st.placed[std::size_t(p)] = {{r, c}};
  return feedback::kExecuted;
}

/// Every grid cell covered; any exact tiling counts.
inline bool patch_success(const PatchState& st) {
  auto occ = detail::patch_occupancy(st);
  for (auto v : occ)
    if (v < 0) return false;
  return true;
}

/// Grid with ids and '.', then the parked-patch listing with '*' anchors.
inline CharGrid patch_ascii(const PatchState& st, bool solved_view = false) {
  PatchState view = st;
  if (solved_view)
    for (int p = 0; p < st.np; ++p) view.placed[std::size_t(p)] = st.gen_anchor[std::size_t(p)];
  auto occ = detail::patch_occupancy(view);
  std::vector<std::string> rows;
  std::string header = "  ";
  for (int c = 0; c < st.cols; ++c) header += " " + std::to_string(c) + " ";
  rows.push_back(header);
  rows.push_back("  " + std::string(std::size_t(st.cols) * 3, '-'));
  for (int r = 0; r < st.rows; ++r) {
    std::string line = std::to_string(r) + " |";
    for (int c = 0; c < st.cols; ++c) {
      auto v = occ[std::size_t(r) * st.cols + c];
      line += " ";
      line += v < 0 ? '.' : char('0' + v);
      line += " ";
    }
    rows.push_back(line);
  }
  rows.push_back("");
  rows.push_back("--- Parked Patches ---");
  for (int p = 0; p < st.np; ++p) {
    if (view.placed[std::size_t(p)]) continue;
    rows.push_back("");
    rows.push_back("Patch " + std::to_string(p) + ":");
    const auto& shape = st.shapes[std::size_t(p)];
    int min_dc = 0, max_dr = 0, max_dc = 0;
    for (auto [dr, dc] : shape) {
      min_dc = std::min(min_dc, dc);
      max_dr = std::max(max_dr, dr);
      max_dc = std::max(max_dc, dc);
    }
    std::vector<std::string> box(std::size_t(max_dr) + 1, std::string(std::size_t(max_dc - min_dc) + 1, ' '));
    for (auto [dr, dc] : shape) box[std::size_t(dr)][std::size_t(dc - min_dc)] = char('0' + p);
    box[0][std::size_t(0 - min_dc)] = '*';  // anchor
    for (auto& line : box) rows.push_back("  " + line);
  }
  return CharGrid::from_lines(std::move(rows));
}

inline Canvas patch_render(const PatchState& st, bool solved_view = false) {
  PatchState view = st;
  if (solved_view)
    for (int p = 0; p < st.np; ++p) view.placed[std::size_t(p)] = st.gen_anchor[std::size_t(p)];
  auto occ = detail::patch_occupancy(view);
  const int px = 32, mini = 16;
  const int strip_h = 14 + mini * st.rows;
  const int W = std::max(st.cols * px, st.np * (mini * st.cols + 10));
  const int H = st.rows * px + 10 + strip_h;
  Canvas canvas(W, H, Color{30, 32, 38});
  for (int r = 0; r < st.rows; ++r) {
    for (int c = 0; c < st.cols; ++c) {
      auto v = occ[std::size_t(r) * st.cols + c];
      Color col = v < 0 ? Color{226, 228, 232} : kBlockPalette[v];
      fill_rect(canvas, c * px + 1, r * px + 1, px - 2, px - 2, col);
    }
  }
  for (int p = 0; p < st.np; ++p) {  // id label on each placed patch's anchor
    if (!view.placed[std::size_t(p)]) continue;
    auto [ar, ac] = *view.placed[std::size_t(p)];
    draw_text(canvas, ac * px + px / 2 - 5, ar * px + px / 2 - 7, std::string(1, char('0' + p)),
              Color{20, 20, 24}, 2);
  }
  int x = 2, y0 = st.rows * px + 10;
  draw_text(canvas, 2, y0 - 9, "parked:", Color{210, 212, 218});
  for (int p = 0; p < st.np; ++p) {
    if (view.placed[std::size_t(p)]) continue;
    const auto& shape = st.shapes[std::size_t(p)];
    int min_dc = 0;
    for (auto [dr, dc] : shape) min_dc = std::min(min_dc, dc);
    for (auto [dr, dc] : shape)
      fill_rect(canvas, x + (dc - min_dc) * mini, y0 + 4 + dr * mini, mini - 1, mini - 1, kBlockPalette[p]);
    draw_text(canvas, x + (0 - min_dc) * mini + 3, y0 + 4 + 3, std::string(1, char('0' + p)),
              Color{20, 20, 24});
    x += mini * st.cols + 10;
  }
  return canvas;
}

inline std::string patch_digest(const PatchState& st) {
  std::string out = "patch:" + std::to_string(st.rows) + "x" + std::to_string(st.cols) + ":";
  for (int p = 0; p < st.np; ++p) {
    out += "s";
    for (auto [dr, dc] : st.shapes[std::size_t(p)])
      out += std::to_string(dr) + "," + std::to_string(dc) + ";";
    if (st.placed[std::size_t(p)])
      out += "@" + std::to_string(st.placed[std::size_t(p)]->first) + "," +
             std::to_string(st.placed[std::size_t(p)]->second);
    else
      out += "@parked";
  }
  return out;
}

}  // namespace visgym
