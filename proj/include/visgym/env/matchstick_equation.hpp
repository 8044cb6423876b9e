#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "visgym/core.hpp"
#include "visgym/render.hpp"
#include "visgym/rng.hpp"

namespace visgym {

/// Glyph classes and their stick-slot spaces.
///   digit:    7 segments, indices 0..6 (0 top, 1 top-right, 2 bottom-right,
///             3 bottom, 4 bottom-left, 5 top-left, 6 middle)
///   op:       0 mid-horizontal, 1 vertical, 2 diagonal '\', 3 diagonal '/'
///   relation: 0 top bar, 1 bottom bar
enum class GlyphClass : std::uint8_t { digit, op, relation };

inline int glyph_slot_count(GlyphClass g) {
  switch (g) {
    case GlyphClass::digit: return 7;
    case GlyphClass::op: return 4;
    default: return 2;
  }
}

inline constexpr std::uint8_t kDigitSegments[10] = {
    0x3F, 0x06, 0x5B, 0x4F, 0x66, 0x6D, 0x7D, 0x07, 0x7F, 0x6F,
};
inline constexpr std::uint8_t kOpMinus = 0b0001, kOpPlus = 0b0011, kOpTimes = 0b1100;
inline constexpr std::uint8_t kRelEquals = 0b11;

/// Seven-segment stick arithmetic: positions hold occupancy bitmasks; move
/// relocates single sticks; undo pops the move stack.
struct EquationState {
  std::vector<GlyphClass> layout;
  std::vector<std::uint8_t> occupancy;
  std::vector<std::uint8_t> solved;  // the original true equation
  std::vector<std::array<int, 4>> move_stack;
  int bm = 1;

  int positions() const { return int(layout.size()); }
  int stick_count() const {
    int n = 0;
    for (auto o : occupancy) n += __builtin_popcount(o);
    return n;
  }
};

namespace detail {

inline std::optional<int> decode_digit(std::uint8_t occ) {
  for (int d = 0; d < 10; ++d)
    if (kDigitSegments[d] == occ) return d;
  return std::nullopt;
}

inline std::optional<char> decode_op(std::uint8_t occ) {
  if (occ == kOpMinus) return '-';
  if (occ == kOpPlus) return '+';
  if (occ == kOpTimes) return 'x';
  return std::nullopt;
}

struct EquationShape {
  int da = 0, db = 0, dc = 0;  // digit counts of A, B, C
  int op_pos = 0, rel_pos = 0;
};

inline EquationShape equation_shape(const std::vector<GlyphClass>& layout) {
  EquationShape s;
  int section = 0;
  for (int i = 0; i < int(layout.size()); ++i) {
    if (layout[std::size_t(i)] == GlyphClass::op) {
      s.op_pos = i;
      section = 1;
    } else if (layout[std::size_t(i)] == GlyphClass::relation) {
      s.rel_pos = i;
      section = 2;
    } else {
      (section == 0 ? s.da : section == 1 ? s.db : s.dc)++;
    }
  }
  return s;
}

inline std::vector<std::uint8_t> equation_occupancy(const std::vector<GlyphClass>& layout, long a, char op,
                                                    long b, long c) {
  EquationShape s = equation_shape(layout);
  std::vector<std::uint8_t> occ(layout.size(), 0);
  auto put_number = [&](long v, int first, int count) {
    for (int i = count - 1; i >= 0; --i) {
      occ[std::size_t(first + i)] = kDigitSegments[v % 10];
      v /= 10;
    }
  };
  put_number(a, 0, s.da);
  occ[std::size_t(s.op_pos)] = op == '+' ? kOpPlus : op == '-' ? kOpMinus : kOpTimes;
  put_number(b, s.op_pos + 1, s.db);
  occ[std::size_t(s.rel_pos)] = kRelEquals;
  put_number(c, s.rel_pos + 1, s.dc);
  return occ;
}

/// Sticks that must relocate to turn `from` into `to` (equal totals assumed).
inline int stick_distance(const std::vector<std::uint8_t>& from, const std::vector<std::uint8_t>& to) {
  int extra = 0;
  for (std::size_t i = 0; i < from.size(); ++i) extra += __builtin_popcount(from[i] & ~to[i]);
  return extra;
}

/// Enumerate every true equation renderable on this layout (leading zeros
/// allowed) and keep those with the same stick total.
inline std::vector<std::vector<std::uint8_t>> valid_targets(const EquationState& st) {
  EquationShape s = equation_shape(st.layout);
  long amax = 1;
  for (int i = 0; i < s.da; ++i) amax *= 10;
  long bmax = 1;
  for (int i = 0; i < s.db; ++i) bmax *= 10;
  long cmax = 1;
  for (int i = 0; i < s.dc; ++i) cmax *= 10;
  int total = st.stick_count();
  std::vector<std::vector<std::uint8_t>> out;
  for (char op : {'+', '-', 'x'}) {
    for (long a = 0; a < amax; ++a) {
      for (long b = 0; b < bmax; ++b) {
        long c = op == '+' ? a + b : op == '-' ? a - b : a * b;
        if (c < 0 || c >= cmax) continue;
        auto occ = equation_occupancy(st.layout, a, op, b, c);
        int sticks = 0;
        for (auto o : occ) sticks += __builtin_popcount(o);
        if (sticks == total) out.push_back(std::move(occ));
      }
    }
  }
  return out;
}

}  // namespace detail

/// All positions decode and the arithmetic statement holds.
inline bool equation_valid(const EquationState& st) {
  using namespace detail;
  long numbers[3] = {0, 0, 0};
  int section = 0;
  bool any_digit[3] = {false, false, false};
  char op = 0;
  for (int i = 0; i < st.positions(); ++i) {
    std::uint8_t occ = st.occupancy[std::size_t(i)];
    switch (st.layout[std::size_t(i)]) {
      case GlyphClass::digit: {
        auto d = decode_digit(occ);
        if (!d) return false;
        numbers[section] = numbers[section] * 10 + *d;
        any_digit[section] = true;
        break;
      }
      case GlyphClass::op: {
        auto o = decode_op(occ);
        if (!o) return false;
        op = *o;
        section = 1;
        break;
      }
      case GlyphClass::relation: {
        if (occ != kRelEquals) return false;
        section = 2;
        break;
      }
    }
  }
  if (!any_digit[0] || !any_digit[1] || !any_digit[2] || op == 0) return false;
  long lhs = op == '+' ? numbers[0] + numbers[1] : op == '-' ? numbers[0] - numbers[1]
                                                             : numbers[0] * numbers[1];
  return lhs == numbers[2];
}

/// Minimal relocations from the current occupancy to the nearest true
/// equation on the same layout; nullopt when none shares the stick total.
inline std::optional<int> equation_min_solution_distance(const EquationState& st) {
  auto targets = detail::valid_targets(st);
  std::optional<int> best;
  for (const auto& t : targets) {
    int d = detail::stick_distance(st.occupancy, t);
    if (!best || d < *best) best = d;
  }
  return best;
}

/// Sample a true `A op B = C`, then apply bm random single-stick relocations;
/// resample until the corrupted state is invalid yet fixable in <= bm moves.
inline EquationState equation_generate(int bm, std::uint64_t seed) {
  if (bm < 1 || bm > 2) throw ConfigError("parameter out of range: bm must be 1 or 2");
  for (std::uint64_t attempt = 0;; ++attempt) {
    Rng rng = Rng::derive(seed, "equation.gen", attempt);
    const char ops[3] = {'+', '-', 'x'};
    char op = ops[rng.below(3)];
    long a = rng.range_int(0, 99), b = rng.range_int(0, 99);
    if (op == '-' && b > a) std::swap(a, b);
    long c = op == '+' ? a + b : op == '-' ? a - b : a * b;
    auto digit_count = [](long v) { return v < 10 ? 1 : v < 100 ? 2 : v < 1000 ? 3 : 4; };

    EquationState st;
    st.bm = bm;
    for (int i = 0; i < digit_count(a); ++i) st.layout.push_back(GlyphClass::digit);
    st.layout.push_back(GlyphClass::op);
    for (int i = 0; i < digit_count(b); ++i) st.layout.push_back(GlyphClass::digit);
    st.layout.push_back(GlyphClass::relation);
    for (int i = 0; i < digit_count(c); ++i) st.layout.push_back(GlyphClass::digit);
    st.solved = detail::equation_occupancy(st.layout, a, op, b, c);
    st.occupancy = st.solved;

    bool ok = true;
    for (int k = 0; k < bm && ok; ++k) {
      std::vector<std::array<int, 2>> occupied, empty;
      for (int i = 0; i < st.positions(); ++i) {
        for (int s = 0; s < glyph_slot_count(st.layout[std::size_t(i)]); ++s) {
          if (st.occupancy[std::size_t(i)] & (1u << s))
            occupied.push_back({i, s});
          else
            empty.push_back({i, s});
        }
      }
      if (occupied.empty() || empty.empty()) {
        ok = false;
        break;
      }
      auto src = occupied[rng.below(occupied.size())];
      auto dst = empty[rng.below(empty.size())];
      st.occupancy[std::size_t(src[0])] &= std::uint8_t(~(1u << src[1]));
      st.occupancy[std::size_t(dst[0])] |= std::uint8_t(1u << dst[1]);
    }
    if (!ok || equation_valid(st)) continue;
    auto dist = equation_min_solution_distance(st);
    if (!dist || *dist > bm || *dist < 1) continue;
    st.move_stack.clear();
    return st;
  }
}

/// move([i, s, j, t]): relocate the stick at (i, s) to the empty slot (j, t).
/// undo() pops the move stack.
inline std::string equation_apply(EquationState& st, const ActionCall& call) {
  if (call.name == "undo") {
    if (st.move_stack.empty()) return feedback::kNothingToUndo;
    auto [i, s, j, t] = st.move_stack.back();
    st.move_stack.pop_back();
    st.occupancy[std::size_t(j)] &= std::uint8_t(~(1u << t));
    st.occupancy[std::size_t(i)] |= std::uint8_t(1u << s);
    return feedback::kExecuted;
  }
  const auto& items = std::get<std::vector<Scalar>>(call.payload[0]);
  int i = int(std::get<std::int64_t>(items[0])), s = int(std::get<std::int64_t>(items[1]));
  int j = int(std::get<std::int64_t>(items[2])), t = int(std::get<std::int64_t>(items[3]));
  if (s >= glyph_slot_count(st.layout[std::size_t(i)]) || !(st.occupancy[std::size_t(i)] & (1u << s)))
    return feedback::kNoStickAtSource;
  if (t >= glyph_slot_count(st.layout[std::size_t(j)]) || (st.occupancy[std::size_t(j)] & (1u << t)))
    return feedback::kDestinationOccupied;
  st.occupancy[std::size_t(i)] &= std::uint8_t(~(1u << s));
  st.occupancy[std::size_t(j)] |= std::uint8_t(1u << t);
  st.move_stack.push_back({i, s, j, t});
  return feedback::kExecuted;
}

// ---------------------------------------------------------------------------
// Views. Each glyph occupies a 5-wide cell with a 1-column gap; six glyph
// rows plus a footer row of position indices.
// ---------------------------------------------------------------------------

inline CharGrid equation_ascii_of(const std::vector<GlyphClass>& layout,
                                  const std::vector<std::uint8_t>& occupancy) {
  int n = int(layout.size());
  std::vector<std::string> rows(7, std::string(std::size_t(n) * 6, ' '));
  auto bar = [&](int row, int base) { rows[std::size_t(row)].replace(std::size_t(base) + 1, 3, "---"); };
  for (int p = 0; p < n; ++p) {
    int base = p * 6;
    std::uint8_t occ = occupancy[std::size_t(p)];
    switch (layout[std::size_t(p)]) {
      case GlyphClass::digit:
        if (occ & 0x01) bar(0, base);                                   // top
        if (occ & 0x20) rows[1][std::size_t(base)] = rows[2][std::size_t(base)] = '|';      // top-left
        if (occ & 0x02) rows[1][std::size_t(base) + 4] = rows[2][std::size_t(base) + 4] = '|';  // top-right
        if (occ & 0x40) bar(2, base);                                   // middle
        if (occ & 0x10) rows[3][std::size_t(base)] = rows[4][std::size_t(base)] = '|';      // bottom-left
        if (occ & 0x04) rows[3][std::size_t(base) + 4] = rows[4][std::size_t(base) + 4] = '|';  // bottom-right
        if (occ & 0x08) bar(5, base);                                   // bottom
        break;
      case GlyphClass::op:
        if (occ & 0x01) bar(2, base);  // mid bar
        if (occ & 0x02) rows[1][std::size_t(base) + 2] = rows[3][std::size_t(base) + 2] = '|';
        if (occ & 0x04) {  // '\'
          rows[2][std::size_t(base) + 1] = '\\';
          rows[3][std::size_t(base) + 3] = '\\';
        }
        if (occ & 0x08) {  // '/'
          rows[2][std::size_t(base) + 3] = '/';
          rows[3][std::size_t(base) + 1] = '/';
        }
        break;
      case GlyphClass::relation:
        if (occ & 0x01) bar(2, base);
        if (occ & 0x02) bar(3, base);
        break;
    }
    std::string idx = std::to_string(p);
    rows[6].replace(std::size_t(base) + (idx.size() == 1 ? 2 : 1), idx.size(), idx);
  }
  return CharGrid{std::move(rows)};
}

inline CharGrid equation_ascii(const EquationState& st, bool solved_view = false) {
  return equation_ascii_of(st.layout, solved_view ? st.solved : st.occupancy);
}

/// Raster view: sticks as rounded bars on a fixed-height strip.
inline Canvas equation_render_of(const std::vector<GlyphClass>& layout,
                                 const std::vector<std::uint8_t>& occupancy) {
  const int cell_w = 40, cell_h = 72, gap = 10, pad = 12;
  int n = int(layout.size());
  Canvas canvas(pad * 2 + n * cell_w + (n - 1) * gap, cell_h + pad * 2 + 14, Color{24, 26, 32});
  const Color stick{235, 196, 88}, index_col{160, 164, 176};
  auto hbar = [&](int x, int y, int w) { fill_rect(canvas, x, y - 2, w, 5, stick); };
  auto vbar = [&](int x, int y, int h) { fill_rect(canvas, x - 2, y, 5, h, stick); };
  for (int p = 0; p < n; ++p) {
    int x0 = pad + p * (cell_w + gap), y0 = pad;
    int xm = x0 + cell_w / 2, ym = y0 + cell_h / 2;
    std::uint8_t occ = occupancy[std::size_t(p)];
    switch (layout[std::size_t(p)]) {
      case GlyphClass::digit:
        if (occ & 0x01) hbar(x0 + 4, y0, cell_w - 8);
        if (occ & 0x02) vbar(x0 + cell_w, y0 + 4, cell_h / 2 - 8);
        if (occ & 0x04) vbar(x0 + cell_w, ym + 4, cell_h / 2 - 8);
        if (occ & 0x08) hbar(x0 + 4, y0 + cell_h, cell_w - 8);
        if (occ & 0x10) vbar(x0, ym + 4, cell_h / 2 - 8);
        if (occ & 0x20) vbar(x0, y0 + 4, cell_h / 2 - 8);
        if (occ & 0x40) hbar(x0 + 4, ym, cell_w - 8);
        break;
      case GlyphClass::op:
        if (occ & 0x01) hbar(x0 + 4, ym, cell_w - 8);
        if (occ & 0x02) vbar(xm, ym - (cell_w - 8) / 2, cell_w - 8);
        if (occ & 0x04) draw_line(canvas, x0 + 6, ym - (cell_w - 12) / 2, x0 + cell_w - 6, ym + (cell_w - 12) / 2, stick);
        if (occ & 0x08) draw_line(canvas, x0 + 6, ym + (cell_w - 12) / 2, x0 + cell_w - 6, ym - (cell_w - 12) / 2, stick);
        break;
      case GlyphClass::relation:
        if (occ & 0x01) hbar(x0 + 4, ym - 7, cell_w - 8);
        if (occ & 0x02) hbar(x0 + 4, ym + 7, cell_w - 8);
        break;
    }
    std::string idx = std::to_string(p);
    draw_text(canvas, xm - text_width(idx) / 2, y0 + cell_h + pad, idx, index_col);
  }
  return canvas;
}

inline Canvas equation_render(const EquationState& st, bool solved_view = false) {
  return equation_render_of(st.layout, solved_view ? st.solved : st.occupancy);
}

inline std::string equation_digest(const EquationState& st) {
  std::string out = "equation:";
  for (auto g : st.layout) out += char('0' + int(g));
  out += ":";
  for (auto o : st.occupancy) out += std::to_string(int(o)) + ",";
  out += ":";
  for (auto o : st.solved) out += std::to_string(int(o)) + ",";
  return out;
}

}  // namespace visgym
