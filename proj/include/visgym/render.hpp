#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "visgym/font5x7.hpp"

namespace visgym {

struct Color {
  std::uint8_t r = 0, g = 0, b = 0;
  bool operator==(const Color&) const = default;
};

/// 8-bit RGB raster, row-major. All drawing is clipped, nearest-neighbor and
/// antialiasing-free so identical inputs produce identical bytes.
class Canvas {
 public:
  Canvas() = default;
  Canvas(int w, int h, Color fill = {0, 0, 0}) : w_(w), h_(h), px_(std::size_t(w) * h * 3) {
    for (std::size_t i = 0; i < px_.size(); i += 3) {
      px_[i] = fill.r;
      px_[i + 1] = fill.g;
      px_[i + 2] = fill.b;
    }
  }

  int width() const { return w_; }
  int height() const { return h_; }
  bool empty() const { return px_.empty(); }

  void set(int x, int y, Color c) {
    if (x < 0 || y < 0 || x >= w_ || y >= h_) return;
    std::size_t i = (std::size_t(y) * w_ + x) * 3;
    px_[i] = c.r;
    px_[i + 1] = c.g;
    px_[i + 2] = c.b;
  }

  Color get(int x, int y) const {
    std::size_t i = (std::size_t(y) * w_ + x) * 3;
    return {px_[i], px_[i + 1], px_[i + 2]};
  }

  std::span<const std::uint8_t> bytes() const { return px_; }
  std::vector<std::uint8_t>& raw() { return px_; }
  const std::vector<std::uint8_t>& raw() const { return px_; }

  bool operator==(const Canvas&) const = default;

 private:
  int w_ = 0, h_ = 0;
  std::vector<std::uint8_t> px_;
};

inline void fill_rect(Canvas& c, int x, int y, int w, int h, Color col) {
  int x0 = std::max(0, x), y0 = std::max(0, y);
  int x1 = std::min(c.width(), x + w), y1 = std::min(c.height(), y + h);
  for (int yy = y0; yy < y1; ++yy)
    for (int xx = x0; xx < x1; ++xx) c.set(xx, yy, col);
}

/// 1 px Bresenham segment.
inline void draw_line(Canvas& c, int x0, int y0, int x1, int y1, Color col) {
  int dx = std::abs(x1 - x0), sx = x0 < x1 ? 1 : -1;
  int dy = -std::abs(y1 - y0), sy = y0 < y1 ? 1 : -1;
  int err = dx + dy;
  while (true) {
    c.set(x0, y0, col);
    if (x0 == x1 && y0 == y1) break;
    int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      x0 += sx;
    }
    if (e2 <= dx) {
      err += dx;
      y0 += sy;
    }
  }
}

struct PointF {
  double x = 0, y = 0;
};

/// Scanline fill of a convex polygon. Pixel centers at +0.5.
inline void fill_polygon(Canvas& c, std::span<const PointF> pts, Color col) {
  if (pts.size() < 3) return;
  double miny = pts[0].y, maxy = pts[0].y;
  for (const auto& p : pts) {
    miny = std::min(miny, p.y);
    maxy = std::max(maxy, p.y);
  }
  int y0 = std::max(0, int(std::floor(miny)));
  int y1 = std::min(c.height() - 1, int(std::ceil(maxy)));
  for (int y = y0; y <= y1; ++y) {
    double cy = y + 0.5;
    double xmin = 1e18, xmax = -1e18;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const PointF& a = pts[i];
      const PointF& b = pts[(i + 1) % pts.size()];
      if ((a.y <= cy && b.y > cy) || (b.y <= cy && a.y > cy)) {
        double t = (cy - a.y) / (b.y - a.y);
        double x = a.x + t * (b.x - a.x);
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
      }
    }
    if (xmin > xmax) continue;
    int xa = std::max(0, int(std::floor(xmin + 0.5)));
    int xb = std::min(c.width() - 1, int(std::ceil(xmax - 0.5)));
    for (int x = xa; x <= xb; ++x) c.set(x, y, col);
  }
}

inline void fill_circle(Canvas& c, int cx, int cy, int radius, Color col) {
  for (int y = -radius; y <= radius; ++y)
    for (int x = -radius; x <= radius; ++x)
      if (x * x + y * y <= radius * radius) c.set(cx + x, cy + y, col);
}

inline void draw_circle(Canvas& c, int cx, int cy, int radius, Color col) {
  int x = radius, y = 0, err = 1 - radius;
  while (x >= y) {
    c.set(cx + x, cy + y, col); c.set(cx + y, cy + x, col);
    c.set(cx - x, cy + y, col); c.set(cx - y, cy + x, col);
    c.set(cx + x, cy - y, col); c.set(cx + y, cy - x, col);
    c.set(cx - x, cy - y, col); c.set(cx - y, cy - x, col);
    ++y;
    if (err < 0) {
      err += 2 * y + 1;
    } else {
      --x;
      err += 2 * (y - x) + 1;
    }
  }
}

/// Embedded 5x7 font, integer scale, 1-column spacing.
inline void draw_text(Canvas& c, int x, int y, std::string_view text, Color col, int scale = 1) {
  for (char ch : text) {
    if (ch < 0x20 || ch > 0x7E) ch = '?';
    const std::uint8_t* glyph = kFont5x7[ch - 0x20];
    for (int gx = 0; gx < 5; ++gx) {
      std::uint8_t bits = glyph[gx];
      for (int gy = 0; gy < 7; ++gy) {
        if (bits & (1u << gy)) fill_rect(c, x + gx * scale, y + gy * scale, scale, scale, col);
      }
    }
    x += 6 * scale;
  }
}

inline int text_width(std::string_view text, int scale = 1) {
  return text.empty() ? 0 : int(text.size()) * 6 * scale - scale;
}

inline void blit(Canvas& dst, const Canvas& src, int x, int y) {
  for (int sy = 0; sy < src.height(); ++sy)
    for (int sx = 0; sx < src.width(); ++sx) dst.set(x + sx, y + sy, src.get(sx, sy));
}

inline Canvas scaled_nn(const Canvas& src, int w, int h) {
  Canvas out(w, h);
  for (int y = 0; y < h; ++y) {
    int sy = std::min(src.height() - 1, int((std::int64_t(y) * src.height()) / h));
    for (int x = 0; x < w; ++x) {
      int sx = std::min(src.width() - 1, int((std::int64_t(x) * src.width()) / w));
      out.set(x, y, src.get(sx, sy));
    }
  }
  return out;
}

/// Nearest-neighbor rotation about the canvas center, same output size,
/// uncovered pixels take `bg`. Quarter-turn angles map exactly so four 90
/// degree turns reproduce the source byte-for-byte.
inline Canvas rotated_nn(const Canvas& src, double degrees, Color bg = {0, 0, 0}) {
  int w = src.width(), h = src.height();
  Canvas out(w, h, bg);
  double norm = std::fmod(degrees, 360.0);
  if (norm < 0) norm += 360.0;
  // Inverse rotation; quarter turns use exact coefficients so repeated 90
  // degree turns are lossless.
  double cs, sn;
  int quarter = int(std::lround(norm / 90.0)) % 4;
  if (std::abs(norm - quarter * 90.0) < 1e-9) {
    static constexpr double qc[4] = {1, 0, -1, 0};
    static constexpr double qs[4] = {0, -1, 0, 1};
    cs = qc[quarter];
    sn = qs[quarter];
  } else {
    double rad = -norm * 3.14159265358979323846 / 180.0;
    cs = std::cos(rad);
    sn = std::sin(rad);
  }
  double cx = (w - 1) / 2.0, cy = (h - 1) / 2.0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double dx = x - cx, dy = y - cy;
      int sx = int(std::lround(cx + dx * cs - dy * sn));
      int sy = int(std::lround(cy + dx * sn + dy * cs));
      if (sx >= 0 && sy >= 0 && sx < w && sy < h) out.set(x, y, src.get(sx, sy));
    }
  }
  return out;
}

/// Distinct fills for up to ten labeled pieces (blocks, patches).
inline constexpr Color kBlockPalette[10] = {
    {230, 96, 82},  {86, 148, 236}, {108, 190, 96}, {238, 186, 72}, {164, 108, 220},
    {86, 196, 196}, {232, 130, 186}, {150, 170, 90}, {196, 120, 70}, {120, 130, 220},
};

inline constexpr int kPanelHeaderPx = 12;

/// Horizontal concatenation with a labeled header band. Heights must match.
inline Canvas compose_side_by_side(std::span<const Canvas> panels, std::span<const std::string> labels,
                                   int gap_px) {
  if (panels.empty()) throw std::invalid_argument("compose_side_by_side: no panels");
  int h = panels[0].height();
  int w = 0;
  for (std::size_t i = 0; i < panels.size(); ++i) {
    if (panels[i].height() != h) throw std::invalid_argument("compose_side_by_side: height mismatch");
    w += panels[i].width();
  }
  w += gap_px * int(panels.size() - 1);
  Canvas out(w, h + kPanelHeaderPx, Color{40, 40, 48});
  int x = 0;
  for (std::size_t i = 0; i < panels.size(); ++i) {
    if (i < labels.size()) draw_text(out, x + 2, 2, labels[i], Color{255, 255, 255});
    blit(out, panels[i], x, kPanelHeaderPx);
    x += panels[i].width() + gap_px;
  }
  return out;
}

inline Canvas compose_side_by_side(const Canvas& a, const Canvas& b, const std::string& la,
                                   const std::string& lb, int gap_px = 8) {
  const Canvas panels[] = {a, b};
  const std::string labels[] = {la, lb};
  return compose_side_by_side(std::span<const Canvas>(panels, 2), std::span<const std::string>(labels, 2),
                              gap_px);
}

// ---------------------------------------------------------------------------
// Text frames
// ---------------------------------------------------------------------------

/// Rectangular block of printable-ASCII rows.
struct CharGrid {
  std::vector<std::string> rows;

  int height() const { return int(rows.size()); }
  int width() const { return rows.empty() ? 0 : int(rows[0].size()); }
  char at(int r, int c) const { return rows[r][c]; }

  /// Pads rows with spaces to the longest row.
  static CharGrid from_lines(std::vector<std::string> lines) {
    std::size_t w = 0;
    for (const auto& l : lines) w = std::max(w, l.size());
    for (auto& l : lines) l.resize(w, ' ');
    return CharGrid{std::move(lines)};
  }
};

/// Newline-joined frame. The grid must be rectangular and non-empty.
inline std::string ascii_frame(const CharGrid& grid) {
  if (grid.rows.empty() || grid.rows[0].empty()) throw std::invalid_argument("ascii_frame: empty grid");
  std::size_t w = grid.rows[0].size();
  std::string out;
  for (std::size_t i = 0; i < grid.rows.size(); ++i) {
    if (grid.rows[i].size() != w) throw std::invalid_argument("ascii_frame: ragged grid");
    if (i) out += '\n';
    out += grid.rows[i];
  }
  return out;
}

}  // namespace visgym
