#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numeric>
#include <string>
#include <vector>

#include "visgym/core.hpp"
#include "visgym/image_io.hpp"
#include "visgym/render.hpp"
#include "visgym/rng.hpp"

namespace visgym {

inline constexpr int kWorkingRes = 448;

// ---------------------------------------------------------------------------
// HSV pixel transforms
// ---------------------------------------------------------------------------

struct Hsv {
  double h = 0, s = 0, v = 0;  // h in [0, 360), s and v in [0, 1]
};

inline Hsv rgb_to_hsv(Color c) {
  double r = c.r / 255.0, g = c.g / 255.0, b = c.b / 255.0;
  double mx = std::max({r, g, b}), mn = std::min({r, g, b}), d = mx - mn;
  Hsv out;
  out.v = mx;
  out.s = mx <= 0 ? 0 : d / mx;
  if (d <= 0) {
    out.h = 0;
  } else if (mx == r) {
    out.h = 60.0 * std::fmod((g - b) / d, 6.0);
  } else if (mx == g) {
    out.h = 60.0 * ((b - r) / d + 2.0);
  } else {
    out.h = 60.0 * ((r - g) / d + 4.0);
  }
  if (out.h < 0) out.h += 360.0;
  return out;
}

inline Color hsv_to_rgb(const Hsv& in) {
  double c = in.v * in.s;
  double hp = in.h / 60.0;
  double x = c * (1.0 - std::fabs(std::fmod(hp, 2.0) - 1.0));
  double r = 0, g = 0, b = 0;
  switch (int(hp) % 6) {
    case 0: r = c; g = x; break;
    case 1: r = x; g = c; break;
    case 2: g = c; b = x; break;
    case 3: g = x; b = c; break;
    case 4: r = x; b = c; break;
    default: r = c; b = x; break;
  }
  double m = in.v - c;
  auto to_byte = [](double v) { return std::uint8_t(std::clamp(std::lround(v * 255.0), 0l, 255l)); };
  return {to_byte(r + m), to_byte(g + m), to_byte(b + m)};
}

/// Hue rotation (degrees) plus saturation offset (percentage points, clamped
/// to the displayable range).
inline Canvas hsv_shift(const Canvas& src, double hue_deg, double sat_pp) {
  Canvas out(src.width(), src.height());
  for (int y = 0; y < src.height(); ++y) {
    for (int x = 0; x < src.width(); ++x) {
      Hsv hsv = rgb_to_hsv(src.get(x, y));
      hsv.h = normalize_angle_360(hsv.h + hue_deg);
      hsv.s = std::clamp(hsv.s + sat_pp / 100.0, 0.0, 1.0);
      out.set(x, y, hsv_to_rgb(hsv));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Assets
// ---------------------------------------------------------------------------

struct ImageAsset {
  std::string source;  // file path or "synthetic:<seed>"
  Canvas pixels;       // kWorkingRes x kWorkingRes
};

/// Deterministic 448x448 card: gradient background, colored shapes and large
/// digits; visually asymmetric under rotation and distinctive in every tile.
inline ImageAsset synth_test_card(std::uint64_t seed) {
  Rng rng = Rng::derive(seed, "testcard");
  Canvas c(kWorkingRes, kWorkingRes);
  int hue_base = int(rng.below(360));
  for (int y = 0; y < kWorkingRes; ++y) {
    for (int x = 0; x < kWorkingRes; ++x) {
      Hsv hsv;
      hsv.h = normalize_angle_360(hue_base + 70.0 * x / kWorkingRes + 25.0 * y / kWorkingRes);
      hsv.s = 0.35 + 0.25 * y / kWorkingRes;
      hsv.v = 0.55 + 0.35 * x / kWorkingRes;
      c.set(x, y, hsv_to_rgb(hsv));
    }
  }
  int shapes = 6 + int(rng.below(5));
  for (int i = 0; i < shapes; ++i) {
    Color col = hsv_to_rgb({double(rng.below(360)), 0.75, 0.95});
    int x = rng.range_int(20, kWorkingRes - 90), y = rng.range_int(20, kWorkingRes - 90);
    int w = rng.range_int(36, 90), h = rng.range_int(36, 90);
    switch (rng.below(3)) {
      case 0: fill_rect(c, x, y, w, h, col); break;
      case 1: fill_circle(c, x + w / 2, y + w / 2, w / 2, col); break;
      default: {
        PointF tri[3] = {{double(x), double(y + h)}, {double(x + w), double(y + h)},
                         {double(x + w / 2), double(y)}};
        fill_polygon(c, tri, col);
        break;
      }
    }
    std::string digit(1, char('0' + int(rng.below(10))));
    draw_text(c, x + 6, y + 6, digit, Color{20, 20, 24}, 4);
  }
  // A corner key makes rotational symmetry impossible.
  fill_rect(c, 4, 4, 26, 26, Color{250, 250, 250});
  fill_rect(c, 8, 8, 18, 18, Color{16, 16, 16});
  return {"synthetic:" + std::to_string(seed), std::move(c)};
}

/// Sorted image files (.png/.jpg/.jpeg) of a directory.
inline std::vector<std::filesystem::path> list_asset_files(const std::string& dir) {
  namespace fs = std::filesystem;
  std::vector<fs::path> files;
  if (dir.empty() || !fs::is_directory(dir)) return files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    auto ext = entry.path().extension().string();
    for (auto& ch : ext) ch = char(std::tolower(ch));
    if (ext == ".png" || ext == ".jpg" || ext == ".jpeg") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

/// Seeded pick from the asset directory, synthetic card when it is empty.
inline ImageAsset pick_asset(const std::string& dir, std::uint64_t seed) {
  auto files = list_asset_files(dir);
  if (files.empty()) return synth_test_card(seed);
  Rng rng = Rng::derive(seed, "asset.pick");
  const auto& path = files[rng.below(files.size())];
  return {path.string(), fit_square(load_image(path), kWorkingRes)};
}

// ---------------------------------------------------------------------------
// Permutation environments (Jigsaw, Zoom-In, Video Unshuffle)
// ---------------------------------------------------------------------------

/// Slots show items under a permutation; goal is the identity arrangement
/// (items are stored in goal order).
struct PermutationState {
  std::vector<Canvas> items;
  std::vector<int> perm;  // perm[slot] = item shown at that slot
  std::vector<int> goal;  // identity
  int grid_rows = 1, grid_cols = 1;  // jigsaw composites; 1 x n rows otherwise
  bool labeled_row = false;          // zoom/video draw index labels

  int size() const { return int(perm.size()); }
};

namespace detail {

inline std::vector<int> shuffled_non_identity(int n, Rng& rng) {
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  std::vector<int> id = p;
  do {
    rng.shuffle(p);
  } while (p == id);
  return p;
}

}  // namespace detail

/// Split into nr x nc tiles (row-major slots) and shuffle to a non-identity
/// permutation.
inline PermutationState jigsaw_make(const ImageAsset& asset, int nr, int nc, std::uint64_t seed) {
  if (nr < 1 || nc < 1 || nr * nc < 2) throw ConfigError("parameter out of range: nr*nc must be >= 2");
  PermutationState st;
  st.grid_rows = nr;
  st.grid_cols = nc;
  int tw = asset.pixels.width() / nc, th = asset.pixels.height() / nr;
  int ox = (asset.pixels.width() - tw * nc) / 2, oy = (asset.pixels.height() - th * nr) / 2;
  for (int r = 0; r < nr; ++r) {
    for (int c = 0; c < nc; ++c) {
      Canvas tile(tw, th);
      for (int y = 0; y < th; ++y)
        for (int x = 0; x < tw; ++x) tile.set(x, y, asset.pixels.get(ox + c * tw + x, oy + r * th + y));
      st.items.push_back(std::move(tile));
    }
  }
  Rng rng = Rng::derive(seed, "jigsaw.shuffle");
  st.perm = detail::shuffled_non_identity(nr * nc, rng);
  st.goal.resize(std::size_t(nr) * nc);
  std::iota(st.goal.begin(), st.goal.end(), 0);
  return st;
}

/// swap(i, j) exchanges slots; reorder(p) sets new_slot[i] = current_slot[p[i]].
inline std::string permute_apply(PermutationState& st, const ActionCall& call) {
  if (call.name == "swap") {
    int i, j;
    if (call.payload.size() == 2 && std::holds_alternative<std::vector<Scalar>>(call.payload[0])) {
      // Jigsaw coordinate pairs, mapped row-major.
      const auto& a = std::get<std::vector<Scalar>>(call.payload[0]);
      const auto& b = std::get<std::vector<Scalar>>(call.payload[1]);
      i = int(std::get<std::int64_t>(a[0])) * st.grid_cols + int(std::get<std::int64_t>(a[1]));
      j = int(std::get<std::int64_t>(b[0])) * st.grid_cols + int(std::get<std::int64_t>(b[1]));
    } else {
      i = int(std::get<std::int64_t>(call.payload[0]));
      j = int(std::get<std::int64_t>(call.payload[1]));
    }
    std::swap(st.perm[std::size_t(i)], st.perm[std::size_t(j)]);
    return feedback::kExecuted;
  }
  // reorder
  const auto& items = std::get<std::vector<Scalar>>(call.payload[0]);
  std::vector<int> p;
  for (const auto& s : items) p.push_back(int(std::get<std::int64_t>(s)));
  std::vector<std::uint8_t> seen(std::size_t(st.size()), 0);
  if (int(p.size()) != st.size()) return feedback::kNotAPermutation;
  for (int v : p) {
    if (v < 0 || v >= st.size() || seen[std::size_t(v)]) return feedback::kNotAPermutation;
    seen[std::size_t(v)] = 1;
  }
  std::vector<int> next(std::size_t(st.size()));
  for (int i = 0; i < st.size(); ++i) next[std::size_t(i)] = st.perm[std::size_t(p[std::size_t(i)])];
  st.perm = std::move(next);
  return feedback::kExecuted;
}

inline bool permute_success(const PermutationState& st) { return st.perm == st.goal; }

inline Canvas permute_render(const PermutationState& st, bool solved_view = false) {
  const auto& perm = solved_view ? st.goal : st.perm;
  if (!st.labeled_row) {
    int tw = st.items[0].width(), th = st.items[0].height();
    Canvas canvas(tw * st.grid_cols, th * st.grid_rows);
    for (int r = 0; r < st.grid_rows; ++r)
      for (int c = 0; c < st.grid_cols; ++c)
        blit(canvas, st.items[std::size_t(perm[std::size_t(r * st.grid_cols + c)])], c * tw, r * th);
    return canvas;
  }
  // Labeled row of tiles, indices 0..n-1.
  const int side = 160, gap = 8, label_h = 14;
  int n = st.size();
  Canvas canvas(gap + n * (side + gap), side + label_h + gap * 2, Color{30, 32, 38});
  for (int i = 0; i < n; ++i) {
    int x = gap + i * (side + gap);
    blit(canvas, scaled_nn(st.items[std::size_t(perm[std::size_t(i)])], side, side), x, gap);
    std::string label = std::to_string(i);
    draw_text(canvas, x + side / 2 - text_width(label) / 2, side + gap + 3, label, Color{220, 222, 228});
  }
  return canvas;
}

inline std::string permute_digest(const char* kind, const PermutationState& st) {
  std::string out = std::string(kind) + ":" + std::to_string(st.size()) + ":";
  for (int v : st.perm) out += std::to_string(v) + ",";
  // Tile content identifies the underlying asset/crops.
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const auto& item : st.items)
    for (auto b : item.raw()) {
      h ^= b;
      h *= 0x100000001b3ull;
    }
  out += ":" + std::to_string(h);
  return out;
}

// ---------------------------------------------------------------------------
// Zoom-In Puzzle
// ---------------------------------------------------------------------------

struct ZoomParams {
  int zv = 4;
  double zg = 1.5, zs = 0.5, mz = 1.2;
  bool nest = true;
};

/// zv crops with strictly increasing zoom factors (z_0 = 1 is the full
/// frame); nested crops are contained in their predecessor with seeded
/// jitter. Slots are shuffled non-identity; goal order is outermost first.
inline PermutationState zoom_make(const ImageAsset& asset, const ZoomParams& zp, std::uint64_t seed) {
  if (zp.zv < 2) throw ConfigError("parameter out of range: zv must be >= 2");
  if (!(zp.zg > 1.0)) throw ConfigError("parameter out of range: zg must be > 1");
  if (zp.zs < 0 || zp.mz < 1.0) throw ConfigError("parameter out of range: zs >= 0, mz >= 1");
  Rng rng = Rng::derive(seed, "zoom.gen");
  const double W = asset.pixels.width();
  std::vector<double> zooms{1.0};
  for (int k = 1; k < zp.zv; ++k) {
    double z = zooms.back() * (zp.zg + rng.unit() * zp.zs);
    if (k == 1) z = std::max(z, zp.mz);
    zooms.push_back(z);
  }
  PermutationState st;
  st.labeled_row = true;
  double cx = W / 2, cy = W / 2, half_prev = W / 2;
  double px = cx, py = cy;
  for (int k = 0; k < zp.zv; ++k) {
    double half = (W / zooms[std::size_t(k)]) / 2;
    if (k > 0) {
      double slack = half_prev - half;
      if (zp.nest) {
        px = std::clamp(px + rng.range_real(-0.5, 0.5) * slack, half, W - half);
        py = std::clamp(py + rng.range_real(-0.5, 0.5) * slack, half, W - half);
        // Containment in the previous crop.
        px = std::clamp(px, cx - slack, cx + slack);
        py = std::clamp(py, cy - slack, cy + slack);
      } else {
        px = rng.range_real(half, W - half);
        py = rng.range_real(half, W - half);
      }
    }
    int x0 = int(std::lround(px - half)), y0 = int(std::lround(py - half));
    int side = std::max(2, int(std::lround(2 * half)));
    x0 = std::clamp(x0, 0, int(W) - side);
    y0 = std::clamp(y0, 0, int(W) - side);
    Canvas crop(side, side);
    for (int y = 0; y < side; ++y)
      for (int x = 0; x < side; ++x) crop.set(x, y, asset.pixels.get(x0 + x, y0 + y));
    st.items.push_back(scaled_nn(crop, 160, 160));
    cx = px;
    cy = py;
    half_prev = half;
  }
  st.perm = detail::shuffled_non_identity(zp.zv, rng);
  st.goal.resize(std::size_t(zp.zv));
  std::iota(st.goal.begin(), st.goal.end(), 0);
  return st;
}

// ---------------------------------------------------------------------------
// Video Unshuffle
// ---------------------------------------------------------------------------

/// Synthetic clip: moving square and frame-indexed digit over a brightening
/// background; consecutive mean-absolute differences comfortably clear the
/// default threshold.
inline std::vector<Canvas> synth_video_frames(std::uint64_t seed, int count) {
  Rng rng = Rng::derive(seed, "video.synth");
  int hue = int(rng.below(360));
  std::vector<Canvas> frames;
  for (int t = 0; t < count; ++t) {
    Canvas f(kWorkingRes, kWorkingRes, hsv_to_rgb({double(hue), 0.4, 0.35 + 0.06 * t}));
    int x = 30 + t * (kWorkingRes - 140) / std::max(1, count - 1);
    int y = kWorkingRes / 2 - 50 + int(40 * std::sin(t * 1.3));
    fill_rect(f, x, y, 100, 100, hsv_to_rgb({normalize_angle_360(hue + 140), 0.8, 0.95}));
    draw_text(f, 16, 16, "t=" + std::to_string(t), Color{255, 255, 255}, 3);
    frames.push_back(std::move(f));
  }
  return frames;
}

inline double mean_abs_diff(const Canvas& a, const Canvas& b) {
  const auto& pa = a.raw();
  const auto& pb = b.raw();
  double sum = 0;
  for (std::size_t i = 0; i < pa.size(); ++i) sum += std::abs(int(pa[i]) - int(pb[i]));
  return sum / double(pa.size());
}

/// Ordered frame files "frame_%04d.png" under dir/; empty when absent.
inline std::vector<std::filesystem::path> list_frame_files(const std::string& dir) {
  namespace fs = std::filesystem;
  std::vector<fs::path> files;
  if (dir.empty() || !fs::is_directory(dir)) return files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    auto name = entry.path().filename().string();
    if (name.rfind("frame_", 0) == 0 && entry.path().extension() == ".png") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

enum class SamplingStrategy { uniform = 0, random_ordered = 1 };

/// Select nf frames under the frame-difference threshold and shuffle them;
/// goal is chronological order.
inline PermutationState video_make(const std::vector<Canvas>& clip, int nf, SamplingStrategy ss,
                                   double mfd, std::uint64_t seed) {
  if (nf < 2) throw ConfigError("parameter out of range: nf must be >= 2");
  if (int(clip.size()) < nf) throw ConfigError("not enough frames: need at least " + std::to_string(nf));
  Rng rng = Rng::derive(seed, "video.select");
  const int total = int(clip.size());
  std::vector<int> chosen;
  for (int tries = 0; tries < 200; ++tries) {
    chosen.clear();
    if (ss == SamplingStrategy::uniform) {
      for (int k = 0; k < nf; ++k) chosen.push_back(k * (total - 1) / (nf - 1));
      if (tries > 0) break;  // deterministic selection cannot be retried
    } else {
      std::vector<int> all(static_cast<std::size_t>(total));
      std::iota(all.begin(), all.end(), 0);
      rng.shuffle(all);
      chosen.assign(all.begin(), all.begin() + nf);
      std::sort(chosen.begin(), chosen.end());
    }
    bool ok = true;
    for (int k = 1; k < nf && ok; ++k)
      ok = mean_abs_diff(clip[std::size_t(chosen[std::size_t(k - 1)])],
                         clip[std::size_t(chosen[std::size_t(k)])]) >= mfd;
    if (ok) break;
    if (tries == 199) throw ConfigError("cannot satisfy mfd: consecutive frames too similar");
  }
  bool ok = true;
  for (int k = 1; k < nf; ++k)
    ok = ok && mean_abs_diff(clip[std::size_t(chosen[std::size_t(k - 1)])],
                             clip[std::size_t(chosen[std::size_t(k)])]) >= mfd;
  if (!ok) throw ConfigError("cannot satisfy mfd: consecutive frames too similar");

  PermutationState st;
  st.labeled_row = true;
  for (int idx : chosen) st.items.push_back(scaled_nn(clip[std::size_t(idx)], 160, 160));
  st.perm = detail::shuffled_non_identity(nf, rng);
  st.goal.resize(std::size_t(nf));
  std::iota(st.goal.begin(), st.goal.end(), 0);
  return st;
}

// ---------------------------------------------------------------------------
// Colorization
// ---------------------------------------------------------------------------

struct ColorState {
  Canvas original;      // the natural-color target
  double hue_offset = 0;  // degrees in [-180, 180)
  double sat_offset = 0;  // percentage points
  double ar = 11;
};

inline ColorState colorize_make(const ImageAsset& asset, double ar, std::uint64_t seed) {
  if (!(ar > 0) || ar > 50) throw ConfigError("parameter out of range: ar must be in (0, 50]");
  Rng rng = Rng::derive(seed, "colorize.gen");
  ColorState st;
  st.original = asset.pixels;
  st.ar = ar;
  st.hue_offset = rng.range_real(ar + 10, 180.0) * (rng.chance(0.5) ? 1 : -1);
  st.sat_offset = rng.range_real(std::min(ar + 10, 60.0), 60.0) * (rng.chance(0.5) ? 1 : -1);
  st.hue_offset = normalize_angle_180(st.hue_offset);
  return st;
}

/// rotate(theta) adds to the hue offset (mod 360 into [-180, 180)),
/// saturate(delta) adds percentage points.
inline std::string colorize_apply(ColorState& st, const ActionCall& call) {
  double v = std::holds_alternative<double>(call.payload[0])
                 ? std::get<double>(call.payload[0])
                 : double(std::get<std::int64_t>(call.payload[0]));
  if (call.name == "rotate")
    st.hue_offset = normalize_angle_180(st.hue_offset + v);
  else
    st.sat_offset += v;
  return feedback::kExecuted;
}

inline bool colorize_success(const ColorState& st) {
  return std::fabs(st.hue_offset) <= st.ar && std::fabs(st.sat_offset) <= st.ar;
}

inline Canvas colorize_render(const ColorState& st, bool solved_view = false) {
  if (solved_view) return st.original;
  return hsv_shift(st.original, st.hue_offset, st.sat_offset);
}

// ---------------------------------------------------------------------------
// Mental Rotation 2D
// ---------------------------------------------------------------------------

struct MR2DState {
  Canvas upright;          // target orientation
  double residual = 0;     // degrees, (-180, 180]
  double at = 10;
};

inline MR2DState mr2d_make(const ImageAsset& asset, double at, std::uint64_t seed) {
  if (!(at > 0) || at > 170) throw ConfigError("parameter out of range: at must be in (0, 170]");
  Rng rng = Rng::derive(seed, "mr2d.gen");
  MR2DState st;
  st.upright = asset.pixels;
  st.at = at;
  st.residual = rng.range_real(at + 10, 180.0) * (rng.chance(0.5) ? 1 : -1);
  return st;
}

inline std::string mr2d_apply(MR2DState& st, const ActionCall& call) {
  double v = std::holds_alternative<double>(call.payload[0])
                 ? std::get<double>(call.payload[0])
                 : double(std::get<std::int64_t>(call.payload[0]));
  st.residual = normalize_angle_180(st.residual + v);
  if (st.residual == -180.0) st.residual = 180.0;  // (-180, 180]
  return feedback::kExecuted;
}

inline bool mr2d_success(const MR2DState& st) { return std::fabs(st.residual) <= st.at; }

/// Side-by-side composite: rotated current | upright target.
inline Canvas mr2d_render(const MR2DState& st, bool solved_view = false) {
  Canvas current = solved_view ? st.upright : rotated_nn(st.upright, st.residual, Color{28, 30, 36});
  return compose_side_by_side(current, st.upright, "Current", "Target");
}

}  // namespace visgym
