#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "visgym/core.hpp"
#include "visgym/render.hpp"
#include "visgym/rng.hpp"

namespace visgym {

struct StickPose {
  double x = 0, y = 0;
  double theta = 0;  // degrees, normalized to [0, 360)
};

/// Pose alignment under an unknown translation multiplier: commanded moves
/// are scaled by hidden_scale before they land.
struct RotationState {
  StickPose current, target;
  double hidden_scale = 1.0;
  double pt = 10, at = 15;
  int frame = 448;
};

inline RotationState rotation_generate(double sr_lo, double sr_hi, double pt, double at,
                                       std::uint64_t seed) {
  if (!(sr_lo > 0) || sr_hi < sr_lo) throw ConfigError("parameter out of range: sr must be a positive interval");
  if (!(pt > 0) || !(at > 0)) throw ConfigError("parameter out of range: pt and at must be positive");
  RotationState st;
  st.pt = pt;
  st.at = at;
  Rng rng = Rng::derive(seed, "rotation.gen");
  st.hidden_scale = rng.range_real(sr_lo, sr_hi);
  const double margin = 90;  // unit probes and the final correction stay inside the frame
  auto sample = [&] {
    return StickPose{rng.range_real(margin, st.frame - margin), rng.range_real(margin, st.frame - margin),
                     rng.range_real(0, 360)};
  };
  st.target = sample();
  do {
    st.current = sample();
  } while (std::hypot(st.current.x - st.target.x, st.current.y - st.target.y) <= pt ||
           angular_distance(st.current.theta, st.target.theta) <= at);
  return st;
}

/// move([dx, dy, dtheta]): translation is scaled by the hidden multiplier and
/// clamped to the frame; rotation lands unscaled, modulo 360.
inline std::string rotation_apply(RotationState& st, const ActionCall& call) {
  const auto& items = std::get<std::vector<Scalar>>(call.payload[0]);
  auto real_of = [](const Scalar& s) {
    return std::holds_alternative<std::int64_t>(s) ? double(std::get<std::int64_t>(s)) : std::get<double>(s);
  };
  st.current.x = std::clamp(st.current.x + st.hidden_scale * real_of(items[0]), 0.0, double(st.frame));
  st.current.y = std::clamp(st.current.y + st.hidden_scale * real_of(items[1]), 0.0, double(st.frame));
  st.current.theta = normalize_angle_360(st.current.theta + real_of(items[2]));
  return feedback::kExecuted;
}

/// Closed tolerances on both channels.
inline bool rotation_success(const RotationState& st) {
  double pos_err = std::hypot(st.current.x - st.target.x, st.current.y - st.target.y);
  return pos_err <= st.pt && angular_distance(st.current.theta, st.target.theta) <= st.at;
}

namespace detail {

inline void draw_stick(Canvas& canvas, const StickPose& pose, Color body, bool outline_only) {
  const double len = 120, width = 10;
  double rad = pose.theta * 3.14159265358979323846 / 180.0;
  double dx = std::cos(rad), dy = std::sin(rad);
  double nx = -dy, ny = dx;
  double hx = pose.x + dx * len / 2, hy = pose.y + dy * len / 2;  // head end
  double tx = pose.x - dx * len / 2, ty = pose.y - dy * len / 2;
  PointF quad[4] = {{tx + nx * width / 2, ty + ny * width / 2},
                    {hx + nx * width / 2, hy + ny * width / 2},
                    {hx - nx * width / 2, hy - ny * width / 2},
                    {tx - nx * width / 2, ty - ny * width / 2}};
  if (outline_only) {
    for (int i = 0; i < 4; ++i) {
      const PointF &a = quad[i], &b = quad[(i + 1) % 4];
      draw_line(canvas, int(std::lround(a.x)), int(std::lround(a.y)), int(std::lround(b.x)),
                int(std::lround(b.y)), body);
    }
    draw_circle(canvas, int(std::lround(hx)), int(std::lround(hy)), 9, body);
  } else {
    fill_polygon(canvas, quad, body);
    fill_circle(canvas, int(std::lround(hx)), int(std::lround(hy)), 9, body);
  }
}

}  // namespace detail

/// Current stick solid with a head dot; target pose as an outline ghost.
inline Canvas rotation_render(const RotationState& st, bool solved_view = false) {
  Canvas canvas(st.frame, st.frame, Color{28, 30, 36});
  detail::draw_stick(canvas, st.target, Color{110, 168, 92}, true);
  detail::draw_stick(canvas, solved_view ? st.target : st.current, Color{235, 196, 88}, false);
  return canvas;
}

inline std::string rotation_digest(const RotationState& st) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "rotation:%.4f,%.4f,%.4f:%.4f,%.4f,%.4f:%.6f:%.2f:%.2f", st.current.x,
                st.current.y, st.current.theta, st.target.x, st.target.y, st.target.theta, st.hidden_scale,
                st.pt, st.at);
  return buf;
}

}  // namespace visgym
