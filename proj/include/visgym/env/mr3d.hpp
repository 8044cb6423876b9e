#pragma once

#include <array>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "visgym/core.hpp"
#include "visgym/render.hpp"
#include "visgym/rng.hpp"

namespace visgym {

/// Row-major 3x3 rotation matrix with just enough algebra for orientation
/// bookkeeping.
struct Mat3 {
  std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

  static Mat3 identity() { return {}; }

  static Mat3 rot_x(double deg) {
    double r = deg * 3.14159265358979323846 / 180.0, c = std::cos(r), s = std::sin(r);
    return {{1, 0, 0, 0, c, -s, 0, s, c}};
  }
  static Mat3 rot_y(double deg) {
    double r = deg * 3.14159265358979323846 / 180.0, c = std::cos(r), s = std::sin(r);
    return {{c, 0, s, 0, 1, 0, -s, 0, c}};
  }
  static Mat3 rot_z(double deg) {
    double r = deg * 3.14159265358979323846 / 180.0, c = std::cos(r), s = std::sin(r);
    return {{c, -s, 0, s, c, 0, 0, 0, 1}};
  }

  Mat3 operator*(const Mat3& o) const {
    Mat3 out;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double v = 0;
        for (int k = 0; k < 3; ++k) v += m[std::size_t(i * 3 + k)] * o.m[std::size_t(k * 3 + j)];
        out.m[std::size_t(i * 3 + j)] = v;
      }
    return out;
  }

  std::array<double, 3> apply(const std::array<double, 3>& v) const {
    return {m[0] * v[0] + m[1] * v[1] + m[2] * v[2], m[3] * v[0] + m[4] * v[1] + m[5] * v[2],
            m[6] * v[0] + m[7] * v[1] + m[8] * v[2]};
  }

  Mat3 transposed() const {
    return {{m[0], m[3], m[6], m[1], m[4], m[7], m[2], m[5], m[8]}};
  }

  double trace() const { return m[0] + m[4] + m[8]; }

  /// Gram-Schmidt on the rows; applied after every composition.
  void orthonormalize() {
    auto dot = [](const double* a, const double* b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; };
    double* r0 = &m[0];
    double* r1 = &m[3];
    double* r2 = &m[6];
    double n0 = std::sqrt(dot(r0, r0));
    for (int i = 0; i < 3; ++i) r0[i] /= n0;
    double p = dot(r1, r0);
    for (int i = 0; i < 3; ++i) r1[i] -= p * r0[i];
    double n1 = std::sqrt(dot(r1, r1));
    for (int i = 0; i < 3; ++i) r1[i] /= n1;
    // r2 = r0 x r1 keeps det = +1.
    r2[0] = r0[1] * r1[2] - r0[2] * r1[1];
    r2[1] = r0[2] * r1[0] - r0[0] * r1[2];
    r2[2] = r0[0] * r1[1] - r0[1] * r1[0];
  }
};

/// arccos((trace(A^T B) - 1) / 2) in degrees.
inline double geodesic_deg(const Mat3& a, const Mat3& b) {
  double t = (a.transposed() * b).trace();
  double c = std::clamp((t - 1.0) / 2.0, -1.0, 1.0);
  return std::acos(c) * 180.0 / 3.14159265358979323846;
}

/// Shepard-Metzler style snake: ns orthogonal runs of cubes on the integer
/// lattice, self-avoiding, generically asymmetric.
struct Polycube {
  std::vector<std::array<int, 3>> cells;
  int segments = 0;
};

namespace detail {

inline constexpr int kAxisDirs[6][3] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0},
                                        {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};

/// The 24 proper rotations of the cube lattice as row-major sign matrices.
inline const std::vector<std::array<int, 9>>& lattice_rotations() {
  static const std::vector<std::array<int, 9>> rots = [] {
    std::vector<std::array<int, 9>> out;
    int axes[3] = {0, 1, 2};
    int perm[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    (void)axes;
    for (auto& p : perm) {
      for (int sx : {1, -1})
        for (int sy : {1, -1})
          for (int sz : {1, -1}) {
            std::array<int, 9> m{};
            int sign[3] = {sx, sy, sz};
            for (int r = 0; r < 3; ++r) m[std::size_t(r * 3 + p[r])] = sign[r];
            // keep proper rotations (det +1)
            int det = m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
                      m[2] * (m[3] * m[7] - m[4] * m[6]);
            if (det == 1) out.push_back(m);
          }
    }
    return out;
  }();
  return rots;
}

/// True when some non-identity lattice rotation maps the cell set onto itself
/// (up to translation).
inline bool polycube_symmetric(const Polycube& pc) {
  std::set<std::array<int, 3>> base(pc.cells.begin(), pc.cells.end());
  auto normalize = [](std::set<std::array<int, 3>> cells) {
    int mn[3] = {1 << 20, 1 << 20, 1 << 20};
    for (const auto& c : cells)
      for (int i = 0; i < 3; ++i) mn[i] = std::min(mn[i], c[i]);
    std::set<std::array<int, 3>> out;
    for (const auto& c : cells) out.insert({c[0] - mn[0], c[1] - mn[1], c[2] - mn[2]});
    return out;
  };
  auto norm_base = normalize(base);
  for (const auto& rot : lattice_rotations()) {
    bool is_identity = rot[0] == 1 && rot[4] == 1 && rot[8] == 1 && rot[1] == 0 && rot[2] == 0 &&
                       rot[3] == 0 && rot[5] == 0 && rot[6] == 0 && rot[7] == 0;
    if (is_identity) continue;
    std::set<std::array<int, 3>> rotated;
    for (const auto& c : base)
      rotated.insert({rot[0] * c[0] + rot[1] * c[1] + rot[2] * c[2],
                      rot[3] * c[0] + rot[4] * c[1] + rot[5] * c[2],
                      rot[6] * c[0] + rot[7] * c[1] + rot[8] * c[2]});
    if (normalize(rotated) == norm_base) return true;
  }
  return false;
}

}  // namespace detail

/// Grow ns runs with lengths drawn from [len_lo, len_hi], consecutive runs
/// orthogonal, cells self-avoiding; symmetric shapes are rejected.
inline Polycube polycube_generate(int ns, int len_lo, int len_hi, std::uint64_t seed) {
  if (ns < 2) throw ConfigError("parameter out of range: ns must be >= 2");
  if (len_lo < 2 || len_hi < len_lo) throw ConfigError("parameter out of range: lr lengths must be >= 2");
  for (std::uint64_t attempt = 0;; ++attempt) {
    Rng rng = Rng::derive(seed, "polycube.gen", attempt);
    Polycube pc;
    pc.segments = ns;
    std::set<std::array<int, 3>> used;
    std::array<int, 3> pos{0, 0, 0};
    used.insert(pos);
    pc.cells.push_back(pos);
    int prev_dir = -1;
    bool ok = true;
    for (int run = 0; run < ns && ok; ++run) {
      std::vector<int> candidates;
      for (int d = 0; d < 6; ++d) {
        if (prev_dir >= 0 && (d / 2 == prev_dir / 2)) continue;  // orthogonal to previous run
        candidates.push_back(d);
      }
      // Try candidate directions in random order until one fits.
      for (std::size_t i = candidates.size(); i > 1; --i)
        std::swap(candidates[i - 1], candidates[rng.below(i)]);
      int len = rng.range_int(len_lo, len_hi);
      bool placed = false;
      for (int d : candidates) {
        std::array<int, 3> probe = pos;
        std::vector<std::array<int, 3>> added;
        bool fits = true;
        for (int step = 1; step < len && fits; ++step) {
          probe = {pos[0] + detail::kAxisDirs[d][0] * step, pos[1] + detail::kAxisDirs[d][1] * step,
                   pos[2] + detail::kAxisDirs[d][2] * step};
          if (used.count(probe)) fits = false;
          else added.push_back(probe);
        }
        if (!fits) continue;
        for (const auto& c : added) {
          used.insert(c);
          pc.cells.push_back(c);
        }
        pos = pc.cells.back();
        prev_dir = d;
        placed = true;
        break;
      }
      ok = placed;
    }
    if (!ok) continue;
    if (detail::polycube_symmetric(pc)) continue;
    return pc;
  }
}

/// Orientation state with intrinsic-axis dynamics: rotate([dy, dp, dr])
/// composes yaw (body z), pitch (body y), roll (body x) in payload order.
struct MR3DState {
  Polycube shape;
  Mat3 current, target;
  double at = 15;
};

inline MR3DState mr3d_generate(int ns, int len_lo, int len_hi, double at, std::uint64_t seed) {
  if (!(at > 0)) throw ConfigError("parameter out of range: at must be positive");
  MR3DState st;
  st.at = at;
  st.shape = polycube_generate(ns, len_lo, len_hi, seed);
  Rng rng = Rng::derive(seed, "mr3d.gen");
  auto random_orientation = [&] {
    Mat3 r = Mat3::rot_z(rng.range_real(0, 360)) * Mat3::rot_y(rng.range_real(0, 360)) *
             Mat3::rot_x(rng.range_real(0, 360));
    r.orthonormalize();
    return r;
  };
  st.target = random_orientation();
  do {
    st.current = random_orientation();
  } while (geodesic_deg(st.current, st.target) <= at + 5);
  return st;
}

inline std::string mr3d_apply(MR3DState& st, const ActionCall& call) {
  const auto& items = std::get<std::vector<Scalar>>(call.payload[0]);
  auto real_of = [](const Scalar& s) {
    return std::holds_alternative<std::int64_t>(s) ? double(std::get<std::int64_t>(s)) : std::get<double>(s);
  };
  double dy = real_of(items[0]), dp = real_of(items[1]), dr = real_of(items[2]);
  st.current = st.current * Mat3::rot_z(dy) * Mat3::rot_y(dp) * Mat3::rot_x(dr);
  st.current.orthonormalize();
  return feedback::kExecuted;
}

inline bool mr3d_success(const MR3DState& st) { return geodesic_deg(st.current, st.target) <= st.at; }

namespace detail {

/// Orthographic render of the oriented polycube, painter's algorithm over
/// faces, one fixed directional light.
inline Canvas mr3d_render_one(const Polycube& pc, const Mat3& orient, int side) {
  Canvas canvas(side, side, Color{24, 26, 32});
  // Fixed camera: tilt then turn, looking down -z of view space.
  static const Mat3 view = Mat3::rot_x(-28) * Mat3::rot_y(36);
  static constexpr double light[3] = {0.444, -0.777, 0.444};

  double cx = 0, cy = 0, cz = 0;
  for (const auto& c : pc.cells) {
    cx += c[0];
    cy += c[1];
    cz += c[2];
  }
  cx /= double(pc.cells.size());
  cy /= double(pc.cells.size());
  cz /= double(pc.cells.size());

  double extent = 1;
  for (const auto& c : pc.cells)
    extent = std::max({extent, std::fabs(c[0] - cx), std::fabs(c[1] - cy), std::fabs(c[2] - cz)});
  double scale = (side * 0.42) / (extent + 0.9);

  std::set<std::array<int, 3>> used(pc.cells.begin(), pc.cells.end());
  struct Face {
    double depth;
    std::array<PointF, 4> quad;
    Color color;
  };
  std::vector<Face> faces;
  // Unit cube face corners per axis direction.
  static const int face_corners[6][4][3] = {
      {{1, 0, 0}, {1, 1, 0}, {1, 1, 1}, {1, 0, 1}}, {{0, 0, 0}, {0, 0, 1}, {0, 1, 1}, {0, 1, 0}},
      {{0, 1, 0}, {0, 1, 1}, {1, 1, 1}, {1, 1, 0}}, {{0, 0, 0}, {1, 0, 0}, {1, 0, 1}, {0, 0, 1}},
      {{0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}}, {{0, 0, 0}, {0, 1, 0}, {1, 1, 0}, {1, 0, 0}}};
  const Color base{120, 156, 219};
  for (const auto& cell : pc.cells) {
    for (int f = 0; f < 6; ++f) {
      std::array<int, 3> nb = {cell[0] + kAxisDirs[f][0], cell[1] + kAxisDirs[f][1],
                               cell[2] + kAxisDirs[f][2]};
      if (used.count(nb)) continue;  // interior face
      std::array<double, 3> n_body = {double(kAxisDirs[f][0]), double(kAxisDirs[f][1]),
                                      double(kAxisDirs[f][2])};
      auto n_world = view.apply(orient.apply(n_body));
      if (n_world[2] <= 0) continue;  // back-face
      Face face;
      double depth = 0;
      for (int k = 0; k < 4; ++k) {
        std::array<double, 3> p = {cell[0] - cx - 0.5 + face_corners[f][k][0],
                                   cell[1] - cy - 0.5 + face_corners[f][k][1],
                                   cell[2] - cz - 0.5 + face_corners[f][k][2]};
        auto w = view.apply(orient.apply(p));
        face.quad[std::size_t(k)] = {side / 2.0 + w[0] * scale, side / 2.0 - w[1] * scale};
        depth += w[2];
      }
      face.depth = depth / 4;
      double lambert = std::max(0.15, n_world[0] * light[0] + n_world[1] * light[1] + n_world[2] * light[2]);
      face.color = {std::uint8_t(std::min(255.0, base.r * (0.35 + 0.75 * lambert))),
                    std::uint8_t(std::min(255.0, base.g * (0.35 + 0.75 * lambert))),
                    std::uint8_t(std::min(255.0, base.b * (0.35 + 0.75 * lambert)))};
      faces.push_back(face);
    }
  }
  std::sort(faces.begin(), faces.end(), [](const Face& a, const Face& b) {
    if (a.depth != b.depth) return a.depth < b.depth;
    if (a.quad[0].x != b.quad[0].x) return a.quad[0].x < b.quad[0].x;
    return a.quad[0].y < b.quad[0].y;
  });
  for (const auto& f : faces) fill_polygon(canvas, f.quad, f.color);
  return canvas;
}

}  // namespace detail

/// Side-by-side composite: current orientation | target orientation.
inline Canvas mr3d_render(const MR3DState& st, bool solved_view = false) {
  Canvas current = detail::mr3d_render_one(st.shape, solved_view ? st.target : st.current, 224);
  Canvas target = detail::mr3d_render_one(st.shape, st.target, 224);
  return compose_side_by_side(current, target, "Current", "Target");
}

inline std::string mr3d_digest(const MR3DState& st) {
  std::string out = "mr3d:";
  for (const auto& c : st.shape.cells)
    out += std::to_string(c[0]) + "," + std::to_string(c[1]) + "," + std::to_string(c[2]) + ";";
  char buf[256];
  std::snprintf(buf, sizeof buf, ":c%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f", st.current.m[0],
                st.current.m[1], st.current.m[2], st.current.m[3], st.current.m[4], st.current.m[5],
                st.current.m[6], st.current.m[7], st.current.m[8]);
  out += buf;
  std::snprintf(buf, sizeof buf, ":t%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f", st.target.m[0],
                st.target.m[1], st.target.m[2], st.target.m[3], st.target.m[4], st.target.m[5],
                st.target.m[6], st.target.m[7], st.target.m[8]);
  out += buf;
  return out;
}

}  // namespace visgym
