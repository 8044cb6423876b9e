#include <catch2/catch_amalgamated.hpp>

#include "oracle_helpers.hpp"
#include "visgym/env/matchstick_equation.hpp"
#include "visgym/env/matchstick_rotation.hpp"
#include "visgym/rng.hpp"

using namespace visgym;

namespace {

/// 6+2=8 in glyphs.
EquationState known_equation(int a, char op, int b, int c) {
  EquationState st;
  auto push_digits = [&](int v) {
    std::string s = std::to_string(v);
    for (char ch : s) {
      st.layout.push_back(GlyphClass::digit);
      st.occupancy.push_back(kDigitSegments[ch - '0']);
    }
  };
  push_digits(a);
  st.layout.push_back(GlyphClass::op);
  st.occupancy.push_back(op == '+' ? kOpPlus : op == '-' ? kOpMinus : kOpTimes);
  push_digits(b);
  st.layout.push_back(GlyphClass::relation);
  st.occupancy.push_back(kRelEquals);
  push_digits(c);
  st.solved = st.occupancy;
  return st;
}

}  // namespace

TEST_CASE("equation validity oracle") {
  REQUIRE(equation_valid(known_equation(6, '+', 2, 8)));
  REQUIRE(!equation_valid(known_equation(6, '+', 2, 9)));
  REQUIRE(equation_valid(known_equation(7, '-', 3, 4)));
  REQUIRE(equation_valid(known_equation(6, 'x', 7, 42)));
}

TEST_CASE("unrecognized segment sets invalidate the equation") {
  // Every 7-bit pattern that is not one of the ten digit encodings must fail.
  std::set<std::uint8_t> known(std::begin(kDigitSegments), std::end(kDigitSegments));
  int checked = 0;
  for (int bits = 0; bits < 128; ++bits) {
    if (known.count(std::uint8_t(bits))) continue;
    EquationState st = known_equation(6, '+', 2, 8);
    st.occupancy[0] = std::uint8_t(bits);
    REQUIRE(!equation_valid(st));
    ++checked;
  }
  REQUIRE(checked == 128 - 10);
}

TEST_CASE("generation: corrupted, stick-conserving, fixable within bm") {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    EquationState st = equation_generate(1, seed);
    REQUIRE(!equation_valid(st));
    // Conservation against the solved form.
    int solved_sticks = 0, sticks = 0;
    for (auto o : st.solved) solved_sticks += __builtin_popcount(o);
    for (auto o : st.occupancy) sticks += __builtin_popcount(o);
    REQUIRE(sticks == solved_sticks);
    auto dist = equation_min_solution_distance(st);
    REQUIRE(dist.has_value());
    REQUIRE(*dist == 1);
    // Independent relocation-graph search agrees.
    REQUIRE(oracle::equation_bfs_min_moves(st, 2) == 1);
  }
  EquationState hard = equation_generate(2, 5);
  auto dist = equation_min_solution_distance(hard);
  REQUIRE(dist.has_value());
  REQUIRE(*dist <= 2);
  REQUIRE(oracle::equation_bfs_min_moves(hard, 2) == *dist);
}

TEST_CASE("bm outside {1, 2} is rejected") {
  REQUIRE_THROWS_AS(equation_generate(0, 1), ConfigError);
  REQUIRE_THROWS_AS(equation_generate(3, 1), ConfigError);
}

TEST_CASE("move relocates a stick; conservation holds; undo restores") {
  EquationState st = equation_generate(1, 3);
  auto before = st.occupancy;
  int total = st.stick_count();
  // Find an occupied and an empty slot.
  int i = -1, s = -1, j = -1, t = -1;
  for (int p = 0; p < st.positions() && i < 0; ++p)
    for (int k = 0; k < glyph_slot_count(st.layout[std::size_t(p)]); ++k)
      if (st.occupancy[std::size_t(p)] & (1u << k)) {
        i = p;
        s = k;
        break;
      }
  for (int p = 0; p < st.positions() && j < 0; ++p)
    for (int k = 0; k < glyph_slot_count(st.layout[std::size_t(p)]); ++k)
      if (!(st.occupancy[std::size_t(p)] & (1u << k))) {
        j = p;
        t = k;
        break;
      }
  ActionCall call{"move", {list_value({i, s, j, t})}};
  REQUIRE(equation_apply(st, call) == "executed");
  REQUIRE(st.stick_count() == total);
  REQUIRE(equation_apply(st, make_call("undo")) == "executed");
  REQUIRE(st.occupancy == before);
}

TEST_CASE("move error feedback: missing stick, occupied destination, empty undo stack") {
  EquationState st = known_equation(6, '+', 2, 8);
  // Digit '6' lacks segment 1 (top-right).
  ActionCall no_src{"move", {list_value({0, 1, 0, 1})}};
  REQUIRE(equation_apply(st, no_src) == "no stick at source");
  // Segment 0 of '6' is occupied; move another stick onto it.
  ActionCall occupied{"move", {list_value({0, 0, 0, 3})}};
  REQUIRE(equation_apply(st, occupied) == "destination occupied");
  REQUIRE(equation_apply(st, make_call("undo")) == "nothing to undo");
}

TEST_CASE("stick conservation under random action sequences") {
  Rng rng(404);
  EquationState st = equation_generate(2, 8);
  int total = st.stick_count();
  for (int step = 0; step < 200; ++step) {
    if (rng.chance(0.3)) {
      equation_apply(st, make_call("undo"));
    } else {
      int i = int(rng.below(std::uint64_t(st.positions())));
      int s = int(rng.below(7));
      int j = int(rng.below(std::uint64_t(st.positions())));
      int t = int(rng.below(7));
      equation_apply(st, ActionCall{"move", {list_value({i, s, j, t})}});
    }
    REQUIRE(st.stick_count() == total);
  }
}

TEST_CASE("equation ascii: stacked '=' bars, index footer, round-trip") {
  EquationState st = known_equation(13, '+', 25, 38);
  auto grid = equation_ascii(st);
  REQUIRE(grid.rows.size() == 7);
  // Relation position index: digits(13) + op + digits(25) = 5.
  int rel_base = 5 * 6;
  REQUIRE(grid.rows[2].substr(std::size_t(rel_base) + 1, 3) == "---");
  REQUIRE(grid.rows[3].substr(std::size_t(rel_base) + 1, 3) == "---");
  // Footer indices 0..n-1.
  for (int p = 0; p < st.positions(); ++p)
    REQUIRE(grid.rows[6][std::size_t(p * 6 + 2)] == char('0' + p));
  auto parsed = oracle::parse_equation_ascii(grid, st.layout);
  REQUIRE(parsed == st.occupancy);
}

TEST_CASE("equation ascii round-trips every operator and digit") {
  EquationState st = known_equation(90, 'x', 87, 7830);
  auto parsed = oracle::parse_equation_ascii(equation_ascii(st), st.layout);
  REQUIRE(parsed == st.occupancy);
  EquationState minus = known_equation(41, '-', 36, 5);
  parsed = oracle::parse_equation_ascii(equation_ascii(minus), minus.layout);
  REQUIRE(parsed == minus.occupancy);
}

TEST_CASE("equation render is deterministic and solved view differs") {
  EquationState st = equation_generate(1, 6);
  REQUIRE(equation_render(st) == equation_render(st));
  REQUIRE(!(equation_render(st) == equation_render(st, true)));
}

// ---------------------------------------------------------------------------
// Matchstick rotation
// ---------------------------------------------------------------------------

TEST_CASE("angular distance is symmetric and capped at 180") {
  Rng rng(11);
  for (int i = 0; i < 500; ++i) {
    double a = rng.range_real(-720, 720), b = rng.range_real(-720, 720);
    double ab = angular_distance(a, b), ba = angular_distance(b, a);
    REQUIRE(ab == Catch::Approx(ba));
    REQUIRE(ab >= 0);
    REQUIRE(ab <= 180.0);
  }
  REQUIRE(angular_distance(10, 355) == Catch::Approx(15));
}

TEST_CASE("rotation generation: tolerances violated initially, scale in range") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    RotationState st = rotation_generate(0.5, 2.0, 10, 15, seed);
    REQUIRE(!rotation_success(st));
    REQUIRE(st.hidden_scale >= 0.5);
    REQUIRE(st.hidden_scale <= 2.0);
  }
  REQUIRE_THROWS_AS(rotation_generate(0, 2, 10, 15, 1), ConfigError);
  REQUIRE_THROWS_AS(rotation_generate(2, 1, 10, 15, 1), ConfigError);
}

TEST_CASE("translation is scaled by the hidden factor; probes are linear") {
  RotationState st = rotation_generate(0.5, 2.0, 10, 15, 3);
  double x0 = st.current.x;
  ActionCall probe{"move", {list_value_reals({1, 0, 0})}};
  rotation_apply(st, probe);
  rotation_apply(st, probe);
  REQUIRE(st.current.x - x0 == Catch::Approx(2 * st.hidden_scale));
}

TEST_CASE("rotation is unscaled and modular") {
  RotationState st = rotation_generate(0.5, 2.0, 10, 15, 4);
  double t0 = st.current.theta;
  rotation_apply(st, ActionCall{"move", {list_value_reals({0, 0, 360})}});
  REQUIRE(st.current.theta == Catch::Approx(t0));
  st.current.theta = 10;
  rotation_apply(st, ActionCall{"move", {list_value_reals({0, 0, -15})}});
  REQUIRE(st.current.theta == Catch::Approx(355));
}

TEST_CASE("success tolerance boundary is closed") {
  RotationState st = rotation_generate(0.5, 2.0, 10, 15, 5);
  st.current = st.target;
  REQUIRE(rotation_success(st));
  st.current.x = st.target.x + st.pt;  // exactly at the boundary
  REQUIRE(rotation_success(st));
  st.current.x = st.target.x + st.pt + 1;
  REQUIRE(!rotation_success(st));
}

TEST_CASE("render: ghost always present; head dot disambiguates theta from theta+180") {
  RotationState st = rotation_generate(0.5, 2.0, 10, 15, 6);
  Canvas base = rotation_render(st);
  RotationState flipped = st;
  flipped.current.theta = normalize_angle_360(st.current.theta + 180);
  REQUIRE(!(rotation_render(flipped) == base));
  // Aligned poses overlap pixelwise with the solved view.
  RotationState aligned = st;
  aligned.current = st.target;
  REQUIRE(rotation_render(aligned) == rotation_render(st, true));
}
