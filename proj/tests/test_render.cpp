#include <catch2/catch_amalgamated.hpp>

#include "visgym/png.hpp"
#include "visgym/render.hpp"
#include "visgym/rng.hpp"

using namespace visgym;

TEST_CASE("fill covers the whole canvas") {
  Canvas c(16, 16);
  fill_rect(c, 0, 0, 16, 16, {255, 255, 255});
  REQUIRE(c.get(0, 0) == Color{255, 255, 255});
  REQUIRE(c.get(15, 15) == Color{255, 255, 255});
}

TEST_CASE("drawing clips instead of failing") {
  Canvas c(8, 8);
  fill_rect(c, -4, -4, 100, 100, {9, 9, 9});
  draw_line(c, -10, 3, 20, 3, {1, 2, 3});
  fill_circle(c, 0, 0, 20, {7, 7, 7});
  REQUIRE(c.get(7, 7) == Color{7, 7, 7});
}

TEST_CASE("rotation by zero is the identity") {
  Rng rng(1);
  Canvas c(10, 10);
  for (int y = 0; y < 10; ++y)
    for (int x = 0; x < 10; ++x) c.set(x, y, {std::uint8_t(rng.below(256)), 0, 0});
  REQUIRE(rotated_nn(c, 0.0) == c);
  REQUIRE(rotated_nn(c, 360.0) == c);
}

TEST_CASE("four quarter turns reproduce a square sprite") {
  for (int side : {8, 9}) {
    Rng rng{std::uint64_t(side)};
    Canvas c(side, side);
    for (int y = 0; y < side; ++y)
      for (int x = 0; x < side; ++x)
        c.set(x, y, {std::uint8_t(rng.below(256)), std::uint8_t(rng.below(256)), 0});
    Canvas r = c;
    for (int k = 0; k < 4; ++k) r = rotated_nn(r, 90.0);
    REQUIRE(r == c);
  }
}

TEST_CASE("text changes pixels deterministically") {
  Canvas a(64, 16), b(64, 16);
  draw_text(a, 2, 2, "Target", {255, 255, 255});
  REQUIRE(!(a == b));
  Canvas a2(64, 16);
  draw_text(a2, 2, 2, "Target", {255, 255, 255});
  REQUIRE(a == a2);
}

TEST_CASE("png encodes a 1x1 black canvas and decodes it back") {
  Canvas c(1, 1);
  auto bytes = encode_png(c);
  Canvas back = decode_png(bytes);
  REQUIRE(back.width() == 1);
  REQUIRE(back.get(0, 0) == Color{0, 0, 0});
}

TEST_CASE("png bytes are identical for identical canvases") {
  Canvas c(32, 24, {10, 120, 200});
  draw_text(c, 1, 1, "x", {0, 0, 0});
  REQUIRE(encode_png(c) == encode_png(c));
}

TEST_CASE("png round-trips random canvases") {
  Rng rng(42);
  for (int i = 0; i < 5; ++i) {
    Canvas c(17 + int(rng.below(40)), 9 + int(rng.below(40)));
    for (int y = 0; y < c.height(); ++y)
      for (int x = 0; x < c.width(); ++x)
        c.set(x, y, {std::uint8_t(rng.below(256)), std::uint8_t(rng.below(256)),
                     std::uint8_t(rng.below(256))});
    REQUIRE(decode_png(encode_png(c)) == c);
  }
}

TEST_CASE("decode rejects garbage") {
  std::vector<std::uint8_t> junk{1, 2, 3, 4};
  REQUIRE_THROWS(decode_png(junk));
}

TEST_CASE("side-by-side composition dimensions") {
  Canvas a(64, 64), b(64, 64);
  Canvas out = compose_side_by_side(a, b, "Target", "Current", 8);
  REQUIRE(out.width() == 64 + 8 + 64);
  REQUIRE(out.height() == 64 + kPanelHeaderPx);
}

TEST_CASE("single panel keeps its size plus the header") {
  Canvas a(40, 30);
  const Canvas panels[] = {a};
  const std::string labels[] = {std::string("only")};
  Canvas out = compose_side_by_side(std::span<const Canvas>(panels, 1),
                                    std::span<const std::string>(labels, 1), 8);
  REQUIRE(out.width() == 40);
  REQUIRE(out.height() == 30 + kPanelHeaderPx);
}

TEST_CASE("mismatched panel heights are rejected") {
  Canvas a(10, 10), b(10, 12);
  REQUIRE_THROWS_AS(compose_side_by_side(a, b, "a", "b"), std::invalid_argument);
}

TEST_CASE("ascii_frame joins rows") {
  CharGrid g{{"##", "##"}};
  REQUIRE(ascii_frame(g) == "##\n##");
}

TEST_CASE("ascii_frame rejects empty and ragged grids") {
  REQUIRE_THROWS_AS(ascii_frame(CharGrid{}), std::invalid_argument);
  REQUIRE_THROWS_AS(ascii_frame(CharGrid{{"ab", "a"}}), std::invalid_argument);
}

TEST_CASE("from_lines pads to rectangle") {
  CharGrid g = CharGrid::from_lines({"ab", "a"});
  REQUIRE(g.width() == 2);
  REQUIRE(g.rows[1] == "a ");
}

TEST_CASE("scaled_nn hits exact corners") {
  Canvas c(2, 2);
  c.set(0, 0, {1, 0, 0});
  c.set(1, 1, {2, 0, 0});
  Canvas big = scaled_nn(c, 8, 8);
  REQUIRE(big.get(0, 0) == Color{1, 0, 0});
  REQUIRE(big.get(7, 7) == Color{2, 0, 0});
}
