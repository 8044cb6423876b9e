#include <catch2/catch_amalgamated.hpp>

#include "visgym/actions.hpp"
#include "visgym/rng.hpp"

using namespace visgym;

namespace {

ActionCall expect_call(const std::string& raw) {
  auto res = extract_action(raw);
  INFO(raw);
  REQUIRE(std::holds_alternative<ActionCall>(res));
  return std::get<ActionCall>(res);
}

}  // namespace

TEST_CASE("tuple form with flat payload") {
  auto call = expect_call("('swap', (1, 2))");
  REQUIRE(call.name == "swap");
  REQUIRE(call.payload == std::vector<Value>{Value{std::int64_t(1)}, Value{std::int64_t(2)}});
}

TEST_CASE("tuple form with real payload") {
  auto call = expect_call("('rotate', (30.5, 20.4, 15.1))");
  REQUIRE(call.name == "rotate");
  REQUIRE(call.payload == std::vector<Value>{Value{30.5}, Value{20.4}, Value{15.1}});
}

TEST_CASE("zero-arity forms") {
  REQUIRE(expect_call("('stop',)").name == "stop");
  REQUIRE(expect_call("I think... stop()").name == "stop");
  REQUIRE(expect_call("('stop',)").payload.empty());
}

TEST_CASE("last complete match wins") {
  auto call = expect_call("move(1) then move(2)");
  REQUIRE(call.name == "move");
  REQUIRE(call.payload == std::vector<Value>{Value{std::int64_t(2)}});
}

TEST_CASE("appending a literal changes the parse to it") {
  std::string texts[] = {"('move', 1)", "no action here", "swap(1,2) mid text"};
  for (const auto& prefix : texts) {
    auto call = expect_call(prefix + " finally undo()");
    REQUIRE(call.name == "undo");
  }
}

TEST_CASE("call form with bracket list") {
  auto call = expect_call("move([1, 0, 0])");
  REQUIRE(call.payload.size() == 1);
  REQUIRE(std::holds_alternative<std::vector<Scalar>>(call.payload[0]));
}

TEST_CASE("call form with coordinate pairs") {
  auto call = expect_call("swap((0, 0), (0, 1))");
  REQUIRE(call.payload.size() == 2);
  const auto& a = std::get<std::vector<Scalar>>(call.payload[0]);
  REQUIRE(a == std::vector<Scalar>{Scalar{std::int64_t(0)}, Scalar{std::int64_t(0)}});
}

TEST_CASE("nested tuple payload in tuple form") {
  auto call = expect_call("('swap', ((0, 0), (0, 1)))");
  REQUIRE(call.payload.size() == 2);
  REQUIRE(std::holds_alternative<std::vector<Scalar>>(call.payload[1]));
}

TEST_CASE("double quotes accepted") {
  REQUIRE(expect_call("(\"move\", 2)").name == "move");
}

TEST_CASE("bare scalar payload") {
  auto call = expect_call("('move', 2)");
  REQUIRE(call.payload == std::vector<Value>{Value{std::int64_t(2)}});
}

TEST_CASE("negative and decimal numbers") {
  auto call = expect_call("rotate(-30.25)");
  REQUIRE(call.payload == std::vector<Value>{Value{-30.25}});
  REQUIRE(expect_call("move(-3)").payload == std::vector<Value>{Value{std::int64_t(-3)}});
}

TEST_CASE("no match on plain prose") {
  auto res = extract_action("I will go left and then up.");
  REQUIRE(is_parse_error(res));
  REQUIRE(std::get<ParseError>(res).kind == ParseError::Kind::no_match);
  REQUIRE(!std::get<ParseError>(res).span.has_value());
}

TEST_CASE("malformed payload reported with a span") {
  auto res = extract_action("('move', @@)");
  REQUIRE(is_parse_error(res));
  REQUIRE(std::get<ParseError>(res).kind == ParseError::Kind::malformed_payload);
  REQUIRE(std::get<ParseError>(res).span.has_value());
}

TEST_CASE("parser is total over arbitrary byte strings") {
  Rng rng(2024);
  for (int i = 0; i < 3000; ++i) {
    std::string s;
    int len = int(rng.below(80));
    for (int k = 0; k < len; ++k) s.push_back(char(rng.below(256)));
    (void)extract_action(s);  // must not crash or throw
  }
  // Denser in grammar-adjacent characters.
  const std::string alphabet = "()[]'\",.0123456789-+abcmovestp _";
  for (int i = 0; i < 3000; ++i) {
    std::string s;
    int len = int(rng.below(40));
    for (int k = 0; k < len; ++k) s.push_back(alphabet[rng.below(alphabet.size())]);
    (void)extract_action(s);
  }
}

namespace {

ActionCall random_call(Rng& rng) {
  static const std::string names[] = {"move", "swap", "rotate", "reorder", "stop", "place_x"};
  ActionCall call{names[rng.below(6)], {}};
  int arity = int(rng.below(4));
  for (int i = 0; i < arity; ++i) {
    switch (rng.below(3)) {
      case 0: call.payload.emplace_back(std::int64_t(rng.range_int(-99, 99))); break;
      case 1: {
        double v = rng.range_real(-200, 200);
        call.payload.emplace_back(v);
        break;
      }
      default: {
        std::vector<Scalar> items;
        int len = 1 + int(rng.below(4));
        for (int k = 0; k < len; ++k) {
          if (rng.chance(0.5)) items.emplace_back(std::int64_t(rng.range_int(-9, 9)));
          else items.emplace_back(rng.range_real(-50, 50));
        }
        call.payload.emplace_back(std::move(items));
        break;
      }
    }
  }
  return call;
}

}  // namespace

TEST_CASE("canonical repr round-trips") {
  REQUIRE(canonical_repr(make_call("swap", {1, 2})) == "('swap', (1, 2))");
  REQUIRE(canonical_repr(make_call("stop")) == "('stop',)");
  REQUIRE(canonical_repr(make_call_reals("rotate", {-30.0})) == "('rotate', (-30.0,))");

  Rng rng(777);
  for (int i = 0; i < 500; ++i) {
    ActionCall call = random_call(rng);
    auto parsed = extract_action(canonical_repr(call));
    INFO(canonical_repr(call));
    REQUIRE(std::holds_alternative<ActionCall>(parsed));
    REQUIRE(std::get<ActionCall>(parsed) == call);
  }
}

TEST_CASE("round-trip survives surrounding chatter") {
  Rng rng(778);
  for (int i = 0; i < 200; ++i) {
    ActionCall call = random_call(rng);
    std::string text = "thinking about it... " + canonical_repr(call);
    auto parsed = extract_action(text);
    REQUIRE(std::holds_alternative<ActionCall>(parsed));
    REQUIRE(std::get<ActionCall>(parsed) == call);
  }
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

namespace {

std::vector<PayloadSchema> maze_schemas() {
  return {PayloadSchema{"move", {ArgSpec{ArgKind::Int, "direction", 0, {{0, 3}}}}, ""}, stop_schema()};
}

}  // namespace

TEST_CASE("range violation message uses the label") {
  auto violation = validate(make_call("move", {5}), maze_schemas());
  REQUIRE(violation.has_value());
  REQUIRE(*violation == "direction out of range");
}

TEST_CASE("stop validates everywhere") {
  REQUIRE(!validate(make_call("stop"), maze_schemas()).has_value());
}

TEST_CASE("unknown action is a violation") {
  REQUIRE(validate(make_call("fly", {1}), maze_schemas()).has_value());
}

TEST_CASE("real literal rejected for integer slot") {
  auto violation = validate(make_call_reals("move", {1.5}), maze_schemas());
  REQUIRE(violation.has_value());
}

TEST_CASE("integer literal accepted for real slot") {
  std::vector<PayloadSchema> schemas{
      PayloadSchema{"rotate", {ArgSpec{ArgKind::Real, "angle", 0, {{-360, 360}}}}, ""}};
  REQUIRE(!validate(make_call("rotate", {30}), schemas).has_value());
}

TEST_CASE("pair-of-pairs schema accepts jigsaw swaps") {
  std::vector<PayloadSchema> schemas{
      PayloadSchema{"swap",
                    {ArgSpec{ArgKind::Pair, "first tile", 2, {{0, 1}, {0, 1}}},
                     ArgSpec{ArgKind::Pair, "second tile", 2, {{0, 1}, {0, 1}}}},
                    ""}};
  ActionCall call{"swap", {}};
  call.payload.push_back(list_value({0, 0}));
  call.payload.push_back(list_value({0, 1}));
  REQUIRE(!validate(call, schemas).has_value());
  ActionCall bad = call;
  bad.payload[1] = list_value({0, 2});
  REQUIRE(validate(bad, schemas).has_value());
}

TEST_CASE("flat tuple payload normalizes onto a list schema") {
  std::vector<PayloadSchema> schemas{
      PayloadSchema{"rotate", {ArgSpec{ArgKind::RealList, "rotation", 3, {}}}, ""}};
  auto call = expect_call("('rotate', (30.5, 20.4, 15.1))");
  REQUIRE(!validate(call, schemas).has_value());
  auto norm = normalize(call, schemas);
  REQUIRE(norm.payload.size() == 1);
  REQUIRE(std::holds_alternative<std::vector<Scalar>>(norm.payload[0]));
}

TEST_CASE("lone list payload normalizes onto scalar args") {
  std::vector<PayloadSchema> schemas{PayloadSchema{
      "move", {ArgSpec{ArgKind::Int, "block", 0, {{0, 9}}}, ArgSpec{ArgKind::Int, "direction", 0, {{0, 3}}}},
      ""}};
  auto call = expect_call("move([1, 2])");
  REQUIRE(!validate(call, schemas).has_value());
}

TEST_CASE("arity mismatch is reported") {
  auto violation = validate(make_call("move", {1, 2}), maze_schemas());
  REQUIRE(violation.has_value());
  REQUIRE(violation->find("expects 1 argument") != std::string::npos);
}
