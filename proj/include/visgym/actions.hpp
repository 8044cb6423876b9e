#pragma once

#include <charconv>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace visgym {

/// One scalar inside an action payload. Integer and real literals are kept
/// distinct: "2" parses as an integer, "2.0" as a real, and validation never
/// silently coerces a real into an integer slot.
using Scalar = std::variant<std::int64_t, double>;

/// Payload element: a scalar or a flat list of scalars (nesting depth 2).
using Value = std::variant<std::int64_t, double, std::vector<Scalar>>;

/// A parsed agent action: lowercase function name plus typed payload.
struct ActionCall {
  std::string name;
  std::vector<Value> payload;

  bool operator==(const ActionCall&) const = default;
};

struct ParseError {
  enum class Kind { no_match, malformed_payload };
  Kind kind = Kind::no_match;
  std::optional<std::pair<std::size_t, std::size_t>> span;  // [begin, end) of the failing literal
};

using ExtractResult = std::variant<ActionCall, ParseError>;

inline bool is_parse_error(const ExtractResult& r) { return std::holds_alternative<ParseError>(r); }

// ---------------------------------------------------------------------------
// Grammar
//
// Two surface forms are accepted, scanned anywhere in free-form text; the
// LAST complete literal wins:
//
//   tuple form:  ('name',)            ('name', 2)        ('name', (1, 2))
//                ('name', ((0, 0), (0, 1)))
//   call  form:  name()               name(2)            name(1, 2)
//                name([1, 0, 0])      name((0, 0), (0, 1))
//
// Numbers take an optional sign, decimal point and exponent. Whitespace is
// insignificant. Lists nest exactly one level: a payload element is a scalar
// or a flat list of scalars.
// ---------------------------------------------------------------------------

namespace detail {

inline bool name_start(char c) { return (c >= 'a' && c <= 'z') || c == '_'; }
inline bool name_char(char c) { return name_start(c) || (c >= '0' && c <= '9'); }
inline bool ws(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v'; }

struct Cursor {
  std::string_view s;
  std::size_t pos = 0;

  bool done() const { return pos >= s.size(); }
  char peek() const { return s[pos]; }
  bool eat(char c) {
    if (!done() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  void skip_ws() {
    while (!done() && ws(s[pos])) ++pos;
  }
};

inline std::optional<Scalar> parse_number(Cursor& c) {
  std::size_t start = c.pos;
  if (!c.done() && (c.peek() == '+' || c.peek() == '-')) ++c.pos;
  bool digits = false, dot = false, expo = false;
  while (!c.done()) {
    char ch = c.peek();
    if (ch >= '0' && ch <= '9') {
      digits = true;
      ++c.pos;
    } else if (ch == '.' && !dot && !expo) {
      dot = true;
      ++c.pos;
    } else if ((ch == 'e' || ch == 'E') && digits && !expo) {
      expo = true;
      ++c.pos;
      if (!c.done() && (c.peek() == '+' || c.peek() == '-')) ++c.pos;
    } else {
      break;
    }
  }
  if (!digits) {
    c.pos = start;
    return std::nullopt;
  }
  std::string_view text = c.s.substr(start, c.pos - start);
  if (!dot && !expo) {
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || p != text.data() + text.size()) {
      c.pos = start;
      return std::nullopt;
    }
    return Scalar{v};
  }
  double v = 0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || p != text.data() + text.size()) {
    c.pos = start;
    return std::nullopt;
  }
  return Scalar{v};
}

/// Flat list of scalars: "(1, 2)" or "[1, 2]". Trailing comma allowed.
inline std::optional<std::vector<Scalar>> parse_scalar_list(Cursor& c) {
  std::size_t start = c.pos;
  char close;
  if (c.eat('(')) {
    close = ')';
  } else if (c.eat('[')) {
    close = ']';
  } else {
    return std::nullopt;
  }
  std::vector<Scalar> items;
  c.skip_ws();
  if (c.eat(close)) return items;
  while (true) {
    c.skip_ws();
    auto num = parse_number(c);
    if (!num) {
      c.pos = start;
      return std::nullopt;
    }
    items.push_back(*num);
    c.skip_ws();
    if (c.eat(',')) {
      c.skip_ws();
      if (c.eat(close)) return items;  // trailing comma
      continue;
    }
    if (c.eat(close)) return items;
    c.pos = start;
    return std::nullopt;
  }
}

/// Scalar, or one-level list.
inline std::optional<Value> parse_value(Cursor& c) {
  if (!c.done() && (c.peek() == '(' || c.peek() == '[')) {
    auto list = parse_scalar_list(c);
    if (!list) return std::nullopt;
    return Value{std::move(*list)};
  }
  auto num = parse_number(c);
  if (!num) return std::nullopt;
  return std::visit([](auto v) { return Value{v}; }, *num);
}

/// Comma-separated values up to an unconsumed ')'. Used by both forms.
inline bool parse_value_sequence(Cursor& c, std::vector<Value>& out) {
  c.skip_ws();
  if (!c.done() && c.peek() == ')') return true;  // empty
  while (true) {
    c.skip_ws();
    auto v = parse_value(c);
    if (!v) return false;
    out.push_back(std::move(*v));
    c.skip_ws();
    if (c.eat(',')) {
      c.skip_ws();
      if (!c.done() && c.peek() == ')') return true;  // trailing comma
      continue;
    }
    return !c.done() && c.peek() == ')';
  }
}

/// Tuple form, starting at an opening '('. On success the cursor sits one
/// past the closing ')'.
inline std::optional<ActionCall> parse_tuple_form(Cursor& c, bool& progressed) {
  if (!c.eat('(')) return std::nullopt;
  c.skip_ws();
  char quote = 0;
  if (c.eat('\'')) {
    quote = '\'';
  } else if (c.eat('"')) {
    quote = '"';
  } else {
    return std::nullopt;
  }
  ActionCall call;
  if (c.done() || !name_start(c.peek())) return std::nullopt;
  while (!c.done() && name_char(c.peek())) call.name.push_back(c.s[c.pos++]);
  if (!c.eat(quote)) return std::nullopt;
  progressed = true;  // saw a quoted action name: interior failures now count as malformed
  c.skip_ws();
  if (c.eat(')')) return call;  // ('stop')
  if (!c.eat(',')) return std::nullopt;
  c.skip_ws();
  if (c.eat(')')) return call;  // ('stop',)
  // Payload: either a parenthesised tuple whose elements become the payload,
  // or a single bare value.
  if (c.peek() == '(') {
    std::size_t mark = c.pos;
    // Try "payload tuple of values" first: ('swap', ((0,0),(0,1))) or ('move', (1, 2)).
    Cursor inner = c;
    inner.eat('(');
    std::vector<Value> vals;
    if (parse_value_sequence(inner, vals) && inner.eat(')')) {
      inner.skip_ws();
      inner.eat(',');  // optional trailing comma of the outer tuple
      inner.skip_ws();
      if (inner.eat(')')) {
        call.payload = std::move(vals);
        c = inner;
        return call;
      }
    }
    c.pos = mark;
  }
  auto v = parse_value(c);
  if (!v) return std::nullopt;
  call.payload.push_back(std::move(*v));
  c.skip_ws();
  c.eat(',');
  c.skip_ws();
  if (!c.eat(')')) return std::nullopt;
  return call;
}

/// Call form, starting at an identifier. The identifier must not be preceded
/// by a name character (word boundary), checked by the caller.
inline std::optional<ActionCall> parse_call_form(Cursor& c, bool& progressed) {
  ActionCall call;
  if (c.done() || !name_start(c.peek())) return std::nullopt;
  while (!c.done() && name_char(c.peek())) call.name.push_back(c.s[c.pos++]);
  c.skip_ws();
  if (!c.eat('(')) return std::nullopt;
  progressed = true;
  if (!parse_value_sequence(c, call.payload)) return std::nullopt;
  if (!c.eat(')')) return std::nullopt;
  return call;
}

}  // namespace detail

/// Scan free-form agent text and extract the last complete action literal.
/// Total over arbitrary byte strings; never throws.
inline ExtractResult extract_action(std::string_view raw) {
  using namespace detail;
  std::optional<ActionCall> best;
  std::optional<std::pair<std::size_t, std::size_t>> last_malformed;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    char ch = raw[i];
    if (ch == '(') {
      Cursor c{raw, i};
      bool progressed = false;
      if (auto call = parse_tuple_form(c, progressed)) {
        best = std::move(call);
      } else if (progressed) {
        last_malformed = {{i, std::min(c.pos + 1, raw.size())}};
      }
    } else if (name_start(ch) && (i == 0 || !name_char(raw[i - 1]))) {
      Cursor c{raw, i};
      bool progressed = false;
      if (auto call = parse_call_form(c, progressed)) {
        best = std::move(call);
        i = c.pos - 1;  // skip past the literal; nothing inside can restart a match
      } else if (progressed) {
        last_malformed = {{i, std::min(c.pos + 1, raw.size())}};
      }
    }
  }
  if (best) return std::move(*best);
  ParseError err;
  if (last_malformed) {
    err.kind = ParseError::Kind::malformed_payload;
    err.span = last_malformed;
  }
  return err;
}

// ---------------------------------------------------------------------------
// Schemas
// ---------------------------------------------------------------------------

enum class ArgKind { Int, Real, IntList, RealList, Pair };

struct Interval {
  double lo, hi;  // closed
};

struct ArgSpec {
  ArgKind kind = ArgKind::Int;
  std::string label;             // appears in violation messages
  int len = 0;                   // list length; Pair is always 2
  std::vector<Interval> ranges;  // empty = unbounded; 1 = uniform; len = per element
  bool permutation = false;      // IntList that should be a permutation (sampling hint)
};

struct PayloadSchema {
  std::string action;
  std::vector<ArgSpec> args;
  std::string doc;  // one-line signature description for instructions
};

inline PayloadSchema stop_schema() { return {"stop", {}, "stop(): end the episode and collect the reward."}; }

namespace detail {

inline bool scalar_is_int(const Scalar& s) { return std::holds_alternative<std::int64_t>(s); }
inline double scalar_real(const Scalar& s) {
  return scalar_is_int(s) ? static_cast<double>(std::get<std::int64_t>(s)) : std::get<double>(s);
}

inline const Interval* range_for(const ArgSpec& a, std::size_t elem) {
  if (a.ranges.empty()) return nullptr;
  if (a.ranges.size() == 1) return &a.ranges[0];
  return elem < a.ranges.size() ? &a.ranges[elem] : nullptr;
}

inline bool in_range(const Interval& r, double v) { return v >= r.lo && v <= r.hi; }

}  // namespace detail

namespace detail {

inline bool all_scalar_args(const PayloadSchema& s) {
  for (const auto& a : s.args)
    if (a.kind != ArgKind::Int && a.kind != ArgKind::Real) return false;
  return !s.args.empty();
}

}  // namespace detail

/// Bridge the two surface forms onto one payload shape. The tuple form writes
/// a list parameter as a flat payload tuple — ('rotate', (30.5, 20.4, 15.1))
/// — while the call form writes rotate([30.5, 20.4, 15.1]); both must hit the
/// same schema. Rules: a lone list payload unpacks onto an all-scalar schema,
/// and flat scalars fold into a single expected list argument.
inline ActionCall normalize_for_schema(const ActionCall& call, const PayloadSchema& schema) {
  using namespace detail;
  if (call.payload.size() == 1 && std::holds_alternative<std::vector<Scalar>>(call.payload[0]) &&
      all_scalar_args(schema) && schema.args.size() == std::get<std::vector<Scalar>>(call.payload[0]).size()) {
    ActionCall out{call.name, {}};
    for (const Scalar& s : std::get<std::vector<Scalar>>(call.payload[0]))
      out.payload.push_back(std::visit([](auto v) { return Value{v}; }, s));
    return out;
  }
  if (schema.args.size() == 1 &&
      (schema.args[0].kind == ArgKind::IntList || schema.args[0].kind == ArgKind::RealList) &&
      call.payload.size() >= 1 && !std::holds_alternative<std::vector<Scalar>>(call.payload[0]) &&
      (schema.args[0].len == 0 || int(call.payload.size()) == schema.args[0].len)) {
    bool flat = true;
    std::vector<Scalar> items;
    for (const Value& v : call.payload) {
      if (std::holds_alternative<std::int64_t>(v))
        items.emplace_back(std::get<std::int64_t>(v));
      else if (std::holds_alternative<double>(v))
        items.emplace_back(std::get<double>(v));
      else
        flat = false;
    }
    if (flat) return ActionCall{call.name, {Value{std::move(items)}}};
  }
  return call;
}

namespace detail {

inline std::optional<std::string> check_against(const ActionCall& call, const PayloadSchema& schema) {
  if (call.payload.size() != schema.args.size()) {
    return call.name + " expects " + std::to_string(schema.args.size()) + " argument(s), got " +
           std::to_string(call.payload.size());
  }
  for (std::size_t i = 0; i < schema.args.size(); ++i) {
    const ArgSpec& spec = schema.args[i];
    const Value& v = call.payload[i];
    switch (spec.kind) {
      case ArgKind::Int: {
        if (!std::holds_alternative<std::int64_t>(v)) return spec.label + " must be an integer";
        if (auto* r = range_for(spec, 0); r && !in_range(*r, double(std::get<std::int64_t>(v))))
          return spec.label + " out of range";
        break;
      }
      case ArgKind::Real: {
        double x;
        if (std::holds_alternative<double>(v))
          x = std::get<double>(v);
        else if (std::holds_alternative<std::int64_t>(v))
          x = double(std::get<std::int64_t>(v));
        else
          return spec.label + " must be a number";
        if (auto* r = range_for(spec, 0); r && !in_range(*r, x)) return spec.label + " out of range";
        break;
      }
      case ArgKind::IntList:
      case ArgKind::RealList:
      case ArgKind::Pair: {
        if (!std::holds_alternative<std::vector<Scalar>>(v)) return spec.label + " must be a list";
        const auto& items = std::get<std::vector<Scalar>>(v);
        int want = spec.kind == ArgKind::Pair ? 2 : spec.len;
        if (want > 0 && int(items.size()) != want)
          return spec.label + " must have " + std::to_string(want) + " elements";
        for (std::size_t k = 0; k < items.size(); ++k) {
          if ((spec.kind == ArgKind::IntList || spec.kind == ArgKind::Pair) && !scalar_is_int(items[k]))
            return spec.label + " elements must be integers";
          if (auto* r = range_for(spec, k); r && !in_range(*r, scalar_real(items[k])))
            return spec.label + " out of range";
        }
        break;
      }
    }
  }
  return std::nullopt;
}

}  // namespace detail

inline const PayloadSchema* find_schema(const std::vector<PayloadSchema>& schemas, std::string_view name) {
  for (const auto& s : schemas)
    if (s.action == name) return &s;
  return nullptr;
}

/// Schema check for a parsed call. Returns std::nullopt when the call is
/// acceptable, otherwise a human-readable reason that becomes env feedback.
inline std::optional<std::string> validate(const ActionCall& call, const std::vector<PayloadSchema>& schemas) {
  const PayloadSchema* schema = find_schema(schemas, call.name);
  if (!schema) return "unknown action '" + call.name + "'";
  return detail::check_against(normalize_for_schema(call, *schema), *schema);
}

/// validate() plus the normalized call the environment should apply.
inline ActionCall normalize(const ActionCall& call, const std::vector<PayloadSchema>& schemas) {
  const PayloadSchema* schema = find_schema(schemas, call.name);
  return schema ? normalize_for_schema(call, *schema) : call;
}

// ---------------------------------------------------------------------------
// Canonical text form: round-trips through extract_action.
// ---------------------------------------------------------------------------

namespace detail {

inline void format_real(std::string& out, double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  std::string_view t(buf, p - buf);
  out.append(t);
  if (t.find('.') == std::string_view::npos && t.find('e') == std::string_view::npos &&
      t.find("inf") == std::string_view::npos && t.find("nan") == std::string_view::npos)
    out.append(".0");
}

inline void format_scalar(std::string& out, const Scalar& s) {
  if (scalar_is_int(s))
    out.append(std::to_string(std::get<std::int64_t>(s)));
  else
    format_real(out, std::get<double>(s));
}

}  // namespace detail

/// "('swap', (1, 2))", "('stop',)", "('rotate', (-30.0,))".
inline std::string canonical_repr(const ActionCall& call) {
  using namespace detail;
  std::string out = "('" + call.name + "'";
  if (call.payload.empty()) {
    out += ",)";
    return out;
  }
  out += ", (";
  for (std::size_t i = 0; i < call.payload.size(); ++i) {
    if (i) out += ", ";
    const Value& v = call.payload[i];
    if (std::holds_alternative<std::vector<Scalar>>(v)) {
      const auto& items = std::get<std::vector<Scalar>>(v);
      out += "(";
      for (std::size_t k = 0; k < items.size(); ++k) {
        if (k) out += ", ";
        format_scalar(out, items[k]);
      }
      if (items.size() == 1) out += ",";
      out += ")";
    } else if (std::holds_alternative<std::int64_t>(v)) {
      out += std::to_string(std::get<std::int64_t>(v));
    } else {
      format_real(out, std::get<double>(v));
    }
  }
  if (call.payload.size() == 1) out += ",";
  out += "))";
  return out;
}

// Payload construction helpers used by envs, solvers and tests.
inline ActionCall make_call(std::string name) { return {std::move(name), {}}; }
inline ActionCall make_call(std::string name, std::initializer_list<std::int64_t> ints) {
  ActionCall c{std::move(name), {}};
  for (auto v : ints) c.payload.emplace_back(v);
  return c;
}
inline ActionCall make_call_reals(std::string name, std::initializer_list<double> reals) {
  ActionCall c{std::move(name), {}};
  for (auto v : reals) c.payload.emplace_back(v);
  return c;
}
inline Value list_value(std::initializer_list<std::int64_t> ints) {
  std::vector<Scalar> s;
  for (auto v : ints) s.emplace_back(v);
  return Value{std::move(s)};
}
inline Value list_value_reals(std::initializer_list<double> reals) {
  std::vector<Scalar> s;
  for (auto v : reals) s.emplace_back(v);
  return Value{std::move(s)};
}

}  // namespace visgym
