#include "noonsim/dsl.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

namespace noonsim::dsl {

ParseError::ParseError(int line, int column, std::string message, std::string token)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                         ": " + message + (token.empty() ? "" : " ('" + token + "')")),
      line_(line),
      column_(column),
      message_(std::move(message)),
      token_(std::move(token)) {}

namespace {

struct Token {
  std::string_view text;
  int column;  // 1-based
};

// Splits on blanks; '=' and '*' are tokens of their own.
std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    if (c == ' ' || c == '\t' || c == '\v' || c == '\f') {
      ++i;
      continue;
    }
    if (c == '=' || c == '*') {
      tokens.push_back({line.substr(i, 1), static_cast<int>(i) + 1});
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\v' &&
           line[i] != '\f' && line[i] != '=' && line[i] != '*') {
      ++i;
    }
    tokens.push_back({line.substr(start, i - start), static_cast<int>(start) + 1});
  }
  return tokens;
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

// [+-]? (digits [. digits?] | . digits) ([eE] [+-]? digits)?
bool is_decimal_literal(std::string_view s) {
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
  std::size_t mantissa_digits = 0;
  while (i < s.size() && is_digit(s[i])) ++i, ++mantissa_digits;
  if (i < s.size() && s[i] == '.') {
    ++i;
    while (i < s.size() && is_digit(s[i])) ++i, ++mantissa_digits;
  }
  if (mantissa_digits == 0) return false;
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    ++i;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
    std::size_t exponent_digits = 0;
    while (i < s.size() && is_digit(s[i])) ++i, ++exponent_digits;
    if (exponent_digits == 0) return false;
  }
  return i == s.size();
}

std::optional<double> to_number(std::string_view s) {
  if (!is_decimal_literal(s)) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

std::optional<std::uint64_t> to_unsigned(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  for (char c : s) {
    if (!is_digit(c)) return std::nullopt;
  }
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

// Statement-level cursor over one line's tokens.
class Statement {
 public:
  Statement(int line_no, std::vector<Token> tokens)
      : line_no_(line_no), tokens_(std::move(tokens)) {}

  bool done() const { return pos_ >= tokens_.size(); }

  [[noreturn]] void fail_at(const Token& t, const std::string& message) const {
    throw ParseError(line_no_, t.column, message, std::string(t.text));
  }

  [[noreturn]] void fail_missing(const std::string& what) const {
    const Token& last = tokens_.back();
    throw ParseError(line_no_, last.column + static_cast<int>(last.text.size()) - 1,
                     "expected " + what + " after '" + std::string(last.text) + "'", "");
  }

  const Token& next(const std::string& what) {
    if (done()) fail_missing(what);
    return tokens_[pos_++];
  }

  const Token& expect(std::string_view keyword) {
    const Token& t = next("'" + std::string(keyword) + "'");
    if (t.text != keyword) fail_at(t, "expected '" + std::string(keyword) + "'");
    return t;
  }

  double number(const std::string& what) {
    const Token& t = next(what);
    const auto v = to_number(t.text);
    if (!v) fail_at(t, "expected " + what + " (a decimal number)");
    return *v;
  }

  int count(const std::string& what) {
    const Token& t = next(what);
    const auto v = to_unsigned(t.text);
    if (!v) fail_at(t, "expected " + what + " (a non-negative integer)");
    if (*v > static_cast<std::uint64_t>(std::numeric_limits<int>::max())) {
      fail_at(t, what + " is out of range");
    }
    return static_cast<int>(*v);
  }

  std::uint64_t seed() {
    const Token& t = next("a seed");
    const auto v = to_unsigned(t.text);
    if (!v) fail_at(t, "expected a seed (a non-negative integer)");
    return *v;
  }

  Cavity cavity() {
    const Token& t = next("a cavity label");
    if (t.text == "A") return Cavity::A;
    if (t.text == "B") return Cavity::B;
    fail_at(t, "unknown cavity (expected A or B)");
  }

  AtomLevel level() {
    const Token& t = next("an atomic level");
    if (t.text == "e") return AtomLevel::Excited;
    if (t.text == "g") return AtomLevel::Ground;
    fail_at(t, "unknown atomic level (expected e or g)");
  }

  double angle() {
    const Token& t = next("an angle");
    if (t.text == "pi") return std::numbers::pi;
    if (t.text == "pi/2") return std::numbers::pi / 2.0;
    const auto v = to_number(t.text);
    if (!v) fail_at(t, "expected an angle (NUMBER, pi, pi/2 or NUMBER * pi)");
    if (!done() && tokens_[pos_].text == "*") {
      ++pos_;
      expect("pi");
      return *v * std::numbers::pi;
    }
    return *v;
  }

  void finish() const {
    if (!done()) fail_at(tokens_[pos_], "unexpected trailing token");
  }

  const Token& previous() const { return tokens_[pos_ - 1]; }
  int line_no() const { return line_no_; }

 private:
  int line_no_;
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

// Where each step came from, for semantic errors raised after parsing.
struct StepOrigin {
  int line;
  int column;
  std::string token;
};

std::vector<std::string_view> split_lines(std::string_view source) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= source.size()) {
    const std::size_t nl = source.find('\n', start);
    std::string_view line = nl == std::string_view::npos ? source.substr(start)
                                                         : source.substr(start, nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  return lines;
}

}  // namespace

Program parse(std::string_view source) {
  constexpr std::string_view kBom = "\xEF\xBB\xBF";
  if (source.starts_with(kBom)) source.remove_prefix(kBom.size());

  Program prog;
  std::vector<StepOrigin> origins;
  StepOrigin cutoff_origin{0, 0, ""};
  const auto lines = split_lines(source);

  for (std::size_t li = 0; li < lines.size(); ++li) {
    std::string_view line = lines[li];
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    auto tokens = tokenize(line);
    if (tokens.empty()) continue;
    Statement st(static_cast<int>(li) + 1, std::move(tokens));

    const Token& head = st.next("a statement");
    if (head.text == "param") {
      const Token& name = st.next("a parameter name");
      if (name.text != "chi" && name.text != "delta") {
        st.fail_at(name, "unknown parameter (expected chi or delta)");
      }
      st.expect("=");
      const double value = st.number("a parameter value");
      (name.text == "chi" ? prog.params.chi : prog.params.delta) = value;
    } else if (head.text == "cutoff") {
      prog.params.cutoff = st.count("a cutoff");
      const Token& t = st.previous();
      cutoff_origin = {st.line_no(), t.column, std::string(t.text)};
      if (prog.params.cutoff < kMinimumCutoff) {
        st.fail_at(t, "cutoff must be at least " + std::to_string(kMinimumCutoff));
      }
    } else if (head.text == "prepare") {
      const Token& what = st.next("'atom' or 'cavity'");
      if (what.text == "atom") {
        const Token& t = st.next("an atom preparation");
        AtomPreparation prep{};
        if (t.text == "e") {
          prep = AtomPreparation::Excited;
        } else if (t.text == "g") {
          prep = AtomPreparation::Ground;
        } else if (t.text == "superposition") {
          prep = AtomPreparation::Superposition;
        } else {
          st.fail_at(t, "unknown atom preparation (expected e, g or superposition)");
        }
        prog.steps.emplace_back(step::PrepareAtom{prep});
        origins.push_back({st.line_no(), head.column, std::string(head.text)});
      } else if (what.text == "cavity") {
        const Cavity cavity = st.cavity();
        st.expect("fock");
        const int n = st.count("a Fock number");
        const Token& t = st.previous();
        prog.steps.emplace_back(step::PrepareCavity{cavity, n});
        origins.push_back({st.line_no(), t.column, std::string(t.text)});
      } else {
        st.fail_at(what, "expected 'atom' or 'cavity'");
      }
    } else if (head.text == "rotate") {
      const double theta = st.angle();
      prog.steps.emplace_back(step::Rotate{theta});
      origins.push_back({st.line_no(), head.column, std::string(head.text)});
    } else if (head.text == "interact") {
      const Cavity cavity = st.cavity();
      const double tau = st.number("an interaction time");
      const Token& t = st.previous();
      if (tau < 0.0) st.fail_at(t, "interaction time must be non-negative");
      prog.steps.emplace_back(step::Interact{cavity, tau});
      origins.push_back({st.line_no(), head.column, std::string(head.text)});
    } else if (head.text == "measure") {
      st.expect("atom");
      step::MeasureAtom m{st.level(), std::nullopt};
      if (!st.done()) {
        st.expect("sample");
        m.seed = st.seed();
      }
      prog.steps.emplace_back(m);
      origins.push_back({st.line_no(), head.column, std::string(head.text)});
    } else {
      st.fail_at(head, "unknown statement");
    }
    st.finish();
  }

  try {
    validate(prog);
  } catch (const ProgramError& e) {
    if (e.step_index() < origins.size()) {
      const auto& o = origins[e.step_index()];
      throw ParseError(o.line, o.column, e.what(), o.token);
    }
    throw ParseError(cutoff_origin.line > 0 ? cutoff_origin.line : 1,
                     cutoff_origin.line > 0 ? cutoff_origin.column : 1, e.what(),
                     cutoff_origin.token);
  }
  return prog;
}

std::string format_number(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
  return std::string(buf, ptr);
}

namespace {

std::string format_angle(double theta) {
  if (theta == std::numbers::pi) return "pi";
  if (theta == std::numbers::pi / 2.0) return "pi/2";
  return format_number(theta);
}

std::string_view preparation_keyword(AtomPreparation prep) {
  switch (prep) {
    case AtomPreparation::Excited:
      return "e";
    case AtomPreparation::Ground:
      return "g";
    case AtomPreparation::Superposition:
      return "superposition";
  }
  return "g";
}

}  // namespace

std::string format(const Program& prog) {
  std::string out;
  out += "param chi = " + format_number(prog.params.chi) + "\n";
  out += "param delta = " + format_number(prog.params.delta) + "\n";
  out += "cutoff " + std::to_string(prog.params.cutoff) + "\n";
  for (const auto& s : prog.steps) {
    if (const auto* st = std::get_if<step::PrepareAtom>(&s)) {
      out += "prepare atom " + std::string(preparation_keyword(st->preparation));
    } else if (const auto* st = std::get_if<step::PrepareCavity>(&s)) {
      out += "prepare cavity " + std::string(to_string(st->cavity)) + " fock " +
             std::to_string(st->fock);
    } else if (const auto* st = std::get_if<step::Rotate>(&s)) {
      out += "rotate " + format_angle(st->theta);
    } else if (const auto* st = std::get_if<step::Interact>(&s)) {
      out += "interact " + std::string(to_string(st->cavity)) + " " + format_number(st->tau);
    } else if (const auto* st = std::get_if<step::MeasureAtom>(&s)) {
      out += "measure atom " + std::string(to_string(st->outcome));
      if (st->seed) out += " sample " + std::to_string(*st->seed);
    }
    out += "\n";
  }
  return out;
}

}  // namespace noonsim::dsl
