#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "srclab/errors.hpp"
#include "srclab/expression.hpp"
#include "srclab/manifold.hpp"

namespace srclab {

// Line-oriented manifold description:
//
//   manifold <name>
//   dim <int>
//   hdim <int>
//   coords <name>+
//   box <coord> <lo> <hi>          (optional, repeatable)
//   hframe
//     <Name> = <vfexpr>            (exactly hdim lines)
//   vframe
//     <Name> = <vfexpr>            (exactly dim - hdim lines)
//   metric identity | metric rows
//     <expr> <expr> ...            (hdim rows of hdim entries)
//   oneform <expr> ...             (optional, hdim entries)
//
// vfexpr is a signed sum of `d<coord>` or `<coef> d<coord>` terms, where
// <coef> is a product-level expression (sums must be parenthesized) and may
// be joined to the differential by an optional '*'. Entries in a row are
// separated by whitespace or commas; an entry ends where the next token
// cannot continue it, so a negative entry after another entry needs
// parentheses. '#' starts a comment.

struct SourceLocation {
  int line = 0;
  int column = 0;
};

struct SpecDocument {
  std::string text;
  ManifoldSpec spec;
  /// Declaration keys ("dim", "hframe", "hframe:X1", "metric:2", ...) to
  /// their position in `text`.
  std::map<std::string, SourceLocation> locations;
};

namespace detail {

inline bool is_function_name(std::string_view s) {
  return s == "sin" || s == "cos" || s == "exp" || s == "log" || s == "sqrt";
}

inline bool is_keyword(std::string_view s) {
  static const char* kw[] = {"manifold", "dim", "hdim", "coords", "box", "hframe", "vframe", "metric", "oneform"};
  return std::find(std::begin(kw), std::end(kw), s) != std::end(kw);
}

struct Token {
  enum class Kind { kNumber, kIdent, kSymbol, kString, kEnd };
  Kind kind = Kind::kEnd;
  std::string text;
  double number = 0.0;
  bool integral = false;
  int column = 0;
};

inline std::vector<Token> tokenize(std::string_view line, int lineno) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    const int col = static_cast<int>(i) + 1;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && i + 1 < line.size() &&
                                                               std::isdigit(static_cast<unsigned char>(line[i + 1])))) {
      std::size_t j = i;
      bool integral = true;
      while (j < line.size() && std::isdigit(static_cast<unsigned char>(line[j]))) ++j;
      if (j < line.size() && line[j] == '.') {
        integral = false;
        ++j;
        while (j < line.size() && std::isdigit(static_cast<unsigned char>(line[j]))) ++j;
      }
      if (j < line.size() && (line[j] == 'e' || line[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < line.size() && (line[k] == '+' || line[k] == '-')) ++k;
        if (k < line.size() && std::isdigit(static_cast<unsigned char>(line[k]))) {
          integral = false;
          while (k < line.size() && std::isdigit(static_cast<unsigned char>(line[k]))) ++k;
          j = k;
        }
      }
      Token t{Token::Kind::kNumber, std::string(line.substr(i, j - i)), 0.0, integral, col};
      auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.number);
      if (ec != std::errc() || p != t.text.data() + t.text.size()) {
        throw ParseError(lineno, col, "malformed number '" + t.text + "'");
      }
      out.push_back(std::move(t));
      i = j;
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < line.size() && (std::isalnum(static_cast<unsigned char>(line[j])) || line[j] == '_')) ++j;
      out.push_back({Token::Kind::kIdent, std::string(line.substr(i, j - i)), 0.0, false, col});
      i = j;
    } else if (c == '"') {
      const std::size_t j = line.find('"', i + 1);
      if (j == std::string_view::npos) throw ParseError(lineno, col, "unterminated string");
      out.push_back({Token::Kind::kString, std::string(line.substr(i + 1, j - i - 1)), 0.0, false, col});
      i = j + 1;
    } else if (std::string_view("+-*/^()=,").find(c) != std::string_view::npos) {
      out.push_back({Token::Kind::kSymbol, std::string(1, c), 0.0, false, col});
      ++i;
    } else {
      throw ParseError(lineno, col, std::string("unexpected character '") + c + "'");
    }
  }
  out.push_back({Token::Kind::kEnd, "", 0.0, false, static_cast<int>(line.size()) + 1});
  return out;
}

/// Recursive-descent parser over the tokens of one line.
class LineParser {
 public:
  LineParser(std::vector<Token> tokens, int lineno, const std::vector<std::string>& coords)
      : toks_(std::move(tokens)), line_(lineno), coords_(coords) {}

  const Token& peek(int ahead = 0) const {
    const std::size_t k = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[k];
  }
  bool at_end() const { return peek().kind == Token::Kind::kEnd; }
  bool is_symbol(const char* s, int ahead = 0) const {
    return peek(ahead).kind == Token::Kind::kSymbol && peek(ahead).text == s;
  }
  Token take() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

  [[noreturn]] void fail(const std::string& msg, int ahead = 0) const {
    const Token& t = peek(ahead);
    const std::string found = t.kind == Token::Kind::kEnd ? "end of line" : "'" + t.text + "'";
    throw ParseError(line_, t.column, msg + ", found " + found);
  }

  void expect_symbol(const char* s) {
    if (!is_symbol(s)) fail(std::string("expected '") + s + "'");
    take();
  }

  void expect_end() {
    if (!at_end()) fail("expected end of line");
  }

  std::string expect_ident(const char* what) {
    if (peek().kind != Token::Kind::kIdent) fail(std::string("expected ") + what);
    return take().text;
  }

  long expect_integer(const char* what) {
    if (peek().kind != Token::Kind::kNumber || !peek().integral) fail(std::string("expected ") + what);
    return static_cast<long>(take().number);
  }

  double expect_signed_number(const char* what) {
    double sign = 1.0;
    if (is_symbol("-")) {
      take();
      sign = -1.0;
    } else if (is_symbol("+")) {
      take();
    }
    if (peek().kind != Token::Kind::kNumber) fail(std::string("expected ") + what);
    return sign * take().number;
  }

  int coordinate_index(const std::string& name) const {
    auto it = std::find(coords_.begin(), coords_.end(), name);
    return it == coords_.end() ? -1 : static_cast<int>(it - coords_.begin());
  }

  /// Coordinate index named by a differential token `d<coord>`, or -1.
  int differential(int ahead = 0) const {
    const Token& t = peek(ahead);
    if (t.kind != Token::Kind::kIdent || t.text.size() < 2 || t.text[0] != 'd') return -1;
    if (coordinate_index(t.text) >= 0 || is_function_name(t.text)) return -1;
    return coordinate_index(t.text.substr(1));
  }

  Expression expression() {
    Expression e = term();
    while (is_symbol("+") || is_symbol("-")) {
      const bool plus = take().text == "+";
      Expression r = term();
      e = plus ? e + r : e - r;
    }
    return e;
  }

  /// Product-level expression. With `stop_at_differential`, a '*' followed
  /// by a differential ends the term and is consumed.
  Expression term(bool stop_at_differential = false) {
    Expression e = unary();
    while (is_symbol("*") || is_symbol("/")) {
      if (stop_at_differential && is_symbol("*") && differential(1) >= 0) {
        take();
        break;
      }
      const bool mul = take().text == "*";
      Expression r = unary();
      e = mul ? e * r : e / r;
    }
    return e;
  }

  Expression unary() {
    if (is_symbol("-")) {
      take();
      return -unary();
    }
    if (is_symbol("+")) {
      take();
      return unary();
    }
    return power();
  }

  Expression power() {
    Expression base = primary();
    if (is_symbol("^")) {
      take();
      return Expression::power(std::move(base), exponent());
    }
    return base;
  }

  int exponent() {
    if (peek().kind != Token::Kind::kNumber || !peek().integral) fail("expected a non-negative integer exponent");
    const double v = take().number;
    if (v > 64) throw ParseError(line_, peek().column, "exponent too large");
    int e = static_cast<int>(v);
    if (is_symbol("^")) {
      take();
      const int inner = exponent();
      long r = 1;
      for (int k = 0; k < inner; ++k) {
        r *= e;
        if (r > 64) throw ParseError(line_, peek().column, "exponent too large");
      }
      e = static_cast<int>(r);
    }
    return e;
  }

  Expression primary() {
    const Token& t = peek();
    if (t.kind == Token::Kind::kNumber) return Expression::constant(take().number);
    if (is_symbol("(")) {
      take();
      Expression e = expression();
      expect_symbol(")");
      return e;
    }
    if (t.kind == Token::Kind::kIdent) {
      if (is_function_name(t.text)) {
        const std::string name = take().text;
        expect_symbol("(");
        Expression arg = expression();
        expect_symbol(")");
        Function f = Function::kSin;
        if (name == "cos") f = Function::kCos;
        if (name == "exp") f = Function::kExp;
        if (name == "log") f = Function::kLog;
        if (name == "sqrt") f = Function::kSqrt;
        return Expression::apply(f, std::move(arg));
      }
      const int idx = coordinate_index(t.text);
      if (idx < 0) fail("unknown identifier; expected a coordinate, number, function or '('");
      take();
      return Expression::coordinate(idx);
    }
    fail("expected an expression");
  }

  /// Sum of `[coef [*]] d<coord>` terms.
  std::vector<Expression> vector_field(int n) {
    std::vector<std::optional<Expression>> comps(n);
    bool first = true;
    while (true) {
      bool negative = false;
      if (is_symbol("-") || is_symbol("+")) {
        negative = take().text == "-";
      } else if (!first) {
        break;
      }
      Expression coef = Expression::constant(1.0);
      if (differential() < 0) coef = term(true);
      const int k = differential();
      if (k < 0) fail("expected a differential d<coord>");
      take();
      if (negative) coef = -coef;
      comps[k] = comps[k] ? *comps[k] + coef : coef;
      first = false;
      if (at_end()) break;
      if (!is_symbol("+") && !is_symbol("-")) fail("expected '+', '-' or end of line");
    }
    std::vector<Expression> out;
    for (auto& c : comps) out.push_back(c ? *c : Expression::constant(0.0));
    return out;
  }

  /// Whitespace- or comma-separated expressions up to end of line.
  std::vector<Expression> entries() {
    std::vector<Expression> out;
    while (!at_end()) {
      out.push_back(expression());
      if (is_symbol(",")) take();
    }
    return out;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  int line_;
  const std::vector<std::string>& coords_;
};

struct SourceLine {
  int number;
  std::string text;
};

inline std::vector<SourceLine> significant_lines(std::string_view text) {
  std::vector<SourceLine> out;
  int lineno = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++lineno;
    std::string line(text.substr(start, end - start));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    // '#' inside a quoted name does not start a comment.
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line.resize(i);
        break;
      }
    }
    if (line.find_first_not_of(" \t") != std::string::npos) out.push_back({lineno, line});
    if (end == text.size()) break;
    start = end + 1;
  }
  return out;
}

inline std::string first_word(const std::string& line) {
  const std::size_t b = line.find_first_not_of(" \t");
  const std::size_t e = line.find_first_of(" \t", b);
  return line.substr(b, e == std::string::npos ? std::string::npos : e - b);
}

}  // namespace detail

/// Parses a manifold description. Syntax problems raise ParseError with a
/// location; count and shape problems raise ValidationError with a line.
inline SpecDocument parse_document(std::string_view text) {
  using detail::LineParser;
  using detail::Token;
  SpecDocument doc;
  doc.text = std::string(text);
  ManifoldSpec& s = doc.spec;
  const auto lines = detail::significant_lines(text);
  std::size_t at = 0;
  const int eof_line = lines.empty() ? 1 : lines.back().number + 1;
  const std::vector<std::string> no_coords;

  auto parser_for = [&](const detail::SourceLine& l, const std::vector<std::string>& coords) {
    return LineParser(detail::tokenize(l.text, l.number), l.number, coords);
  };
  auto require_keyword = [&](const char* kw) -> const detail::SourceLine& {
    if (at >= lines.size()) throw ParseError(eof_line, 1, std::string("expected '") + kw + "', found end of input");
    const auto& l = lines[at];
    if (detail::first_word(l.text) != kw) {
      const int col = static_cast<int>(l.text.find_first_not_of(" \t")) + 1;
      throw ParseError(l.number, col, std::string("expected '") + kw + "', found '" + detail::first_word(l.text) + "'");
    }
    doc.locations[kw] = {l.number, static_cast<int>(l.text.find(kw)) + 1};
    return lines[at++];
  };

  {
    const auto& l = require_keyword("manifold");
    const std::size_t kw = l.text.find("manifold") + 8;
    const std::size_t b = l.text.find_first_not_of(" \t", kw);
    if (b == std::string::npos) throw ParseError(l.number, static_cast<int>(l.text.size()) + 1, "expected a manifold name");
    const std::size_t e = l.text.find_last_not_of(" \t") + 1;
    if (l.text[b] == '"') {
      const std::size_t q = l.text.find('"', b + 1);
      if (q == std::string::npos) throw ParseError(l.number, static_cast<int>(b) + 1, "unterminated string");
      if (q + 1 != e) throw ParseError(l.number, static_cast<int>(q) + 2, "unexpected text after the manifold name");
      s.name = l.text.substr(b + 1, q - b - 1);
    } else {
      s.name = l.text.substr(b, e - b);
    }
  }
  int dim_line = 0;
  {
    const auto& l = require_keyword("dim");
    dim_line = l.number;
    auto p = parser_for(l, no_coords);
    p.take();
    const long v = p.expect_integer("an integer dimension");
    if (v < 1 || v > 64) throw ValidationError(l.number, "dimension must be between 1 and 64");
    s.n = static_cast<int>(v);
    p.expect_end();
  }
  {
    const auto& l = require_keyword("hdim");
    auto p = parser_for(l, no_coords);
    p.take();
    const long v = p.expect_integer("an integer horizontal rank");
    if (v < 2 || v >= s.n) {
      throw ValidationError(l.number, "hdim must satisfy 2 <= hdim < dim (dim is " + std::to_string(s.n) + ")");
    }
    s.ell = static_cast<int>(v);
    p.expect_end();
  }
  {
    const auto& l = require_keyword("coords");
    auto p = parser_for(l, no_coords);
    p.take();
    while (!p.at_end()) {
      const Token t = p.peek();
      const std::string name = p.expect_ident("a coordinate name");
      if (detail::is_function_name(name) || detail::is_keyword(name)) {
        throw ParseError(l.number, t.column, "'" + name + "' is reserved and cannot name a coordinate");
      }
      if (std::find(s.coords.begin(), s.coords.end(), name) != s.coords.end()) {
        throw ParseError(l.number, t.column, "duplicate coordinate '" + name + "'");
      }
      s.coords.push_back(name);
    }
    if (static_cast<int>(s.coords.size()) != s.n) {
      throw ValidationError(l.number, "coords lists " + std::to_string(s.coords.size()) + " names but dim is " +
                                          std::to_string(s.n) + " (dim declared on line " +
                                          std::to_string(dim_line) + ")");
    }
    for (const auto& c : s.coords) {
      if (c.size() > 1 && c[0] == 'd' &&
          std::find(s.coords.begin(), s.coords.end(), c.substr(1)) != s.coords.end()) {
        throw ValidationError(l.number, "coordinate '" + c + "' collides with the differential of '" + c.substr(1) +
                                            "'");
      }
    }
  }
  while (at < lines.size() && detail::first_word(lines[at].text) == "box") {
    const auto& l = lines[at++];
    if (s.box.empty()) s.box.assign(s.n, CoordinateRange{});
    auto p = parser_for(l, s.coords);
    p.take();
    const Token t = p.peek();
    const int idx = p.coordinate_index(p.expect_ident("a coordinate name"));
    if (idx < 0) throw ParseError(l.number, t.column, "unknown coordinate in box");
    const double lo = p.expect_signed_number("a lower bound");
    const double hi = p.expect_signed_number("an upper bound");
    p.expect_end();
    if (!(lo < hi)) throw ValidationError(l.number, "box range is empty");
    s.box[idx] = {lo, hi};
  }

  auto frame_block = [&](const char* kw, int expected, std::vector<VectorFieldSpec>& out) {
    const auto& head = require_keyword(kw);
    {
      auto p = parser_for(head, no_coords);
      p.take();
      p.expect_end();
    }
    while (at < lines.size() && !detail::is_keyword(detail::first_word(lines[at].text))) {
      const auto& l = lines[at++];
      auto p = parser_for(l, s.coords);
      VectorFieldSpec v;
      v.name = p.expect_ident("a field name");
      p.expect_symbol("=");
      v.components = p.vector_field(s.n);
      p.expect_end();
      for (const auto& prev : s.hframe)
        if (prev.name == v.name) throw ValidationError(l.number, "duplicate frame field name '" + v.name + "'");
      for (const auto& prev : out)
        if (prev.name == v.name) throw ValidationError(l.number, "duplicate frame field name '" + v.name + "'");
      doc.locations[std::string(kw) + ":" + v.name] = {l.number, 1};
      out.push_back(std::move(v));
    }
    if (static_cast<int>(out.size()) != expected) {
      throw ValidationError(head.number, std::string(kw) + " declares " + std::to_string(out.size()) +
                                             " fields, expected " + std::to_string(expected));
    }
  };
  frame_block("hframe", s.ell, s.hframe);
  frame_block("vframe", s.n - s.ell, s.vframe);

  {
    const auto& head = require_keyword("metric");
    auto p = parser_for(head, no_coords);
    p.take();
    const Token t = p.peek();
    const std::string mode = p.expect_ident("'identity' or 'rows'");
    p.expect_end();
    if (mode == "identity") {
      s.metric = identity_metric(s.ell);
    } else if (mode == "rows") {
      while (at < lines.size() && !detail::is_keyword(detail::first_word(lines[at].text))) {
        const auto& l = lines[at++];
        auto rp = parser_for(l, s.coords);
        auto row = rp.entries();
        if (static_cast<int>(row.size()) != s.ell) {
          throw ValidationError(l.number, "metric row has " + std::to_string(row.size()) + " entries, expected " +
                                              std::to_string(s.ell));
        }
        doc.locations["metric:" + std::to_string(s.metric.size() + 1)] = {l.number, 1};
        s.metric.push_back(std::move(row));
      }
      if (static_cast<int>(s.metric.size()) != s.ell) {
        throw ValidationError(head.number, "metric has " + std::to_string(s.metric.size()) + " rows, expected " +
                                               std::to_string(s.ell));
      }
      for (int i = 0; i < s.ell; ++i)
        for (int j = i + 1; j < s.ell; ++j)
          if (!equivalent(s.metric[i][j], s.metric[j][i])) {
            throw ValidationError(doc.locations["metric:" + std::to_string(j + 1)].line,
                                  "metric is not symmetric at entry (" + std::to_string(i + 1) + "," +
                                      std::to_string(j + 1) + ")");
          }
    } else {
      throw ParseError(head.number, t.column, "expected 'identity' or 'rows', found '" + mode + "'");
    }
  }

  if (at < lines.size() && detail::first_word(lines[at].text) == "oneform") {
    const auto& l = require_keyword("oneform");
    auto p = parser_for(l, s.coords);
    p.take();
    auto comps = p.entries();
    if (static_cast<int>(comps.size()) != s.ell) {
      throw ValidationError(l.number, "oneform has " + std::to_string(comps.size()) + " entries, expected " +
                                          std::to_string(s.ell));
    }
    s.oneform = std::move(comps);
  }
  if (at < lines.size()) {
    const auto& l = lines[at];
    throw ParseError(l.number, static_cast<int>(l.text.find_first_not_of(" \t")) + 1,
                     "unexpected '" + detail::first_word(l.text) + "' after the end of the description");
  }
  validate(s, doc.locations["manifold"].line);
  return doc;
}

inline ManifoldSpec parse_manifold(std::string_view text) { return parse_document(text).spec; }

/// Parses a standalone expression over the given coordinate names.
inline Expression parse_expression(std::string_view text, const std::vector<std::string>& coords, int lineno = 1) {
  detail::LineParser p(detail::tokenize(text, lineno), lineno, coords);
  Expression e = p.expression();
  p.expect_end();
  return e;
}

/// Parses `dx - (y/2) dz` style vector fields.
inline VectorFieldSpec parse_vector_field(std::string_view text, const std::vector<std::string>& coords) {
  detail::LineParser p(detail::tokenize(text, 1), 1, coords);
  VectorFieldSpec v;
  v.components = p.vector_field(static_cast<int>(coords.size()));
  p.expect_end();
  return v;
}

/// One expression per significant line.
inline std::vector<Expression> parse_oneform_lines(std::string_view text, const std::vector<std::string>& coords) {
  std::vector<Expression> out;
  for (const auto& l : detail::significant_lines(text)) out.push_back(parse_expression(l.text, coords, l.number));
  return out;
}

inline std::string serialize_vector_field(const VectorFieldSpec& v, const std::vector<std::string>& coords) {
  std::string out;
  for (std::size_t k = 0; k < v.components.size(); ++k) {
    const Expression c = canonicalize(v.components[k]);
    if (c.is_constant(0.0)) continue;
    if (!out.empty()) out += " + ";
    out += to_string(v.components[k], coords) + " * d" + coords[k];
  }
  if (out.empty()) out = "0 * d" + coords.at(0);
  return out;
}

/// Writes `s` back in the description format; parsing the result yields an
/// equivalent spec.
inline std::string serialize(const ManifoldSpec& s) {
  std::ostringstream o;
  o << "manifold \"" << s.name << "\"\n";
  o << "dim " << s.n << "\n";
  o << "hdim " << s.ell << "\n";
  o << "coords";
  for (const auto& c : s.coords) o << ' ' << c;
  o << "\n";
  for (std::size_t k = 0; k < s.box.size(); ++k) {
    if (s.box[k] == CoordinateRange{}) continue;
    o << "box " << s.coords[k] << ' ' << format_number(s.box[k].lo) << ' ' << format_number(s.box[k].hi) << "\n";
  }
  o << "hframe\n";
  for (const auto& f : s.hframe) o << "  " << f.name << " = " << serialize_vector_field(f, s.coords) << "\n";
  o << "vframe\n";
  for (const auto& f : s.vframe) o << "  " << f.name << " = " << serialize_vector_field(f, s.coords) << "\n";
  bool identity = true;
  for (int i = 0; i < s.ell; ++i)
    for (int j = 0; j < s.ell; ++j)
      if (!(s.metric[i][j] == identity_entry(i, j))) identity = false;
  if (identity) {
    o << "metric identity\n";
  } else {
    o << "metric rows\n";
    for (const auto& row : s.metric) {
      o << " ";
      for (const auto& e : row) o << ' ' << to_string(e, s.coords);
      o << "\n";
    }
  }
  if (s.oneform) {
    o << "oneform";
    for (const auto& e : *s.oneform) o << ' ' << to_string(e, s.coords);
    o << "\n";
  }
  return o.str();
}

/// Structural equality after canonicalization.
inline bool equivalent(const ManifoldSpec& a, const ManifoldSpec& b) {
  auto same_exprs = [](const std::vector<Expression>& x, const std::vector<Expression>& y) {
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (!equivalent(x[i], y[i])) return false;
    return true;
  };
  auto same_frames = [&](const std::vector<VectorFieldSpec>& x, const std::vector<VectorFieldSpec>& y) {
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x[i].name != y[i].name || !same_exprs(x[i].components, y[i].components)) return false;
    return true;
  };
  auto normalized_box = [](const ManifoldSpec& s) {
    return s.box.empty() ? std::vector<CoordinateRange>(s.n) : s.box;
  };
  if (a.name != b.name || a.n != b.n || a.ell != b.ell || a.coords != b.coords) return false;
  if (!same_frames(a.hframe, b.hframe) || !same_frames(a.vframe, b.vframe)) return false;
  if (a.metric.size() != b.metric.size()) return false;
  for (std::size_t i = 0; i < a.metric.size(); ++i)
    if (!same_exprs(a.metric[i], b.metric[i])) return false;
  if (a.oneform.has_value() != b.oneform.has_value()) return false;
  if (a.oneform && !same_exprs(*a.oneform, *b.oneform)) return false;
  return normalized_box(a) == normalized_box(b);
}

}  // namespace srclab
