#include <cctype>
#include <charconv>
#include <set>

#include "gtl/error.hpp"
#include "gtl/formula.hpp"

namespace gtl {

namespace {

enum class Tok {
  End, LParen, RParen, LBracket, RBracket, Bang, Amp, Bar, Arrow, Colon, Le, Ge,
  Word, Number, Param
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 1;
  int column = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : s_(text) {}

  Token next() {
    skip_space();
    Token t;
    t.line = line_;
    t.column = col_;
    if (pos_ >= s_.size()) return t;
    char c = s_[pos_];
    auto single = [&](Tok k) {
      t.kind = k;
      t.text = std::string(1, c);
      advance(1);
      return t;
    };
    switch (c) {
      case '(': return single(Tok::LParen);
      case ')': return single(Tok::RParen);
      case '[': return single(Tok::LBracket);
      case ']': return single(Tok::RBracket);
      case '!': return single(Tok::Bang);
      case '&': return single(Tok::Amp);
      case '|': return single(Tok::Bar);
      case ':': return single(Tok::Colon);
      default: break;
    }
    if (c == '-' && peek(1) == '>') {
      t.kind = Tok::Arrow;
      t.text = "->";
      advance(2);
      return t;
    }
    if ((c == '<' || c == '>') && peek(1) == '=') {
      t.kind = c == '<' ? Tok::Le : Tok::Ge;
      t.text = c == '<' ? "<=" : ">=";
      advance(2);
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' ||
        ((c == '-' || c == '+') &&
         (std::isdigit(static_cast<unsigned char>(peek(1))) || peek(1) == '.'))) {
      std::size_t start = pos_;
      std::size_t i = pos_ + 1;
      while (i < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[i])) || s_[i] == '.'))
        ++i;
      if (i < s_.size() && (s_[i] == 'e' || s_[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < s_.size() && (s_[j] == '+' || s_[j] == '-')) ++j;
        if (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) {
          i = j;
          while (i < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i]))) ++i;
        }
      }
      t.kind = Tok::Number;
      t.text = s_.substr(start, i - start);
      advance(i - start);
      return t;
    }
    if (c == '?') {
      std::size_t i = pos_ + 1;
      while (i < s_.size() && is_word_char(s_[i], i == pos_ + 1)) ++i;
      t.kind = Tok::Param;
      t.text = s_.substr(pos_ + 1, i - pos_ - 1);
      advance(i - pos_);
      if (t.text.empty()) throw ParseError("empty parameter name", t.line, t.column, {"name"});
      return t;
    }
    if (is_word_char(c, true)) {
      std::size_t i = pos_;
      while (i < s_.size() && is_word_char(s_[i], i == pos_)) ++i;
      t.kind = Tok::Word;
      t.text = s_.substr(pos_, i - pos_);
      advance(i - pos_);
      return t;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", t.line, t.column, {});
  }

 private:
  static bool is_word_char(char c, bool first) {
    auto u = static_cast<unsigned char>(c);
    return std::isalpha(u) || c == '_' || (!first && std::isdigit(u));
  }
  char peek(std::size_t off) const { return pos_ + off < s_.size() ? s_[pos_ + off] : '\0'; }
  void advance(std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
      if (s_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
  }
  void skip_space() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) advance(1);
  }

  const std::string& s_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  explicit Parser(const std::string& text) : lex_(text) { shift(); }

  Formula parse() {
    Formula f = implic();
    if (cur_.kind != Tok::End) error("unexpected '" + cur_.text + "'", {"end of input"});
    return f;
  }

 private:
  [[noreturn]] void error(const std::string& msg, std::vector<std::string> expected) {
    throw ParseError(msg, cur_.line, cur_.column, std::move(expected));
  }

  void shift() { cur_ = lex_.next(); }

  bool word(const char* w) const { return cur_.kind == Tok::Word && cur_.text == w; }

  std::string describe() const { return cur_.kind == Tok::End ? "end of input" : "'" + cur_.text + "'"; }

  void expect(Tok k, const char* what) {
    if (cur_.kind != k) error("unexpected " + describe(), {what});
    shift();
  }

  Formula implic() {
    Formula lhs = orexpr();
    if (cur_.kind == Tok::Arrow) {
      shift();
      return make_implies(lhs, implic());
    }
    return lhs;
  }

  Formula orexpr() {
    Formula f = andexpr();
    while (cur_.kind == Tok::Bar) {
      shift();
      f = make_or(f, andexpr());
    }
    return f;
  }

  Formula andexpr() {
    Formula f = untilexpr();
    while (cur_.kind == Tok::Amp) {
      shift();
      f = make_and(f, untilexpr());
    }
    return f;
  }

  Formula untilexpr() {
    Formula lhs = unary();
    if (word("U")) {
      shift();
      TimeBound b = bound();
      return make_until(b, lhs, untilexpr());
    }
    return lhs;
  }

  Formula unary() {
    switch (cur_.kind) {
      case Tok::Bang:
        shift();
        return make_not(unary());
      case Tok::LParen: {
        shift();
        Formula f = implic();
        expect(Tok::RParen, "')'");
        return f;
      }
      case Tok::Word: break;
      default:
        error("unexpected " + describe(), {"'!'", "'('", "'G'", "'F'", "'E'", "'x'", "'TRUE'", "'FALSE'"});
    }
    if (word("TRUE")) {
      shift();
      return make_true();
    }
    if (word("FALSE")) {
      shift();
      return make_false();
    }
    if (word("G") || word("F")) {
      bool always = word("G");
      shift();
      TimeBound b = bound();
      Formula body = unary();
      return always ? make_always(b, body) : make_eventually(b, body);
    }
    if (word("E")) return exists();
    if (word("x")) {
      shift();
      Cmp c = comparison();
      return make_atom(c, numval());
    }
    error("unexpected " + describe(), {"'!'", "'('", "'G'", "'F'", "'E'", "'x'", "'TRUE'", "'FALSE'"});
  }

  Formula exists() {
    shift();
    IntVal n = intval();
    if (!n.param && n.value < 1) error("neighbor count must be at least 1", {"positive integer"});
    std::vector<EdgeAtom> chain;
    while (word("via")) {
      shift();
      expect(Tok::LParen, "'('");
      if (!word("y")) error("unexpected " + describe(), {"'y'"});
      shift();
      Cmp c = comparison();
      chain.push_back({c, numval()});
      expect(Tok::RParen, "')'");
    }
    if (chain.empty()) error("unexpected " + describe(), {"'via'"});
    expect(Tok::Colon, "':'");
    return make_exists(n, std::move(chain), unary());
  }

  TimeBound bound() {
    TimeBound b;
    while (cur_.kind == Tok::LBracket) {
      shift();
      Tok k = cur_.kind;
      if (k != Tok::Le && k != Tok::Ge) error("unexpected " + describe(), {"'<='", "'>='"});
      if (k == Tok::Ge && (b.lower || b.upper)) error("misplaced lower bound", {"'[<='"});
      if (k == Tok::Le && b.upper) error("duplicate upper bound", {});
      shift();
      IntVal v = intval();
      if (!v.param && v.value < 0) error("time bound must be nonnegative", {"nonnegative integer"});
      (k == Tok::Ge ? b.lower : b.upper) = v;
      expect(Tok::RBracket, "']'");
    }
    return b;
  }

  Cmp comparison() {
    if (cur_.kind == Tok::Le || cur_.kind == Tok::Ge) {
      Cmp c = cur_.kind == Tok::Le ? Cmp::Le : Cmp::Ge;
      shift();
      return c;
    }
    error("unexpected " + describe(), {"'<='", "'>='"});
  }

  void note_param(const std::string& name) {
    if (!params_.insert(name).second)
      error("parameter '?" + name + "' appears more than once", {});
  }

  IntVal intval() {
    if (cur_.kind == Tok::Param) {
      IntVal v = IntVal::var(cur_.text);
      note_param(cur_.text);
      shift();
      return v;
    }
    if (cur_.kind == Tok::Number) {
      long long v = 0;
      const char* b = cur_.text.data();
      const char* e = b + cur_.text.size();
      if (*b == '+') ++b;
      auto res = std::from_chars(b, e, v);
      if (res.ec != std::errc() || res.ptr != e) error("expected an integer", {"integer"});
      shift();
      return IntVal::lit(v);
    }
    error("unexpected " + describe(), {"integer", "parameter"});
  }

  NumVal numval() {
    if (cur_.kind == Tok::Param) {
      NumVal v = NumVal::var(cur_.text);
      note_param(cur_.text);
      shift();
      return v;
    }
    if (cur_.kind == Tok::Number) {
      double v = 0;
      const char* b = cur_.text.data();
      const char* e = b + cur_.text.size();
      if (*b == '+') ++b;
      auto res = std::from_chars(b, e, v);
      if (res.ec != std::errc() || res.ptr != e) error("malformed number", {"number"});
      shift();
      return NumVal::lit(v);
    }
    error("unexpected " + describe(), {"number", "parameter"});
  }

  Lexer lex_;
  Token cur_;
  std::set<std::string> params_;
};

}  // namespace

Formula parse_formula(const std::string& text) { return Parser(text).parse(); }

}  // namespace gtl
