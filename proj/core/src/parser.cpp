#include <cctype>
#include <charconv>
#include <cmath>
#include <optional>
#include <vector>

#include "mtlspec/mtl.hpp"

namespace mtlspec {
namespace {

enum class Tok {
  Box,         // []
  Diamond,     // <>
  Subscript,   // _[
  Comma,
  RBracket,
  LParen,
  RParen,
  Bang,
  Wedge,       // /\ .
  Arrow,       // ->
  Rel,
  Number,
  Ident,
  End,
};

struct Token {
  Tok kind;
  std::string_view text;
  std::size_t line;
  std::size_t column;
};

std::string_view describe(Tok kind) {
  switch (kind) {
    case Tok::Box: return "'[]'";
    case Tok::Diamond: return "'<>'";
    case Tok::Subscript: return "'_['";
    case Tok::Comma: return "','";
    case Tok::RBracket: return "']'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Bang: return "'!'";
    case Tok::Wedge: return "'/\\'";
    case Tok::Arrow: return "'->'";
    case Tok::Rel: return "relation";
    case Tok::Number: return "number";
    case Tok::Ident: return "identifier";
    case Tok::End: return "end of input";
  }
  return "token";
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      if (pos_ >= text_.size()) {
        out.push_back({Tok::End, {}, line_, column_});
        return out;
      }
      out.push_back(next());
    }
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      advance(1);
    }
  }

  void advance(std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
      if (text_[pos_] == '\n') {
        ++line_;
        column_ = 1;
      } else {
        ++column_;
      }
      ++pos_;
    }
  }

  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }

  Token take(Tok kind, std::size_t length) {
    Token t{kind, text_.substr(pos_, length), line_, column_};
    advance(length);
    return t;
  }

  Token next() {
    const char c = peek();
    const char d = peek(1);
    if (c == '[' && d == ']') return take(Tok::Box, 2);
    if (c == '<' && d == '>') return take(Tok::Diamond, 2);
    if (c == '_' && d == '[') return take(Tok::Subscript, 2);
    if (c == '/' && d == '\\') return take(Tok::Wedge, 2);
    if (c == '-' && d == '>') return take(Tok::Arrow, 2);
    if ((c == '<' || c == '>') && d == '=') return take(Tok::Rel, 2);
    if (c == '<' || c == '>') return take(Tok::Rel, 1);
    if (c == ',') return take(Tok::Comma, 1);
    if (c == ']') return take(Tok::RBracket, 1);
    if (c == '(') return take(Tok::LParen, 1);
    if (c == ')') return take(Tok::RParen, 1);
    if (c == '!') return take(Tok::Bang, 1);
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '-' && (std::isdigit(static_cast<unsigned char>(d)) || d == '.')) ||
        (c == '.' && std::isdigit(static_cast<unsigned char>(d)))) {
      std::size_t n = c == '-' ? 1 : 0;
      bool seen_dot = false;
      while (true) {
        const char e = peek(n);
        if (std::isdigit(static_cast<unsigned char>(e))) {
          ++n;
        } else if (e == '.' && !seen_dot) {
          seen_dot = true;
          ++n;
        } else {
          break;
        }
      }
      return take(Tok::Number, n);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t n = 1;
      while (std::isalnum(static_cast<unsigned char>(peek(n))) || peek(n) == '_') ++n;
      return take(Tok::Ident, n);
    }
    throw Error(ErrorCode::SyntaxError, "unexpected character '" + std::string(1, c) + "' at " +
                                            std::to_string(line_) + ":" + std::to_string(column_),
                line_, column_);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  Formula parse_all() {
    Formula f = parse_implies();
    expect(Tok::End);
    return f;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }

  const Token& consume() { return tokens_[pos_++]; }

  [[noreturn]] void fail(const Token& at, const std::string& what) const {
    throw Error(ErrorCode::SyntaxError,
                what + " at " + std::to_string(at.line) + ":" + std::to_string(at.column), at.line,
                at.column);
  }

  const Token& expect(Tok kind) {
    if (peek().kind != kind) {
      const auto& t = peek();
      fail(t, "expected " + std::string(describe(kind)) + ", found " +
                  (t.kind == Tok::End ? std::string("end of input") : "'" + std::string(t.text) + "'"));
    }
    return consume();
  }

  double number(const Token& t) const {
    double value = 0.0;
    const char* first = t.text.data();
    const char* last = first + t.text.size();
    auto [ptr, ec] = std::from_chars(first, last, value, std::chars_format::fixed);
    if (ec != std::errc{} || ptr != last || !std::isfinite(value)) {
      fail(t, "malformed number '" + std::string(t.text) + "'");
    }
    return value;
  }

  Formula parse_implies() {
    Formula lhs = parse_and();
    if (peek().kind == Tok::Arrow) {
      consume();
      return Formula::implication(std::move(lhs), parse_implies());
    }
    return lhs;
  }

  Formula parse_and() {
    std::vector<Formula> operands{parse_unary()};
    while (peek().kind == Tok::Wedge) {
      consume();
      operands.push_back(parse_unary());
    }
    Formula acc = operands.back();
    for (auto it = operands.rbegin() + 1; it != operands.rend(); ++it) {
      acc = Formula::conjunction(*it, acc);
    }
    return acc;
  }

  bool atom_ahead(std::size_t offset) const {
    return peek(offset).kind == Tok::Ident && peek(offset + 1).kind == Tok::Rel &&
           peek(offset + 2).kind == Tok::Number;
  }

  Formula parse_atom_body() {
    const auto& name = expect(Tok::Ident);
    const auto& rel = expect(Tok::Rel);
    const auto& value = expect(Tok::Number);
    return Formula::atom(std::string(name.text), *relation_from_string(rel.text), number(value));
  }

  Formula parse_unary() {
    const auto& t = peek();
    switch (t.kind) {
      case Tok::Bang:
        consume();
        return Formula::negation(parse_unary());
      case Tok::Box:
      case Tok::Diamond: {
        consume();
        if (peek().kind != Tok::Subscript) {
          fail(peek(), "temporal operator needs a bounded interval '_[lo,hi]'");
        }
        consume();
        const auto& lo_tok = expect(Tok::Number);
        expect(Tok::Comma);
        const auto& hi_tok = expect(Tok::Number);
        expect(Tok::RBracket);
        const double lo = number(lo_tok);
        const double hi = number(hi_tok);
        if (lo < 0.0 || lo > hi) {
          throw Error(ErrorCode::IntervalError,
                      "interval [" + std::string(lo_tok.text) + "," + std::string(hi_tok.text) +
                          "] at " + std::to_string(lo_tok.line) + ":" +
                          std::to_string(lo_tok.column) + " must satisfy 0 <= lo <= hi",
                      lo_tok.line, lo_tok.column);
        }
        Formula body = parse_unary();
        const Interval window{lo, hi};
        return t.kind == Tok::Box ? Formula::always(window, std::move(body))
                                  : Formula::eventually(window, std::move(body));
      }
      case Tok::LParen: {
        if (atom_ahead(1) && peek(4).kind == Tok::RParen) {
          consume();
          Formula a = parse_atom_body();
          expect(Tok::RParen);
          return a;
        }
        consume();
        Formula inner = parse_implies();
        expect(Tok::RParen);
        return inner;
      }
      case Tok::Ident:
        if (atom_ahead(0)) return parse_atom_body();
        fail(t, "expected a comparison after '" + std::string(t.text) + "'");
      default:
        fail(t, t.kind == Tok::End ? "unexpected end of input"
                                   : "unexpected '" + std::string(t.text) + "'");
    }
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

Formula parse(std::string_view text) { return Parser(Lexer(text).run()).parse_all(); }

}  // namespace mtlspec
