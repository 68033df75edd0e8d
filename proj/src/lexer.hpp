#pragma once

// Tokenizer shared by the PLTL, hyper and arithmetic parsers.

#include <algorithm>
#include <cctype>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "ghyltl/error.hpp"

namespace ghyltl::detail {

enum class Tok {
  Ident, Number, LParen, RParen, LBrack, RBrack, LBrace, RBrace,
  Comma, Dot, Bang, Bar, Amp, Arrow, DArrow, Plus, Star, Eq, Less, End
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t col;
};

class Lexer {
public:
  explicit Lexer(std::string_view src) { tokenize(src); }

  const Token& peek(std::size_t k = 0) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  bool at(Tok k) const { return peek().kind == k; }
  bool at_ident(std::string_view word) const { return at(Tok::Ident) && peek().text == word; }

  Token next() {
    Token t = peek();
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool accept(Tok k) {
    if (!at(k)) return false;
    next();
    return true;
  }
  Token expect(Tok k, const char* what) {
    if (!at(k)) fail(std::string("expected ") + what);
    return next();
  }

  std::size_t mark() const noexcept { return pos_; }
  void reset(std::size_t m) noexcept { pos_ = m; }

  [[noreturn]] void fail(const std::string& msg) const { fail(msg, peek()); }
  [[noreturn]] static void fail(const std::string& msg, const Token& t) {
    std::string near = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw ParseError(msg + " near " + near, t.line, t.col);
  }

private:
  void tokenize(std::string_view s) {
    std::size_t line = 1, col = 1, i = 0;
    auto push = [&](Tok k, std::size_t len) {
      toks_.push_back({k, std::string(s.substr(i, len)), line, col});
      i += len;
      col += len;
    };
    while (i < s.size()) {
      char c = s[i];
      if (c == '\n') {
        ++line;
        col = 1;
        ++i;
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
        ++col;
        continue;
      }
      if (c == '/' && i + 1 < s.size() && s[i + 1] == '/') {
        while (i < s.size() && s[i] != '\n') ++i;
        continue;
      }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t j = i;
        while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
        push(Tok::Ident, j - i);
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t j = i;
        while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
        push(Tok::Number, j - i);
        continue;
      }
      if (s.substr(i, 3) == "<->") { push(Tok::DArrow, 3); continue; }
      if (s.substr(i, 2) == "->") { push(Tok::Arrow, 2); continue; }
      switch (c) {
        case '(': push(Tok::LParen, 1); continue;
        case ')': push(Tok::RParen, 1); continue;
        case '[': push(Tok::LBrack, 1); continue;
        case ']': push(Tok::RBrack, 1); continue;
        case '{': push(Tok::LBrace, 1); continue;
        case '}': push(Tok::RBrace, 1); continue;
        case ',': push(Tok::Comma, 1); continue;
        case '.': push(Tok::Dot, 1); continue;
        case '!': push(Tok::Bang, 1); continue;
        case '|': push(Tok::Bar, 1); continue;
        case '&': push(Tok::Amp, 1); continue;
        case '+': push(Tok::Plus, 1); continue;
        case '*': push(Tok::Star, 1); continue;
        case '=': push(Tok::Eq, 1); continue;
        case '<': push(Tok::Less, 1); continue;
        default: break;
      }
      throw ParseError(std::string("unexpected character '") + c + "'", line, col);
    }
    toks_.push_back({Tok::End, "", line, col});
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

} // namespace ghyltl::detail

namespace ghyltl::pltl {
struct Node;
namespace detail {
/// Parses one PLTL formula from the current lexer position (used for Γ
/// members inside hyper formulas).
std::shared_ptr<const Node> parse_from(ghyltl::detail::Lexer& lx);
} // namespace detail
} // namespace ghyltl::pltl
