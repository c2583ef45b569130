#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"

namespace quasivar {

struct Token {
  enum class Kind { identifier, punct, end };
  Kind kind = Kind::end;
  std::string text;
  int line = 0;
  int column = 0;
};

// Tokenizes one logical line. `#` starts a comment; "quoted" names may hold
// any character except an unescaped quote.
inline std::vector<Token> tokenize(std::string_view text, int line = 1) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto ident_char = [](char c) {
    auto u = static_cast<unsigned char>(c);
    return std::isalnum(u) || c == '_' || c == '\'' || u >= 0x80;
  };
  while (i < text.size()) {
    char c = text[i];
    int column = static_cast<int>(i) + 1;
    if (c == '#') break;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '"') {
      std::string name;
      ++i;
      bool closed = false;
      while (i < text.size()) {
        if (text[i] == '\\' && i + 1 < text.size()) {
          name += text[i + 1];
          i += 2;
        } else if (text[i] == '"') {
          closed = true;
          ++i;
          break;
        } else {
          name += text[i++];
        }
      }
      if (!closed) throw InputError("unterminated quoted name", line, column);
      out.push_back({Token::Kind::identifier, name, line, column});
      continue;
    }
    if (ident_char(c)) {
      std::size_t j = i;
      while (j < text.size() && ident_char(text[j])) ++j;
      out.push_back({Token::Kind::identifier, std::string(text.substr(i, j - i)), line, column});
      i = j;
      continue;
    }
    if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
      out.push_back({Token::Kind::punct, "->", line, column});
      i += 2;
      continue;
    }
    static const std::string single = "(),.:=&|{}";
    if (single.find(c) != std::string::npos) {
      out.push_back({Token::Kind::punct, std::string(1, c), line, column});
      ++i;
      continue;
    }
    throw InputError(std::string("unexpected character '") + c + "'", line, column);
  }
  out.push_back({Token::Kind::end, "", line, static_cast<int>(text.size()) + 1});
  return out;
}

class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t k = pos_ + ahead;
    return k < tokens_.size() ? tokens_[k] : tokens_.back();
  }
  const Token& next() {
    const Token& t = peek();
    if (pos_ < tokens_.size() - 1) ++pos_;
    return t;
  }
  bool at_end() const { return peek().kind == Token::Kind::end; }

  bool accept(std::string_view punct) {
    if (peek().kind == Token::Kind::punct && peek().text == punct) {
      next();
      return true;
    }
    return false;
  }
  bool accept_keyword(std::string_view word) {
    if (peek().kind == Token::Kind::identifier && peek().text == word) {
      next();
      return true;
    }
    return false;
  }
  void expect(std::string_view punct) {
    if (!accept(punct)) fail("expected '" + std::string(punct) + "'");
  }
  std::string expect_identifier(const std::string& what = "identifier") {
    if (peek().kind != Token::Kind::identifier) fail("expected " + what);
    return next().text;
  }
  void expect_end() {
    if (!at_end()) fail("unexpected '" + peek().text + "'");
  }
  [[noreturn]] void fail(const std::string& message) const {
    throw InputError(message, peek().line, peek().column);
  }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

// Splits source text into (line number, line) pairs, dropping blank and comment-only lines.
inline std::vector<std::pair<int, std::string>> logical_lines(std::string_view text) {
  std::vector<std::pair<int, std::string>> out;
  int line = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line;
    std::string_view raw = text.substr(start, end - start);
    std::size_t first = raw.find_first_not_of(" \t\r");
    if (first != std::string_view::npos && raw[first] != '#') {
      std::string s(raw);
      if (!s.empty() && s.back() == '\r') s.pop_back();
      out.emplace_back(line, s);
    }
    if (end == text.size()) break;
    start = end + 1;
  }
  return out;
}

}  // namespace quasivar
