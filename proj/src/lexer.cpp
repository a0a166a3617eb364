#include "contraver/lexer.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cstdint>

namespace contraver::cvl {

namespace {

constexpr std::array kKeywords = {
    "const",   "ghost",  "function", "struct", "invariant", "routine", "require",
    "modify",  "variant", "do",      "end",    "ensure",    "if",      "then",
    "else",    "while",  "check",    "use_invariant", "old", "forall", "exists",
    "and",     "or",     "not",      "implies", "true",     "false",   "Result",
    "inout",   "INT",    "BOOL",     "SEQ",    "BAG",
};

// Longest match first.
constexpr std::array kOperators = {
    "==>", ":=", "/=", "<=", ">=", "//", "=", "<", ">", "+", "-", "*", "%", ".",
};

constexpr std::string_view kPunctuation = "()[]{},:;";

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Lexer {
 public:
  Lexer(std::string_view src, const std::string& file) : src_(src), file_(file) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_trivia();
      if (pos_ >= src_.size()) break;
      out.push_back(next());
    }
    return out;
  }

 private:
  std::string_view src_;
  const std::string& file_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_trivia() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '-') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else {
        return;
      }
    }
  }

  SourceSpan span_from(std::size_t begin, int line, int col) const {
    SourceSpan s;
    s.file = file_;
    s.start_line = line;
    s.start_col = col;
    s.end_line = line_;
    s.end_col = col_;
    s.begin = begin;
    s.end = pos_;
    return s;
  }

  Token next() {
    const std::size_t begin = pos_;
    const int line = line_;
    const int col = col_;
    const char c = src_[pos_];

    if (ident_start(c)) {
      while (pos_ < src_.size() && ident_char(src_[pos_])) advance();
      std::string word(src_.substr(begin, pos_ - begin));
      TokenKind kind = is_keyword(word) ? TokenKind::Keyword : TokenKind::Identifier;
      return Token{kind, std::move(word), span_from(begin, line, col)};
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
      std::string digits(src_.substr(begin, pos_ - begin));
      std::int64_t value = 0;
      auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
      if (ec != std::errc{}) {
        throw LexError(span_from(begin, line, col), "integer literal out of range: " + digits);
      }
      return Token{TokenKind::IntLiteral, std::move(digits), span_from(begin, line, col)};
    }
    for (std::string_view op : kOperators) {
      if (src_.substr(pos_, op.size()) == op) {
        for (std::size_t i = 0; i < op.size(); ++i) advance();
        return Token{TokenKind::Operator, std::string(op), span_from(begin, line, col)};
      }
    }
    if (kPunctuation.find(c) != std::string_view::npos) {
      advance();
      return Token{TokenKind::Punctuation, std::string(1, c), span_from(begin, line, col)};
    }
    advance();
    std::string shown = std::isprint(static_cast<unsigned char>(c))
                            ? std::string("'") + c + "'"
                            : "byte 0x" + std::to_string(static_cast<unsigned char>(c));
    throw LexError(span_from(begin, line, col), "illegal character " + shown);
  }
};

}  // namespace

const char* to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::Keyword: return "keyword";
    case TokenKind::Identifier: return "identifier";
    case TokenKind::IntLiteral: return "integer-literal";
    case TokenKind::Operator: return "operator";
    case TokenKind::Punctuation: return "punctuation";
  }
  return "?";
}

bool is_keyword(std::string_view word) {
  for (std::string_view k : kKeywords) {
    if (k == word) return true;
  }
  return false;
}

std::vector<Token> tokenize(std::string_view source, const std::string& file) {
  return Lexer(source, file).run();
}

}  // namespace contraver::cvl
