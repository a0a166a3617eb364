#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "contraver/source.hpp"

namespace contraver::cvl {

enum class TokenKind { Keyword, Identifier, IntLiteral, Operator, Punctuation };

const char* to_string(TokenKind kind);

struct Token {
  TokenKind kind;
  std::string lexeme;
  SourceSpan span;

  bool is(TokenKind k, std::string_view text) const { return kind == k && lexeme == text; }
  bool is_keyword(std::string_view text) const { return is(TokenKind::Keyword, text); }
  bool is_op(std::string_view text) const {
    return (kind == TokenKind::Operator || kind == TokenKind::Punctuation) && lexeme == text;
  }
};

bool is_keyword(std::string_view word);

/// Splits CVL source into tokens. Whitespace and `--` comments are skipped;
/// the bytes between consecutive token spans are exactly the skipped text.
/// Throws LexError on an illegal character or an out-of-range literal.
std::vector<Token> tokenize(std::string_view source, const std::string& file = "<input>");

}  // namespace contraver::cvl
