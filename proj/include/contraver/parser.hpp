#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "contraver/ast.hpp"
#include "contraver/lexer.hpp"

namespace contraver::cvl {

/// Names recognised as built-in sequence/bag operations. A method-style use
/// `e.f(args)` of one of these desugars to `f(e, args)`.
bool is_builtin_name(std::string_view name);

/// Parses a whole program. Throws ParseError (with the set of expected
/// tokens) on malformed input; an empty token list is an error.
Program parse(const std::vector<Token>& tokens, const std::string& file = "<input>");

/// As parse, but loops may omit their variant. Used only for measuring
/// annotation-stripped sources, which are never verified.
Program parse_lenient(const std::vector<Token>& tokens, const std::string& file = "<input>");

/// tokenize + parse.
Program parse_source(std::string_view source, const std::string& file = "<input>");

/// Parses a single expression spanning all of `tokens`.
Expr parse_expression(const std::vector<Token>& tokens);

/// Parses a statement list spanning all of `tokens`.
std::vector<Stmt> parse_statements(const std::vector<Token>& tokens);

}  // namespace contraver::cvl
