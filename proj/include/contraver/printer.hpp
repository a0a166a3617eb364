#pragma once

#include <string>
#include <vector>

#include "contraver/ast.hpp"

namespace contraver::cvl {

/// Canonical CVL text. Method-style calls print in function form and
/// parentheses are minimal, so parse(print(p)) is structurally equal to p.
std::string print(const Program& p);
std::string print(const Expr& e);
std::string print(const std::vector<Stmt>& body, int indent = 0);

}  // namespace contraver::cvl
