#pragma once

#include <vector>

#include "contraver/ast.hpp"

namespace contraver::cvl {

struct TypecheckResult {
  Program program;  // annotated; meaningful only when `errors` is empty
  std::vector<Diagnostic> errors;

  bool ok() const { return errors.empty(); }
};

/// Annotates every expression with its type, resolves applications, infers
/// local variable types, and rewrites `x := r(...)` into call statements.
/// All violations are collected rather than stopping at the first.
TypecheckResult typecheck(Program p);

/// typecheck, throwing TypeErrors on failure.
Program typecheck_or_throw(Program p);

/// Routines that sit on a call cycle (including direct self-calls).
std::vector<std::string> recursive_routines(const Program& p);

/// True when routine `a` calls `b` directly or through other routines.
bool reaches(const Program& p, const std::string& a, const std::string& b);

/// True when `a` and `b` lie on a common call cycle.
bool same_cycle(const Program& p, const std::string& a, const std::string& b);

}  // namespace contraver::cvl
