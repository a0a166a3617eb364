#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "contraver/source.hpp"

namespace contraver::cvl {

struct Type {
  enum class Kind { Unknown, Int, Bool, Seq, Bag, Struct };

  Kind kind = Kind::Unknown;
  std::string name;  // struct name when kind == Struct

  static Type integer() { return {Kind::Int, {}}; }
  static Type boolean() { return {Kind::Bool, {}}; }
  static Type seq() { return {Kind::Seq, {}}; }
  static Type bag() { return {Kind::Bag, {}}; }
  static Type structure(std::string n) { return {Kind::Struct, std::move(n)}; }

  bool known() const { return kind != Kind::Unknown; }
  bool is_struct() const { return kind == Kind::Struct; }
  std::string to_string() const;

  bool operator==(const Type&) const = default;
};

enum class ExprKind { IntLit, BoolLit, Var, Result, Old, Unary, Binary, Quant, Cond, Index, Apply, Field, SeqLit };
enum class UnaryOp { Neg, Not };
enum class BinaryOp { Add, Sub, Mul, Div, Mod, Eq, Ne, Lt, Le, Gt, Ge, And, Or, Implies };
enum class Quantifier { Forall, Exists };

/// What an application resolves to once typechecked.
enum class Callee { Unresolved, Builtin, Ghost, Routine };

enum class Builtin { None, Count, Interval, SeqExtended, BagExtended, ToBag, Occ, Union, EmptyBag };

const char* to_string(BinaryOp op);

/// Expression node. Child layout by kind:
///   Old, Unary: args[0]          Binary: args[0] op args[1]
///   Quant: args = {lo, hi, body}, name = bound variable
///   Cond: {condition, then, else}   Index: {sequence, index}
///   Apply: arguments, name = callee  Field: args[0] = base, name = field
///   SeqLit: elements
struct Expr {
  ExprKind kind = ExprKind::BoolLit;
  SourceSpan span;
  std::int64_t int_value = 0;
  bool bool_value = false;
  std::string name;
  UnaryOp unary = UnaryOp::Not;
  BinaryOp binary = BinaryOp::And;
  Quantifier quant = Quantifier::Forall;
  std::vector<Expr> args;

  // Filled in by typecheck.
  Type type;
  Callee callee = Callee::Unresolved;
  Builtin builtin = Builtin::None;
};

struct LabeledExpr {
  std::string label;  // empty when the clause is unlabeled
  Expr expr;
  SourceSpan span;    // label through end of expression
};

/// The clause's own label, or `<prefix>_<index>` (1-based) when unlabeled.
std::string clause_label(const LabeledExpr& c, const std::string& prefix, std::size_t index);

enum class StmtKind { Assign, If, While, Check, UseInvariant, Call };

/// Statement node. Field use by kind:
///   Assign: target[.target_field] := value   (target "Result" for the result)
///   If: value = condition, then_body, else_body
///   While: value = guard, invariants, variant, then_body = loop body
///   Check: value   UseInvariant: target
///   Call: [target :=] callee(args)
struct Stmt {
  StmtKind kind = StmtKind::Check;
  SourceSpan span;
  std::string target;
  std::string target_field;
  Expr value;
  std::vector<Stmt> then_body;
  std::vector<Stmt> else_body;
  std::vector<LabeledExpr> invariants;
  std::optional<Expr> variant;
  std::string callee;
  std::vector<Expr> args;
};

struct Param {
  std::string name;
  Type type;
  bool inout = false;
  SourceSpan span;
};

struct Ident {
  std::string name;
  SourceSpan span;
};

struct ConstDecl {
  std::string name;
  std::int64_t value = 0;
  SourceSpan span;
};

struct GhostFunction {
  std::string name;
  std::vector<Param> params;
  Type return_type;
  Expr body;
  SourceSpan span;  // whole declaration
};

struct StructDef {
  std::string name;
  std::vector<Param> fields;
  std::vector<LabeledExpr> invariants;
  SourceSpan span;
};

struct Routine {
  std::string name;
  std::vector<Param> params;
  std::optional<Type> return_type;
  std::vector<LabeledExpr> preconditions;
  std::vector<Ident> modifies;
  std::optional<Expr> variant;
  std::vector<Stmt> body;
  std::vector<LabeledExpr> postconditions;
  SourceSpan span;
  SourceSpan modify_span;  // meaningful only when `modifies` is non-empty

  // Filled in by typecheck: local variables with inferred types.
  std::map<std::string, Type> locals;

  const Param* param(const std::string& n) const;
  bool modifies_name(const std::string& n) const;
};

struct Program {
  std::string file;
  std::vector<ConstDecl> constants;
  std::vector<GhostFunction> ghosts;
  std::vector<StructDef> structs;
  std::vector<Routine> routines;

  const ConstDecl* constant(const std::string& n) const;
  const GhostFunction* ghost(const std::string& n) const;
  const StructDef* structure(const std::string& n) const;
  const Routine* routine(const std::string& n) const;
};

/// Structural equality: ignores spans and typecheck annotations.
bool same_structure(const Expr& a, const Expr& b);
bool same_structure(const Stmt& a, const Stmt& b);
bool same_structure(const Program& a, const Program& b);

/// Clears every typecheck annotation (types, resolutions, inferred locals).
void erase_annotations(Program& p);

}  // namespace contraver::cvl
