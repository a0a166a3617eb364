#include "contraver/ast.hpp"

#include <algorithm>

namespace contraver::cvl {

std::string Type::to_string() const {
  switch (kind) {
    case Kind::Unknown: return "?";
    case Kind::Int: return "INT";
    case Kind::Bool: return "BOOL";
    case Kind::Seq: return "SEQ";
    case Kind::Bag: return "BAG";
    case Kind::Struct: return name;
  }
  return "?";
}

const char* to_string(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "//";
    case BinaryOp::Mod: return "%";
    case BinaryOp::Eq: return "=";
    case BinaryOp::Ne: return "/=";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::And: return "and";
    case BinaryOp::Or: return "or";
    case BinaryOp::Implies: return "implies";
  }
  return "?";
}

std::string clause_label(const LabeledExpr& c, const std::string& prefix, std::size_t index) {
  return c.label.empty() ? prefix + "_" + std::to_string(index) : c.label;
}

const Param* Routine::param(const std::string& n) const {
  for (const auto& p : params) {
    if (p.name == n) return &p;
  }
  return nullptr;
}

bool Routine::modifies_name(const std::string& n) const {
  return std::any_of(modifies.begin(), modifies.end(), [&](const Ident& m) { return m.name == n; });
}

namespace {

template <class T>
const T* find_named(const std::vector<T>& items, const std::string& n) {
  for (const auto& item : items) {
    if (item.name == n) return &item;
  }
  return nullptr;
}

template <class T, class Eq>
bool same_list(const std::vector<T>& a, const std::vector<T>& b, Eq eq) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!eq(a[i], b[i])) return false;
  }
  return true;
}

bool same_clause(const LabeledExpr& a, const LabeledExpr& b) {
  return a.label == b.label && same_structure(a.expr, b.expr);
}

bool same_clauses(const std::vector<LabeledExpr>& a, const std::vector<LabeledExpr>& b) {
  return same_list(a, b, same_clause);
}

bool same_param(const Param& a, const Param& b) {
  return a.name == b.name && a.type == b.type && a.inout == b.inout;
}

bool same_optional(const std::optional<Expr>& a, const std::optional<Expr>& b) {
  if (a.has_value() != b.has_value()) return false;
  return !a || same_structure(*a, *b);
}

bool same_body(const std::vector<Stmt>& a, const std::vector<Stmt>& b) {
  return same_list(a, b, [](const Stmt& x, const Stmt& y) { return same_structure(x, y); });
}

void erase(Expr& e) {
  e.type = Type{};
  e.callee = Callee::Unresolved;
  e.builtin = Builtin::None;
  for (auto& a : e.args) erase(a);
}

void erase(std::vector<LabeledExpr>& clauses) {
  for (auto& c : clauses) erase(c.expr);
}

void erase(std::vector<Stmt>& body) {
  for (auto& s : body) {
    erase(s.value);
    erase(s.invariants);
    if (s.variant) erase(*s.variant);
    for (auto& a : s.args) erase(a);
    erase(s.then_body);
    erase(s.else_body);
  }
}

}  // namespace

const ConstDecl* Program::constant(const std::string& n) const { return find_named(constants, n); }
const GhostFunction* Program::ghost(const std::string& n) const { return find_named(ghosts, n); }
const StructDef* Program::structure(const std::string& n) const { return find_named(structs, n); }
const Routine* Program::routine(const std::string& n) const { return find_named(routines, n); }

bool same_structure(const Expr& a, const Expr& b) {
  if (a.kind != b.kind || a.name != b.name) return false;
  switch (a.kind) {
    case ExprKind::IntLit:
      if (a.int_value != b.int_value) return false;
      break;
    case ExprKind::BoolLit:
      if (a.bool_value != b.bool_value) return false;
      break;
    case ExprKind::Unary:
      if (a.unary != b.unary) return false;
      break;
    case ExprKind::Binary:
      if (a.binary != b.binary) return false;
      break;
    case ExprKind::Quant:
      if (a.quant != b.quant) return false;
      break;
    default:
      break;
  }
  return same_list(a.args, b.args, [](const Expr& x, const Expr& y) { return same_structure(x, y); });
}

bool same_structure(const Stmt& a, const Stmt& b) {
  if (a.kind != b.kind || a.target != b.target || a.target_field != b.target_field ||
      a.callee != b.callee) {
    return false;
  }
  const bool uses_value = a.kind == StmtKind::Assign || a.kind == StmtKind::If ||
                          a.kind == StmtKind::While || a.kind == StmtKind::Check;
  if (uses_value && !same_structure(a.value, b.value)) return false;
  return same_body(a.then_body, b.then_body) && same_body(a.else_body, b.else_body) &&
         same_clauses(a.invariants, b.invariants) && same_optional(a.variant, b.variant) &&
         same_list(a.args, b.args, [](const Expr& x, const Expr& y) { return same_structure(x, y); });
}

bool same_structure(const Program& a, const Program& b) {
  auto same_const = [](const ConstDecl& x, const ConstDecl& y) {
    return x.name == y.name && x.value == y.value;
  };
  auto same_ghost = [](const GhostFunction& x, const GhostFunction& y) {
    return x.name == y.name && same_list(x.params, y.params, same_param) &&
           x.return_type == y.return_type && same_structure(x.body, y.body);
  };
  auto same_struct = [](const StructDef& x, const StructDef& y) {
    return x.name == y.name && same_list(x.fields, y.fields, same_param) &&
           same_clauses(x.invariants, y.invariants);
  };
  auto same_routine = [](const Routine& x, const Routine& y) {
    return x.name == y.name && same_list(x.params, y.params, same_param) &&
           x.return_type == y.return_type && same_clauses(x.preconditions, y.preconditions) &&
           same_list(x.modifies, y.modifies,
                     [](const Ident& m, const Ident& n) { return m.name == n.name; }) &&
           same_optional(x.variant, y.variant) && same_body(x.body, y.body) &&
           same_clauses(x.postconditions, y.postconditions);
  };
  return same_list(a.constants, b.constants, same_const) &&
         same_list(a.ghosts, b.ghosts, same_ghost) && same_list(a.structs, b.structs, same_struct) &&
         same_list(a.routines, b.routines, same_routine);
}

void erase_annotations(Program& p) {
  for (auto& g : p.ghosts) erase(g.body);
  for (auto& s : p.structs) erase(s.invariants);
  for (auto& r : p.routines) {
    erase(r.preconditions);
    erase(r.postconditions);
    if (r.variant) erase(*r.variant);
    erase(r.body);
    r.locals.clear();
  }
}

}  // namespace contraver::cvl
