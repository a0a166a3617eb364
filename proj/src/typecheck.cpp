#include "contraver/typecheck.hpp"

#include <functional>
#include <map>
#include <set>

#include "contraver/parser.hpp"

namespace contraver::cvl {

namespace {

enum class Context { Require, Ensure, Body, StructInvariant, Ghost, Variant };

struct Scope {
  const Routine* routine = nullptr;
  std::map<std::string, Type> vars;       // parameters, fields or ghost parameters
  std::map<std::string, Type>* locals = nullptr;
  std::vector<std::pair<std::string, Type>> bound;
  Context context = Context::Body;
};

void collect_calls(const std::vector<Stmt>& body, std::set<std::string>& out) {
  for (const auto& s : body) {
    if (s.kind == StmtKind::Call) out.insert(s.callee);
    if (s.kind == StmtKind::Assign && s.value.kind == ExprKind::Apply) out.insert(s.value.name);
    collect_calls(s.then_body, out);
    collect_calls(s.else_body, out);
  }
}

void collect_applications(const Expr& e, std::set<std::string>& out) {
  if (e.kind == ExprKind::Apply) out.insert(e.name);
  for (const auto& a : e.args) collect_applications(a, out);
}

/// Names on a cycle of `graph`.
std::set<std::string> cyclic_nodes(const std::map<std::string, std::set<std::string>>& graph) {
  std::set<std::string> out;
  for (const auto& [start, _] : graph) {
    // start is cyclic iff it is reachable from one of its successors
    std::set<std::string> seen;
    std::vector<std::string> stack;
    for (const auto& s : graph.at(start)) stack.push_back(s);
    while (!stack.empty()) {
      std::string n = stack.back();
      stack.pop_back();
      if (n == start) {
        out.insert(start);
        break;
      }
      if (!seen.insert(n).second) continue;
      auto it = graph.find(n);
      if (it == graph.end()) continue;
      for (const auto& s : it->second) stack.push_back(s);
    }
  }
  return out;
}

class Checker {
 public:
  explicit Checker(Program p) : p_(std::move(p)) {}

  TypecheckResult run() {
    check_names();
    for (auto& s : p_.structs) check_struct(s);
    for (auto& g : p_.ghosts) check_ghost(g);
    check_ghost_recursion();
    for (auto& r : p_.routines) check_routine(r);
    check_routine_recursion();
    return TypecheckResult{std::move(p_), std::move(errors_)};
  }

 private:
  Program p_;
  std::vector<Diagnostic> errors_;

  void error(const SourceSpan& span, std::string message) { errors_.push_back({span, std::move(message)}); }

  // ---- declarations -----------------------------------------------------

  void check_names() {
    std::map<std::string, SourceSpan> seen;
    auto declare = [&](const std::string& name, const SourceSpan& span) {
      if (is_builtin_name(name)) error(span, "'" + name + "' is a built-in name");
      if (!seen.emplace(name, span).second) error(span, "duplicate declaration of '" + name + "'");
    };
    for (const auto& c : p_.constants) declare(c.name, c.span);
    for (const auto& g : p_.ghosts) declare(g.name, g.span);
    for (const auto& s : p_.structs) declare(s.name, s.span);
    for (const auto& r : p_.routines) declare(r.name, r.span);
  }

  bool valid_type(const Type& t, const SourceSpan& span, bool allow_struct = true) {
    if (!t.is_struct()) return true;
    if (!allow_struct) {
      error(span, "struct-typed value not allowed here");
      return false;
    }
    if (!p_.structure(t.name)) {
      error(span, "unknown type '" + t.name + "'");
      return false;
    }
    return true;
  }

  std::map<std::string, Type> bind_params(const std::vector<Param>& params, bool allow_struct) {
    std::map<std::string, Type> vars;
    for (const auto& param : params) {
      valid_type(param.type, param.span, allow_struct);
      if (is_builtin_name(param.name)) error(param.span, "'" + param.name + "' is a built-in name");
      if (p_.constant(param.name)) error(param.span, "'" + param.name + "' shadows a constant");
      if (!vars.emplace(param.name, param.type).second) {
        error(param.span, "duplicate parameter '" + param.name + "'");
      }
    }
    return vars;
  }

  void check_struct(StructDef& s) {
    Scope scope;
    scope.vars = bind_params(s.fields, false);
    scope.context = Context::StructInvariant;
    for (auto& c : s.invariants) expect_bool(c.expr, scope);
  }

  void check_ghost(GhostFunction& g) {
    Scope scope;
    scope.vars = bind_params(g.params, false);
    scope.context = Context::Ghost;
    valid_type(g.return_type, g.span, false);
    Type t = type_of(g.body, scope);
    if (t.known() && t != g.return_type) {
      error(g.body.span, "ghost function body has type " + t.to_string() + ", declared " +
                             g.return_type.to_string());
    }
  }

  void check_ghost_recursion() {
    std::map<std::string, std::set<std::string>> graph;
    for (const auto& g : p_.ghosts) {
      std::set<std::string> calls;
      collect_applications(g.body, calls);
      auto& edges = graph[g.name];
      for (const auto& c : calls) {
        if (p_.ghost(c)) edges.insert(c);
      }
    }
    for (const auto& name : cyclic_nodes(graph)) {
      error(p_.ghost(name)->span, "ghost function '" + name + "' is recursive");
    }
  }

  void check_routine(Routine& r) {
    Scope base;
    base.routine = &r;
    base.vars = bind_params(r.params, true);
    r.locals.clear();
    base.locals = &r.locals;
    if (r.return_type) valid_type(*r.return_type, r.span, false);

    for (const auto& m : r.modifies) {
      const Param* param = r.param(m.name);
      if (!param) {
        error(m.span, "modify list names unknown parameter '" + m.name + "'");
      } else if (!param->inout) {
        error(m.span, "modify list names '" + m.name + "', which is not an inout parameter");
      }
    }

    Scope req = base;
    req.context = Context::Require;
    for (auto& c : r.preconditions) expect_bool(c.expr, req);
    if (r.variant) {
      Scope var = base;
      var.context = Context::Variant;
      expect_type(*r.variant, Type::integer(), var, "routine variant");
    }

    Scope body = base;
    body.context = Context::Body;
    check_body(r.body, body);

    Scope ens = base;
    ens.context = Context::Ensure;
    for (auto& c : r.postconditions) expect_bool(c.expr, ens);
  }

  void check_routine_recursion() {
    std::map<std::string, std::set<std::string>> graph;
    for (const auto& r : p_.routines) {
      std::set<std::string> calls;
      collect_calls(r.body, calls);
      auto& edges = graph[r.name];
      for (const auto& c : calls) {
        if (p_.routine(c)) edges.insert(c);
      }
    }
    for (const auto& name : cyclic_nodes(graph)) {
      const Routine* r = p_.routine(name);
      if (!r->variant) error(r->span, "recursive routine '" + name + "' needs a variant");
    }
  }

  // ---- statements -------------------------------------------------------

  std::optional<Type> lookup(const std::string& name, const Scope& scope) const {
    for (auto it = scope.bound.rbegin(); it != scope.bound.rend(); ++it) {
      if (it->first == name) return it->second;
    }
    if (auto it = scope.vars.find(name); it != scope.vars.end()) return it->second;
    if (scope.locals && scope.context == Context::Body) {
      if (auto it = scope.locals->find(name); it != scope.locals->end()) return it->second;
    }
    if (scope.locals && scope.context == Context::Ensure) {
      // locals are not visible in postconditions
    }
    if (p_.constant(name)) return Type::integer();
    return std::nullopt;
  }

  void check_body(std::vector<Stmt>& body, Scope& scope) {
    for (auto& s : body) check_stmt(s, scope);
  }

  void assign_target(const Stmt& s, const Type& value_type, Scope& scope) {
    const Routine& r = *scope.routine;
    if (s.target == "Result") {
      if (!r.return_type) {
        error(s.span, "routine '" + r.name + "' has no result");
      } else if (value_type.known() && value_type != *r.return_type) {
        error(s.span, "cannot assign " + value_type.to_string() + " to Result of type " +
                          r.return_type->to_string());
      }
      return;
    }
    if (p_.constant(s.target)) {
      error(s.span, "cannot assign to constant '" + s.target + "'");
      return;
    }
    if (const Param* param = r.param(s.target)) {
      if (!param->inout) {
        error(s.span, "cannot assign to in parameter '" + s.target + "'");
        return;
      }
      Type target_type = param->type;
      if (!s.target_field.empty()) {
        const StructDef* sd = param->type.is_struct() ? p_.structure(param->type.name) : nullptr;
        if (!sd) {
          error(s.span, "'" + s.target + "' has no fields");
          return;
        }
        target_type = Type{};
        for (const auto& f : sd->fields) {
          if (f.name == s.target_field) target_type = f.type;
        }
        if (!target_type.known()) {
          error(s.span, "struct " + sd->name + " has no field '" + s.target_field + "'");
          return;
        }
      } else if (param->type.is_struct()) {
        error(s.span, "cannot assign a whole struct; assign its fields");
        return;
      }
      if (value_type.known() && value_type != target_type) {
        error(s.span, "cannot assign " + value_type.to_string() + " to '" + s.target + "' of type " +
                          target_type.to_string());
      }
      return;
    }
    if (!s.target_field.empty()) {
      error(s.span, "'" + s.target + "' has no fields");
      return;
    }
    if (is_builtin_name(s.target) || p_.routine(s.target) || p_.ghost(s.target) || p_.structure(s.target)) {
      error(s.span, "cannot assign to '" + s.target + "'");
      return;
    }
    if (!value_type.known()) return;
    if (value_type.is_struct()) {
      error(s.span, "local variables cannot hold structs");
      return;
    }
    auto [it, inserted] = scope.locals->emplace(s.target, value_type);
    if (!inserted && it->second != value_type) {
      error(s.span, "local '" + s.target + "' has type " + it->second.to_string() + ", assigned " +
                        value_type.to_string());
    }
  }

  void check_call(Stmt& s, Scope& scope) {
    const Routine* callee = p_.routine(s.callee);
    if (!callee) {
      error(s.span, "unknown routine '" + s.callee + "'");
      for (auto& a : s.args) type_of(a, scope);
      return;
    }
    if (s.args.size() != callee->params.size()) {
      error(s.span, "routine '" + callee->name + "' expects " + std::to_string(callee->params.size()) +
                        " arguments, got " + std::to_string(s.args.size()));
    }
    std::set<std::string> inout_args;
    const Routine& caller = *scope.routine;
    for (std::size_t i = 0; i < s.args.size(); ++i) {
      Type t = type_of(s.args[i], scope);
      if (i >= callee->params.size()) continue;
      const Param& formal = callee->params[i];
      if (t.known() && t != formal.type) {
        error(s.args[i].span, "argument " + std::to_string(i + 1) + " of '" + callee->name + "' has type " +
                                  t.to_string() + ", expected " + formal.type.to_string());
      }
      if (!formal.inout) continue;
      if (s.args[i].kind != ExprKind::Var || p_.constant(s.args[i].name)) {
        error(s.args[i].span, "inout argument must be a variable");
        continue;
      }
      const std::string& name = s.args[i].name;
      if (!inout_args.insert(name).second) error(s.args[i].span, "variable '" + name + "' passed twice as inout");
      const Param* actual = caller.param(name);
      if (actual && !actual->inout && callee->modifies_name(formal.name)) {
        error(s.args[i].span, "in parameter '" + name + "' passed where '" + callee->name + "' modifies it");
      }
    }
    if (!s.target.empty()) {
      if (!callee->return_type) {
        error(s.span, "routine '" + callee->name + "' returns no result");
      } else {
        assign_target(s, *callee->return_type, scope);
      }
    } else if (callee->return_type) {
      error(s.span, "result of '" + callee->name + "' is discarded");
    }
  }

  void check_stmt(Stmt& s, Scope& scope) {
    switch (s.kind) {
      case StmtKind::Assign:
        if (s.value.kind == ExprKind::Apply && s.target_field.empty() && p_.routine(s.value.name)) {
          // x := r(args) is a call statement
          s.kind = StmtKind::Call;
          s.callee = s.value.name;
          s.args = std::move(s.value.args);
          s.value = Expr{};
          check_call(s, scope);
          return;
        }
        assign_target(s, type_of(s.value, scope), scope);
        return;
      case StmtKind::Call:
        check_call(s, scope);
        return;
      case StmtKind::If:
        expect_bool(s.value, scope);
        check_body(s.then_body, scope);
        check_body(s.else_body, scope);
        return;
      case StmtKind::While:
        expect_bool(s.value, scope);
        for (auto& c : s.invariants) expect_bool(c.expr, scope);
        if (s.variant) expect_type(*s.variant, Type::integer(), scope, "loop variant");
        else error(s.span, "loop needs a variant");
        check_body(s.then_body, scope);
        return;
      case StmtKind::Check:
        expect_bool(s.value, scope);
        return;
      case StmtKind::UseInvariant: {
        auto t = lookup(s.target, scope);
        if (!t || !t->is_struct()) error(s.span, "use_invariant needs a struct-typed variable");
        return;
      }
    }
  }

  // ---- expressions ------------------------------------------------------

  void expect_bool(Expr& e, Scope& scope) { expect_type(e, Type::boolean(), scope, "clause"); }

  void expect_type(Expr& e, const Type& want, Scope& scope, const char* what) {
    Type t = type_of(e, scope);
    if (t.known() && t != want) {
      error(e.span, std::string(what) + " must be " + want.to_string() + ", found " + t.to_string());
    }
  }

  Type set(Expr& e, Type t) {
    e.type = t;
    return t;
  }

  bool all_known(std::initializer_list<Type> ts) {
    for (const auto& t : ts) {
      if (!t.known()) return false;
    }
    return true;
  }

  Type mismatch(Expr& e, const std::string& message) {
    error(e.span, message);
    return set(e, Type{});
  }

  Type apply_builtin(Expr& e, const std::vector<Type>& ts) {
    auto want = [&](std::initializer_list<Type> sig, Builtin b, Type result) -> Type {
      if (ts.size() != sig.size()) {
        return mismatch(e, "'" + e.name + "' expects " + std::to_string(sig.size()) + " arguments");
      }
      std::size_t i = 0;
      for (const auto& t : sig) {
        if (!ts[i].known()) return set(e, Type{});
        if (ts[i] != t) {
          return mismatch(e, "argument " + std::to_string(i + 1) + " of '" + e.name + "' must be " +
                                 t.to_string() + ", found " + ts[i].to_string());
        }
        ++i;
      }
      e.callee = Callee::Builtin;
      e.builtin = b;
      return set(e, result);
    };
    const Type I = Type::integer(), S = Type::seq(), B = Type::bag();
    const std::string& n = e.name;
    if (n == "count" || n == "length") return want({S}, Builtin::Count, I);
    if (n == "interval") return want({S, I, I}, Builtin::Interval, S);
    if (n == "extended") {
      if (!ts.empty() && ts[0] == B) return want({B, I}, Builtin::BagExtended, B);
      return want({S, I}, Builtin::SeqExtended, S);
    }
    if (n == "bag_extended") return want({B, I}, Builtin::BagExtended, B);
    if (n == "to_bag") return want({S}, Builtin::ToBag, B);
    if (n == "occ") return want({B, I}, Builtin::Occ, I);
    if (n == "union") return want({B, B}, Builtin::Union, B);
    if (n == "empty_bag") return want({}, Builtin::EmptyBag, B);
    return mismatch(e, "unknown built-in '" + n + "'");
  }

  Type type_of(Expr& e, Scope& scope) {
    switch (e.kind) {
      case ExprKind::IntLit: return set(e, Type::integer());
      case ExprKind::BoolLit: return set(e, Type::boolean());
      case ExprKind::Var: {
        auto t = lookup(e.name, scope);
        if (!t) return mismatch(e, "unknown variable '" + e.name + "'");
        return set(e, *t);
      }
      case ExprKind::Result: {
        if (scope.context != Context::Body && scope.context != Context::Ensure) {
          return mismatch(e, "Result outside routine body or ensure clause");
        }
        if (!scope.routine || !scope.routine->return_type) return mismatch(e, "routine has no Result");
        return set(e, *scope.routine->return_type);
      }
      case ExprKind::Old: {
        Type t = type_of(e.args[0], scope);
        if (scope.context != Context::Ensure) return mismatch(e, "old outside ensure clause");
        return set(e, t);
      }
      case ExprKind::Unary: {
        Type t = type_of(e.args[0], scope);
        Type want = e.unary == UnaryOp::Neg ? Type::integer() : Type::boolean();
        if (!t.known()) return set(e, Type{});
        if (t != want) return mismatch(e, "operand must be " + want.to_string() + ", found " + t.to_string());
        return set(e, want);
      }
      case ExprKind::Binary: return binary(e, scope);
      case ExprKind::Quant: {
        if (lookup(e.name, scope)) error(e.span, "quantified variable '" + e.name + "' shadows another name");
        Type lo = type_of(e.args[0], scope);
        Type hi = type_of(e.args[1], scope);
        if (lo.known() && lo != Type::integer()) error(e.args[0].span, "quantifier bounds must be INT");
        if (hi.known() && hi != Type::integer()) error(e.args[1].span, "quantifier bounds must be INT");
        scope.bound.emplace_back(e.name, Type::integer());
        Type body = type_of(e.args[2], scope);
        scope.bound.pop_back();
        if (body.known() && body != Type::boolean()) error(e.args[2].span, "quantifier body must be BOOL");
        return set(e, Type::boolean());
      }
      case ExprKind::Cond: {
        Type c = type_of(e.args[0], scope);
        Type a = type_of(e.args[1], scope);
        Type b = type_of(e.args[2], scope);
        if (c.known() && c != Type::boolean()) error(e.args[0].span, "condition must be BOOL");
        if (!all_known({a, b})) return set(e, Type{});
        if (a != b) return mismatch(e, "branches have types " + a.to_string() + " and " + b.to_string());
        if (a.is_struct()) return mismatch(e, "conditional cannot produce a struct");
        return set(e, a);
      }
      case ExprKind::Index: {
        Type s = type_of(e.args[0], scope);
        Type i = type_of(e.args[1], scope);
        if (!all_known({s, i})) return set(e, Type{});
        if (s != Type::seq() || i != Type::integer()) return mismatch(e, "indexing needs SEQ[INT]");
        return set(e, Type::integer());
      }
      case ExprKind::Field: {
        Type base = type_of(e.args[0], scope);
        if (!base.known()) return set(e, Type{});
        if (e.args[0].kind != ExprKind::Var && e.args[0].kind != ExprKind::Old) {
          return mismatch(e, "field access needs a struct variable");
        }
        const StructDef* sd = base.is_struct() ? p_.structure(base.name) : nullptr;
        if (!sd) return mismatch(e, "value of type " + base.to_string() + " has no fields");
        for (const auto& f : sd->fields) {
          if (f.name == e.name) return set(e, f.type);
        }
        return mismatch(e, "struct " + sd->name + " has no field '" + e.name + "'");
      }
      case ExprKind::SeqLit: {
        bool ok = true;
        for (auto& a : e.args) {
          Type t = type_of(a, scope);
          if (t.known() && t != Type::integer()) {
            error(a.span, "sequence elements must be INT");
            ok = false;
          }
        }
        return ok ? set(e, Type::seq()) : set(e, Type{});
      }
      case ExprKind::Apply: {
        std::vector<Type> ts;
        for (auto& a : e.args) ts.push_back(type_of(a, scope));
        if (is_builtin_name(e.name)) return apply_builtin(e, ts);
        if (const GhostFunction* g = p_.ghost(e.name)) {
          if (ts.size() != g->params.size()) {
            return mismatch(e, "'" + g->name + "' expects " + std::to_string(g->params.size()) + " arguments");
          }
          for (std::size_t i = 0; i < ts.size(); ++i) {
            if (ts[i].known() && ts[i] != g->params[i].type) {
              error(e.args[i].span, "argument " + std::to_string(i + 1) + " of '" + g->name + "' must be " +
                                        g->params[i].type.to_string() + ", found " + ts[i].to_string());
            }
          }
          e.callee = Callee::Ghost;
          return set(e, g->return_type);
        }
        if (p_.routine(e.name)) {
          return mismatch(e, "routine '" + e.name + "' can only be called as a statement or `x := " + e.name +
                                 "(...)`");
        }
        return mismatch(e, "unknown function '" + e.name + "'");
      }
    }
    return set(e, Type{});
  }

  Type binary(Expr& e, Scope& scope) {
    Type a = type_of(e.args[0], scope);
    Type b = type_of(e.args[1], scope);
    if (!all_known({a, b})) return set(e, Type{});
    const Type I = Type::integer(), B = Type::boolean();
    auto need = [&](const Type& t, Type result) -> Type {
      if (a != t || b != t) {
        return mismatch(e, std::string("operator '") + to_string(e.binary) + "' needs " + t.to_string() +
                               " operands, found " + a.to_string() + " and " + b.to_string());
      }
      return set(e, result);
    };
    switch (e.binary) {
      case BinaryOp::Add:
        if (a == Type::seq()) return need(Type::seq(), Type::seq());
        return need(I, I);
      case BinaryOp::Sub:
      case BinaryOp::Mul:
      case BinaryOp::Div:
      case BinaryOp::Mod: return need(I, I);
      case BinaryOp::Lt:
      case BinaryOp::Le:
      case BinaryOp::Gt:
      case BinaryOp::Ge: return need(I, B);
      case BinaryOp::And:
      case BinaryOp::Or:
      case BinaryOp::Implies: return need(B, B);
      case BinaryOp::Eq:
      case BinaryOp::Ne:
        if (a != b) return mismatch(e, "cannot compare " + a.to_string() + " with " + b.to_string());
        return set(e, B);
    }
    return set(e, Type{});
  }
};

}  // namespace

TypecheckResult typecheck(Program p) { return Checker(std::move(p)).run(); }

Program typecheck_or_throw(Program p) {
  auto result = typecheck(std::move(p));
  if (!result.ok()) throw TypeErrors(std::move(result.errors));
  return std::move(result.program);
}

std::vector<std::string> recursive_routines(const Program& p) {
  std::map<std::string, std::set<std::string>> graph;
  for (const auto& r : p.routines) {
    std::set<std::string> calls;
    collect_calls(r.body, calls);
    auto& edges = graph[r.name];
    for (const auto& c : calls) {
      if (p.routine(c)) edges.insert(c);
    }
  }
  auto cyclic = cyclic_nodes(graph);
  return {cyclic.begin(), cyclic.end()};
}

bool reaches(const Program& p, const std::string& a, const std::string& b) {
  std::set<std::string> seen;
  std::vector<std::string> stack{a};
  while (!stack.empty()) {
    std::string n = stack.back();
    stack.pop_back();
    const Routine* r = p.routine(n);
    if (!r) continue;
    std::set<std::string> calls;
    collect_calls(r->body, calls);
    for (const auto& c : calls) {
      if (c == b) return true;
      if (seen.insert(c).second) stack.push_back(c);
    }
  }
  return false;
}

bool same_cycle(const Program& p, const std::string& a, const std::string& b) {
  return reaches(p, a, b) && reaches(p, b, a);
}

}  // namespace contraver::cvl
