#include "contraver/vcgen.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "contraver/typecheck.hpp"

namespace contraver::vc {

using cvl::BinaryOp;
using cvl::Builtin;
using cvl::Expr;
using cvl::ExprKind;
using cvl::Program;
using cvl::Routine;
using cvl::Stmt;
using cvl::StmtKind;
using logic::Fn;
using logic::Op;
using logic::Sort;
using logic::Term;

const char* to_string(VcKind k) {
  switch (k) {
    case VcKind::PreconditionAtCall: return "Precondition-at-call";
    case VcKind::Postcondition: return "Postcondition";
    case VcKind::LoopInitiation: return "LoopInitiation";
    case VcKind::LoopConsecution: return "LoopConsecution";
    case VcKind::LoopExitImpliesPost: return "LoopExitImpliesPost";
    case VcKind::VariantNonneg: return "VariantNonneg";
    case VcKind::VariantDecrease: return "VariantDecrease";
    case VcKind::Check: return "Check";
    case VcKind::FramePreservation: return "FramePreservation";
    case VcKind::InvariantPreservation: return "InvariantPreservation";
    case VcKind::Smoke: return "Smoke";
  }
  return "?";
}

const char* to_string(InvariantMode m) { return m == InvariantMode::Implicit ? "implicit" : "explicit"; }

Term VerificationCondition::formula() const { return logic::node(Op::Implies, Sort::Bool, {hypothesis, goal}); }

std::string program_var(const std::string& name) { return "v." + name; }
std::string old_var(const std::string& name) { return "old." + name; }
std::string field_var(const std::string& base, const std::string& field) { return base + "." + field; }

Sort sort_of(const cvl::Type& t) {
  switch (t.kind) {
    case cvl::Type::Kind::Bool: return Sort::Bool;
    case cvl::Type::Kind::Seq: return Sort::Seq;
    case cvl::Type::Kind::Bag: return Sort::Bag;
    default: return Sort::Int;
  }
}

namespace {

std::string ghost_symbol(const std::string& name) { return "g." + name; }

/// Expression translation with configurable variable naming.
class Translator {
 public:
  explicit Translator(const Program& p) : p_(p) {}

  std::map<std::string, std::string> now;     // program name -> logic base name
  std::map<std::string, std::string> before;  // for `old`
  std::string result = program_var("Result");

  std::string base(const std::string& name, bool old) const {
    const auto& m = old ? before : now;
    if (auto it = m.find(name); it != m.end()) return it->second;
    return old ? old_var(name) : program_var(name);
  }

  Term expr(const Expr& e) { return go(e, false); }

  /// Field terms of a struct-valued expression (a variable or `old` of one).
  std::vector<Term> fields(const Expr& e, bool old) {
    if (e.kind == ExprKind::Old) return fields(e.args[0], true);
    const auto* sd = p_.structure(e.type.name);
    std::vector<Term> out;
    for (const auto& f : sd->fields) out.push_back(logic::var(field_var(base(e.name, old), f.name), sort_of(f.type)));
    return out;
  }

 private:
  const Program& p_;
  std::vector<std::string> bound_;

  bool is_bound(const std::string& n) const { return std::find(bound_.begin(), bound_.end(), n) != bound_.end(); }

  Term eq(const Expr& a, const Expr& b, bool old) {
    if (a.type.is_struct()) {
      auto xs = fields(a, old);
      auto ys = fields(b, old);
      std::vector<Term> parts;
      for (std::size_t i = 0; i < xs.size(); ++i) parts.push_back(value_eq(xs[i], ys[i]));
      return parts.empty() ? logic::bool_lit(true) : logic::mk_and(parts);
    }
    return value_eq(go(a, old), go(b, old));
  }

  static Term value_eq(const Term& x, const Term& y) {
    if (x->sort == Sort::Seq) return logic::app(Fn::SeqEq, {x, y});
    if (x->sort == Sort::Bag) return logic::app(Fn::BagEq, {x, y});
    return logic::node(Op::Eq, Sort::Bool, {x, y});
  }

  Term go(const Expr& e, bool old) {
    switch (e.kind) {
      case ExprKind::IntLit: return logic::int_lit(e.int_value);
      case ExprKind::BoolLit: return logic::bool_lit(e.bool_value);
      case ExprKind::Var:
        if (is_bound(e.name)) return logic::var("q." + e.name, Sort::Int);
        if (const auto* c = p_.constant(e.name)) return logic::int_lit(c->value);
        return logic::var(base(e.name, old), sort_of(e.type));
      case ExprKind::Result: return logic::var(result, sort_of(e.type));
      case ExprKind::Old: return go(e.args[0], true);
      case ExprKind::Unary:
        if (e.unary == cvl::UnaryOp::Not) return logic::node(Op::Not, Sort::Bool, {go(e.args[0], old)});
        return logic::node(Op::Neg, Sort::Int, {go(e.args[0], old)});
      case ExprKind::Binary: {
        if (e.binary == BinaryOp::Eq) return eq(e.args[0], e.args[1], old);
        if (e.binary == BinaryOp::Ne) return logic::node(Op::Not, Sort::Bool, {eq(e.args[0], e.args[1], old)});
        Term a = go(e.args[0], old);
        Term b = go(e.args[1], old);
        switch (e.binary) {
          case BinaryOp::Add:
            if (a->sort == Sort::Seq) return logic::app(Fn::Cat, {a, b});
            return logic::node(Op::Add, Sort::Int, {a, b});
          case BinaryOp::Sub: return logic::node(Op::Sub, Sort::Int, {a, b});
          case BinaryOp::Mul: return logic::node(Op::Mul, Sort::Int, {a, b});
          case BinaryOp::Div: return logic::node(Op::Div, Sort::Int, {a, b});
          case BinaryOp::Mod: return logic::node(Op::Mod, Sort::Int, {a, b});
          case BinaryOp::Lt: return logic::node(Op::Lt, Sort::Bool, {a, b});
          case BinaryOp::Le: return logic::node(Op::Le, Sort::Bool, {a, b});
          case BinaryOp::Gt: return logic::node(Op::Lt, Sort::Bool, {b, a});
          case BinaryOp::Ge: return logic::node(Op::Le, Sort::Bool, {b, a});
          case BinaryOp::And: return logic::node(Op::And, Sort::Bool, {a, b});
          case BinaryOp::Or: return logic::node(Op::Or, Sort::Bool, {a, b});
          case BinaryOp::Implies: return logic::node(Op::Implies, Sort::Bool, {a, b});
          default: break;
        }
        throw Error("untranslatable operator");
      }
      case ExprKind::Quant: {
        Term lo = go(e.args[0], old);
        Term hi = go(e.args[1], old);
        bound_.push_back(e.name);
        Term body = go(e.args[2], old);
        bound_.pop_back();
        Term i = logic::var("q." + e.name, Sort::Int);
        Term range = logic::node(Op::And, Sort::Bool,
                                 {logic::node(Op::Le, Sort::Bool, {lo, i}), logic::node(Op::Le, Sort::Bool, {i, hi})});
        if (e.quant == cvl::Quantifier::Forall) {
          return logic::quant(Op::Forall, {{"q." + e.name, Sort::Int}},
                              logic::node(Op::Implies, Sort::Bool, {range, body}));
        }
        return logic::quant(Op::Exists, {{"q." + e.name, Sort::Int}}, logic::node(Op::And, Sort::Bool, {range, body}));
      }
      case ExprKind::Cond:
        return logic::node(Op::Ite, sort_of(e.type), {go(e.args[0], old), go(e.args[1], old), go(e.args[2], old)});
      case ExprKind::Index: return logic::app(Fn::At, {go(e.args[0], old), go(e.args[1], old)});
      case ExprKind::Field: {
        const Expr& b = e.args[0];
        const bool o = old || b.kind == ExprKind::Old;
        const Expr& v = b.kind == ExprKind::Old ? b.args[0] : b;
        return logic::var(field_var(base(v.name, o), e.name), sort_of(e.type));
      }
      case ExprKind::SeqLit: {
        Term s = logic::app(Fn::SeqEmpty, {});
        for (const auto& a : e.args) s = logic::app(Fn::Ext, {s, go(a, old)});
        return s;
      }
      case ExprKind::Apply: {
        std::vector<Term> args;
        for (const auto& a : e.args) args.push_back(go(a, old));
        if (e.callee == cvl::Callee::Ghost) return logic::ghost_app(ghost_symbol(e.name), sort_of(e.type), args);
        switch (e.builtin) {
          case Builtin::Count: return logic::app(Fn::Len, args);
          case Builtin::Interval: return logic::app(Fn::Interval, args);
          case Builtin::SeqExtended: return logic::app(Fn::Ext, args);
          case Builtin::BagExtended: return logic::app(Fn::BagExt, args);
          case Builtin::ToBag: return logic::app(Fn::ToBag, args);
          case Builtin::Occ: return logic::app(Fn::Occ, args);
          case Builtin::Union: return logic::app(Fn::BagUnion, args);
          case Builtin::EmptyBag: return logic::app(Fn::BagEmpty, {});
          case Builtin::None: break;
        }
        throw Error("unresolved application '" + e.name + "'");
      }
    }
    throw Error("untranslatable expression");
  }
};

// ---- lowering -------------------------------------------------------------

class Lowering {
 public:
  Lowering(const Program& p, const Routine& r, const VcOptions& opts) : p_(p), r_(r), opts_(opts) {}

  CoreRoutine run() {
    CoreRoutine out;
    out.name = r_.name;
    Translator t(p_);
    std::vector<Term> hyp;
    for (const auto& c : r_.preconditions) hyp.push_back(t.expr(c.expr));
    if (opts_.invariants == InvariantMode::Implicit) {
      for (const auto& param : r_.params) {
        for (auto& inv : struct_invariants(param.name, false)) hyp.push_back(inv.second);
      }
    }
    out.hypothesis = logic::mk_and(hyp);

    auto& body = out.body;
    const SourceSpan pre_span = r_.preconditions.empty() ? r_.span : r_.preconditions.front().span;
    body.push_back(assert_core(site(VcKind::Smoke, "precondition", pre_span, SmokeTarget::Precondition),
                               logic::bool_lit(false)));
    for (const auto& param : r_.params) {
      for (const auto& [name, sort] : expand(param.name)) {
        body.push_back(assign(old_var(name.substr(2)), sort, logic::var(name, sort)));
      }
    }
    if (r_.variant && is_recursive(r_.name)) {
      body.push_back(assert_core(site(VcKind::VariantNonneg, "variant", r_.variant->span),
                                 logic::node(Op::Le, Sort::Bool, {logic::int_lit(0), t.expr(*r_.variant)})));
    }
    stmts(r_.body, body);

    Translator post(p_);
    for (std::size_t i = 0; i < r_.postconditions.size(); ++i) {
      const auto& c = r_.postconditions[i];
      body.push_back(assert_core(site(VcKind::Postcondition, cvl::clause_label(c, "ensure", i + 1), c.span),
                                 post.expr(c.expr)));
    }
    for (const auto& param : r_.params) {
      if (!param.inout) continue;
      if (!r_.modifies_name(param.name)) {
        std::vector<Term> same;
        for (const auto& [name, sort] : expand(param.name)) {
          same.push_back(value_eq(logic::var(name, sort), logic::var(old_var(name.substr(2)), sort)));
        }
        body.push_back(assert_core(site(VcKind::FramePreservation, param.name, param.span), logic::mk_and(same)));
      } else {
        for (auto& [clause, inv] : struct_invariants(param.name, false)) {
          body.push_back(assert_core(site(VcKind::InvariantPreservation, clause->first, clause->second), inv));
        }
      }
    }
    out.sites = std::move(sites_);
    return out;
  }

  void stmts(const std::vector<Stmt>& body, std::vector<Core>& out) {
    for (const auto& s : body) stmt(s, out);
  }

 private:
  const Program& p_;
  const Routine& r_;
  VcOptions opts_;
  std::vector<Site> sites_;
  int calls_ = 0;
  int havocs_ = 0;
  int loops_ = 0;
  int checks_ = 0;

  bool is_recursive(const std::string& name) const {
    auto rec = cvl::recursive_routines(p_);
    return std::find(rec.begin(), rec.end(), name) != rec.end();
  }

  Site site(VcKind kind, std::string label, SourceSpan span, SmokeTarget smoke = SmokeTarget::None) {
    Site s;
    s.id = static_cast<int>(sites_.size());
    s.kind = kind;
    s.label = std::move(label);
    s.span = std::move(span);
    s.smoke = smoke;
    sites_.push_back(s);
    return s;
  }

  static Core assert_core(Site s, Term cond) {
    Core c;
    c.kind = CoreKind::Assert;
    c.site = std::move(s);
    c.cond = std::move(cond);
    return c;
  }

  static Core assume(Term cond) {
    Core c;
    c.kind = CoreKind::Assume;
    c.cond = std::move(cond);
    return c;
  }

  static Core assign(std::string var, Sort sort, Term value) {
    Core c;
    c.kind = CoreKind::Assign;
    c.var = std::move(var);
    c.sort = sort;
    c.value = std::move(value);
    return c;
  }

  Core havoc(const std::string& var, Sort sort) {
    Core c;
    c.kind = CoreKind::Havoc;
    c.var = var;
    c.sort = sort;
    // strip the "v." prefix so fresh names read h<n>.x
    c.value = logic::var("h" + std::to_string(++havocs_) + var.substr(1), sort);
    return c;
  }

  static Term value_eq(const Term& x, const Term& y) {
    if (x->sort == Sort::Seq) return logic::app(Fn::SeqEq, {x, y});
    if (x->sort == Sort::Bag) return logic::app(Fn::BagEq, {x, y});
    return logic::node(Op::Eq, Sort::Bool, {x, y});
  }

  cvl::Type type_of_var(const std::string& name) const {
    if (name == "Result") return r_.return_type ? *r_.return_type : cvl::Type{};
    if (const auto* param = r_.param(name)) return param->type;
    if (auto it = r_.locals.find(name); it != r_.locals.end()) return it->second;
    return cvl::Type::integer();
  }

  /// Logic variables (with sorts) backing a program variable.
  std::vector<std::pair<std::string, Sort>> expand(const std::string& name, const std::string& base = {}) const {
    const std::string b = base.empty() ? program_var(name) : base;
    cvl::Type t = type_of_var(name);
    if (!t.is_struct()) return {{b, sort_of(t)}};
    std::vector<std::pair<std::string, Sort>> out;
    for (const auto& f : p_.structure(t.name)->fields) out.emplace_back(field_var(b, f.name), sort_of(f.type));
    return out;
  }

  using Clause = std::pair<std::string, SourceSpan>;
  struct ClauseRef {
    std::string first;
    SourceSpan second;
  };

  /// Invariant clauses of struct type `type` over the fields of `base`.
  std::vector<std::pair<std::shared_ptr<ClauseRef>, Term>> invariants_at(const std::string& type,
                                                                         const std::string& base) const {
    std::vector<std::pair<std::shared_ptr<ClauseRef>, Term>> out;
    const auto* sd = p_.structure(type);
    if (!sd) return out;
    Translator t(p_);
    for (const auto& f : sd->fields) t.now[f.name] = field_var(base, f.name);
    for (std::size_t i = 0; i < sd->invariants.size(); ++i) {
      const auto& c = sd->invariants[i];
      auto ref = std::make_shared<ClauseRef>(ClauseRef{cvl::clause_label(c, "invariant", i + 1), c.span});
      out.emplace_back(ref, t.expr(c.expr));
    }
    return out;
  }

  std::vector<std::pair<std::shared_ptr<ClauseRef>, Term>> struct_invariants(const std::string& var, bool) const {
    cvl::Type t = type_of_var(var);
    if (!t.is_struct()) return {};
    return invariants_at(t.name, program_var(var));
  }

  void targets(const std::vector<Stmt>& body, std::set<std::pair<std::string, Sort>>& out) const {
    for (const auto& s : body) {
      switch (s.kind) {
        case StmtKind::Assign:
          if (!s.target_field.empty()) {
            const auto* sd = p_.structure(type_of_var(s.target).name);
            for (const auto& f : sd->fields) {
              if (f.name == s.target_field) out.emplace(field_var(program_var(s.target), f.name), sort_of(f.type));
            }
          } else {
            for (const auto& v : expand(s.target)) out.insert(v);
          }
          break;
        case StmtKind::Call: {
          const Routine* callee = p_.routine(s.callee);
          if (!s.target.empty()) {
            for (const auto& v : expand(s.target)) out.insert(v);
          }
          for (std::size_t i = 0; i < s.args.size() && callee; ++i) {
            if (callee->params[i].inout && callee->modifies_name(callee->params[i].name)) {
              for (const auto& v : expand(s.args[i].name)) out.insert(v);
            }
          }
          break;
        }
        case StmtKind::If:
          targets(s.then_body, out);
          targets(s.else_body, out);
          break;
        case StmtKind::While: targets(s.then_body, out); break;
        default: break;
      }
    }
  }

  void stmt(const Stmt& s, std::vector<Core>& out) {
    Translator t(p_);
    switch (s.kind) {
      case StmtKind::Assign: {
        const std::string target =
            s.target_field.empty() ? program_var(s.target) : field_var(program_var(s.target), s.target_field);
        out.push_back(assign(target, sort_of(s.value.type), t.expr(s.value)));
        return;
      }
      case StmtKind::If: {
        Core c;
        c.kind = CoreKind::If;
        c.cond = t.expr(s.value);
        stmts(s.then_body, c.first);
        stmts(s.else_body, c.second);
        out.push_back(std::move(c));
        return;
      }
      case StmtKind::Check: {
        const std::string label = "check_" + std::to_string(++checks_);
        out.push_back(assert_core(site(VcKind::Smoke, label, s.span, SmokeTarget::CheckSite), logic::bool_lit(false)));
        out.push_back(assert_core(site(VcKind::Check, label, s.span), t.expr(s.value)));
        return;
      }
      case StmtKind::UseInvariant:
        for (auto& [_, inv] : struct_invariants(s.target, false)) out.push_back(assume(inv));
        return;
      case StmtKind::While: loop(s, out); return;
      case StmtKind::Call: call(s, out); return;
    }
  }

  void loop(const Stmt& s, std::vector<Core>& out) {
    const int n = ++loops_;
    Translator t(p_);
    std::vector<std::pair<std::string, Term>> inv;
    for (std::size_t i = 0; i < s.invariants.size(); ++i) {
      inv.emplace_back(cvl::clause_label(s.invariants[i], "invariant", i + 1), t.expr(s.invariants[i].expr));
    }
    for (std::size_t i = 0; i < inv.size(); ++i) {
      out.push_back(assert_core(site(VcKind::LoopInitiation, inv[i].first, s.invariants[i].span), inv[i].second));
    }
    std::set<std::pair<std::string, Sort>> tg;
    targets(s.then_body, tg);
    for (const auto& [name, sort] : tg) out.push_back(havoc(name, sort));
    for (const auto& [_, term] : inv) out.push_back(assume(term));

    const Term guard = t.expr(s.value);
    const Term variant = t.expr(*s.variant);
    const std::string v0 = "l" + std::to_string(n) + ".variant";
    Core choice;
    choice.kind = CoreKind::Choice;
    auto& body = choice.first;
    body.push_back(assume(guard));
    body.push_back(assert_core(site(VcKind::Smoke, "loop_" + std::to_string(n), s.span, SmokeTarget::LoopBody),
                               logic::bool_lit(false)));
    body.push_back(assert_core(site(VcKind::VariantNonneg, "variant", s.variant->span),
                               logic::node(Op::Le, Sort::Bool, {logic::int_lit(0), variant})));
    body.push_back(assign(v0, Sort::Int, variant));
    stmts(s.then_body, body);
    for (std::size_t i = 0; i < inv.size(); ++i) {
      body.push_back(assert_core(site(VcKind::LoopConsecution, inv[i].first, s.invariants[i].span), inv[i].second));
    }
    body.push_back(assert_core(site(VcKind::VariantDecrease, "variant", s.variant->span),
                               logic::node(Op::Lt, Sort::Bool, {variant, logic::var(v0, Sort::Int)})));
    body.push_back(assume(logic::bool_lit(false)));
    choice.second.push_back(assume(logic::node(Op::Not, Sort::Bool, {guard})));
    out.push_back(std::move(choice));
  }

  void call(const Stmt& s, std::vector<Core>& out) {
    const Routine& callee = *p_.routine(s.callee);
    const std::string snap = "c" + std::to_string(++calls_);
    Translator caller(p_);

    // snapshot the arguments
    Translator pre(p_);
    for (std::size_t i = 0; i < callee.params.size(); ++i) {
      const auto& formal = callee.params[i];
      const std::string base = field_var(snap, formal.name);
      pre.now[formal.name] = base;
      if (formal.type.is_struct()) {
        auto actual = caller.fields(s.args[i], false);
        const auto* sd = p_.structure(formal.type.name);
        for (std::size_t k = 0; k < sd->fields.size(); ++k) {
          out.push_back(assign(field_var(base, sd->fields[k].name), sort_of(sd->fields[k].type), actual[k]));
        }
      } else {
        out.push_back(assign(base, sort_of(formal.type), caller.expr(s.args[i])));
      }
    }

    for (std::size_t i = 0; i < callee.preconditions.size(); ++i) {
      const auto& c = callee.preconditions[i];
      out.push_back(assert_core(site(VcKind::PreconditionAtCall, cvl::clause_label(c, "require", i + 1), s.span),
                                pre.expr(c.expr)));
    }
    const bool implicit = opts_.invariants == InvariantMode::Implicit;
    if (implicit) {
      for (const auto& formal : callee.params) {
        if (!formal.type.is_struct()) continue;
        for (auto& [clause, inv] : invariants_at(formal.type.name, pre.now[formal.name])) {
          out.push_back(assert_core(site(VcKind::PreconditionAtCall, clause->first, s.span), inv));
        }
      }
    }
    if (callee.variant && r_.variant && cvl::same_cycle(p_, r_.name, callee.name)) {
      Translator entry(p_);
      for (const auto& param : r_.params) entry.now[param.name] = old_var(param.name);
      out.push_back(assert_core(site(VcKind::VariantDecrease, "variant", s.span),
                                logic::node(Op::Lt, Sort::Bool, {pre.expr(*callee.variant), entry.expr(*r_.variant)})));
    }

    Translator post(p_);
    for (std::size_t i = 0; i < callee.params.size(); ++i) {
      const auto& formal = callee.params[i];
      const std::string base = field_var(snap, formal.name);
      post.before[formal.name] = base;
      if (formal.inout) {
        post.now[formal.name] = caller.base(s.args[i].name, false);
        if (callee.modifies_name(formal.name)) {
          for (const auto& [name, sort] : expand(s.args[i].name)) out.push_back(havoc(name, sort));
        }
      } else {
        post.now[formal.name] = base;
      }
    }
    if (!s.target.empty()) {
      post.result = program_var(s.target);
      for (const auto& [name, sort] : expand(s.target)) out.push_back(havoc(name, sort));
    }
    for (const auto& c : callee.postconditions) out.push_back(assume(post.expr(c.expr)));
    if (implicit) {
      for (std::size_t i = 0; i < callee.params.size(); ++i) {
        const auto& formal = callee.params[i];
        if (!formal.inout || !formal.type.is_struct() || !callee.modifies_name(formal.name)) continue;
        for (auto& [_, inv] : invariants_at(formal.type.name, post.now[formal.name])) out.push_back(assume(inv));
      }
    }
  }
};

// ---- weakest preconditions ------------------------------------------------

/// `target` < 0: raw classic wp. Otherwise only that site is asserted;
/// other assertions become assumptions and smoke probes are skipped.
Term wp_list(const std::vector<Core>& body, Term post, int target) {
  const bool raw = target < 0;
  for (auto it = body.rbegin(); it != body.rend(); ++it) {
    const Core& c = *it;
    switch (c.kind) {
      case CoreKind::Assign:
      case CoreKind::Havoc: post = logic::subst(post, {{c.var, c.value}}); break;
      case CoreKind::Assert:
        if (c.site.kind == VcKind::Smoke && c.site.id != target) break;
        if (raw) post = logic::node(Op::And, Sort::Bool, {c.cond, post});
        else if (c.site.id == target) post = logic::mk_and(c.cond, post);
        else post = logic::mk_implies(c.cond, post);
        break;
      case CoreKind::Assume:
        post = raw ? logic::node(Op::Implies, Sort::Bool, {c.cond, post}) : logic::mk_implies(c.cond, post);
        break;
      case CoreKind::If: {
        Term a = wp_list(c.first, post, target);
        Term b = wp_list(c.second, post, target);
        if (raw) {
          post = logic::node(Op::And, Sort::Bool,
                             {logic::node(Op::Implies, Sort::Bool, {c.cond, a}),
                              logic::node(Op::Implies, Sort::Bool, {logic::node(Op::Not, Sort::Bool, {c.cond}), b})});
        } else {
          post = logic::mk_and(logic::mk_implies(c.cond, a), logic::mk_implies(logic::mk_not(c.cond), b));
        }
        break;
      }
      case CoreKind::Choice: {
        Term a = wp_list(c.first, post, target);
        Term b = wp_list(c.second, post, target);
        post = raw ? logic::node(Op::And, Sort::Bool, {a, b}) : logic::mk_and(a, b);
        break;
      }
    }
  }
  return post;
}

bool site_less(const VerificationCondition& a, const VerificationCondition& b) {
  if (a.span.start_line != b.span.start_line) return a.span.start_line < b.span.start_line;
  if (a.span.start_col != b.span.start_col) return a.span.start_col < b.span.start_col;
  const std::string ka = to_string(a.kind), kb = to_string(b.kind);
  if (ka != kb) return ka < kb;
  if (a.label != b.label) return a.label < b.label;
  return a.index < b.index;
}

VCSet build(const Program& p, const std::string& routine, const VcOptions& opts, bool smoke) {
  const Routine* r = p.routine(routine);
  if (!r) throw Error("unknown routine '" + routine + "'");
  for (const auto& name : cvl::recursive_routines(p)) {
    if (name == routine && !r->variant) throw Error("recursive routine '" + routine + "' has no variant");
  }
  CoreRoutine core = desugar(p, *r, opts);
  VCSet set;
  set.routine = routine;
  set.options = opts;
  std::map<std::pair<std::string, VcKind>, int> counts;
  for (const auto& s : core.sites) {
    if ((s.kind == VcKind::Smoke) != smoke) continue;
    VerificationCondition v;
    v.routine = routine;
    v.label = s.label;
    v.kind = s.kind;
    v.index = ++counts[{s.label, s.kind}];
    v.id = routine + ":" + s.label + ":" + to_string(s.kind) + ":" + std::to_string(v.index);
    v.span = s.span;
    v.smoke = s.smoke;
    v.hypothesis = core.hypothesis;
    v.goal = wp_list(core.body, logic::bool_lit(true), s.id);
    set.vcs.push_back(std::move(v));
  }
  std::stable_sort(set.vcs.begin(), set.vcs.end(), site_less);
  return set;
}

}  // namespace

CoreRoutine desugar(const Program& p, const Routine& r, const VcOptions& opts) { return Lowering(p, r, opts).run(); }

Term wp(const std::vector<Core>& body, const Term& post) { return wp_list(body, post, -1); }

Term wp(const Program& p, const Routine& r, const std::vector<Stmt>& body, const Term& post) {
  Lowering lower(p, r, {});
  std::vector<Core> core;
  lower.stmts(body, core);
  return wp(core, post);
}

VCSet generate_vcs(const Program& p, const std::string& routine, const VcOptions& opts) {
  return build(p, routine, opts, false);
}

VCSet generate_smoke_vcs(const Program& p, const std::string& routine, const VcOptions& opts) {
  return build(p, routine, opts, true);
}

Term translate(const Program& p, const Expr& e) { return Translator(p).expr(e); }

std::vector<logic::GhostDef> ghost_definitions(const Program& p) {
  std::vector<logic::GhostDef> out;
  std::set<std::string> done;
  std::function<void(const cvl::GhostFunction&)> visit = [&](const cvl::GhostFunction& g) {
    if (!done.insert(g.name).second) return;
    std::function<void(const Expr&)> deps = [&](const Expr& e) {
      if (e.kind == ExprKind::Apply && e.callee == cvl::Callee::Ghost) visit(*p.ghost(e.name));
      for (const auto& a : e.args) deps(a);
    };
    deps(g.body);
    Translator t(p);
    logic::GhostDef def;
    def.name = ghost_symbol(g.name);
    for (const auto& param : g.params) {
      t.now[param.name] = "p." + param.name;
      def.params.push_back({"p." + param.name, sort_of(param.type)});
    }
    def.result = sort_of(g.return_type);
    def.body = t.expr(g.body);
    out.push_back(std::move(def));
  };
  for (const auto& g : p.ghosts) visit(g);
  return out;
}

std::string dump(const VCSet& set) {
  std::ostringstream os;
  for (const auto& v : set.vcs) {
    os << "VC " << v.id << "\n"
       << "  kind: " << to_string(v.kind) << "\n"
       << "  at: " << v.span.to_string() << "\n"
       << "  hypothesis: " << logic::to_smt(v.hypothesis) << "\n"
       << "  goal: " << logic::to_smt(v.goal) << "\n\n";
  }
  return os.str();
}

}  // namespace contraver::vc
