#include "contraver/interp.hpp"

#include <algorithm>

#include "contraver/typecheck.hpp"

namespace contraver::model {

using cvl::BinaryOp;
using cvl::Builtin;
using cvl::Expr;
using cvl::ExprKind;
using cvl::Routine;
using cvl::Stmt;
using cvl::StmtKind;

const char* to_string(ClauseKind kind) {
  switch (kind) {
    case ClauseKind::Precondition: return "Precondition";
    case ClauseKind::PreconditionAtCall: return "Precondition-at-call";
    case ClauseKind::StructInvariant: return "StructInvariant";
    case ClauseKind::LoopInvariant: return "LoopInvariant";
    case ClauseKind::VariantNonneg: return "VariantNonneg";
    case ClauseKind::VariantDecrease: return "VariantDecrease";
    case ClauseKind::Check: return "Check";
    case ClauseKind::Postcondition: return "Postcondition";
    case ClauseKind::Frame: return "Frame";
  }
  return "?";
}

ContractViolation::ContractViolation(std::string routine, std::string label, ClauseKind kind, SourceSpan span,
                                     std::map<std::string, Value> env)
    : Error(span.to_string() + ": " + std::string(to_string(kind)) + " '" + label + "' of " + routine +
            " violated"),
      routine_(std::move(routine)),
      label_(std::move(label)),
      kind_(kind),
      span_(std::move(span)),
      env_(std::move(env)) {}

Value default_value(const cvl::Type& t) {
  switch (t.kind) {
    case cvl::Type::Kind::Bool: return false;
    case cvl::Type::Kind::Seq: return SeqVal{};
    case cvl::Type::Kind::Bag: return BagVal{};
    default: return std::int64_t{0};
  }
}

namespace {

std::int64_t as_int(const Value& v) { return std::get<std::int64_t>(v); }
bool as_bool(const Value& v) { return std::get<bool>(v); }
const SeqVal& as_seq(const Value& v) { return std::get<SeqVal>(v); }
const BagVal& as_bag(const Value& v) { return std::get<BagVal>(v); }

}  // namespace

struct Interpreter::Frame {
  const Routine* routine = nullptr;
  Env env;
  std::map<std::string, Value> entry;
  std::optional<std::int64_t> entry_variant;
};

Interpreter::Interpreter(const cvl::Program& program, std::int64_t fuel)
    : program_(program), fuel_(fuel), recursive_(cvl::recursive_routines(program)) {}

void Interpreter::tick() {
  if (++steps_ > fuel_) throw FuelExhausted("step budget of " + std::to_string(fuel_) + " exhausted");
}

bool Interpreter::is_recursive(const std::string& r) const {
  return std::find(recursive_.begin(), recursive_.end(), r) != recursive_.end();
}

Value Interpreter::eval(const Expr& e, const Env& env) {
  switch (e.kind) {
    case ExprKind::IntLit: return e.int_value;
    case ExprKind::BoolLit: return e.bool_value;
    case ExprKind::Var: {
      if (auto it = env.vars.find(e.name); it != env.vars.end()) return it->second;
      if (const auto* c = program_.constant(e.name)) return c->value;
      throw Error("unbound variable '" + e.name + "'");
    }
    case ExprKind::Result:
      if (!env.result) throw Error("Result is not available here");
      return *env.result;
    case ExprKind::Old: {
      if (!env.old) throw Error("old used outside a postcondition");
      Env before;
      before.vars = *env.old;
      before.old = env.old;  // old (old e) = old e
      return eval(e.args[0], before);
    }
    case ExprKind::Unary: {
      Value v = eval(e.args[0], env);
      if (e.unary == cvl::UnaryOp::Not) return !as_bool(v);
      return checked_sub(0, as_int(v));
    }
    case ExprKind::Binary: {
      switch (e.binary) {
        case BinaryOp::And: return as_bool(eval(e.args[0], env)) && as_bool(eval(e.args[1], env));
        case BinaryOp::Or: return as_bool(eval(e.args[0], env)) || as_bool(eval(e.args[1], env));
        case BinaryOp::Implies: return !as_bool(eval(e.args[0], env)) || as_bool(eval(e.args[1], env));
        default: break;
      }
      Value a = eval(e.args[0], env);
      Value b = eval(e.args[1], env);
      switch (e.binary) {
        case BinaryOp::Add:
          if (std::holds_alternative<SeqVal>(a)) return as_seq(a).concat(as_seq(b));
          return checked_add(as_int(a), as_int(b));
        case BinaryOp::Sub: return checked_sub(as_int(a), as_int(b));
        case BinaryOp::Mul: return checked_mul(as_int(a), as_int(b));
        case BinaryOp::Div: return floor_div(as_int(a), as_int(b));
        case BinaryOp::Mod: return floor_mod(as_int(a), as_int(b));
        case BinaryOp::Eq: return a == b;
        case BinaryOp::Ne: return a != b;
        case BinaryOp::Lt: return as_int(a) < as_int(b);
        case BinaryOp::Le: return as_int(a) <= as_int(b);
        case BinaryOp::Gt: return as_int(a) > as_int(b);
        case BinaryOp::Ge: return as_int(a) >= as_int(b);
        default: break;
      }
      throw Error("bad binary operator");
    }
    case ExprKind::Quant: {
      const std::int64_t lo = as_int(eval(e.args[0], env));
      const std::int64_t hi = as_int(eval(e.args[1], env));
      const bool forall = e.quant == cvl::Quantifier::Forall;
      Env inner = env;
      for (std::int64_t i = lo; i <= hi; ++i) {
        tick();
        inner.vars[e.name] = i;
        if (as_bool(eval(e.args[2], inner)) != forall) return !forall;
      }
      return forall;
    }
    case ExprKind::Cond:
      return as_bool(eval(e.args[0], env)) ? eval(e.args[1], env) : eval(e.args[2], env);
    case ExprKind::Index: {
      Value s = eval(e.args[0], env);
      return as_seq(s).at(as_int(eval(e.args[1], env)));
    }
    case ExprKind::Field: {
      Value base = eval(e.args[0], env);
      return to_value(std::get<StructVal>(base).fields.at(e.name));
    }
    case ExprKind::SeqLit: {
      std::vector<std::int64_t> xs;
      for (const auto& a : e.args) xs.push_back(as_int(eval(a, env)));
      return SeqVal(std::move(xs));
    }
    case ExprKind::Apply: return eval_apply(e, env);
  }
  throw Error("bad expression");
}

Value Interpreter::eval_apply(const Expr& e, const Env& env) {
  std::vector<Value> args;
  for (const auto& a : e.args) args.push_back(eval(a, env));
  if (e.callee == cvl::Callee::Builtin) {
    switch (e.builtin) {
      case Builtin::Count: return as_seq(args[0]).length();
      case Builtin::Interval: return as_seq(args[0]).interval(as_int(args[1]), as_int(args[2]));
      case Builtin::SeqExtended: return as_seq(args[0]).extended(as_int(args[1]));
      case Builtin::BagExtended: return as_bag(args[0]).extended(as_int(args[1]));
      case Builtin::ToBag: return to_bag(as_seq(args[0]));
      case Builtin::Occ: return as_bag(args[0]).occ(as_int(args[1]));
      case Builtin::Union: return as_bag(args[0]).unite(as_bag(args[1]));
      case Builtin::EmptyBag: return BagVal{};
      case Builtin::None: break;
    }
    throw Error("unresolved built-in '" + e.name + "'");
  }
  const cvl::GhostFunction* g = program_.ghost(e.name);
  if (!g) throw Error("unknown function '" + e.name + "'");
  tick();
  Env inner;
  for (std::size_t i = 0; i < g->params.size(); ++i) inner.vars[g->params[i].name] = args[i];
  return eval(g->body, inner);
}

void Interpreter::require_true(const Expr& e, const Env& env, const std::string& routine, const std::string& label,
                               ClauseKind kind, const SourceSpan& span) {
  trace_.push_back({routine, label, kind, span});
  if (!as_bool(eval(e, env))) throw ContractViolation(routine, label, kind, span, env.vars);
}

void Interpreter::check_struct_invariants(const Value& v, const Env& env, const std::string& routine,
                                          ClauseKind kind, const SourceSpan& span) {
  const auto* sv = std::get_if<StructVal>(&v);
  if (!sv) return;
  const auto* sd = program_.structure(sv->type);
  if (!sd) return;
  Env fields;
  for (const auto& [name, value] : sv->fields) fields.vars[name] = to_value(value);
  for (std::size_t i = 0; i < sd->invariants.size(); ++i) {
    const auto& c = sd->invariants[i];
    trace_.push_back({routine, cvl::clause_label(c, "invariant", i + 1), kind, span});
    if (!as_bool(eval(c.expr, fields))) {
      throw ContractViolation(routine, cvl::clause_label(c, "invariant", i + 1), kind, span, env.vars);
    }
  }
}

Value Interpreter::call(const Routine& r, std::vector<Value> args, Frame* caller, const Stmt* site) {
  Frame f;
  f.routine = &r;
  for (std::size_t i = 0; i < r.params.size(); ++i) f.env.vars[r.params[i].name] = args[i];
  if (r.return_type) f.env.result = default_value(*r.return_type);

  const bool at_call = caller != nullptr;
  const std::string who = at_call ? caller->routine->name : r.name;
  const SourceSpan& call_span = at_call ? site->span : r.span;
  const ClauseKind pre_kind = at_call ? ClauseKind::PreconditionAtCall : ClauseKind::Precondition;
  for (std::size_t i = 0; i < r.preconditions.size(); ++i) {
    const auto& c = r.preconditions[i];
    require_true(c.expr, f.env, who, cvl::clause_label(c, "require", i + 1), pre_kind,
                 at_call ? call_span : c.span);
  }
  for (const auto& p : r.params) {
    check_struct_invariants(f.env.vars[p.name], f.env, who, at_call ? ClauseKind::PreconditionAtCall
                                                                      : ClauseKind::StructInvariant,
                            at_call ? call_span : p.span);
  }
  if (r.variant) {
    const std::int64_t v = as_int(eval(*r.variant, f.env));
    f.entry_variant = v;
    if (is_recursive(r.name)) {
      trace_.push_back({r.name, "variant", ClauseKind::VariantNonneg, r.variant->span});
      if (v < 0) throw ContractViolation(r.name, "variant", ClauseKind::VariantNonneg, r.variant->span, f.env.vars);
    }
    if (at_call && caller->entry_variant && cvl::same_cycle(program_, caller->routine->name, r.name)) {
      trace_.push_back({who, "variant", ClauseKind::VariantDecrease, call_span});
      if (v >= *caller->entry_variant) {
        throw ContractViolation(who, "variant", ClauseKind::VariantDecrease, call_span, caller->env.vars);
      }
    }
  }
  f.entry = f.env.vars;

  exec_body(r.body, f);

  Env post = f.env;
  post.old = &f.entry;
  for (std::size_t i = 0; i < r.postconditions.size(); ++i) {
    const auto& c = r.postconditions[i];
    require_true(c.expr, post, r.name, cvl::clause_label(c, "ensure", i + 1), ClauseKind::Postcondition, c.span);
  }
  for (const auto& p : r.params) {
    if (!p.inout) continue;
    if (!r.modifies_name(p.name)) {
      trace_.push_back({r.name, p.name, ClauseKind::Frame, p.span});
      if (f.env.vars[p.name] != f.entry[p.name]) {
        throw ContractViolation(r.name, p.name, ClauseKind::Frame, p.span, f.env.vars);
      }
    } else {
      check_struct_invariants(f.env.vars[p.name], post, r.name, ClauseKind::StructInvariant, p.span);
    }
  }

  if (caller) {
    for (std::size_t i = 0; i < r.params.size(); ++i) {
      if (r.params[i].inout) caller->env.vars[site->args[i].name] = f.env.vars[r.params[i].name];
    }
  }
  args.clear();
  for (const auto& p : r.params) args.push_back(f.env.vars[p.name]);
  last_args_ = std::move(args);
  return f.env.result ? *f.env.result : Value{false};
}

void Interpreter::exec_body(const std::vector<Stmt>& body, Frame& f) {
  for (const auto& s : body) exec_stmt(s, f);
}

void Interpreter::exec_stmt(const Stmt& s, Frame& f) {
  tick();
  const std::string& who = f.routine->name;
  switch (s.kind) {
    case StmtKind::Assign: {
      Value v = eval(s.value, f.env);
      if (s.target == "Result") {
        f.env.result = std::move(v);
      } else if (!s.target_field.empty()) {
        std::get<StructVal>(f.env.vars.at(s.target)).fields[s.target_field] = to_scalar(v);
      } else {
        f.env.vars[s.target] = std::move(v);
      }
      return;
    }
    case StmtKind::If:
      exec_body(as_bool(eval(s.value, f.env)) ? s.then_body : s.else_body, f);
      return;
    case StmtKind::While: {
      auto check_invariants = [&] {
        for (std::size_t i = 0; i < s.invariants.size(); ++i) {
          const auto& c = s.invariants[i];
          require_true(c.expr, f.env, who, cvl::clause_label(c, "invariant", i + 1), ClauseKind::LoopInvariant,
                       c.span);
        }
      };
      check_invariants();
      while (as_bool(eval(s.value, f.env))) {
        tick();
        const std::int64_t before = as_int(eval(*s.variant, f.env));
        trace_.push_back({who, "variant", ClauseKind::VariantNonneg, s.variant->span});
        if (before < 0) throw ContractViolation(who, "variant", ClauseKind::VariantNonneg, s.variant->span, f.env.vars);
        exec_body(s.then_body, f);
        check_invariants();
        const std::int64_t after = as_int(eval(*s.variant, f.env));
        trace_.push_back({who, "variant", ClauseKind::VariantDecrease, s.variant->span});
        if (after >= before) {
          throw ContractViolation(who, "variant", ClauseKind::VariantDecrease, s.variant->span, f.env.vars);
        }
      }
      return;
    }
    case StmtKind::Check:
      require_true(s.value, f.env, who, "check", ClauseKind::Check, s.span);
      return;
    case StmtKind::UseInvariant:
      return;
    case StmtKind::Call: {
      const Routine* callee = program_.routine(s.callee);
      if (!callee) throw Error("unknown routine '" + s.callee + "'");
      std::vector<Value> args;
      for (const auto& a : s.args) args.push_back(eval(a, f.env));
      Value r = call(*callee, std::move(args), &f, &s);
      if (!s.target.empty()) {
        if (s.target == "Result") f.env.result = std::move(r);
        else f.env.vars[s.target] = std::move(r);
      }
      return;
    }
  }
}

ExecResult Interpreter::exec(const std::string& routine, std::vector<Value> args) {
  const Routine* r = program_.routine(routine);
  if (!r) throw Error("unknown routine '" + routine + "'");
  if (args.size() != r->params.size()) throw Error("wrong number of arguments for '" + routine + "'");
  steps_ = 0;
  trace_.clear();
  ExecResult out;
  Value result = call(*r, std::move(args), nullptr, nullptr);
  if (r->return_type) out.result = std::move(result);
  out.args = std::move(last_args_);
  out.trace = std::move(trace_);
  out.steps = steps_;
  trace_.clear();
  return out;
}

bool Interpreter::admissible(const std::string& routine, const std::vector<Value>& args) {
  const Routine* r = program_.routine(routine);
  if (!r || args.size() != r->params.size()) return false;
  Env env;
  for (std::size_t i = 0; i < r->params.size(); ++i) env.vars[r->params[i].name] = args[i];
  const std::int64_t saved = steps_;
  try {
    for (const auto& c : r->preconditions) {
      if (!as_bool(eval(c.expr, env))) return false;
    }
    for (const auto& p : r->params) {
      const auto* sv = std::get_if<StructVal>(&env.vars[p.name]);
      if (!sv) continue;
      const auto* sd = program_.structure(sv->type);
      Env fields;
      for (const auto& [name, value] : sv->fields) fields.vars[name] = to_value(value);
      for (const auto& c : sd->invariants) {
        if (!as_bool(eval(c.expr, fields))) return false;
      }
    }
  } catch (const RangeError&) {
    steps_ = saved;
    return false;
  } catch (const DivByZero&) {
    steps_ = saved;
    return false;
  }
  steps_ = saved;
  return true;
}

// ---- random inputs --------------------------------------------------------

namespace {

class InputSampler {
 public:
  InputSampler(const cvl::Program& p, std::mt19937_64& rng, const InputConfig& cfg) : p_(p), rng_(rng), cfg_(cfg) {}

  std::vector<Value> draw(const Routine& r) {
    seqs_.clear();
    std::vector<Value> out;
    for (const auto& param : r.params) out.push_back(value(param.type));
    return out;
  }

 private:
  const cvl::Program& p_;
  std::mt19937_64& rng_;
  const InputConfig& cfg_;
  std::vector<SeqVal> seqs_;  // sequences drawn so far for this vector

  std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng_);
  }

  bool coin(int one_in) { return uniform(1, one_in) == 1; }

  SeqVal seq() {
    const std::int64_t n = coin(2) ? uniform(0, 3) : uniform(0, cfg_.max_length);
    // half the sequences stay within a narrow nonnegative range
    const bool narrow = coin(2);
    std::vector<std::int64_t> xs;
    for (std::int64_t i = 0; i < n; ++i) {
      xs.push_back(narrow ? uniform(0, 15) : uniform(cfg_.min_value, cfg_.max_value));
    }
    if (coin(3)) std::sort(xs.begin(), xs.end());
    SeqVal s(std::move(xs));
    seqs_.push_back(s);
    return s;
  }

  std::int64_t integer() {
    if (!seqs_.empty() && !coin(3)) {
      const auto& s = seqs_[static_cast<std::size_t>(uniform(0, static_cast<std::int64_t>(seqs_.size()) - 1))];
      if (s.length() == 0 || coin(2)) return uniform(0, s.length() + 1);
      // near an element: bounds on values are usually spelled that way
      return s.at(uniform(1, s.length())) + uniform(-1, 1);
    }
    return uniform(cfg_.min_value, cfg_.max_value);
  }

  BagVal bag() {
    if (!seqs_.empty() && !coin(4)) {
      const auto& s = seqs_[static_cast<std::size_t>(uniform(0, static_cast<std::int64_t>(seqs_.size()) - 1))];
      return to_bag(s.interval(1, uniform(0, s.length())));
    }
    BagVal b;
    const std::int64_t n = uniform(0, cfg_.max_length);
    for (std::int64_t i = 0; i < n; ++i) b = b.extended(uniform(cfg_.min_value, cfg_.max_value));
    return b;
  }

  Value value(const cvl::Type& t) {
    switch (t.kind) {
      case cvl::Type::Kind::Int: return integer();
      case cvl::Type::Kind::Bool: return coin(2);
      case cvl::Type::Kind::Seq: return seq();
      case cvl::Type::Kind::Bag: return bag();
      case cvl::Type::Kind::Struct: {
        StructVal sv;
        sv.type = t.name;
        if (const auto* sd = p_.structure(t.name)) {
          for (const auto& f : sd->fields) sv.fields[f.name] = to_scalar(value(f.type));
        }
        return sv;
      }
      default: return std::int64_t{0};
    }
  }
};

}  // namespace

std::optional<std::vector<Value>> random_inputs(const cvl::Program& program, const std::string& routine,
                                                std::mt19937_64& rng, const InputConfig& cfg) {
  const Routine* r = program.routine(routine);
  if (!r) return std::nullopt;
  Interpreter checker(program);
  InputSampler sampler(program, rng, cfg);
  for (int attempt = 0; attempt < cfg.max_tries; ++attempt) {
    auto args = sampler.draw(*r);
    if (checker.admissible(routine, args)) return args;
  }
  return std::nullopt;
}

}  // namespace contraver::model
