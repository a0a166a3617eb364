#include "contraver/logic.hpp"

#include <algorithm>
#include <functional>
#include <optional>

namespace contraver::logic {

const char* to_string(Sort s) {
  switch (s) {
    case Sort::Int: return "Int";
    case Sort::Bool: return "Bool";
    case Sort::Seq: return "IntSeq";
    case Sort::Bag: return "IntBag";
  }
  return "?";
}

const char* smt_name(Fn f) {
  switch (f) {
    case Fn::Len: return "len";
    case Fn::At: return "at";
    case Fn::Interval: return "interval";
    case Fn::Ext: return "ext";
    case Fn::Cat: return "cat";
    case Fn::ToBag: return "toBag";
    case Fn::BagExt: return "bagExt";
    case Fn::Occ: return "occ";
    case Fn::BagUnion: return "bagUnion";
    case Fn::BagEmpty: return "bagEmpty";
    case Fn::SeqEmpty: return "seqEmpty";
    case Fn::SeqEq: return "seqEq";
    case Fn::BagEq: return "bagEq";
    case Fn::Ghost: return "?";
  }
  return "?";
}

namespace {

Sort result_sort(Fn f) {
  switch (f) {
    case Fn::Len:
    case Fn::At:
    case Fn::Occ: return Sort::Int;
    case Fn::Interval:
    case Fn::Ext:
    case Fn::Cat:
    case Fn::SeqEmpty: return Sort::Seq;
    case Fn::ToBag:
    case Fn::BagExt:
    case Fn::BagUnion:
    case Fn::BagEmpty: return Sort::Bag;
    case Fn::SeqEq:
    case Fn::BagEq: return Sort::Bool;
    case Fn::Ghost: break;
  }
  return Sort::Int;
}

std::shared_ptr<Node> fresh(Op op, Sort sort) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->sort = sort;
  return n;
}

}  // namespace

Term node(Op op, Sort sort, std::vector<Term> args) {
  auto n = fresh(op, sort);
  n->args = std::move(args);
  return n;
}

Term int_lit(std::int64_t v) {
  auto n = fresh(Op::IntLit, Sort::Int);
  n->value = v;
  return n;
}

Term bool_lit(bool b) {
  static const Term t = [] {
    auto n = fresh(Op::BoolLit, Sort::Bool);
    n->value = 1;
    return Term(n);
  }();
  static const Term f = fresh(Op::BoolLit, Sort::Bool);
  return b ? t : f;
}

Term var(const std::string& name, Sort sort) {
  auto n = fresh(Op::Var, sort);
  n->name = name;
  return n;
}

Term app(Fn fn, std::vector<Term> args) {
  auto n = fresh(Op::App, result_sort(fn));
  n->fn = fn;
  n->args = std::move(args);
  return n;
}

Term ghost_app(const std::string& name, Sort result, std::vector<Term> args) {
  auto n = fresh(Op::App, result);
  n->fn = Fn::Ghost;
  n->name = name;
  n->args = std::move(args);
  return n;
}

Term quant(Op forall_or_exists, std::vector<BoundVar> bound, Term body, std::vector<std::vector<Term>> patterns) {
  auto n = fresh(forall_or_exists, Sort::Bool);
  n->bound = std::move(bound);
  n->args = {std::move(body)};
  n->patterns = std::move(patterns);
  return n;
}

bool is_true(const Term& t) { return t->op == Op::BoolLit && t->value == 1; }
bool is_false(const Term& t) { return t->op == Op::BoolLit && t->value == 0; }

Term mk_not(const Term& a) {
  if (a->op == Op::BoolLit) return bool_lit(!a->value);
  if (a->op == Op::Not) return a->args[0];
  return node(Op::Not, Sort::Bool, {a});
}

Term mk_and(const Term& a, const Term& b) {
  if (is_true(a)) return b;
  if (is_true(b)) return a;
  if (is_false(a) || is_false(b)) return bool_lit(false);
  return node(Op::And, Sort::Bool, {a, b});
}

Term mk_and(const std::vector<Term>& xs) {
  if (xs.empty()) return bool_lit(true);
  Term acc = xs.back();
  for (std::size_t i = xs.size() - 1; i-- > 0;) acc = mk_and(xs[i], acc);
  return acc;
}

Term mk_or(const Term& a, const Term& b) {
  if (is_false(a)) return b;
  if (is_false(b)) return a;
  if (is_true(a) || is_true(b)) return bool_lit(true);
  return node(Op::Or, Sort::Bool, {a, b});
}

Term mk_implies(const Term& a, const Term& b) {
  if (is_true(a)) return b;
  if (is_false(a) || is_true(b)) return bool_lit(true);
  if (is_false(b)) return mk_not(a);
  return node(Op::Implies, Sort::Bool, {a, b});
}

Term mk_ite(const Term& c, const Term& a, const Term& b) {
  if (is_true(c)) return a;
  if (is_false(c)) return b;
  if (equal(a, b)) return a;
  return node(Op::Ite, a->sort, {c, a, b});
}

Term mk_eq(const Term& a, const Term& b) {
  if (a->op == Op::IntLit && b->op == Op::IntLit) return bool_lit(a->value == b->value);
  return node(Op::Eq, Sort::Bool, {a, b});
}

Term mk_lt(const Term& a, const Term& b) {
  if (a->op == Op::IntLit && b->op == Op::IntLit) return bool_lit(a->value < b->value);
  return node(Op::Lt, Sort::Bool, {a, b});
}

Term mk_le(const Term& a, const Term& b) {
  if (a->op == Op::IntLit && b->op == Op::IntLit) return bool_lit(a->value <= b->value);
  return node(Op::Le, Sort::Bool, {a, b});
}

Term mk_add(const Term& a, const Term& b) { return node(Op::Add, Sort::Int, {a, b}); }
Term mk_sub(const Term& a, const Term& b) { return node(Op::Sub, Sort::Int, {a, b}); }
Term mk_mul(const Term& a, const Term& b) { return node(Op::Mul, Sort::Int, {a, b}); }

bool equal(const Term& a, const Term& b) {
  if (a == b) return true;
  if (a->op != b->op || a->sort != b->sort || a->value != b->value || a->name != b->name || a->fn != b->fn ||
      a->bound != b->bound || a->args.size() != b->args.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a->args.size(); ++i) {
    if (!equal(a->args[i], b->args[i])) return false;
  }
  return true;
}

Term subst(const Term& t, const std::map<std::string, Term>& m) {
  if (m.empty()) return t;
  if (t->op == Op::Var) {
    auto it = m.find(t->name);
    return it == m.end() ? t : it->second;
  }
  if (t->args.empty()) return t;
  const std::map<std::string, Term>* inner = &m;
  std::map<std::string, Term> shadowed;
  if (!t->bound.empty()) {
    shadowed = m;
    for (const auto& b : t->bound) shadowed.erase(b.name);
    inner = &shadowed;
  }
  bool changed = false;
  std::vector<Term> args;
  args.reserve(t->args.size());
  for (const auto& a : t->args) {
    args.push_back(subst(a, *inner));
    changed = changed || args.back() != a;
  }
  if (!changed) return t;
  auto n = std::make_shared<Node>(*t);
  n->args = std::move(args);
  for (auto& group : n->patterns) {
    for (auto& p : group) p = subst(p, *inner);
  }
  return n;
}

std::map<std::string, Sort> free_vars(const Term& t) {
  std::map<std::string, Sort> out;
  std::function<void(const Term&, std::vector<std::string>&)> walk = [&](const Term& x, std::vector<std::string>& bound) {
    if (x->op == Op::Var) {
      if (std::find(bound.begin(), bound.end(), x->name) == bound.end()) out.emplace(x->name, x->sort);
      return;
    }
    for (const auto& b : x->bound) bound.push_back(b.name);
    for (const auto& a : x->args) walk(a, bound);
    for (std::size_t i = 0; i < x->bound.size(); ++i) bound.pop_back();
  };
  std::vector<std::string> bound;
  walk(t, bound);
  return out;
}

void collect_symbols(const Term& t, std::set<std::string>& out) {
  if (t->op == Op::App) out.insert(t->fn == Fn::Ghost ? t->name : smt_name(t->fn));
  for (const auto& a : t->args) collect_symbols(a, out);
}

namespace {

void emit(const Term& t, std::string& out) {
  auto list = [&](const char* head) {
    out += "(";
    out += head;
    for (const auto& a : t->args) {
      out += " ";
      emit(a, out);
    }
    out += ")";
  };
  switch (t->op) {
    case Op::IntLit:
      if (t->value < 0) {
        // (- n) for negative literals; INT64_MIN needs the unsigned magnitude
        out += "(- " + std::to_string(-static_cast<unsigned long long>(t->value)) + ")";
      } else {
        out += std::to_string(t->value);
      }
      return;
    case Op::BoolLit: out += t->value ? "true" : "false"; return;
    case Op::Var: out += t->name; return;
    case Op::Not: list("not"); return;
    case Op::And: list("and"); return;
    case Op::Or: list("or"); return;
    case Op::Implies: list("=>"); return;
    case Op::Eq: list("="); return;
    case Op::Lt: list("<"); return;
    case Op::Le: list("<="); return;
    case Op::Add: list("+"); return;
    case Op::Sub: list("-"); return;
    case Op::Mul: list("*"); return;
    case Op::Neg: list("-"); return;
    case Op::Ite: list("ite"); return;
    case Op::Div: {
      // floor division
      std::string x, y;
      emit(t->args[0], x);
      emit(t->args[1], y);
      out += "(ite (>= " + y + " 0) (div " + x + " " + y + ") (div (- " + x + ") (- " + y + ")))";
      return;
    }
    case Op::Mod: {
      std::string x, y;
      emit(t->args[0], x);
      emit(t->args[1], y);
      out += "(- " + x + " (* " + y + " (ite (>= " + y + " 0) (div " + x + " " + y + ") (div (- " + x + ") (- " +
             y + ")))))";
      return;
    }
    case Op::Forall:
    case Op::Exists: {
      out += t->op == Op::Forall ? "(forall (" : "(exists (";
      for (std::size_t i = 0; i < t->bound.size(); ++i) {
        if (i) out += " ";
        out += "(" + t->bound[i].name + " " + to_string(t->bound[i].sort) + ")";
      }
      out += ") ";
      if (t->patterns.empty()) {
        emit(t->args[0], out);
      } else {
        out += "(! ";
        emit(t->args[0], out);
        for (const auto& group : t->patterns) {
          out += " :pattern (";
          for (std::size_t i = 0; i < group.size(); ++i) {
            if (i) out += " ";
            emit(group[i], out);
          }
          out += ")";
        }
        out += ")";
      }
      out += ")";
      return;
    }
    case Op::App:
      if (t->args.empty()) {
        out += t->fn == Fn::Ghost ? t->name : smt_name(t->fn);
      } else {
        list(t->fn == Fn::Ghost ? t->name.c_str() : smt_name(t->fn));
      }
      return;
  }
}

}  // namespace

std::string to_smt(const Term& t) {
  std::string out;
  emit(t, out);
  return out;
}

// ---- evaluation -----------------------------------------------------------

namespace {

using model::BagVal;
using model::SeqVal;
using model::Value;

class Evaluator {
 public:
  Evaluator(const Domain& dom, const std::map<std::string, GhostDef>& ghosts) : dom_(dom), ghosts_(ghosts) {}

  Value run(const Term& t, std::map<std::string, Value>& env) {
    switch (t->op) {
      case Op::IntLit: return t->value;
      case Op::BoolLit: return t->value != 0;
      case Op::Var: {
        auto it = env.find(t->name);
        if (it == env.end()) throw Error("unbound logic variable '" + t->name + "'");
        return it->second;
      }
      case Op::Not: return !b(t->args[0], env);
      case Op::And:
        for (const auto& a : t->args) {
          if (!b(a, env)) return false;
        }
        return true;
      case Op::Or:
        for (const auto& a : t->args) {
          if (b(a, env)) return true;
        }
        return false;
      case Op::Implies: return !b(t->args[0], env) || b(t->args[1], env);
      case Op::Eq: return run(t->args[0], env) == run(t->args[1], env);
      case Op::Lt: return i(t->args[0], env) < i(t->args[1], env);
      case Op::Le: return i(t->args[0], env) <= i(t->args[1], env);
      case Op::Add: return model::checked_add(i(t->args[0], env), i(t->args[1], env));
      case Op::Sub: return model::checked_sub(i(t->args[0], env), i(t->args[1], env));
      case Op::Mul: return model::checked_mul(i(t->args[0], env), i(t->args[1], env));
      case Op::Div: return model::floor_div(i(t->args[0], env), i(t->args[1], env));
      case Op::Mod: return model::floor_mod(i(t->args[0], env), i(t->args[1], env));
      case Op::Neg: return model::checked_sub(0, i(t->args[0], env));
      case Op::Ite: return b(t->args[0], env) ? run(t->args[1], env) : run(t->args[2], env);
      case Op::Forall:
      case Op::Exists: return quantify(t, 0, env);
      case Op::App: return apply(t, env);
    }
    throw Error("bad term");
  }

 private:
  const Domain& dom_;
  const std::map<std::string, GhostDef>& ghosts_;

  bool b(const Term& t, std::map<std::string, Value>& env) { return std::get<bool>(run(t, env)); }
  std::int64_t i(const Term& t, std::map<std::string, Value>& env) { return std::get<std::int64_t>(run(t, env)); }
  SeqVal s(const Term& t, std::map<std::string, Value>& env) { return std::get<SeqVal>(run(t, env)); }
  BagVal g(const Term& t, std::map<std::string, Value>& env) { return std::get<BagVal>(run(t, env)); }

  bool quantify(const Term& t, std::size_t k, std::map<std::string, Value>& env) {
    const bool forall = t->op == Op::Forall;
    if (k == t->bound.size()) return b(t->args[0], env);
    const auto& bv = t->bound[k];
    std::optional<Value> saved;
    if (auto it = env.find(bv.name); it != env.end()) saved = it->second;
    auto visit = [&](Value v) {
      env[bv.name] = std::move(v);
      return quantify(t, k + 1, env);
    };
    bool result = forall;
    std::int64_t lo = 0, hi = -1;
    if (bv.sort == Sort::Int && t->bound.size() == 1 && guard_range(t, bv.name, env, lo, hi)) {
      for (std::int64_t x = lo; x <= hi; ++x) {
        if (visit(x) != forall) {
          result = !forall;
          break;
        }
      }
      if (saved) env[bv.name] = *saved;
      else env.erase(bv.name);
      return result;
    }
    if (bv.sort == Sort::Int && dom_.ranges_only) throw Error("unbounded integer quantifier");
    switch (bv.sort) {
      case Sort::Int:
        for (auto x : dom_.ints) {
          if (visit(x) != forall) {
            result = !forall;
            break;
          }
        }
        break;
      case Sort::Bool:
        for (bool x : {false, true}) {
          if (visit(x) != forall) {
            result = !forall;
            break;
          }
        }
        break;
      case Sort::Seq:
        for (const auto& x : dom_.seqs) {
          if (visit(x) != forall) {
            result = !forall;
            break;
          }
        }
        break;
      case Sort::Bag:
        for (const auto& x : dom_.bags) {
          if (visit(x) != forall) {
            result = !forall;
            break;
          }
        }
        break;
    }
    if (saved) env[bv.name] = *saved;
    else env.erase(bv.name);
    return result;
  }

  static bool mentions(const Term& t, const std::string& name) {
    if (t->op == Op::Var) return t->name == name;
    for (const auto& a : t->args) {
      if (mentions(a, name)) return true;
    }
    return false;
  }

  static void conjuncts(const Term& t, std::vector<Term>& out) {
    if (t->op == Op::And) {
      for (const auto& a : t->args) conjuncts(a, out);
    } else {
      out.push_back(t);
    }
  }

  // Finds `lo <= q` and `q <= hi` in the guard of `forall q: G ==> B` or
  // `exists q: G and B`.
  bool guard_range(const Term& t, const std::string& q, std::map<std::string, Value>& env, std::int64_t& lo,
                   std::int64_t& hi) {
    const Term& body = t->args[0];
    std::vector<Term> cs;
    if (t->op == Op::Forall && body->op == Op::Implies) conjuncts(body->args[0], cs);
    else if (t->op == Op::Exists && body->op == Op::And) conjuncts(body, cs);
    else return false;
    std::optional<Term> lo_t, hi_t;
    for (const auto& c : cs) {
      if (c->op != Op::Le) continue;
      const auto& a = c->args[0];
      const auto& b = c->args[1];
      if (b->op == Op::Var && b->name == q && !mentions(a, q) && !lo_t) lo_t = a;
      else if (a->op == Op::Var && a->name == q && !mentions(b, q) && !hi_t) hi_t = b;
    }
    if (!lo_t || !hi_t) return false;
    lo = i(*lo_t, env);
    hi = i(*hi_t, env);
    if (hi >= lo && hi - lo > 100000) throw Error("quantifier range too large");
    return true;
  }

  Value apply(const Term& t, std::map<std::string, Value>& env) {
    const auto& a = t->args;
    switch (t->fn) {
      case Fn::Len: return s(a[0], env).length();
      case Fn::At: return s(a[0], env).at(i(a[1], env));
      case Fn::Interval: return s(a[0], env).interval(i(a[1], env), i(a[2], env));
      case Fn::Ext: return s(a[0], env).extended(i(a[1], env));
      case Fn::Cat: return s(a[0], env).concat(s(a[1], env));
      case Fn::ToBag: return model::to_bag(s(a[0], env));
      case Fn::BagExt: return g(a[0], env).extended(i(a[1], env));
      case Fn::Occ: return g(a[0], env).occ(i(a[1], env));
      case Fn::BagUnion: return g(a[0], env).unite(g(a[1], env));
      case Fn::BagEmpty: return BagVal{};
      case Fn::SeqEmpty: return SeqVal{};
      case Fn::SeqEq:
      case Fn::BagEq: return run(a[0], env) == run(a[1], env);
      case Fn::Ghost: {
        auto it = ghosts_.find(t->name);
        if (it == ghosts_.end()) throw Error("unknown ghost function '" + t->name + "'");
        std::map<std::string, Value> inner;
        for (std::size_t k = 0; k < a.size(); ++k) inner[it->second.params[k].name] = run(a[k], env);
        return run(it->second.body, inner);
      }
    }
    throw Error("bad application");
  }
};

}  // namespace

model::Value eval(const Term& t, const std::map<std::string, model::Value>& env, const Domain& dom,
                  const std::map<std::string, GhostDef>& ghosts) {
  auto copy = env;
  return Evaluator(dom, ghosts).run(t, copy);
}

}  // namespace contraver::logic
