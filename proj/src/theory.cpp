#include "contraver/theory.hpp"

#include <map>
#include <sstream>

namespace contraver::smt {

using logic::Fn;
using logic::Op;
using logic::Sort;
using logic::Term;

namespace {

Term S(const std::string& n) { return logic::var(n, Sort::Seq); }
Term B(const std::string& n) { return logic::var(n, Sort::Bag); }
Term I(const std::string& n) { return logic::var(n, Sort::Int); }
Term num(std::int64_t v) { return logic::int_lit(v); }

Term len(Term s) { return logic::app(Fn::Len, {std::move(s)}); }
Term at(Term s, Term i) { return logic::app(Fn::At, {std::move(s), std::move(i)}); }
Term interval(Term s, Term x, Term y) { return logic::app(Fn::Interval, {std::move(s), std::move(x), std::move(y)}); }
Term ext(Term s, Term v) { return logic::app(Fn::Ext, {std::move(s), std::move(v)}); }
Term cat(Term s, Term t) { return logic::app(Fn::Cat, {std::move(s), std::move(t)}); }
Term to_bag(Term s) { return logic::app(Fn::ToBag, {std::move(s)}); }
Term bag_ext(Term b, Term v) { return logic::app(Fn::BagExt, {std::move(b), std::move(v)}); }
Term occ(Term b, Term v) { return logic::app(Fn::Occ, {std::move(b), std::move(v)}); }
Term bag_union(Term b, Term c) { return logic::app(Fn::BagUnion, {std::move(b), std::move(c)}); }
Term seq_empty() { return logic::app(Fn::SeqEmpty, {}); }
Term bag_empty() { return logic::app(Fn::BagEmpty, {}); }
Term seq_eq(Term s, Term t) { return logic::app(Fn::SeqEq, {std::move(s), std::move(t)}); }
Term bag_eq(Term b, Term c) { return logic::app(Fn::BagEq, {std::move(b), std::move(c)}); }

Term eq(Term a, Term b) { return logic::node(Op::Eq, Sort::Bool, {std::move(a), std::move(b)}); }
Term le(Term a, Term b) { return logic::node(Op::Le, Sort::Bool, {std::move(a), std::move(b)}); }
Term lt(Term a, Term b) { return logic::node(Op::Lt, Sort::Bool, {std::move(a), std::move(b)}); }
Term add(Term a, Term b) { return logic::node(Op::Add, Sort::Int, {std::move(a), std::move(b)}); }
Term sub(Term a, Term b) { return logic::node(Op::Sub, Sort::Int, {std::move(a), std::move(b)}); }
Term conj(std::vector<Term> xs) { return logic::node(Op::And, Sort::Bool, std::move(xs)); }
Term disj(std::vector<Term> xs) { return logic::node(Op::Or, Sort::Bool, std::move(xs)); }
Term implies(Term a, Term b) { return logic::node(Op::Implies, Sort::Bool, {std::move(a), std::move(b)}); }
Term ite(Term c, Term a, Term b) {
  const Sort sort = a->sort;
  return logic::node(Op::Ite, sort, {std::move(c), std::move(a), std::move(b)});
}

struct Builder {
  const TheoryConfig& cfg;
  std::vector<Axiom> out;

  void add(std::string name, int family, std::vector<logic::BoundVar> bound, Term body, std::vector<Term> pattern,
           std::set<std::string> triggers) {
    Term f = body;
    if (!bound.empty()) {
      std::vector<std::vector<Term>> pats;
      if (cfg.triggers && !pattern.empty()) pats.push_back(std::move(pattern));
      f = logic::quant(Op::Forall, std::move(bound), std::move(body), std::move(pats));
    }
    out.push_back({std::move(name), family, std::move(f), std::move(triggers)});
  }
};

}  // namespace

std::vector<Axiom> background_theory(const TheoryConfig& cfg) {
  Builder b{cfg, {}};
  const logic::BoundVar s{"s", Sort::Seq}, t{"t", Sort::Seq}, v{"v", Sort::Int}, w{"w", Sort::Int},
      i{"i", Sort::Int}, x{"x", Sort::Int}, y{"y", Sort::Int}, k{"k", Sort::Int}, bb{"b", Sort::Bag},
      cc{"c", Sort::Bag};

  // 1: length
  b.add("len_empty", 1, {}, eq(len(seq_empty()), num(0)), {}, {"len", "seqEmpty"});
  b.add("len_nonneg", 1, {s}, le(num(0), len(S("s"))), {len(S("s"))}, {"len"});
  b.add("len_ext", 1, {s, v}, eq(len(ext(S("s"), I("v"))), add(len(S("s")), num(1))), {len(ext(S("s"), I("v")))},
        {"len", "ext"});
  b.add("len_cat", 1, {s, t}, eq(len(cat(S("s"), S("t"))), add(len(S("s")), len(S("t")))),
        {len(cat(S("s"), S("t")))}, {"len", "cat"});

  // 2: element access after append
  b.add("at_ext_last", 2, {s, v}, eq(at(ext(S("s"), I("v")), add(len(S("s")), num(1))), I("v")),
        {ext(S("s"), I("v"))}, {"at", "ext"});
  b.add("at_ext_prefix", 2, {s, v, i},
        implies(conj({le(num(1), I("i")), le(I("i"), len(S("s")))}),
                eq(at(ext(S("s"), I("v")), I("i")), at(S("s"), I("i")))),
        {at(ext(S("s"), I("v")), I("i"))}, {"at", "ext"});
  b.add("at_cat_left", 2, {s, t, i},
        implies(conj({le(num(1), I("i")), le(I("i"), len(S("s")))}),
                eq(at(cat(S("s"), S("t")), I("i")), at(S("s"), I("i")))),
        {at(cat(S("s"), S("t")), I("i"))}, {"at", "cat"});
  b.add("at_cat_right", 2, {s, t, i},
        implies(conj({lt(len(S("s")), I("i")), le(I("i"), add(len(S("s")), len(S("t"))))}),
                eq(at(cat(S("s"), S("t")), I("i")), at(S("t"), sub(I("i"), len(S("s")))))),
        {at(cat(S("s"), S("t")), I("i"))}, {"at", "cat"});

  // 3: intervals
  b.add("interval_len", 3, {s, x, y},
        implies(disj({lt(I("y"), I("x")), conj({le(num(1), I("x")), le(I("y"), len(S("s")))})}),
                eq(len(interval(S("s"), I("x"), I("y"))),
                   ite(le(I("x"), I("y")), add(sub(I("y"), I("x")), num(1)), num(0)))),
        {len(interval(S("s"), I("x"), I("y")))}, {"len", "interval"});
  b.add("interval_at", 3, {s, x, y, k},
        implies(conj({le(num(1), I("x")), le(I("y"), len(S("s"))), le(num(1), I("k")),
                      le(I("k"), add(sub(I("y"), I("x")), num(1)))}),
                eq(at(interval(S("s"), I("x"), I("y")), I("k")), at(S("s"), sub(add(I("x"), I("k")), num(1))))),
        {at(interval(S("s"), I("x"), I("y")), I("k"))}, {"at", "interval"});

  // 4: sequence to bag
  b.add("to_bag_empty", 4, {}, eq(to_bag(seq_empty()), bag_empty()), {}, {"toBag", "seqEmpty"});
  b.add("to_bag_ext", 4, {s, v}, eq(to_bag(ext(S("s"), I("v"))), bag_ext(to_bag(S("s")), I("v"))),
        {to_bag(ext(S("s"), I("v")))}, {"toBag", "ext"});
  b.add("to_bag_cat", 4, {s, t}, eq(to_bag(cat(S("s"), S("t"))), bag_union(to_bag(S("s")), to_bag(S("t")))),
        {to_bag(cat(S("s"), S("t")))}, {"toBag", "cat"});

  // 5: multiplicities
  b.add("occ_empty", 5, {v}, eq(occ(bag_empty(), I("v")), num(0)), {occ(bag_empty(), I("v"))}, {"occ", "bagEmpty"});
  b.add("occ_ext", 5, {bb, w, v},
        eq(occ(bag_ext(B("b"), I("w")), I("v")), add(occ(B("b"), I("v")), ite(eq(I("v"), I("w")), num(1), num(0)))),
        {occ(bag_ext(B("b"), I("w")), I("v"))}, {"occ", "bagExt"});
  b.add("occ_union", 5, {bb, cc, v},
        eq(occ(bag_union(B("b"), B("c")), I("v")), add(occ(B("b"), I("v")), occ(B("c"), I("v")))),
        {occ(bag_union(B("b"), B("c")), I("v"))}, {"occ", "bagUnion"});

  // 6: extensionality
  b.add("seq_extensionality", 6, {s, t},
        eq(seq_eq(S("s"), S("t")),
           conj({eq(len(S("s")), len(S("t"))),
                 logic::quant(Op::Forall, {i},
                              implies(conj({le(num(1), I("i")), le(I("i"), len(S("s")))}),
                                      eq(at(S("s"), I("i")), at(S("t"), I("i")))))})),
        {seq_eq(S("s"), S("t"))}, {"seqEq"});
  b.add("seq_eq_equal", 6, {s, t}, implies(seq_eq(S("s"), S("t")), eq(S("s"), S("t"))), {seq_eq(S("s"), S("t"))},
        {"seqEq"});
  b.add("bag_extensionality", 6, {bb, cc},
        eq(bag_eq(B("b"), B("c")),
           logic::quant(Op::Forall, {v}, eq(occ(B("b"), I("v")), occ(B("c"), I("v"))))),
        {bag_eq(B("b"), B("c"))}, {"bagEq"});
  b.add("bag_eq_equal", 6, {bb, cc}, implies(bag_eq(B("b"), B("c")), eq(B("b"), B("c"))), {bag_eq(B("b"), B("c"))},
        {"bagEq"});

  // 7: bridge
  if (cfg.bridge_axiom) {
    b.add("interval_ext_bridge", 7, {s, i},
          implies(conj({le(num(1), I("i")), le(I("i"), len(S("s")))}),
                  eq(interval(S("s"), num(1), I("i")),
                     ext(interval(S("s"), num(1), sub(I("i"), num(1))), at(S("s"), I("i"))))),
          {interval(S("s"), num(1), I("i"))}, {"interval"});
  }
  return std::move(b.out);
}

namespace {

struct Selection {
  std::vector<const Axiom*> axioms;
  std::vector<const logic::GhostDef*> ghosts;
};

Selection select(const vc::VerificationCondition& v, const std::vector<Axiom>& theory,
                 const std::vector<logic::GhostDef>& ghosts) {
  std::set<std::string> syms;
  logic::collect_symbols(v.hypothesis, syms);
  logic::collect_symbols(v.goal, syms);
  std::vector<bool> taken(theory.size(), false);
  std::set<std::string> ghosts_taken;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& g : ghosts) {
      if (syms.count(g.name) && ghosts_taken.insert(g.name).second) {
        logic::collect_symbols(g.body, syms);
        changed = true;
      }
    }
    for (std::size_t a = 0; a < theory.size(); ++a) {
      if (taken[a]) continue;
      const auto& tr = theory[a].triggers;
      if (std::all_of(tr.begin(), tr.end(), [&](const std::string& f) { return syms.count(f) > 0; })) {
        taken[a] = true;
        logic::collect_symbols(theory[a].formula, syms);
        changed = true;
      }
    }
  }
  Selection out;
  for (std::size_t a = 0; a < theory.size(); ++a) {
    if (taken[a]) out.axioms.push_back(&theory[a]);
  }
  for (const auto& g : ghosts) {
    if (ghosts_taken.count(g.name)) out.ghosts.push_back(&g);
  }
  return out;
}

}  // namespace

std::vector<std::string> relevant_axioms(const vc::VerificationCondition& vc, const std::vector<Axiom>& theory,
                                         const std::vector<logic::GhostDef>& ghosts) {
  std::vector<std::string> out;
  for (const auto* a : select(vc, theory, ghosts).axioms) out.push_back(a->name);
  return out;
}

std::string emit_script(const vc::VerificationCondition& vc, const std::vector<Axiom>& theory,
                        const std::vector<logic::GhostDef>& ghosts, const TheoryConfig& cfg,
                        std::optional<unsigned> seed) {
  std::ostringstream os;
  os << "; " << vc.id << "\n";
  os << "(set-option :produce-models true)\n";
  if (seed) os << "(set-option :random-seed " << *seed << ")\n";
  if (cfg.instantiation_hint > 0) os << "(set-option :smt.qi.max_instances " << cfg.instantiation_hint << ")\n";
  os << "(set-logic ALL)\n"
        "(declare-sort IntSeq 0)\n"
        "(declare-sort IntBag 0)\n"
        "(declare-fun len (IntSeq) Int)\n"
        "(declare-fun at (IntSeq Int) Int)\n"
        "(declare-fun interval (IntSeq Int Int) IntSeq)\n"
        "(declare-fun ext (IntSeq Int) IntSeq)\n"
        "(declare-fun cat (IntSeq IntSeq) IntSeq)\n"
        "(declare-fun toBag (IntSeq) IntBag)\n"
        "(declare-fun bagExt (IntBag Int) IntBag)\n"
        "(declare-fun occ (IntBag Int) Int)\n"
        "(declare-fun bagUnion (IntBag IntBag) IntBag)\n"
        "(declare-fun bagEmpty () IntBag)\n"
        "(declare-fun seqEmpty () IntSeq)\n"
        "(declare-fun seqEq (IntSeq IntSeq) Bool)\n"
        "(declare-fun bagEq (IntBag IntBag) Bool)\n";
  const Selection sel = select(vc, theory, ghosts);
  for (const auto* g : sel.ghosts) {
    os << "(define-fun " << g->name << " (";
    for (std::size_t i = 0; i < g->params.size(); ++i) {
      if (i) os << " ";
      os << "(" << g->params[i].name << " " << logic::to_string(g->params[i].sort) << ")";
    }
    os << ") " << logic::to_string(g->result) << " " << logic::to_smt(g->body) << ")\n";
  }
  for (const auto* a : sel.axioms) os << "; " << a->name << "\n(assert " << logic::to_smt(a->formula) << ")\n";
  std::map<std::string, Sort> consts = logic::free_vars(vc.hypothesis);
  for (const auto& [name, sort] : logic::free_vars(vc.goal)) consts.emplace(name, sort);
  for (const auto& [name, sort] : consts) os << "(declare-const " << name << " " << logic::to_string(sort) << ")\n";
  os << "(assert " << logic::to_smt(vc.hypothesis) << ")\n";
  os << "(assert (not " << logic::to_smt(vc.goal) << "))\n";
  os << "(check-sat)\n";
  return os.str();
}

}  // namespace contraver::smt
