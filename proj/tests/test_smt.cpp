#include <cstdlib>

#include "contraver/corpus.hpp"
#include "contraver/search.hpp"
#include "contraver/solver.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace contraver;
using logic::Sort;

namespace {

vc::VerificationCondition make_vc(const std::string& id, logic::Term hyp, logic::Term goal) {
  vc::VerificationCondition v;
  v.id = id;
  v.routine = "t";
  v.label = id;
  v.hypothesis = std::move(hyp);
  v.goal = std::move(goal);
  return v;
}

logic::Term x() { return logic::var("v.x", Sort::Int); }

smt::SolverConfig solver() {
  smt::SolverConfig c;
  c.command = smt::resolve_solver_command(std::nullopt);
  return c;
}

bool have_solver() {
  static const bool ok = smt::solver_available(solver());
  return ok;
}

vc::VerificationCondition lemma_vc(bool drop_checks) {
  auto p = support::load(support::read_file(support::corpus_path("lemma_extend_bag.cvl")));
  if (drop_checks) p = corpus::drop_checks(p);
  for (const auto& v : vc::generate_vcs(p, "lemma_extend_bag").vcs) {
    if (v.kind == vc::VcKind::Postcondition) return v;
  }
  throw Error("no postcondition");
}

}  // namespace

TEST_CASE("theory families and the bridge toggle") {
  std::set<int> plain, bridged;
  for (const auto& a : smt::background_theory({})) plain.insert(a.family);
  smt::TheoryConfig on;
  on.bridge_axiom = true;
  for (const auto& a : smt::background_theory(on)) bridged.insert(a.family);
  CHECK(plain == std::set<int>{1, 2, 3, 4, 5, 6});
  CHECK(bridged == std::set<int>{1, 2, 3, 4, 5, 6, 7});
}

TEST_CASE("every axiom holds in the finite model") {
  const auto bad = support::unsound_axioms(support::small_domain(4));
  CHECK(bad.empty());
  for (const auto& b : bad) MESSAGE(b);
}

TEST_CASE("the evaluator refutes a deliberately wrong axiom") {
  // guards the soundness check against vacuous success
  const auto s = logic::var("s", Sort::Seq);
  const auto wrong = logic::quant(logic::Op::Forall, {{"s", Sort::Seq}},
                                  logic::mk_eq(logic::app(logic::Fn::Len, {logic::app(logic::Fn::Ext, {s, logic::int_lit(0)})}),
                                               logic::app(logic::Fn::Len, {s})));
  CHECK_FALSE(std::get<bool>(logic::eval(wrong, {}, support::small_domain(2))));
}

TEST_CASE("emission is deterministic and self-contained") {
  const auto p = support::load(support::read_file(support::corpus_path("quick_sort.cvl")));
  const auto theory = smt::background_theory({});
  const auto ghosts = vc::ghost_definitions(p);
  for (const auto& r : p.routines) {
    for (const auto& v : vc::generate_vcs(p, r.name).vcs) {
      const auto a = smt::emit_script(v, theory, ghosts);
      const auto b = smt::emit_script(v, theory, ghosts);
      CHECK(a == b);
      CHECK(a.find("(check-sat)") != std::string::npos);
      CHECK(a.find("(set-logic ALL)") != std::string::npos);
    }
  }
  const auto v = make_vc("one", logic::bool_lit(true), logic::mk_eq(logic::mk_add(logic::int_lit(1), logic::int_lit(1)),
                                                                     logic::int_lit(2)));
  CHECK(smt::emit_script(v, theory, {}, {}, 5).find(":random-seed 5") != std::string::npos);
  smt::TheoryConfig no_triggers;
  no_triggers.triggers = false;
  const auto lv = lemma_vc(false);
  CHECK(smt::emit_script(lv, smt::background_theory(no_triggers), vc::ghost_definitions(support::load(support::read_file(
                                                 support::corpus_path("lemma_extend_bag.cvl")))),
                         no_triggers)
            .find(":pattern") == std::string::npos);
}

TEST_CASE("relevance pruning keeps what the VC mentions") {
  const auto v = make_vc("len", logic::bool_lit(true),
                         logic::mk_le(logic::int_lit(0), logic::app(logic::Fn::Len, {logic::var("v.s", Sort::Seq)})));
  const auto names = smt::relevant_axioms(v, smt::background_theory({}), {});
  CHECK_FALSE(names.empty());
  CHECK(std::find(names.begin(), names.end(), "len_nonneg") != names.end());
  for (const auto& n : names) CHECK(n.find("bag") == std::string::npos);
}

TEST_CASE("solver command resolution") {
  ::unsetenv("CONTRAVER_SOLVER");
  CHECK(smt::resolve_solver_command(std::nullopt) == smt::kDefaultSolverCommand);
  ::setenv("CONTRAVER_SOLVER", "my-solver -in", 1);
  CHECK(smt::resolve_solver_command(std::nullopt) == "my-solver -in");
  CHECK(smt::resolve_solver_command(std::string("flag")) == "flag");
  ::unsetenv("CONTRAVER_SOLVER");
}

TEST_CASE("model summaries") {
  const std::string raw = "(\n  (define-fun v.x () Int\n    1)\n  (define-fun helper!0 () Int 3)\n"
                          "  (define-fun old.y () Int (- 2))\n  (define-fun v.b () Bool true)\n)";
  CHECK(smt::summarize_model(raw) == "old.y = -2\nv.b = true\nv.x = 1");
  CHECK(smt::summarize_model("nothing here") == "nothing here");
}

TEST_CASE("countermodel search") {
  const auto bad = make_vc("bad", logic::mk_lt(logic::int_lit(0), x()), logic::mk_lt(logic::int_lit(1), x()));
  const auto m = smt::find_countermodel(bad, {}, 2000);
  REQUIRE(m);
  CHECK(*m == "v.x = 1");
  CHECK(smt::find_countermodel(bad, {}, 2000) == m);
  const auto good = make_vc("good", logic::mk_lt(logic::int_lit(1), x()), logic::mk_lt(logic::int_lit(0), x()));
  CHECK_FALSE(smt::find_countermodel(good, {}, 2000));
  CHECK_FALSE(smt::find_countermodel(bad, {}, 0));
  CHECK(smt::stable_hash("abc") == smt::stable_hash("abc"));
  CHECK(smt::stable_hash("abc") != smt::stable_hash("abd"));
}

TEST_CASE("discharge outcomes") {
  if (!have_solver()) {
    MESSAGE("no solver; skipped");
    return;
  }
  const auto theory = smt::background_theory({});
  auto cfg = solver();

  SUBCASE("tautologies are valid") {
    const auto two = make_vc("two", logic::bool_lit(true),
                             logic::mk_eq(logic::mk_add(logic::int_lit(1), logic::int_lit(1)), logic::int_lit(2)));
    CHECK(smt::discharge(two, theory, {}, cfg).status == smt::Status::Valid);
    CHECK(smt::discharge(make_vc("t", logic::bool_lit(true), logic::bool_lit(true)), theory, {}, cfg).status ==
          smt::Status::Valid);
    const auto run = smt::run_solver(smt::emit_script(two, theory, {}), cfg);
    CHECK(run.answer == "unsat");
  }
  SUBCASE("falsities are invalid with a model") {
    const auto f = smt::discharge(make_vc("f", logic::bool_lit(true), logic::bool_lit(false)), theory, {}, cfg);
    CHECK(f.status == smt::Status::Invalid);
    const auto bad = make_vc("bad", logic::mk_lt(logic::int_lit(0), x()), logic::mk_lt(logic::int_lit(1), x()));
    cfg.search_trials = 0;  // let the solver answer
    const auto r = smt::discharge(bad, theory, {}, cfg);
    CHECK(r.status == smt::Status::Invalid);
    CHECK(r.model == "v.x = 1");
    const auto run = smt::run_solver(smt::emit_script(bad, theory, {}), cfg);
    CHECK(run.answer == "sat");
  }
  SUBCASE("the lemma needs its check or the bridge") {
    const auto ghosts = vc::ghost_definitions(support::load(support::read_file(support::corpus_path("lemma_extend_bag.cvl"))));
    CHECK(smt::discharge(lemma_vc(false), theory, ghosts, cfg).status == smt::Status::Valid);
    smt::TheoryConfig on;
    on.bridge_axiom = true;
    CHECK(smt::discharge(lemma_vc(true), smt::background_theory(on), ghosts, cfg, on).status == smt::Status::Valid);
  }
  SUBCASE("a 1 ms budget times out") {
    cfg.timeout_ms = 1;
    cfg.search_trials = 0;
    const auto ghosts = vc::ghost_definitions(support::load(support::read_file(support::corpus_path("quick_sort.cvl"))));
    const auto p = support::load(support::read_file(support::corpus_path("quick_sort.cvl")));
    const auto set = vc::generate_vcs(p, "qsort_bounded");
    const auto r = smt::discharge(set.vcs.back(), theory, ghosts, cfg);
    CHECK(r.status == smt::Status::Timeout);
  }
  SUBCASE("broken solvers give SolverError, one result per VC") {
    std::vector<vc::VerificationCondition> vcs;
    for (int i = 0; i < 3; ++i) vcs.push_back(make_vc("v" + std::to_string(i), logic::bool_lit(true), logic::bool_lit(true)));
    for (const std::string cmd : {"echo garbage", "exit 3", "/nonexistent/solver"}) {
      cfg.command = cmd;
      const auto rs = smt::discharge_all(vcs, theory, {}, cfg, {}, 2);
      REQUIRE(rs.size() == vcs.size());
      for (std::size_t i = 0; i < rs.size(); ++i) {
        CHECK(rs[i].vc_id == vcs[i].id);
        CHECK(rs[i].status == smt::Status::SolverError);
      }
    }
    cfg.command = "/nonexistent/solver";
    CHECK_FALSE(smt::solver_available(cfg));
  }
  SUBCASE("file mode substitutes the script path") {
    cfg.command = "z3 -smt2 {script}";
    const auto two = make_vc("two", logic::bool_lit(true), logic::bool_lit(true));
    CHECK(smt::discharge(two, theory, {}, cfg).status == smt::Status::Valid);
  }
}
