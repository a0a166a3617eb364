#include <random>

#include "contraver/corpus.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace contraver;
using corpus::Expected;

TEST_CASE("manifest parsing") {
  const auto es = corpus::parse_manifest(
      "# comment\n\n"
      "a.cvl | | - | plain |\n"
      "b.cvl | f=failed:sorted g=vacuous | explicit bridge-axiom drop-checks | tricky | some notes\n");
  REQUIRE(es.size() == 2);
  CHECK(es[0].path == "a.cvl");
  CHECK(es[0].expected.empty());
  CHECK(es[0].invariants == vc::InvariantMode::Implicit);
  CHECK(es[0].description == "plain");
  CHECK(es[1].expected.at("f") == corpus::Expectation{Expected::Failed, "sorted"});
  CHECK(es[1].expected.at("g") == corpus::Expectation{Expected::Vacuous, ""});
  CHECK(es[1].invariants == vc::InvariantMode::Explicit);
  CHECK(es[1].bridge_axiom);
  CHECK(es[1].drop_checks);
  CHECK(es[1].notes == "some notes");
  CHECK_THROWS(corpus::parse_manifest("a.cvl | f=maybe | - | x |\n"));
  CHECK_THROWS(corpus::parse_manifest("a.cvl | | sideways | x |\n"));
  CHECK_THROWS(corpus::parse_manifest("just a path\n"));
}

TEST_CASE("expectations") {
  diag::RoutineVerdict v;
  v.overall = diag::Overall::Verified;
  CHECK(corpus::meets({Expected::Verified, ""}, v));
  v.vacuous = true;
  CHECK_FALSE(corpus::meets({Expected::Verified, ""}, v));
  CHECK(corpus::meets({Expected::Vacuous, ""}, v));
  diag::RoutineVerdict f;
  f.overall = diag::Overall::Failed;
  diag::ClauseVerdict c;
  c.label = "sorted";
  c.status = diag::ClauseStatus::Failed;
  f.clauses.push_back(c);
  CHECK(corpus::meets({Expected::Failed, "sorted"}, f));
  CHECK(corpus::meets({Expected::Failed, ""}, f));
  CHECK_FALSE(corpus::meets({Expected::Failed, "perm"}, f));
  CHECK(corpus::observed(f) == corpus::Expectation{Expected::Failed, "sorted"});
}

TEST_CASE("manifest covers every corpus file") {
  const auto entries = corpus::corpus_manifest();
  std::set<std::string> listed;
  for (const auto& e : entries) listed.insert(e.path);
  for (const auto& f : corpus::corpus_files()) CHECK_MESSAGE(listed.count(f), f);
  for (const auto& p : listed) CHECK_MESSAGE(support::read_file(support::corpus_path(p)).size() > 0, p);
}

TEST_CASE("dropping checks") {
  const auto p = support::load(support::read_file(support::corpus_path("lemma_extend_bag.cvl")));
  const auto q = corpus::drop_checks(p);
  auto checks = [](const cvl::Program& prog) {
    int n = 0;
    std::function<void(const std::vector<cvl::Stmt>&)> walk = [&](const std::vector<cvl::Stmt>& body) {
      for (const auto& s : body) {
        n += s.kind == cvl::StmtKind::Check;
        walk(s.then_body);
        walk(s.else_body);
      }
    };
    for (const auto& r : prog.routines) walk(r.body);
    return n;
  };
  CHECK(checks(p) == 1);
  CHECK(checks(q) == 0);
}

TEST_CASE("verified routines pass runtime checking") {
  std::mt19937_64 rng(20240501);
  for (const auto& e : corpus::corpus_manifest()) {
    const auto p = support::load(support::read_file(support::corpus_path(e.path)), e.path);
    for (const auto& r : p.routines) {
      const auto it = e.expected.find(r.name);
      if (it != e.expected.end() && it->second.verdict != Expected::Verified) continue;
      CAPTURE(e.path);
      CAPTURE(r.name);
      int ran = 0;
      for (int k = 0; k < 100; ++k) {
        auto args = model::random_inputs(p, r.name, rng);
        REQUIRE_MESSAGE(args, "no admissible input found");
        model::Interpreter in(p);
        CHECK_NOTHROW(in.exec(r.name, *args));
        ++ran;
      }
      CHECK(ran == 100);
    }
  }
}

TEST_CASE("the seeded bug is reachable at runtime") {
  const auto p = support::load(support::read_file(support::corpus_path("broken_sort.cvl")));
  std::mt19937_64 rng(1);
  bool found = false;
  for (int k = 0; k < 1000 && !found; ++k) {
    auto args = model::random_inputs(p, "broken_sort", rng);
    REQUIRE(args);
    try {
      model::Interpreter(p).exec("broken_sort", *args);
    } catch (const model::ContractViolation& v) {
      found = v.label() == "sorted";
    }
  }
  CHECK(found);
}
