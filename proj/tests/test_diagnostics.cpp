#include <random>

#include "contraver/diagnostics.hpp"
#include "contraver/pipeline.hpp"
#include "doctest.h"
#include <json.hpp>
#include "support.hpp"

using namespace contraver;
using diag::ClauseStatus;
using diag::Overall;
using smt::Status;

namespace {

vc::VerificationCondition vc_of(const std::string& id, vc::VcKind kind, vc::SmokeTarget smoke = vc::SmokeTarget::None) {
  vc::VerificationCondition v;
  v.id = id;
  v.routine = "r";
  v.label = id;
  v.kind = kind;
  v.smoke = smoke;
  v.span.file = "f.cvl";
  v.span.start_line = 3;
  v.span.start_col = 5;
  return v;
}

smt::DischargeResult result(const std::string& id, Status s, std::string model = {}) {
  smt::DischargeResult r;
  r.vc_id = id;
  r.status = s;
  r.model = std::move(model);
  return r;
}

struct Fixture {
  vc::VCSet set;
  std::vector<smt::DischargeResult> results;

  Fixture(std::vector<Status> obligations, Status pre_smoke) {
    set.routine = "r";
    for (std::size_t i = 0; i < obligations.size(); ++i) {
      const auto id = "c" + std::to_string(i);
      set.vcs.push_back(vc_of(id, vc::VcKind::Postcondition));
      results.push_back(result(id, obligations[i], obligations[i] == Status::Invalid ? "v.x = 1\nold.x = 2" : ""));
    }
    set.vcs.push_back(vc_of("pre", vc::VcKind::Smoke, vc::SmokeTarget::Precondition));
    results.push_back(result("pre", pre_smoke));
  }

  diag::RoutineVerdict run() const { return diag::classify(set, results); }
};

std::string pick(std::mt19937_64& rng, std::initializer_list<const char*> xs) {
  return *(xs.begin() + rng() % xs.size());
}

diag::Report random_report(std::mt19937_64& rng) {
  diag::Report r;
  r.options = {{"timeout_ms", std::to_string(rng() % 1000)}, {"invariants", pick(rng, {"implicit", "explicit"})}};
  const auto n = rng() % 4;
  for (std::size_t i = 0; i < n; ++i) {
    diag::RoutineVerdict rv;
    rv.name = pick(rng, {"sort", "item", "a\"b", "ü"});
    rv.file = pick(rng, {"x.cvl", "dir/y.cvl"});
    rv.overall = static_cast<Overall>(rng() % 3);
    rv.vacuous = rng() % 2;
    if (rng() % 3 == 0) rv.unreachable.push_back("loop_1@x.cvl:4");
    const auto m = rng() % 4;
    for (std::size_t k = 0; k < m; ++k) {
      diag::ClauseVerdict c;
      c.id = rv.name + ":c" + std::to_string(k);
      c.label = pick(rng, {"sorted", "perm", "cap"});
      c.kind = pick(rng, {"Postcondition", "LoopInitiation", "Check"});
      c.file = rv.file;
      c.line = static_cast<int>(rng() % 90) + 1;
      c.col = static_cast<int>(rng() % 9) + 1;
      c.status = static_cast<ClauseStatus>(rng() % 4);
      if (c.status == ClauseStatus::Failed) c.model = "s = [1, 0]\nold s = [0, 1]";
      if (rng() % 5 == 0) c.note = "line\nbreak\ttab";
      rv.clauses.push_back(c);
    }
    r.routines.push_back(rv);
  }
  r.timing_ms = {{"total", static_cast<double>(rng() % 100000) / 7.0}};
  return r;
}

bool have_solver() {
  static const bool ok = smt::solver_available({});
  return ok;
}

}  // namespace

TEST_CASE("classification") {
  SUBCASE("all valid, satisfiable precondition") {
    const auto v = Fixture({Status::Valid, Status::Valid}, Status::Invalid).run();
    CHECK(v.overall == Overall::Verified);
    CHECK_FALSE(v.vacuous);
    CHECK(v.clauses.size() == 2);
  }
  SUBCASE("all valid, contradictory precondition") {
    const auto v = Fixture({Status::Valid, Status::Valid}, Status::Valid).run();
    CHECK(v.overall == Overall::Verified);
    CHECK(v.vacuous);
  }
  SUBCASE("a timeout makes the routine inconclusive") {
    const auto v = Fixture({Status::Valid, Status::Timeout, Status::Valid}, Status::Invalid).run();
    CHECK(v.overall == Overall::Inconclusive);
    CHECK(v.clauses[1].status == ClauseStatus::Timeout);
  }
  SUBCASE("failures win over unknowns") {
    const auto v = Fixture({Status::Unknown, Status::Invalid}, Status::Invalid).run();
    CHECK(v.overall == Overall::Failed);
    CHECK(v.clauses[0].status == ClauseStatus::Unknown);
    CHECK(v.clauses[1].model == "x = 1\nold x = 2");
  }
  SUBCASE("status maps one to one") {
    CHECK(diag::clause_status(Status::Valid) == ClauseStatus::Verified);
    CHECK(diag::clause_status(Status::Invalid) == ClauseStatus::Failed);
    CHECK(diag::clause_status(Status::Unknown) == ClauseStatus::Unknown);
    CHECK(diag::clause_status(Status::Timeout) == ClauseStatus::Timeout);
  }
  SUBCASE("mismatched results are an internal error") {
    Fixture f({Status::Valid}, Status::Invalid);
    f.results.pop_back();
    CHECK_THROWS_AS(f.run(), diag::InternalError);
    Fixture g({Status::Valid}, Status::Invalid);
    g.results[0].vc_id = "other";
    CHECK_THROWS_AS(g.run(), diag::InternalError);
  }
}

TEST_CASE("rendering") {
  diag::Report empty;
  const auto j = nlohmann::json::parse(diag::render(empty, diag::Format::Json));
  CHECK(j["routines"].empty());
  CHECK(j["version"] == diag::kVersion);

  diag::Report r;
  r.routines.push_back(Fixture({Status::Valid}, Status::Valid).run());
  r.routines.push_back(Fixture({Status::Invalid}, Status::Invalid).run());
  const auto text = diag::render(r, diag::Format::Text);
  CHECK(text.find(diag::kVacuityBanner) != std::string::npos);
  CHECK(text.find(diag::kTwoReadings) != std::string::npos);
  CHECK(text.find("c0 [Postcondition] f.cvl:3:5 (failed)") != std::string::npos);
  const auto jr = nlohmann::json::parse(diag::render(r, diag::Format::Json));
  CHECK(jr["routines"][0]["vacuous"] == true);
  CHECK(jr["routines"][1]["clauses"][0]["status"] == "failed");
  CHECK(jr["summary"]["vacuous"] == 1);
}

TEST_CASE("JSON round-trips") {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 300; ++k) {
    const auto r = random_report(rng);
    const auto back = diag::parse_json_report(diag::render(r, diag::Format::Json));
    REQUIRE(back.version == r.version);
    REQUIRE(back.options == r.options);
    REQUIRE(back.routines == r.routines);
    REQUIRE(back.timing_ms.size() == r.timing_ms.size());
    CHECK(diag::render(back, diag::Format::Json) == diag::render(r, diag::Format::Json));
  }
  CHECK_THROWS(diag::parse_json_report("{"));
  CHECK_THROWS(diag::parse_json_report(R"({"routines": [{"overall": "bogus"}]})"));
}

TEST_CASE("failing clauses point at their source") {
  if (!have_solver()) {
    MESSAGE("no solver; skipped");
    return;
  }
  RunOptions opts;
  opts.files = {support::corpus_path("broken_sort.cvl")};
  const auto report = verify_files(opts);
  const auto src = support::read_file(opts.files[0]);
  REQUIRE(report.routines.size() == 1);
  for (const auto& c : report.routines[0].clauses) {
    if (c.status == ClauseStatus::Verified) continue;
    // line:col lands on the clause label
    std::istringstream in(src);
    std::string line;
    for (int i = 0; i < c.line; ++i) std::getline(in, line);
    CHECK(line.substr(static_cast<std::size_t>(c.col - 1), c.label.size()) == c.label);
  }
  const auto text = diag::render(report, diag::Format::Text);
  CHECK(text.find("sorted [Postcondition]") != std::string::npos);
}

TEST_CASE("vacuous routines verify every obligation") {
  if (!have_solver()) {
    MESSAGE("no solver; skipped");
    return;
  }
  RunOptions opts;
  opts.files = {support::corpus_path("vacuous_sort.cvl")};
  const auto report = verify_files(opts);
  REQUIRE(report.routines.size() == 1);
  const auto& rv = report.routines[0];
  CHECK(rv.vacuous);
  CHECK_FALSE(rv.clauses.empty());
  for (const auto& c : rv.clauses) CHECK(c.status == ClauseStatus::Verified);
}
