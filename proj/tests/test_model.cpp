#include <random>

#include "doctest.h"
#include "support.hpp"

using namespace contraver;
using model::BagVal;
using model::SeqVal;
using model::Value;

namespace {

BagVal bag_of(std::initializer_list<std::int64_t> xs) { return model::to_bag(SeqVal(xs)); }

support::Counts counts(std::initializer_list<std::pair<const std::int64_t, std::int64_t>> c) { return c; }

Value eval_in(const cvl::Program& p, const std::string& src_expr_routine, std::vector<Value> args) {
  model::Interpreter in(p);
  return *in.exec(src_expr_routine, std::move(args)).result;
}

}  // namespace

TEST_CASE("sequence operations") {
  CHECK(SeqVal{5, 6, 7, 8}.interval(2, 3) == SeqVal{6, 7});
  CHECK(SeqVal{5, 6}.interval(1, 0) == SeqVal{});
  CHECK(SeqVal{}.extended(7) == SeqVal{7});
  CHECK(SeqVal{4, 7}.extended(4) == SeqVal{4, 7, 4});
  CHECK(SeqVal{1}.concat(SeqVal{2, 3}) == SeqVal{1, 2, 3});
  CHECK_THROWS_AS((SeqVal{1}).at(0), model::RangeError);
  CHECK_THROWS_AS((SeqVal{1, 2}).interval(2, 3), model::RangeError);
  CHECK(SeqVal{1, 2}.interval(5, 4) == SeqVal{});
}

TEST_CASE("bag operations") {
  CHECK(model::to_bag(SeqVal{}) == BagVal{});
  CHECK(support::counts_of(bag_of({4, 7, 4})) == counts({{4, 2}, {7, 1}}));
  CHECK(support::counts_of(BagVal{}.extended(3)) == counts({{3, 1}}));
  CHECK(support::counts_of(bag_of({4}).extended(7)) == counts({{4, 1}, {7, 1}}));
  CHECK(BagVal{}.unite(bag_of({1, 2})) == bag_of({1, 2}));
  CHECK(support::counts_of(bag_of({1}).unite(bag_of({1, 1}))) == counts({{1, 3}}));
  CHECK(bag_of({4, 7, 4}).size() == 3);
  CHECK(bag_of({4, 7, 4}).occ(5) == 0);
}

TEST_CASE("exhaustive agreement with brute-force definitions") {
  const auto bad = support::oracle_mismatches(5);
  CHECK(bad.empty());
  for (std::size_t i = 0; i < bad.size() && i < 5; ++i) MESSAGE(bad[i]);
}

TEST_CASE("bag extensionality and permutation equivalence") {
  const auto vecs = support::all_vectors(4, {0, 1, 2});
  std::vector<BagVal> bags;
  for (const auto& v : vecs) bags.push_back(model::to_bag(SeqVal(v)));
  for (std::size_t i = 0; i < bags.size(); i += 7) {
    for (std::size_t j = 0; j < bags.size(); ++j) {
      bool same_occ = true;
      for (std::int64_t v = 0; v <= 2; ++v) same_occ = same_occ && bags[i].occ(v) == bags[j].occ(v);
      REQUIRE((bags[i] == bags[j]) == same_occ);
    }
  }
  // permutation: reflexive, symmetric, transitive
  for (std::size_t a = 0; a < bags.size(); ++a) {
    REQUIRE(bags[a] == bags[a]);
    for (std::size_t b = 0; b < bags.size(); b += 3) {
      REQUIRE((bags[a] == bags[b]) == (bags[b] == bags[a]));
      if (!(bags[a] == bags[b])) continue;
      for (std::size_t c = 0; c < bags.size(); c += 5) {
        if (bags[b] == bags[c]) REQUIRE(bags[a] == bags[c]);
      }
    }
  }
}

TEST_CASE("checked arithmetic") {
  CHECK(model::floor_div(-7, 2) == -4);
  CHECK(model::floor_mod(-7, 2) == 1);
  CHECK_THROWS_AS(model::floor_div(1, 0), model::DivByZero);
  CHECK_THROWS_AS(model::checked_mul(INT64_MAX, 2), model::RangeError);
}

TEST_CASE("expression evaluation") {
  const auto p = support::load(R"(
routine perm(a: SEQ, b: SEQ): BOOL
do
    Result := to_bag(a) = to_bag(b)
end

routine empty_range(): BOOL
do
    Result := forall i: 1 <= i <= 0 ==> false
end

routine first(s: SEQ): INT
do
    Result := s[0]
end
)");
  CHECK(std::get<bool>(eval_in(p, "perm", {SeqVal{1, 2, 2}, SeqVal{2, 1, 2}})));
  CHECK_FALSE(std::get<bool>(eval_in(p, "perm", {SeqVal{1, 2}, SeqVal{2, 2}})));
  CHECK(std::get<bool>(eval_in(p, "empty_range", {})));
  CHECK_THROWS_AS(eval_in(p, "first", {SeqVal{1}}), model::RangeError);
}

TEST_CASE("exec: quick_sort sorts with every check passing") {
  const auto p = support::load(support::read_file(support::corpus_path("quick_sort.cvl")));
  model::Interpreter in(p);
  const auto r = in.exec("quick_sort", {SeqVal{3, 1, 2}});
  CHECK(std::get<SeqVal>(*r.result) == SeqVal{1, 2, 3});
  CHECK_FALSE(r.trace.empty());
}

TEST_CASE("exec: precondition and variant violations") {
  const auto p = support::load(R"(
routine pos(x: INT): INT
require
    positive: x > 0
do
    Result := x
end

routine stuck(n: INT)
do
    i := 0
    while i < 2
    variant 5 - n
    do
        i := i + 1
    end
end
)");
  model::Interpreter in(p);
  try {
    in.exec("pos", {std::int64_t{0}});
    FAIL("no violation");
  } catch (const model::ContractViolation& v) {
    CHECK(v.label() == "positive");
    CHECK(v.kind() == model::ClauseKind::Precondition);
  }
  try {
    in.exec("stuck", {std::int64_t{1}});
    FAIL("no violation");
  } catch (const model::ContractViolation& v) {
    CHECK(v.kind() == model::ClauseKind::VariantDecrease);
  }
  CHECK_THROWS_AS(model::Interpreter(p, 3).exec("stuck", {std::int64_t{1}}), model::FuelExhausted);
}

TEST_CASE("exec is deterministic") {
  const auto p = support::load(support::read_file(support::corpus_path("bucket_sort.cvl")));
  std::mt19937_64 rng(7);
  for (int k = 0; k < 20; ++k) {
    auto args = model::random_inputs(p, "bucket_sort", rng);
    REQUIRE(args);
    model::Interpreter a(p), b(p);
    const auto x = a.exec("bucket_sort", *args);
    const auto y = b.exec("bucket_sort", *args);
    CHECK(x.result == y.result);
    CHECK(x.trace == y.trace);
    CHECK(x.steps == y.steps);
  }
}
