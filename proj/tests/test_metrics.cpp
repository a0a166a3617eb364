#include "contraver/corpus.hpp"
#include "contraver/metrics.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace contraver;
using metrics::Category;

namespace {

metrics::TokenMetrics measure(const std::string& src, const std::string& file = "m.cvl") {
  return metrics::measure_source(src, file);
}

}  // namespace

TEST_CASE("unannotated program") {
  const auto m = measure("routine r(x: INT): INT\ndo\n    Result := x + 1\nend\n");
  CHECK(m.total() == 0);
  CHECK(m.ratio() == 0.0);
  CHECK(m.code > 0);
}

TEST_CASE("one precondition counts its content tokens") {
  const auto m = measure("routine r(x: INT)\nrequire\n    x > 0\ndo\nend\n");
  CHECK(m.p == 3);
  CHECK(m.total() == 3);
}

TEST_CASE("category attribution") {
  const auto m = measure(R"(
const Cap = 3
ghost function small(s: SEQ): BOOL = count(s) <= Cap
struct BOX { s: SEQ } invariant ok: count(s) <= Cap

routine r(inout b: BOX, n: INT)
require
    pos: n > 0
modify b
do
    use_invariant b
    i := 0
    while i < n
    invariant
        low: 0 <= i
    variant n - i
    do
        i := i + 1
    end
    check i = n end
end
ensure
    same: b = old b
)");
  CHECK(m.p == 5);   // pos : n > 0
  CHECK(m.q == 6);   // same : b = old b
  CHECK(m.c == 8);   // ok : count ( s ) <= Cap
  CHECK(m.l == 8);   // low : 0 <= i, n - i
  CHECK(m.f == 1);   // b
  CHECK(m.a == 4);   // i = n end
  CHECK(m.n == 18);  // function small ( s : SEQ ) : BOOL = count ( s ) <= Cap, use_invariant b
  CHECK(m.total() == m.p + m.q + m.c + m.l + m.f + m.a + m.n);
}

TEST_CASE("attribution partitions the tokens") {
  for (const auto& f : corpus::corpus_files()) {
    CAPTURE(f);
    const auto src = support::read_file(support::corpus_path(f));
    const auto tokens = cvl::tokenize(src, f);
    const auto cats = metrics::attribute(cvl::parse_source(src, f), tokens);
    REQUIRE(cats.size() == tokens.size());
    long sums[9] = {};
    for (auto c : cats) ++sums[static_cast<int>(c)];
    const auto m = metrics::measure_source(src, f);
    CHECK(m.code == sums[static_cast<int>(Category::Code)]);
    CHECK(m.total() == static_cast<long>(tokens.size()) - m.code - sums[static_cast<int>(Category::Excluded)]);
    CHECK(m == metrics::measure_source(src, f));

    const auto stripped = metrics::strip_annotations(src, f);
    const auto s = metrics::measure_source(stripped, f);
    CHECK(s.total() == 0);
    CHECK(s.ratio() == 0.0);
    CHECK(s.code == m.code);
    CHECK(m.ratio() > s.ratio());
  }
}

TEST_CASE("reports") {
  auto a = measure("routine r() do end\n", "b.cvl");
  auto b = measure("routine r(x: INT)\nrequire\n    x > 0\ndo\nend\n", "a.cvl");
  const auto text = metrics::ratio_report({a, b});
  CHECK(text.find("a.cvl") < text.find("b.cvl"));
  CHECK(text.rfind("FILE", 0) == 0);
  const auto csv = metrics::ratio_report({a, b}, metrics::Format::Csv);
  CHECK(csv == "FILE,CODE,T,P,Q,C,L,F,A,N,A/C\na.cvl," + std::to_string(b.code) + ",3,3,0,0,0,0,0,0," +
                   [&] {
                     char buf[16];
                     std::snprintf(buf, sizeof buf, "%.2f", 3.0 / static_cast<double>(b.code));
                     return std::string(buf);
                   }() +
                   "\nb.cvl," + std::to_string(a.code) + ",0,0,0,0,0,0,0,0,0.00\n");
  CHECK(metrics::ratio_report({a}, metrics::Format::Csv).find(",0.00\n") != std::string::npos);

  std::vector<metrics::TokenMetrics> rows;
  for (const auto& f : corpus::corpus_files()) rows.push_back(metrics::measure_file(support::corpus_path(f)));
  const auto all = metrics::ratio_report(rows, metrics::Format::Csv);
  CHECK(static_cast<std::size_t>(std::count(all.begin(), all.end(), '\n')) == corpus::corpus_files().size() + 1);
}
