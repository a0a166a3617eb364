#pragma once

#include <chrono>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "contraver/interp.hpp"
#include "contraver/logic.hpp"
#include "contraver/parser.hpp"
#include "contraver/theory.hpp"
#include "contraver/typecheck.hpp"
#include "contraver/values.hpp"
#include "contraver/vcgen.hpp"

namespace support {

using namespace contraver;

inline cvl::Program load(const std::string& src, const std::string& file = "<test>") {
  return cvl::typecheck_or_throw(cvl::parse_source(src, file));
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string corpus_path(const std::string& name) { return std::string(CONTRAVER_CORPUS_DIR) + "/" + name; }

// ---- brute-force sequence and bag definitions ------------------------------

using Vec = std::vector<std::int64_t>;
using Counts = std::map<std::int64_t, std::int64_t>;

/// Every sequence of length <= max_len over `alphabet`, shortest first.
inline std::vector<Vec> all_vectors(int max_len, const Vec& alphabet) {
  std::vector<Vec> out{{}};
  std::vector<Vec> layer{{}};
  for (int n = 1; n <= max_len; ++n) {
    std::vector<Vec> next;
    for (const auto& v : layer) {
      for (auto a : alphabet) {
        auto w = v;
        w.push_back(a);
        next.push_back(w);
      }
    }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

inline Vec bf_interval(const Vec& s, std::int64_t x, std::int64_t y) {
  Vec out;
  for (std::int64_t k = x; k <= y; ++k) out.push_back(s[static_cast<std::size_t>(k - 1)]);
  return out;
}

inline Counts bf_count(const Vec& s) {
  Counts c;
  for (std::size_t i = 0; i < s.size(); ++i) {
    std::int64_t n = 0;
    for (std::size_t j = 0; j < s.size(); ++j) n += s[j] == s[i];
    c[s[i]] = n;
  }
  return c;
}

inline Counts bf_add(Counts c, std::int64_t v) {
  c[v] += 1;
  return c;
}

inline Counts bf_union(const Counts& a, const Counts& b) {
  Counts out;
  for (const auto& [v, n] : a) out[v] = n;
  for (const auto& [v, n] : b) out[v] = (out.count(v) ? out[v] : 0) + n;
  return out;
}

inline Counts counts_of(const model::BagVal& b) {
  Counts c;
  for (const auto& [v, n] : b.counts()) {
    if (n != 0) c[v] = n;
  }
  return c;
}

/// Compares model-semantics operations with the definitions above over all
/// sequences of length <= max_len over {0,1,2}. Returns mismatch descriptions.
inline std::vector<std::string> oracle_mismatches(int max_len = 5) {
  std::vector<std::string> bad;
  const auto vecs = all_vectors(max_len, {0, 1, 2});
  auto note = [&](const std::string& what, const Vec& s) {
    std::string t = what + " on [";
    for (std::size_t i = 0; i < s.size(); ++i) t += (i ? "," : "") + std::to_string(s[i]);
    bad.push_back(t + "]");
  };
  for (const auto& v : vecs) {
    const model::SeqVal s(v);
    const auto n = static_cast<std::int64_t>(v.size());
    if (s.length() != n) note("length", v);
    for (std::int64_t x = 1; x <= n + 1; ++x) {
      for (std::int64_t y = x - 1; y <= n; ++y) {
        if (s.interval(x, y).elements() != bf_interval(v, x, y)) note("interval", v);
      }
    }
    if (!(s.interval(1, n) == s)) note("full interval", v);
    for (std::int64_t i = 1; i <= n; ++i) {
      if (!(s.interval(1, i - 1).extended(s.at(i)) == s.interval(1, i))) note("interval/extended bridge", v);
    }
    for (std::int64_t a : {0, 1, 2, 3}) {
      Vec w = v;
      w.push_back(a);
      if (s.extended(a).elements() != w) note("extended", v);
      if (counts_of(model::to_bag(s.extended(a))) != bf_add(bf_count(v), a)) note("to_bag/extended", v);
      if (counts_of(model::to_bag(s).extended(a)) != bf_add(bf_count(v), a)) note("bag_extended", v);
    }
    const auto bag = model::to_bag(s);
    if (counts_of(bag) != bf_count(v)) note("to_bag", v);
    if (bag.size() != n) note("bag size", v);
    for (std::int64_t a : {-1, 0, 1, 2, 3}) {
      const auto want = bf_count(v).count(a) ? bf_count(v).at(a) : 0;
      if (bag.occ(a) != want) note("occ", v);
    }
  }
  const auto small = all_vectors(3, {0, 1, 2});
  for (const auto& a : small) {
    for (const auto& b : small) {
      const model::SeqVal s(a), t(b);
      Vec ab = a;
      ab.insert(ab.end(), b.begin(), b.end());
      if (s.concat(t).elements() != ab) note("concat", a);
      if (counts_of(model::to_bag(s.concat(t))) != bf_union(bf_count(a), bf_count(b))) note("to_bag/concat", a);
      if (counts_of(model::to_bag(s).unite(model::to_bag(t))) != bf_union(bf_count(a), bf_count(b))) {
        note("union", a);
      }
      const bool perm = bf_count(a) == bf_count(b);
      if ((model::to_bag(s) == model::to_bag(t)) != perm) note("bag equality", a);
    }
  }
  return bad;
}

// ---- axiom soundness -------------------------------------------------------

inline logic::Domain small_domain(int max_len = 4) {
  logic::Domain d;
  for (std::int64_t i = -1; i <= max_len + 2; ++i) d.ints.push_back(i);
  std::map<Counts, model::BagVal> bags;
  for (const auto& v : all_vectors(max_len, {0, 1, 2})) {
    d.seqs.emplace_back(v);
    auto b = model::to_bag(model::SeqVal(v));
    bags.emplace(counts_of(b), b);
  }
  for (const auto& [_, b] : bags) d.bags.push_back(b);
  return d;
}

/// Names of emitted axioms that evaluate false (or fail to evaluate) over
/// the small domain.
inline std::vector<std::string> unsound_axioms(const logic::Domain& d) {
  smt::TheoryConfig cfg;
  cfg.bridge_axiom = true;
  std::vector<std::string> bad;
  for (const auto& ax : smt::background_theory(cfg)) {
    try {
      if (!std::get<bool>(logic::eval(ax.formula, {}, d))) bad.push_back(ax.name);
    } catch (const std::exception& e) {
      bad.push_back(ax.name + " (" + e.what() + ")");
    }
  }
  return bad;
}

// ---- loop-free routine family ----------------------------------------------

inline const std::vector<std::string>& family_requires() {
  static const std::vector<std::string> r = {"true", "x > 0", "x <= y", "x + y = 0"};
  return r;
}

inline const std::vector<std::string>& family_bodies() {
  static const std::vector<std::string> b = {
      "x := x + 1",
      "y := x",
      "t := x\n    x := y\n    y := t",
      "if x > y then\n        x := y\n    end",
      "if x < 0 then\n        x := 0 - x\n    else\n        y := y + 1\n    end",
      "x := x * 2\n    y := y - x",
      "check x + y >= 0 - 4 end\n    x := x - y",
      "if x = y then\n        check x - y = 0 end\n    else\n        x := y\n    end",
      "y := y * y",
      "x := 3 - x\n    if x >= y then\n        y := x\n    end",
      "check x <= 1 end",
      "if y > 0 then\n        x := x + y\n    else\n        x := x - y\n    end",
  };
  return b;
}

inline const std::vector<std::string>& family_ensures() {
  static const std::vector<std::string> q = {"x >= old x", "x <= y", "y = old y or y = old x", "x * x >= 0",
                                             "x + y >= old x + old y"};
  return q;
}

inline std::string family_routine(std::size_t ri, std::size_t bi, std::size_t qi) {
  return "routine r(inout x: INT, inout y: INT)\nrequire\n    pre: " + family_requires()[ri] +
         "\nmodify x, y\ndo\n    " + family_bodies()[bi] + "\nend\nensure\n    post: " + family_ensures()[qi] + "\n";
}

/// The VCs hold for every assignment of their free variables over `ints`.
inline bool valid_over(const vc::VCSet& set, const std::vector<std::int64_t>& ints) {
  logic::Domain d;
  d.ints = ints;
  for (const auto& v : set.vcs) {
    const auto f = v.formula();
    const auto vars = logic::free_vars(f);
    std::vector<std::string> names;
    for (const auto& [n, _] : vars) names.push_back(n);
    std::map<std::string, model::Value> env;
    std::function<bool(std::size_t)> all = [&](std::size_t k) {
      if (k == names.size()) return std::get<bool>(logic::eval(f, env, d));
      for (auto x : ints) {
        env[names[k]] = x;
        if (!all(k + 1)) return false;
      }
      return true;
    };
    if (!all(0)) return false;
  }
  return true;
}

/// Every require-satisfying start state in ints x ints passes all runtime checks.
inline bool runtime_ok(const cvl::Program& p, const std::vector<std::int64_t>& ints) {
  model::Interpreter in(p);
  for (auto x : ints) {
    for (auto y : ints) {
      std::vector<model::Value> args{x, y};
      if (!in.admissible("r", args)) continue;
      try {
        in.exec("r", args);
      } catch (const model::ContractViolation&) {
        return false;
      }
    }
  }
  return true;
}

struct Agreement {
  int routines = 0;
  int valid = 0;
  std::vector<std::string> disagreements;
};

inline Agreement wp_interpreter_agreement() {
  Agreement a;
  const std::vector<std::int64_t> ints = {-2, -1, 0, 1, 2};
  for (std::size_t r = 0; r < family_requires().size(); ++r) {
    for (std::size_t b = 0; b < family_bodies().size(); ++b) {
      for (std::size_t q = 0; q < family_ensures().size(); ++q) {
        const auto src = family_routine(r, b, q);
        const auto p = load(src);
        vc::VcOptions opts;
        opts.smoke = false;
        const bool valid = valid_over(vc::generate_vcs(p, "r", opts), ints);
        const bool ok = runtime_ok(p, ints);
        ++a.routines;
        a.valid += valid;
        if (valid != ok) a.disagreements.push_back(src);
      }
    }
  }
  return a;
}

inline double ms_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t).count();
}

}  // namespace support
