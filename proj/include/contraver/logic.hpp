#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "contraver/values.hpp"

namespace contraver::logic {

enum class Sort { Int, Bool, Seq, Bag };

const char* to_string(Sort s);  // SMT sort name

enum class Op {
  IntLit, BoolLit, Var,
  Not, And, Or, Implies, Eq, Lt, Le,
  Add, Sub, Mul, Div, Mod, Neg, Ite,
  Forall, Exists, App,
};

/// Background theory functions; Ghost marks a user ghost function.
enum class Fn { Len, At, Interval, Ext, Cat, ToBag, BagExt, Occ, BagUnion, BagEmpty, SeqEmpty, SeqEq, BagEq, Ghost };

const char* smt_name(Fn f);

struct Node;
using Term = std::shared_ptr<const Node>;

struct BoundVar {
  std::string name;
  Sort sort;

  bool operator==(const BoundVar&) const = default;
};

struct Node {
  Op op;
  Sort sort;
  std::int64_t value = 0;  // IntLit value, BoolLit as 0/1
  std::string name;        // Var name, ghost function name
  Fn fn = Fn::Ghost;
  std::vector<Term> args;
  std::vector<BoundVar> bound;                // quantifiers
  std::vector<std::vector<Term>> patterns;    // quantifier triggers
};

// Raw construction, no simplification.
Term node(Op op, Sort sort, std::vector<Term> args);

Term int_lit(std::int64_t v);
Term bool_lit(bool b);
Term var(const std::string& name, Sort sort);
Term app(Fn fn, std::vector<Term> args);
Term ghost_app(const std::string& name, Sort result, std::vector<Term> args);
Term quant(Op forall_or_exists, std::vector<BoundVar> bound, Term body, std::vector<std::vector<Term>> patterns = {});

// Simplifying constructors: fold boolean constants only.
Term mk_not(const Term& a);
Term mk_and(const Term& a, const Term& b);
Term mk_and(const std::vector<Term>& xs);
Term mk_or(const Term& a, const Term& b);
Term mk_implies(const Term& a, const Term& b);
Term mk_ite(const Term& c, const Term& a, const Term& b);
Term mk_eq(const Term& a, const Term& b);
Term mk_lt(const Term& a, const Term& b);
Term mk_le(const Term& a, const Term& b);
Term mk_add(const Term& a, const Term& b);
Term mk_sub(const Term& a, const Term& b);
Term mk_mul(const Term& a, const Term& b);

bool is_true(const Term& t);
bool is_false(const Term& t);

/// Structural equality.
bool equal(const Term& a, const Term& b);

/// Replaces free variables by terms. Bound variables shadow the mapping.
Term subst(const Term& t, const std::map<std::string, Term>& m);

/// Free variables with their sorts.
std::map<std::string, Sort> free_vars(const Term& t);

/// Function symbols used: theory functions by SMT name and ghost names.
void collect_symbols(const Term& t, std::set<std::string>& out);

/// SMT-LIB 2 rendering.
std::string to_smt(const Term& t);

/// Ghost-function definitions for evaluation and emission.
struct GhostDef {
  std::string name;
  std::vector<BoundVar> params;
  Sort result;
  Term body;
};

/// Finite interpretation used by the evaluator for unbounded quantifiers.
struct Domain {
  std::vector<std::int64_t> ints;
  std::vector<model::SeqVal> seqs;
  std::vector<model::BagVal> bags;
  // Integer quantifiers whose guard bounds the variable by `lo <= q` and
  // `q <= hi` always range over exactly [lo, hi]. With ranges_only set,
  // any other integer quantifier is an error instead of ranging over ints.
  bool ranges_only = false;
};

/// Evaluates a closed-under-`env` term. Theory functions get their
/// model-semantics meaning; `at` and `interval` throw model::RangeError
/// outside their defined range. Quantifiers range over `dom`.
model::Value eval(const Term& t, const std::map<std::string, model::Value>& env, const Domain& dom,
                  const std::map<std::string, GhostDef>& ghosts = {});

}  // namespace contraver::logic
