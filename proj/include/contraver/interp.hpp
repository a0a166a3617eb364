#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "contraver/ast.hpp"
#include "contraver/values.hpp"

namespace contraver::model {

/// Bindings for expression evaluation. `old` is the entry snapshot and is
/// set only while evaluating postconditions.
struct Env {
  std::map<std::string, Value> vars;
  const std::map<std::string, Value>* old = nullptr;
  std::optional<Value> result;
};

enum class ClauseKind {
  Precondition,
  PreconditionAtCall,
  StructInvariant,
  LoopInvariant,
  VariantNonneg,
  VariantDecrease,
  Check,
  Postcondition,
  Frame,
};

const char* to_string(ClauseKind kind);

struct TraceEntry {
  std::string routine;
  std::string label;
  ClauseKind kind;
  SourceSpan span;

  bool operator==(const TraceEntry&) const = default;
};

class ContractViolation : public Error {
 public:
  ContractViolation(std::string routine, std::string label, ClauseKind kind, SourceSpan span,
                    std::map<std::string, Value> env);

  const std::string& routine() const { return routine_; }
  const std::string& label() const { return label_; }
  ClauseKind kind() const { return kind_; }
  const SourceSpan& span() const { return span_; }
  const std::map<std::string, Value>& env() const { return env_; }

 private:
  std::string routine_;
  std::string label_;
  ClauseKind kind_;
  SourceSpan span_;
  std::map<std::string, Value> env_;
};

class FuelExhausted : public Error {
 public:
  using Error::Error;
};

struct ExecResult {
  std::optional<Value> result;
  std::vector<Value> args;  // parameter values at exit, in declaration order
  std::vector<TraceEntry> trace;
  std::int64_t steps = 0;
};

inline constexpr std::int64_t kDefaultFuel = 1'000'000;

/// Reference semantics for a typechecked program, with runtime checking of
/// every contract clause.
class Interpreter {
 public:
  explicit Interpreter(const cvl::Program& program, std::int64_t fuel = kDefaultFuel);

  Value eval(const cvl::Expr& e, const Env& env);

  /// Runs `routine` on `args` (one value per parameter). Throws
  /// ContractViolation on the first failing clause, FuelExhausted when the
  /// step budget runs out, and RangeError/DivByZero from evaluation.
  ExecResult exec(const std::string& routine, std::vector<Value> args);

  /// True when `args` satisfy the routine's require clauses and the
  /// invariants of its struct-typed parameters.
  bool admissible(const std::string& routine, const std::vector<Value>& args);

 private:
  struct Frame;

  const cvl::Program& program_;
  std::int64_t fuel_;
  std::int64_t steps_ = 0;
  std::vector<TraceEntry> trace_;
  std::vector<std::string> recursive_;
  std::vector<Value> last_args_;

  void tick();
  Value eval_apply(const cvl::Expr& e, const Env& env);
  Value call(const cvl::Routine& r, std::vector<Value> args, Frame* caller, const cvl::Stmt* site);
  void exec_body(const std::vector<cvl::Stmt>& body, Frame& f);
  void exec_stmt(const cvl::Stmt& s, Frame& f);
  void require_true(const cvl::Expr& e, const Env& env, const std::string& routine, const std::string& label,
                    ClauseKind kind, const SourceSpan& span);
  void check_struct_invariants(const Value& v, const Env& env, const std::string& routine, ClauseKind kind,
                               const SourceSpan& span);
  bool is_recursive(const std::string& r) const;
};

/// Default (zero) value of a non-struct type.
Value default_value(const cvl::Type& t);

struct InputConfig {
  int max_length = 12;
  std::int64_t min_value = -4;
  std::int64_t max_value = 20;
  int max_tries = 2000;
};

/// A pseudo-random argument vector satisfying `routine`'s preconditions, or
/// nullopt if rejection sampling gives up. Deterministic for a given rng state.
std::optional<std::vector<Value>> random_inputs(const cvl::Program& program, const std::string& routine,
                                                std::mt19937_64& rng, const InputConfig& cfg = {});

}  // namespace contraver::model
