#pragma once

#include <optional>
#include <string>
#include <vector>

#include "contraver/search.hpp"
#include "contraver/theory.hpp"
#include "contraver/vcgen.hpp"

namespace contraver::smt {

inline constexpr const char* kDefaultSolverCommand = "z3 -smt2 -in";
inline constexpr int kDefaultTimeoutMs = 30000;
inline constexpr int kDefaultSmokeTimeoutMs = 3000;

/// How to run the solver. The command is a shell command line; if it
/// contains `{script}` the script is written to a temporary file whose path
/// replaces the placeholder, otherwise the script is fed on standard input.
struct SolverConfig {
  std::string command = kDefaultSolverCommand;
  int timeout_ms = kDefaultTimeoutMs;
  std::optional<unsigned> seed;
  int smoke_timeout_ms = kDefaultSmokeTimeoutMs;  // cap for Smoke VCs, which are expected to be satisfiable
  unsigned search_trials = kDefaultSearchTrials;  // concrete countermodel search before the solver; 0 disables
};

/// Command resolution: explicit flag, then CONTRAVER_SOLVER, then default.
std::string resolve_solver_command(const std::optional<std::string>& flag);

enum class Status { Valid, Invalid, Unknown, Timeout, SolverError };

const char* to_string(Status s);

struct DischargeResult {
  std::string vc_id;
  Status status = Status::SolverError;
  std::string model;   // Invalid only
  std::string stderr_text;
  double wall_ms = 0;
};

/// Result of running a solver command on a script.
struct SolverRun {
  std::string answer;  // first token on stdout, or empty
  std::string output;  // everything printed after it
  std::string err;
  int exit_code = 0;
  bool timed_out = false;
  bool launch_failed = false;
  double wall_ms = 0;
};

/// Runs the solver on `script`. In stdin mode `(get-model)` is requested
/// only after a `sat` answer.
SolverRun run_solver(const std::string& script, const SolverConfig& cfg);

/// True when the command answers a trivial satisfiable script with `sat`.
bool solver_available(const SolverConfig& cfg);

/// Program-level constants of a `(get-model)` answer as sorted
/// `name = value` lines; the raw text if none are found.
std::string summarize_model(const std::string& raw);

DischargeResult discharge(const vc::VerificationCondition& vc, const std::vector<Axiom>& theory,
                          const std::vector<logic::GhostDef>& ghosts, const SolverConfig& solver,
                          const TheoryConfig& cfg = {});

/// Discharges independent VCs on up to `workers` threads; results come back
/// in the order of `vcs`.
std::vector<DischargeResult> discharge_all(const std::vector<vc::VerificationCondition>& vcs,
                                           const std::vector<Axiom>& theory,
                                           const std::vector<logic::GhostDef>& ghosts, const SolverConfig& solver,
                                           const TheoryConfig& cfg, unsigned workers);

}  // namespace contraver::smt
