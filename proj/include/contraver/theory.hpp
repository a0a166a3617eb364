#pragma once

#include <set>
#include <string>
#include <vector>

#include "contraver/logic.hpp"
#include "contraver/vcgen.hpp"

namespace contraver::smt {

struct TheoryConfig {
  bool bridge_axiom = false;
  bool triggers = true;      // emit :pattern annotations
  int instantiation_hint = 0;  // forwarded as smt.qi.max_instances when > 0
};

struct Axiom {
  std::string name;
  int family = 0;
  logic::Term formula;
  std::set<std::string> triggers;  // function symbols that must be in play
};

/// The sequence/bag background theory. Families 1-6 always; family 7 (the
/// interval/extended bridge) only when enabled.
std::vector<Axiom> background_theory(const TheoryConfig& cfg);

/// Self-contained SMT-LIB 2 script checking `vc`: declarations, relevant
/// axioms and ghost definitions, the hypothesis, the negated goal and one
/// check-sat. An axiom is relevant when its trigger symbols all occur in the
/// VC or in already relevant axioms and definitions.
std::string emit_script(const vc::VerificationCondition& vc, const std::vector<Axiom>& theory,
                        const std::vector<logic::GhostDef>& ghosts, const TheoryConfig& cfg = {},
                        std::optional<unsigned> seed = std::nullopt);

/// Names of the axioms emit_script would include for `vc`.
std::vector<std::string> relevant_axioms(const vc::VerificationCondition& vc, const std::vector<Axiom>& theory,
                                         const std::vector<logic::GhostDef>& ghosts);

}  // namespace contraver::smt
