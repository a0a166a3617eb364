#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "contraver/logic.hpp"
#include "contraver/vcgen.hpp"

namespace contraver::smt {

inline constexpr unsigned kDefaultSearchTrials = 2000;

/// Tries random concrete states against a VC under the intended model of
/// sequences and bags. A state making the hypothesis true and the goal false
/// is a genuine countermodel (the background axioms hold in that model), and
/// is returned as sorted `name = value` lines. Deterministic per VC id.
std::optional<std::string> find_countermodel(const vc::VerificationCondition& vc,
                                             const std::vector<logic::GhostDef>& ghosts, unsigned trials);

std::uint64_t stable_hash(const std::string& s);

}  // namespace contraver::smt
