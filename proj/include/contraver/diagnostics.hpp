#pragma once

#include <map>
#include <string>
#include <vector>

#include "contraver/solver.hpp"
#include "contraver/vcgen.hpp"

namespace contraver::diag {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kVacuityBanner = "WARNING: precondition unsatisfiable — verification is vacuous";
inline constexpr const char* kTwoReadings =
    "either the code or its specification is wrong, or the prover needs more guidance "
    "(a stronger invariant or an intermediate check)";

enum class ClauseStatus { Verified, Failed, Unknown, Timeout };
enum class Overall { Verified, Failed, Inconclusive };

const char* to_string(ClauseStatus s);
const char* to_string(Overall o);

struct ClauseVerdict {
  std::string id;
  std::string label;
  std::string kind;
  std::string file;
  int line = 0;
  int col = 0;
  ClauseStatus status = ClauseStatus::Unknown;
  std::string model;  // Failed only
  std::string note;   // solver diagnostics for SolverError

  bool operator==(const ClauseVerdict&) const = default;
};

struct RoutineVerdict {
  std::string name;
  std::string file;
  std::vector<ClauseVerdict> clauses;
  Overall overall = Overall::Verified;
  bool vacuous = false;                 // precondition smoke VC valid
  std::vector<std::string> unreachable; // loop/check smoke VCs found valid, as "label@file:line"

  bool operator==(const RoutineVerdict&) const = default;
};

struct Report {
  std::string version = kVersion;
  std::map<std::string, std::string> options;
  std::vector<RoutineVerdict> routines;
  std::map<std::string, double> timing_ms;

  int count(Overall o) const;
  int vacuous_count() const;
};

class InternalError : public Error {
 public:
  using Error::Error;
};

ClauseStatus clause_status(smt::Status s);

/// Combines obligation and smoke results for one routine. `set` may mix
/// both kinds; results must match it one to one by id.
RoutineVerdict classify(const vc::VCSet& set, const std::vector<smt::DischargeResult>& results);

enum class Format { Text, Json };

std::string render(const Report& r, Format f);

/// Inverse of the JSON rendering (timing included).
Report parse_json_report(const std::string& text);

}  // namespace contraver::diag
