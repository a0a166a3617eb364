#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "contraver/ast.hpp"
#include "contraver/diagnostics.hpp"
#include "contraver/pipeline.hpp"

namespace contraver::corpus {

enum class Expected { Verified, Vacuous, Failed };

const char* to_string(Expected e);

struct Expectation {
  Expected verdict = Expected::Verified;
  std::string failing_label;  // Failed only; empty means any clause

  bool operator==(const Expectation&) const = default;
};

struct CorpusEntry {
  std::string path;  // relative to the corpus directory
  std::string description;
  std::map<std::string, Expectation> expected;  // routines not listed: verified
  vc::InvariantMode invariants = vc::InvariantMode::Implicit;
  bool bridge_axiom = false;
  bool drop_checks = false;
  std::string notes;
};

std::string default_dir();

/// Parses a manifest. Lines: `path | routine=verdict[:label] ... | options | description`.
/// Blank lines and lines starting with `#` are ignored.
std::vector<CorpusEntry> parse_manifest(const std::string& text);

/// The shipped manifest (`<dir>/manifest`).
std::vector<CorpusEntry> corpus_manifest(const std::string& dir = default_dir());

/// Every `.cvl` file under `dir`, relative, sorted.
std::vector<std::string> corpus_files(const std::string& dir = default_dir());

/// Removes every `check` statement.
cvl::Program drop_checks(cvl::Program p);

Expectation observed(const diag::RoutineVerdict& v);
bool meets(const Expectation& want, const diag::RoutineVerdict& got);

struct EntryOutcome {
  CorpusEntry entry;
  std::vector<diag::RoutineVerdict> verdicts;
  std::vector<std::string> mismatches;
  double wall_ms = 0;

  bool ok() const { return mismatches.empty(); }
};

/// Verifies one entry. `base` supplies solver, workers and triggers; the
/// entry's own options override invariant mode and bridge axiom.
EntryOutcome run_entry(const CorpusEntry& e, const std::string& dir, const RunOptions& base);

/// Runs a whole manifest and writes one line per entry to `log`.
std::vector<EntryOutcome> run_manifest(const std::vector<CorpusEntry>& entries, const std::string& dir,
                                       const RunOptions& base, std::ostream& log);

}  // namespace contraver::corpus
