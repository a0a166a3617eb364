#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "contraver/ast.hpp"
#include "contraver/diagnostics.hpp"
#include "contraver/solver.hpp"
#include "contraver/theory.hpp"
#include "contraver/vcgen.hpp"

namespace contraver {

struct RunOptions {
  std::vector<std::string> files;
  smt::SolverConfig solver;
  smt::TheoryConfig theory;
  vc::VcOptions vc;
  unsigned workers = 0;  // 0: available parallelism
  bool dump_vcs = false;
  bool obligations = true;  // false: smoke VCs only
};

/// Reads, parses and typechecks a file. Throws Error (or a subclass) on
/// failure.
cvl::Program load_program(const std::string& path);
cvl::Program load_source(const std::string& source, const std::string& file);

/// Verifies every routine of an already loaded program.
std::vector<diag::RoutineVerdict> verify_program(const cvl::Program& p, const RunOptions& opts,
                                                 std::map<std::string, double>* timing = nullptr,
                                                 std::ostream* dump = nullptr);

/// Loads and verifies every file; the report carries the option echo.
diag::Report verify_files(const RunOptions& opts, std::ostream* dump = nullptr);

std::map<std::string, std::string> option_echo(const RunOptions& opts);

unsigned effective_workers(unsigned requested);

}  // namespace contraver
