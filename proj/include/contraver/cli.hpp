#pragma once

#include <iosfwd>

namespace contraver::cli {

enum ExitCode { kOk = 0, kFailure = 1, kUsage = 2, kNoSolver = 3 };

int main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace contraver::cli
