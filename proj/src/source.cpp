#include "contraver/source.hpp"

#include <algorithm>
#include <tuple>

namespace contraver {

SourceSpan SourceSpan::cover(const SourceSpan& a, const SourceSpan& b) {
  SourceSpan out = a;
  if (std::tie(b.start_line, b.start_col) < std::tie(a.start_line, a.start_col)) {
    out.start_line = b.start_line;
    out.start_col = b.start_col;
  }
  if (std::tie(b.end_line, b.end_col) > std::tie(a.end_line, a.end_col)) {
    out.end_line = b.end_line;
    out.end_col = b.end_col;
  }
  out.begin = std::min(a.begin, b.begin);
  out.end = std::max(a.end, b.end);
  return out;
}

std::string SourceSpan::to_string() const {
  return file + ":" + std::to_string(start_line) + ":" + std::to_string(start_col);
}

std::string Diagnostic::to_string() const { return span.to_string() + ": " + message; }

namespace {

std::string join_errors(const std::vector<Diagnostic>& errors) {
  std::string out;
  for (const auto& e : errors) {
    if (!out.empty()) out += '\n';
    out += e.to_string();
  }
  return out;
}

}  // namespace

TypeErrors::TypeErrors(std::vector<Diagnostic> errors)
    : Error(join_errors(errors)), errors_(std::move(errors)) {}

}  // namespace contraver
