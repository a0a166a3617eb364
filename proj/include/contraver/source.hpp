#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace contraver {

/// A region of an input file. Lines and columns are 1-based; `begin`/`end`
/// are byte offsets into the source text (end exclusive).
struct SourceSpan {
  std::string file;
  int start_line = 1;
  int start_col = 1;
  int end_line = 1;
  int end_col = 1;
  std::size_t begin = 0;
  std::size_t end = 0;

  /// Smallest span covering both `a` and `b`.
  static SourceSpan cover(const SourceSpan& a, const SourceSpan& b);

  std::string to_string() const;  // file:line:col

  bool operator==(const SourceSpan&) const = default;
};

struct Diagnostic {
  SourceSpan span;
  std::string message;

  std::string to_string() const;
};

/// Base of all errors raised by the toolchain.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// An error attached to a location in the input.
class SourceError : public Error {
 public:
  SourceError(SourceSpan span, const std::string& message)
      : Error(span.to_string() + ": " + message), span_(std::move(span)), message_(message) {}

  const SourceSpan& span() const { return span_; }
  const std::string& message() const { return message_; }

 private:
  SourceSpan span_;
  std::string message_;
};

class LexError : public SourceError {
 public:
  using SourceError::SourceError;
};

class ParseError : public SourceError {
 public:
  ParseError(SourceSpan span, const std::string& message, std::vector<std::string> expected)
      : SourceError(std::move(span), message), expected_(std::move(expected)) {}

  const std::vector<std::string>& expected() const { return expected_; }

 private:
  std::vector<std::string> expected_;
};

/// Raised when typechecking fails; carries every collected error.
class TypeErrors : public Error {
 public:
  explicit TypeErrors(std::vector<Diagnostic> errors);
  const std::vector<Diagnostic>& errors() const { return errors_; }

 private:
  std::vector<Diagnostic> errors_;
};

}  // namespace contraver
