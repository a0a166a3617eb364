#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "contraver/ast.hpp"
#include "contraver/lexer.hpp"

namespace contraver::metrics {

/// Token attribution. Excluded covers the annotation keywords themselves.
enum class Category { Code, P, Q, C, L, F, A, N, Excluded };

const char* to_string(Category c);

struct TokenMetrics {
  std::string file;
  long code = 0;
  long p = 0, q = 0, c = 0, l = 0, f = 0, a = 0, n = 0;

  long total() const { return p + q + c + l + f + a + n; }
  double ratio() const { return code > 0 ? static_cast<double>(total()) / static_cast<double>(code) : 0.0; }
  long& at(Category cat);

  bool operator==(const TokenMetrics&) const = default;
};

/// One category per token, by the AST region the token falls in.
std::vector<Category> attribute(const cvl::Program& p, const std::vector<cvl::Token>& tokens);

TokenMetrics count_tokens(const cvl::Program& p, const std::vector<cvl::Token>& tokens);

/// Lexes and parses `source` (loop variants optional) and counts.
TokenMetrics measure_source(std::string_view source, const std::string& file);
TokenMetrics measure_file(const std::string& path);

/// `source` with every annotation (clauses, their keywords, checks,
/// use_invariant, ghost declarations, variants) removed.
std::string strip_annotations(std::string_view source, const std::string& file = "<input>");

enum class Format { Text, Csv };

/// Table with columns FILE, CODE, T, P, Q, C, L, F, A, N, A/C; rows sorted
/// by file name.
std::string ratio_report(std::vector<TokenMetrics> rows, Format f = Format::Text);

}  // namespace contraver::metrics
