#include "contraver/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "contraver/parser.hpp"

namespace contraver::metrics {

using cvl::Token;

const char* to_string(Category c) {
  switch (c) {
    case Category::Code: return "code";
    case Category::P: return "P";
    case Category::Q: return "Q";
    case Category::C: return "C";
    case Category::L: return "L";
    case Category::F: return "F";
    case Category::A: return "A";
    case Category::N: return "N";
    case Category::Excluded: return "excluded";
  }
  return "?";
}

long& TokenMetrics::at(Category cat) {
  switch (cat) {
    case Category::P: return p;
    case Category::Q: return q;
    case Category::C: return c;
    case Category::L: return l;
    case Category::F: return f;
    case Category::A: return a;
    case Category::N: return n;
    default: return code;
  }
}

namespace {

struct Region {
  std::size_t begin, end;
  Category cat;
};

bool excluded_keyword(const Token& t) {
  static const char* const kWords[] = {"require", "ensure", "invariant", "variant", "modify", "check", "ghost"};
  if (t.kind != cvl::TokenKind::Keyword) return false;
  return std::any_of(std::begin(kWords), std::end(kWords), [&](const char* w) { return t.lexeme == w; });
}

void clause_region(const std::vector<cvl::LabeledExpr>& cs, Category cat, std::vector<Region>& out) {
  if (cs.empty()) return;
  out.push_back({cs.front().span.begin, cs.back().span.end, cat});
}

void body_regions(const std::vector<cvl::Stmt>& body, std::vector<Region>& out) {
  for (const auto& s : body) {
    switch (s.kind) {
      case cvl::StmtKind::Check: out.push_back({s.span.begin, s.span.end, Category::A}); break;
      case cvl::StmtKind::UseInvariant: out.push_back({s.span.begin, s.span.end, Category::N}); break;
      case cvl::StmtKind::While:
        clause_region(s.invariants, Category::L, out);
        if (s.variant) out.push_back({s.variant->span.begin, s.variant->span.end, Category::L});
        body_regions(s.then_body, out);
        break;
      case cvl::StmtKind::If:
        body_regions(s.then_body, out);
        body_regions(s.else_body, out);
        break;
      default: break;
    }
  }
}

std::vector<Region> regions(const cvl::Program& p) {
  std::vector<Region> out;
  for (const auto& g : p.ghosts) out.push_back({g.span.begin, g.span.end, Category::N});
  for (const auto& s : p.structs) clause_region(s.invariants, Category::C, out);
  for (const auto& r : p.routines) {
    clause_region(r.preconditions, Category::P, out);
    clause_region(r.postconditions, Category::Q, out);
    if (!r.modifies.empty()) out.push_back({r.modify_span.begin, r.modify_span.end, Category::F});
    if (r.variant) out.push_back({r.variant->span.begin, r.variant->span.end, Category::L});
    body_regions(r.body, out);
  }
  return out;
}

}  // namespace

std::vector<Category> attribute(const cvl::Program& p, const std::vector<Token>& tokens) {
  const auto rs = regions(p);
  std::vector<Category> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) {
    if (excluded_keyword(t)) {
      out.push_back(Category::Excluded);
      continue;
    }
    Category cat = Category::Code;
    for (const auto& r : rs) {
      if (t.span.begin >= r.begin && t.span.begin < r.end) {
        cat = r.cat;
        break;
      }
    }
    // a clause terminator belongs with the clause it ends
    if (cat == Category::Code && t.lexeme == ";" && !out.empty() && out.back() != Category::Excluded) {
      cat = out.back();
    }
    out.push_back(cat);
  }
  return out;
}

TokenMetrics count_tokens(const cvl::Program& p, const std::vector<Token>& tokens) {
  TokenMetrics m;
  m.file = p.file;
  for (Category c : attribute(p, tokens)) {
    if (c != Category::Excluded) ++m.at(c);
  }
  return m;
}

TokenMetrics measure_source(std::string_view source, const std::string& file) {
  auto tokens = cvl::tokenize(source, file);
  auto program = cvl::parse_lenient(tokens, file);
  return count_tokens(program, tokens);
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TokenMetrics measure_file(const std::string& path) { return measure_source(read_file(path), path); }

std::string strip_annotations(std::string_view source, const std::string& file) {
  auto tokens = cvl::tokenize(source, file);
  auto program = cvl::parse_lenient(tokens, file);
  auto cats = attribute(program, tokens);
  std::string out(source);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (cats[i] == Category::Code) continue;
    for (std::size_t b = tokens[i].span.begin; b < tokens[i].span.end; ++b) {
      if (out[b] != '\n') out[b] = ' ';
    }
  }
  return out;
}

std::string ratio_report(std::vector<TokenMetrics> rows, Format f) {
  std::sort(rows.begin(), rows.end(), [](const TokenMetrics& a, const TokenMetrics& b) { return a.file < b.file; });
  auto ratio = [](const TokenMetrics& m) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", m.ratio());
    return std::string(buf);
  };
  std::ostringstream os;
  if (f == Format::Csv) {
    os << "FILE,CODE,T,P,Q,C,L,F,A,N,A/C\n";
    for (const auto& m : rows) {
      os << m.file << "," << m.code << "," << m.total() << "," << m.p << "," << m.q << "," << m.c << "," << m.l << ","
         << m.f << "," << m.a << "," << m.n << "," << ratio(m) << "\n";
    }
    return os.str();
  }
  std::size_t width = 4;
  for (const auto& m : rows) width = std::max(width, m.file.size());
  auto cell = [](const std::string& s, std::size_t w) { return std::string(w > s.size() ? w - s.size() : 0, ' ') + s; };
  os << "FILE" << std::string(width - 4, ' ');
  for (const char* h : {"CODE", "T", "P", "Q", "C", "L", "F", "A", "N", "A/C"}) os << " " << cell(h, 6);
  os << "\n";
  for (const auto& m : rows) {
    os << m.file << std::string(width - m.file.size(), ' ');
    for (long v : {m.code, m.total(), m.p, m.q, m.c, m.l, m.f, m.a, m.n}) os << " " << cell(std::to_string(v), 6);
    os << " " << cell(ratio(m), 6) << "\n";
  }
  return os.str();
}

}  // namespace contraver::metrics
