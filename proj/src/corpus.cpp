#include "contraver/corpus.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

namespace contraver::corpus {

namespace fs = std::filesystem;

const char* to_string(Expected e) {
  switch (e) {
    case Expected::Verified: return "verified";
    case Expected::Vacuous: return "vacuous";
    case Expected::Failed: return "failed";
  }
  return "?";
}

std::string default_dir() {
#ifdef CONTRAVER_CORPUS_DIR
  return CONTRAVER_CORPUS_DIR;
#else
  return "corpus";
#endif
}

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::vector<std::string> words(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

Expectation parse_expectation(const std::string& text, int line) {
  Expectation e;
  std::string verdict = text;
  if (auto colon = text.find(':'); colon != std::string::npos) {
    verdict = text.substr(0, colon);
    e.failing_label = text.substr(colon + 1);
  }
  if (verdict == "verified") e.verdict = Expected::Verified;
  else if (verdict == "vacuous") e.verdict = Expected::Vacuous;
  else if (verdict == "failed") e.verdict = Expected::Failed;
  else throw Error("manifest line " + std::to_string(line) + ": unknown verdict '" + verdict + "'");
  if (!e.failing_label.empty() && e.verdict != Expected::Failed) {
    throw Error("manifest line " + std::to_string(line) + ": only failed verdicts take a label");
  }
  return e;
}

}  // namespace

std::vector<CorpusEntry> parse_manifest(const std::string& text) {
  std::vector<CorpusEntry> out;
  std::istringstream in(text);
  int line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto fields = split(t, '|');
    if (fields.size() < 2 || fields[0].empty()) {
      throw Error("manifest line " + std::to_string(line_no) + ": expected `path | verdicts | options | description`");
    }
    CorpusEntry e;
    e.path = fields[0];
    for (const auto& w : words(fields[1])) {
      auto eq = w.find('=');
      if (eq == std::string::npos || eq == 0) {
        throw Error("manifest line " + std::to_string(line_no) + ": bad verdict '" + w + "'");
      }
      e.expected[w.substr(0, eq)] = parse_expectation(w.substr(eq + 1), line_no);
    }
    if (fields.size() > 2) {
      for (const auto& w : words(fields[2])) {
        if (w == "explicit") e.invariants = vc::InvariantMode::Explicit;
        else if (w == "implicit") e.invariants = vc::InvariantMode::Implicit;
        else if (w == "bridge-axiom") e.bridge_axiom = true;
        else if (w == "drop-checks") e.drop_checks = true;
        else if (w != "-") throw Error("manifest line " + std::to_string(line_no) + ": unknown option '" + w + "'");
      }
    }
    if (fields.size() > 3) e.description = fields[3];
    if (fields.size() > 4) e.notes = fields[4];
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<CorpusEntry> corpus_manifest(const std::string& dir) {
  std::ifstream in(fs::path(dir) / "manifest");
  if (!in) throw Error("cannot read manifest in '" + dir + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_manifest(ss.str());
}

std::vector<std::string> corpus_files(const std::string& dir) {
  std::vector<std::string> out;
  for (const auto& ent : fs::recursive_directory_iterator(dir)) {
    if (ent.is_regular_file() && ent.path().extension() == ".cvl") {
      out.push_back(fs::relative(ent.path(), dir).generic_string());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

void strip(std::vector<cvl::Stmt>& body) {
  std::erase_if(body, [](const cvl::Stmt& s) { return s.kind == cvl::StmtKind::Check; });
  for (auto& s : body) {
    strip(s.then_body);
    strip(s.else_body);
  }
}

}  // namespace

cvl::Program drop_checks(cvl::Program p) {
  for (auto& r : p.routines) strip(r.body);
  return p;
}

Expectation observed(const diag::RoutineVerdict& v) {
  Expectation e;
  if (v.overall == diag::Overall::Verified) {
    e.verdict = v.vacuous ? Expected::Vacuous : Expected::Verified;
    return e;
  }
  e.verdict = Expected::Failed;
  for (const auto& c : v.clauses) {
    if (c.status != diag::ClauseStatus::Verified) {
      e.failing_label = c.label;
      break;
    }
  }
  return e;
}

bool meets(const Expectation& want, const diag::RoutineVerdict& got) {
  switch (want.verdict) {
    case Expected::Verified: return got.overall == diag::Overall::Verified && !got.vacuous;
    case Expected::Vacuous: return got.overall == diag::Overall::Verified && got.vacuous;
    case Expected::Failed:
      if (got.overall != diag::Overall::Failed) return false;
      if (want.failing_label.empty()) return true;
      return std::any_of(got.clauses.begin(), got.clauses.end(), [&](const diag::ClauseVerdict& c) {
        return c.label == want.failing_label && c.status == diag::ClauseStatus::Failed;
      });
  }
  return false;
}

EntryOutcome run_entry(const CorpusEntry& e, const std::string& dir, const RunOptions& base) {
  EntryOutcome out;
  out.entry = e;
  const auto start = std::chrono::steady_clock::now();
  RunOptions opts = base;
  opts.vc.invariants = e.invariants;
  opts.theory.bridge_axiom = e.bridge_axiom;
  try {
    auto p = load_program((fs::path(dir) / e.path).string());
    if (e.drop_checks) p = drop_checks(std::move(p));
    out.verdicts = verify_program(p, opts);
  } catch (const std::exception& ex) {
    out.mismatches.push_back(e.path + ": " + ex.what());
  }
  for (const auto& [name, want] : e.expected) {
    if (std::none_of(out.verdicts.begin(), out.verdicts.end(), [&](const auto& v) { return v.name == name; }) &&
        !out.verdicts.empty()) {
      out.mismatches.push_back(name + ": no such routine");
    }
  }
  for (const auto& v : out.verdicts) {
    Expectation want;
    if (auto it = e.expected.find(v.name); it != e.expected.end()) want = it->second;
    if (!meets(want, v)) {
      auto got = observed(v);
      std::string msg = v.name + ": expected " + to_string(want.verdict);
      if (!want.failing_label.empty()) msg += ":" + want.failing_label;
      msg += ", got " + std::string(to_string(got.verdict));
      if (!got.failing_label.empty()) msg += ":" + got.failing_label;
      out.mismatches.push_back(msg);
    }
  }
  out.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return out;
}

std::vector<EntryOutcome> run_manifest(const std::vector<CorpusEntry>& entries, const std::string& dir,
                                       const RunOptions& base, std::ostream& log) {
  std::vector<EntryOutcome> out;
  for (const auto& e : entries) {
    auto r = run_entry(e, dir, base);
    log << (r.ok() ? "PASS " : "FAIL ") << e.path;
    if (e.bridge_axiom) log << " [bridge-axiom]";
    if (e.drop_checks) log << " [drop-checks]";
    if (e.invariants == vc::InvariantMode::Explicit) log << " [explicit]";
    log << " (" << static_cast<long>(r.wall_ms) << " ms)\n";
    for (const auto& m : r.mismatches) log << "  " << m << "\n";
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace contraver::corpus
