#include "contraver/diagnostics.hpp"

#include <json.hpp>
#include <sstream>

namespace contraver::diag {

using ordered_json = nlohmann::ordered_json;

const char* to_string(ClauseStatus s) {
  switch (s) {
    case ClauseStatus::Verified: return "verified";
    case ClauseStatus::Failed: return "failed";
    case ClauseStatus::Unknown: return "unknown";
    case ClauseStatus::Timeout: return "timeout";
  }
  return "?";
}

const char* to_string(Overall o) {
  switch (o) {
    case Overall::Verified: return "verified";
    case Overall::Failed: return "failed";
    case Overall::Inconclusive: return "inconclusive";
  }
  return "?";
}

int Report::count(Overall o) const {
  int n = 0;
  for (const auto& r : routines) n += r.overall == o;
  return n;
}

int Report::vacuous_count() const {
  int n = 0;
  for (const auto& r : routines) n += r.vacuous;
  return n;
}

ClauseStatus clause_status(smt::Status s) {
  switch (s) {
    case smt::Status::Valid: return ClauseStatus::Verified;
    case smt::Status::Invalid: return ClauseStatus::Failed;
    case smt::Status::Timeout: return ClauseStatus::Timeout;
    default: return ClauseStatus::Unknown;
  }
}

namespace {

// `v.x = 1` reads as `x = 1`, `old.x = 1` as `old x = 1`.
std::string source_names(const std::string& model) {
  std::istringstream in(model);
  std::string out;
  for (std::string line; std::getline(in, line);) {
    if (line.rfind("v.", 0) == 0) line = line.substr(2);
    else if (line.rfind("old.", 0) == 0) line = "old " + line.substr(4);
    if (!out.empty()) out += "\n";
    out += line;
  }
  return out;
}

}  // namespace

RoutineVerdict classify(const vc::VCSet& set, const std::vector<smt::DischargeResult>& results) {
  if (set.vcs.size() != results.size()) throw InternalError("result count does not match VC count");
  RoutineVerdict rv;
  rv.name = set.routine;
  bool failed = false, open = false;
  for (std::size_t i = 0; i < set.vcs.size(); ++i) {
    const auto& v = set.vcs[i];
    const auto& res = results[i];
    if (v.id != res.vc_id) throw InternalError("result for '" + res.vc_id + "' where '" + v.id + "' was expected");
    if (rv.file.empty()) rv.file = v.span.file;
    if (v.kind == vc::VcKind::Smoke) {
      if (res.status != smt::Status::Valid) continue;
      if (v.smoke == vc::SmokeTarget::Precondition) rv.vacuous = true;
      else rv.unreachable.push_back(v.label + "@" + v.span.file + ":" + std::to_string(v.span.start_line));
      continue;
    }
    ClauseVerdict c;
    c.id = v.id;
    c.label = v.label;
    c.kind = vc::to_string(v.kind);
    c.file = v.span.file;
    c.line = v.span.start_line;
    c.col = v.span.start_col;
    c.status = clause_status(res.status);
    if (c.status == ClauseStatus::Failed) c.model = source_names(res.model);
    if (res.status == smt::Status::SolverError) c.note = res.stderr_text;
    failed = failed || c.status == ClauseStatus::Failed;
    open = open || c.status == ClauseStatus::Unknown || c.status == ClauseStatus::Timeout;
    rv.clauses.push_back(std::move(c));
  }
  rv.overall = failed ? Overall::Failed : open ? Overall::Inconclusive : Overall::Verified;
  if (rv.vacuous) rv.overall = Overall::Verified;
  return rv;
}

namespace {

const char* mark(ClauseStatus s) {
  switch (s) {
    case ClauseStatus::Verified: return "✔";
    case ClauseStatus::Failed: return "✘";
    default: return "?";
  }
}

std::string indent_block(const std::string& text, const std::string& pad) {
  std::string out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out += pad + line + "\n";
  return out;
}

std::string render_text(const Report& r) {
  std::ostringstream os;
  for (const auto& rv : r.routines) {
    os << "routine " << rv.name << " (" << rv.file << "): " << to_string(rv.overall) << "\n";
    if (rv.vacuous) os << "  " << kVacuityBanner << "\n";
    for (const auto& c : rv.clauses) {
      os << "  " << mark(c.status) << " " << c.label << " [" << c.kind << "] " << c.file << ":" << c.line << ":"
         << c.col;
      if (c.status != ClauseStatus::Verified) os << " (" << to_string(c.status) << ")";
      os << "\n";
      if (c.status == ClauseStatus::Failed) {
        os << "      " << kTwoReadings << "\n";
        if (!c.model.empty()) os << "      counterexample:\n" << indent_block(c.model, "        ");
      }
      if (!c.note.empty()) os << "      solver: " << c.note << "\n";
    }
    for (const auto& u : rv.unreachable) os << "  note: unreachable code at " << u << "\n";
  }
  os << "summary: " << r.count(Overall::Verified) << " verified, " << r.count(Overall::Failed) << " failed, "
     << r.count(Overall::Inconclusive) << " inconclusive, " << r.vacuous_count() << " vacuous\n";
  if (!r.timing_ms.empty()) {
    os << "timing (ms):\n";
    for (const auto& [k, v] : r.timing_ms) os << "  " << k << " " << static_cast<long long>(v + 0.5) << "\n";
  }
  return os.str();
}

ordered_json to_json(const Report& r) {
  ordered_json j;
  j["version"] = r.version;
  ordered_json opts = ordered_json::object();
  for (const auto& [k, v] : r.options) opts[k] = v;
  j["options"] = opts;
  ordered_json routines = ordered_json::array();
  for (const auto& rv : r.routines) {
    ordered_json jr;
    jr["name"] = rv.name;
    jr["file"] = rv.file;
    jr["overall"] = to_string(rv.overall);
    jr["vacuous"] = rv.vacuous;
    jr["unreachable"] = rv.unreachable;
    ordered_json clauses = ordered_json::array();
    for (const auto& c : rv.clauses) {
      ordered_json jc;
      jc["id"] = c.id;
      jc["label"] = c.label;
      jc["kind"] = c.kind;
      jc["status"] = to_string(c.status);
      jc["file"] = c.file;
      jc["line"] = c.line;
      jc["col"] = c.col;
      if (!c.model.empty()) jc["model"] = c.model;
      if (!c.note.empty()) jc["note"] = c.note;
      clauses.push_back(jc);
    }
    jr["clauses"] = clauses;
    routines.push_back(jr);
  }
  j["routines"] = routines;
  j["summary"] = {{"verified", r.count(Overall::Verified)},
                  {"failed", r.count(Overall::Failed)},
                  {"inconclusive", r.count(Overall::Inconclusive)},
                  {"vacuous", r.vacuous_count()}};
  ordered_json timing = ordered_json::object();
  for (const auto& [k, v] : r.timing_ms) timing[k] = v;
  j["timing_ms"] = timing;
  return j;
}

template <class E>
E enum_from(const std::string& s, std::initializer_list<E> all) {
  for (E e : all) {
    if (s == to_string(e)) return e;
  }
  throw Error("bad report value '" + s + "'");
}

}  // namespace

std::string render(const Report& r, Format f) {
  if (f == Format::Text) return render_text(r);
  return to_json(r).dump(2) + "\n";
}

Report parse_json_report(const std::string& text) {
  const auto j = ordered_json::parse(text);
  Report r;
  r.version = j.at("version").get<std::string>();
  for (const auto& [k, v] : j.at("options").items()) r.options[k] = v.get<std::string>();
  for (const auto& jr : j.at("routines")) {
    RoutineVerdict rv;
    rv.name = jr.at("name").get<std::string>();
    rv.file = jr.value("file", "");
    rv.overall = enum_from(jr.at("overall").get<std::string>(),
                           {Overall::Verified, Overall::Failed, Overall::Inconclusive});
    rv.vacuous = jr.at("vacuous").get<bool>();
    rv.unreachable = jr.value("unreachable", std::vector<std::string>{});
    for (const auto& jc : jr.at("clauses")) {
      ClauseVerdict c;
      c.id = jc.at("id").get<std::string>();
      c.label = jc.at("label").get<std::string>();
      c.kind = jc.at("kind").get<std::string>();
      c.status = enum_from(jc.at("status").get<std::string>(), {ClauseStatus::Verified, ClauseStatus::Failed,
                                                                 ClauseStatus::Unknown, ClauseStatus::Timeout});
      c.file = jc.at("file").get<std::string>();
      c.line = jc.at("line").get<int>();
      c.col = jc.value("col", 0);
      c.model = jc.value("model", "");
      c.note = jc.value("note", "");
      rv.clauses.push_back(std::move(c));
    }
    r.routines.push_back(std::move(rv));
  }
  for (const auto& [k, v] : j.at("timing_ms").items()) r.timing_ms[k] = v.get<double>();
  return r;
}

}  // namespace contraver::diag
