#include "contraver/pipeline.hpp"

#include <chrono>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include "contraver/parser.hpp"
#include "contraver/typecheck.hpp"

namespace contraver {

cvl::Program load_source(const std::string& source, const std::string& file) {
  return cvl::typecheck_or_throw(cvl::parse_source(source, file));
}

cvl::Program load_program(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_source(ss.str(), path);
}

unsigned effective_workers(unsigned requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<diag::RoutineVerdict> verify_program(const cvl::Program& p, const RunOptions& opts,
                                                 std::map<std::string, double>* timing, std::ostream* dump) {
  const auto theory = smt::background_theory(opts.theory);
  const auto ghosts = vc::ghost_definitions(p);
  std::vector<vc::VCSet> sets;
  std::vector<vc::VerificationCondition> all;
  for (const auto& r : p.routines) {
    vc::VCSet set;
    if (opts.obligations) {
      set = vc::generate_vcs(p, r.name, opts.vc);
    } else {
      set.routine = r.name;
      set.options = opts.vc;
    }
    if (opts.vc.smoke || !opts.obligations) {
      vc::VCSet smoke = vc::generate_smoke_vcs(p, r.name, opts.vc);
      set.vcs.insert(set.vcs.end(), smoke.vcs.begin(), smoke.vcs.end());
    }
    if (dump) *dump << vc::dump(set);
    all.insert(all.end(), set.vcs.begin(), set.vcs.end());
    sets.push_back(std::move(set));
  }
  auto results = smt::discharge_all(all, theory, ghosts, opts.solver, opts.theory, effective_workers(opts.workers));
  std::vector<diag::RoutineVerdict> out;
  std::size_t at = 0;
  for (const auto& set : sets) {
    std::vector<smt::DischargeResult> mine(results.begin() + static_cast<std::ptrdiff_t>(at),
                                           results.begin() + static_cast<std::ptrdiff_t>(at + set.vcs.size()));
    at += set.vcs.size();
    if (timing) {
      double ms = 0;
      for (const auto& r : mine) ms += r.wall_ms;
      (*timing)[p.file + "::" + set.routine] = ms;
    }
    auto verdict = diag::classify(set, mine);
    if (verdict.file.empty()) verdict.file = p.file;
    out.push_back(std::move(verdict));
  }
  return out;
}

std::map<std::string, std::string> option_echo(const RunOptions& opts) {
  return {
      {"bridge_axiom", opts.theory.bridge_axiom ? "on" : "off"},
      {"triggers", opts.theory.triggers ? "on" : "off"},
      {"invariants", vc::to_string(opts.vc.invariants)},
      {"smoke", opts.vc.smoke ? "on" : "off"},
      {"solver", opts.solver.command},
      {"timeout_ms", std::to_string(opts.solver.timeout_ms)},
      {"smoke_timeout_ms", std::to_string(opts.solver.smoke_timeout_ms)},
      {"seed", opts.solver.seed ? std::to_string(*opts.solver.seed) : "none"},
      {"search_trials", std::to_string(opts.solver.search_trials)},
  };
}

diag::Report verify_files(const RunOptions& opts, std::ostream* dump) {
  diag::Report report;
  report.options = option_echo(opts);
  const auto start = std::chrono::steady_clock::now();
  for (const auto& f : opts.files) {
    auto p = load_program(f);
    auto verdicts = verify_program(p, opts, &report.timing_ms, dump);
    report.routines.insert(report.routines.end(), verdicts.begin(), verdicts.end());
  }
  report.timing_ms["total"] =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace contraver
