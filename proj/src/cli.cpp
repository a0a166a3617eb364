#include "contraver/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "contraver/corpus.hpp"
#include "contraver/metrics.hpp"
#include "contraver/pipeline.hpp"

namespace contraver::cli {

namespace {

struct SolverFlags {
  std::optional<std::string> command;
  int timeout_ms = smt::kDefaultTimeoutMs;
  std::optional<unsigned> seed;
  unsigned workers = 0;
  unsigned search_trials = smt::kDefaultSearchTrials;
  int smoke_timeout_ms = smt::kDefaultSmokeTimeoutMs;
};

void add_solver_flags(CLI::App* cmd, SolverFlags& f) {
  cmd->add_option("--solver-cmd", f.command, "solver command line; `{script}` selects file mode");
  cmd->add_option("--timeout", f.timeout_ms, "per-VC timeout in milliseconds")->check(CLI::PositiveNumber);
  cmd->add_option("--smoke-timeout", f.smoke_timeout_ms, "timeout cap for smoke VCs in milliseconds")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", f.seed, "solver random seed");
  cmd->add_option("--workers", f.workers, "parallel solver processes (default: available cores)");
  cmd->add_option("--search-trials", f.search_trials, "random concrete states tried per VC before the solver (0: off)");
}

smt::SolverConfig solver_config(const SolverFlags& f) {
  smt::SolverConfig cfg;
  cfg.command = smt::resolve_solver_command(f.command);
  cfg.timeout_ms = f.timeout_ms;
  cfg.seed = f.seed;
  cfg.search_trials = f.search_trials;
  cfg.smoke_timeout_ms = f.smoke_timeout_ms;
  return cfg;
}

int no_solver(const smt::SolverConfig& cfg, std::ostream& err) {
  err << "error: solver unavailable: '" << cfg.command << "'\n";
  return kNoSolver;
}

// Loads every file up front so parse and type errors win over solver trouble.
bool preload(const std::vector<std::string>& files, std::ostream& err) {
  bool ok = true;
  for (const auto& f : files) {
    try {
      (void)load_program(f);
    } catch (const TypeErrors& e) {
      for (const auto& d : e.errors()) err << d.to_string() << "\n";
      ok = false;
    } catch (const Error& e) {
      err << e.what() << "\n";
      ok = false;
    }
  }
  return ok;
}

int verify_exit(const diag::Report& r, bool strict_vacuity) {
  if (r.count(diag::Overall::Failed) + r.count(diag::Overall::Inconclusive) > 0) return kFailure;
  if (strict_vacuity && r.vacuous_count() > 0) return kFailure;
  return kOk;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"contraver: contract verifier for CVL programs"};
  app.set_version_flag("--version", diag::kVersion);
  app.require_subcommand(1);

  std::vector<std::string> files;
  SolverFlags sf;
  std::string invariants = "implicit";
  std::string format = "text";
  bool no_smoke = false, bridge = false, dump = false, strict = false, no_triggers = false;

  auto* verify = app.add_subcommand("verify", "verify every routine of the given files");
  verify->add_option("files", files, "CVL source files")->required();
  add_solver_flags(verify, sf);
  verify->add_option("--invariants", invariants, "struct invariant mode")
      ->check(CLI::IsMember({"implicit", "explicit"}));
  verify->add_flag("--no-smoke", no_smoke, "skip vacuity and reachability probes");
  verify->add_flag("--bridge-axiom", bridge, "add the interval/extend bridge axiom");
  verify->add_flag("--no-triggers", no_triggers, "emit quantifiers without patterns");
  verify->add_option("--format", format, "report format")->check(CLI::IsMember({"text", "json"}));
  verify->add_flag("--dump-vcs", dump, "print generated VCs to stderr");
  verify->add_flag("--strict-vacuity", strict, "treat vacuous routines as failures");

  std::vector<std::string> smoke_files;
  SolverFlags smoke_sf;
  std::string smoke_invariants = "implicit";
  std::string smoke_format = "text";
  auto* smoke = app.add_subcommand("smoke", "report only vacuity and unreachable code");
  smoke->add_option("files", smoke_files, "CVL source files")->required();
  add_solver_flags(smoke, smoke_sf);
  smoke->add_option("--invariants", smoke_invariants, "struct invariant mode")
      ->check(CLI::IsMember({"implicit", "explicit"}));
  smoke->add_option("--format", smoke_format, "report format")->check(CLI::IsMember({"text", "json"}));

  std::vector<std::string> metric_files;
  std::string metric_format = "text";
  bool stripped = false;
  auto* metrics_cmd = app.add_subcommand("metrics", "annotation token counts per file");
  metrics_cmd->add_option("files", metric_files, "CVL source files")->required();
  metrics_cmd->add_option("--format", metric_format, "table format")->check(CLI::IsMember({"text", "csv"}));
  metrics_cmd->add_flag("--stripped", stripped, "measure the files with all annotations removed");

  std::string corpus_dir = corpus::default_dir();
  SolverFlags corpus_sf;
  auto* corpus_cmd = app.add_subcommand("corpus-check", "run the corpus manifest regression");
  corpus_cmd->add_option("--dir", corpus_dir, "corpus directory");
  add_solver_flags(corpus_cmd, corpus_sf);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << diag::kVersion << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << sub->help();
    return kUsage;
  }

  try {
    if (verify->parsed() || smoke->parsed()) {
      const bool is_verify = verify->parsed();
      RunOptions opts;
      opts.files = is_verify ? files : smoke_files;
      const auto& flags = is_verify ? sf : smoke_sf;
      opts.solver = solver_config(flags);
      opts.workers = flags.workers;
      const auto& mode = is_verify ? invariants : smoke_invariants;
      opts.vc.invariants = mode == "explicit" ? vc::InvariantMode::Explicit : vc::InvariantMode::Implicit;
      if (is_verify) {
        opts.vc.smoke = !no_smoke;
        opts.theory.bridge_axiom = bridge;
        opts.theory.triggers = !no_triggers;
        opts.dump_vcs = dump;
      } else {
        opts.obligations = false;
      }
      if (!preload(opts.files, err)) return kUsage;
      if (!smt::solver_available(opts.solver)) return no_solver(opts.solver, err);
      auto report = verify_files(opts, opts.dump_vcs ? &err : nullptr);
      const auto fmt = (is_verify ? format : smoke_format) == "json" ? diag::Format::Json : diag::Format::Text;
      out << diag::render(report, fmt);
      if (is_verify) return verify_exit(report, strict);
      return report.vacuous_count() > 0 ? kFailure : kOk;
    }

    if (metrics_cmd->parsed()) {
      std::vector<metrics::TokenMetrics> rows;
      for (const auto& f : metric_files) {
        try {
          if (stripped) {
            auto text = metrics::strip_annotations(read_text(f), f);
            rows.push_back(metrics::measure_source(text, f));
          } else {
            rows.push_back(metrics::measure_file(f));
          }
        } catch (const Error& e) {
          err << e.what() << "\n";
          return kUsage;
        }
      }
      out << metrics::ratio_report(rows, metric_format == "csv" ? metrics::Format::Csv : metrics::Format::Text);
      return kOk;
    }

    if (corpus_cmd->parsed()) {
      std::vector<corpus::CorpusEntry> entries;
      try {
        entries = corpus::corpus_manifest(corpus_dir);
      } catch (const Error& e) {
        err << e.what() << "\n";
        return kUsage;
      }
      RunOptions base;
      base.solver = solver_config(corpus_sf);
      base.workers = corpus_sf.workers;
      if (!smt::solver_available(base.solver)) return no_solver(base.solver, err);
      int failed = 0;
      std::set<std::string> listed;
      for (const auto& e : entries) listed.insert(e.path);
      for (const auto& f : corpus::corpus_files(corpus_dir)) {
        if (!listed.count(f)) {
          out << "FAIL " << f << " (not in manifest)\n";
          ++failed;
        }
      }
      std::size_t passed = 0;
      for (const auto& r : corpus::run_manifest(entries, corpus_dir, base, out)) {
        if (r.ok()) ++passed;
        else ++failed;
      }
      out << passed << "/" << entries.size() << " entries passed\n";
      return failed ? kFailure : kOk;
    }
  } catch (const TypeErrors& e) {
    for (const auto& d : e.errors()) err << d.to_string() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace contraver::cli
