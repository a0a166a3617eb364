#include "contraver/solver.hpp"

#include <algorithm>
#include <cctype>
#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <chrono>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

namespace contraver::smt {

const char* to_string(Status s) {
  switch (s) {
    case Status::Valid: return "valid";
    case Status::Invalid: return "invalid";
    case Status::Unknown: return "unknown";
    case Status::Timeout: return "timeout";
    case Status::SolverError: return "solver-error";
  }
  return "?";
}

std::string resolve_solver_command(const std::optional<std::string>& flag) {
  if (flag && !flag->empty()) return *flag;
  if (const char* env = std::getenv("CONTRAVER_SOLVER"); env && *env) return env;
  return kDefaultSolverCommand;
}

namespace {

using Clock = std::chrono::steady_clock;

/// A child process running `/bin/sh -c <command>` in its own process group,
/// with piped stdio.
class Subprocess {
 public:
  explicit Subprocess(const std::string& command) {
    static std::once_flag ignore_sigpipe;
    std::call_once(ignore_sigpipe, [] { ::signal(SIGPIPE, SIG_IGN); });
    int in[2], out[2], err[2];
    if (::pipe2(in, O_CLOEXEC) != 0 || ::pipe2(out, O_CLOEXEC) != 0 || ::pipe2(err, O_CLOEXEC) != 0) throw Error("pipe failed");
    pid_ = ::fork();
    if (pid_ < 0) throw Error("fork failed");
    if (pid_ == 0) {
      ::setpgid(0, 0);
      ::dup2(in[0], 0);
      ::dup2(out[1], 1);
      ::dup2(err[1], 2);
      for (int fd : {in[0], in[1], out[0], out[1], err[0], err[1]}) ::close(fd);
      ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
      ::_exit(127);
    }
    ::setpgid(pid_, pid_);
    ::close(in[0]);
    ::close(out[1]);
    ::close(err[1]);
    in_ = in[1];
    out_ = out[0];
    err_ = err[0];
    for (int fd : {in_, out_, err_}) ::fcntl(fd, F_SETFL, ::fcntl(fd, F_GETFL) | O_NONBLOCK);
  }

  ~Subprocess() {
    close_input();
    if (out_ >= 0) ::close(out_);
    if (err_ >= 0) ::close(err_);
    if (pid_ > 0 && !reaped_) {
      ::kill(-pid_, SIGKILL);
      ::waitpid(pid_, nullptr, 0);
    }
  }

  Subprocess(const Subprocess&) = delete;
  Subprocess& operator=(const Subprocess&) = delete;

  void send(const std::string& text) { pending_ += text; }
  void close_after_send() { close_when_flushed_ = true; }

  const std::string& out() const { return out_buf_; }
  const std::string& err() const { return err_buf_; }

  /// Moves data until `done()` holds or both output streams reach EOF.
  /// Returns false if the deadline passes first.
  template <class Done>
  bool pump(Clock::time_point deadline, Done done) {
    while (!done()) {
      if (out_ < 0 && err_ < 0) return true;
      flush_input();
      pollfd fds[3];
      int n = 0;
      if (out_ >= 0) fds[n++] = {out_, POLLIN, 0};
      if (err_ >= 0) fds[n++] = {err_, POLLIN, 0};
      if (in_ >= 0 && !pending_.empty()) fds[n++] = {in_, POLLOUT, 0};
      const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now()).count();
      if (left <= 0) return false;
      int r = ::poll(fds, static_cast<nfds_t>(n), static_cast<int>(std::min<long long>(left, 100)));
      if (r < 0 && errno != EINTR) throw Error("poll failed");
      read_from(out_, out_buf_);
      read_from(err_, err_buf_);
    }
    return true;
  }

  /// Waits for exit; returns exit status (128+signal when killed).
  int wait() {
    int status = 0;
    ::waitpid(pid_, &status, 0);
    reaped_ = true;
    if (WIFEXITED(status)) return WEXITSTATUS(status);
    if (WIFSIGNALED(status)) return 128 + WTERMSIG(status);
    return -1;
  }

  void kill() {
    if (pid_ > 0 && !reaped_) {
      ::kill(-pid_, SIGKILL);
      ::waitpid(pid_, nullptr, 0);
      reaped_ = true;
    }
  }

 private:
  pid_t pid_ = -1;
  int in_ = -1, out_ = -1, err_ = -1;
  bool reaped_ = false;
  bool close_when_flushed_ = false;
  std::string pending_;
  std::string out_buf_, err_buf_;

  void close_input() {
    if (in_ >= 0) {
      ::close(in_);
      in_ = -1;
    }
  }

  void flush_input() {
    while (in_ >= 0 && !pending_.empty()) {
      ssize_t w = ::write(in_, pending_.data(), pending_.size());
      if (w > 0) {
        pending_.erase(0, static_cast<std::size_t>(w));
      } else if (w < 0 && (errno == EAGAIN || errno == EWOULDBLOCK)) {
        return;
      } else {
        pending_.clear();  // reader went away
        close_input();
      }
    }
    if (pending_.empty() && close_when_flushed_) close_input();
  }

  static void read_from(int& fd, std::string& buf) {
    if (fd < 0) return;
    char chunk[8192];
    for (;;) {
      ssize_t r = ::read(fd, chunk, sizeof chunk);
      if (r > 0) {
        buf.append(chunk, static_cast<std::size_t>(r));
      } else if (r == 0) {
        ::close(fd);
        fd = -1;
        return;
      } else {
        if (errno == EINTR) continue;
        if (errno != EAGAIN && errno != EWOULDBLOCK) {
          ::close(fd);
          fd = -1;
        }
        return;
      }
    }
  }
};

/// First whitespace-delimited token of `text` if it is complete (followed
/// by whitespace), else empty.
std::string first_token(const std::string& text, std::size_t* end = nullptr) {
  std::size_t b = 0;
  while (b < text.size() && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
  std::size_t e = b;
  while (e < text.size() && !std::isspace(static_cast<unsigned char>(text[e]))) ++e;
  if (e == text.size()) return {};
  if (end) *end = e;
  return text.substr(b, e - b);
}

std::string last_token_anywhere(const std::string& text) {
  std::size_t b = 0;
  while (b < text.size() && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
  std::size_t e = b;
  while (e < text.size() && !std::isspace(static_cast<unsigned char>(text[e]))) ++e;
  return text.substr(b, e - b);
}

std::filesystem::path temp_script_path() {
  static std::atomic<unsigned> counter{0};
  auto dir = std::filesystem::temp_directory_path();
  return dir / ("contraver-" + std::to_string(::getpid()) + "-" + std::to_string(counter++) + ".smt2");
}

}  // namespace

SolverRun run_solver(const std::string& script, const SolverConfig& cfg) {
  SolverRun run;
  const auto start = Clock::now();
  const auto deadline = start + std::chrono::milliseconds(cfg.timeout_ms);
  const std::string placeholder = "{script}";
  const auto at = cfg.command.find(placeholder);
  std::filesystem::path file;
  std::string command = cfg.command;
  if (at != std::string::npos) {
    file = temp_script_path();
    std::ofstream(file) << script << "(get-model)\n";
    for (auto pos = at; pos != std::string::npos; pos = command.find(placeholder, pos + file.string().size())) {
      command.replace(pos, placeholder.size(), file.string());
    }
  }
  {
    Subprocess proc(command);
    bool in_time = true;
    if (file.empty()) {
      proc.send(script);
      in_time = proc.pump(deadline, [&] { return !first_token(proc.out()).empty(); });
      if (in_time) {
        const std::string answer = first_token(proc.out());
        proc.send(answer == "sat" ? "(get-model)\n(exit)\n" : "(exit)\n");
        proc.close_after_send();
        in_time = proc.pump(deadline, [] { return false; });
      }
    } else {
      proc.close_after_send();
      in_time = proc.pump(deadline, [] { return false; });
    }
    if (!in_time) {
      proc.kill();
      run.timed_out = true;
    } else {
      run.exit_code = proc.wait();
    }
    std::size_t end = 0;
    run.answer = first_token(proc.out(), &end);
    if (run.answer.empty()) run.answer = last_token_anywhere(proc.out());
    else run.output = proc.out().substr(end);
    run.err = proc.err();
  }
  if (!file.empty()) std::filesystem::remove(file);
  run.launch_failed = !run.timed_out && run.exit_code == 127 && run.answer.empty();
  run.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  return run;
}

bool solver_available(const SolverConfig& cfg) {
  SolverConfig probe = cfg;
  probe.timeout_ms = std::max(cfg.timeout_ms, 10000);
  try {
    return run_solver("(set-logic ALL)\n(declare-const x Int)\n(assert (> x 0))\n(check-sat)\n", probe).answer ==
           "sat";
  } catch (const Error&) {
    return false;
  }
}

namespace {

constexpr std::size_t kModelLimit = 2000;

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

struct Sexp {
  std::string atom;
  std::vector<Sexp> list;
  bool is_list = false;
};

std::string flat(const Sexp& e) {
  if (!e.is_list) return e.atom;
  if (e.list.size() == 2 && !e.list[0].is_list && e.list[0].atom == "-" && !e.list[1].is_list) {
    return "-" + e.list[1].atom;
  }
  std::string out = "(";
  for (std::size_t i = 0; i < e.list.size(); ++i) out += (i ? " " : "") + flat(e.list[i]);
  return out + ")";
}

Sexp read_sexp(const std::string& s, std::size_t& pos) {
  while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  Sexp e;
  if (pos >= s.size()) return e;
  if (s[pos] == '(') {
    e.is_list = true;
    ++pos;
    while (true) {
      while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
      if (pos >= s.size()) break;
      if (s[pos] == ')') {
        ++pos;
        break;
      }
      e.list.push_back(read_sexp(s, pos));
    }
    return e;
  }
  if (s[pos] == '|') {
    auto end = s.find('|', pos + 1);
    if (end == std::string::npos) end = s.size() - 1;
    e.atom = s.substr(pos + 1, end - pos - 1);
    pos = end + 1;
    return e;
  }
  std::size_t b = pos;
  while (pos < s.size() && !std::isspace(static_cast<unsigned char>(s[pos])) && s[pos] != '(' && s[pos] != ')') ++pos;
  e.atom = s.substr(b, pos - b);
  return e;
}

}  // namespace

std::string summarize_model(const std::string& raw) {
  std::size_t pos = 0;
  Sexp top = read_sexp(raw, pos);
  std::vector<std::string> lines;
  for (const auto& d : top.list) {
    if (!d.is_list || d.list.size() != 5 || d.list[0].atom != "define-fun") continue;
    const auto& name = d.list[1].atom;
    if (!d.list[2].is_list || !d.list[2].list.empty() || name.find('.') == std::string::npos) continue;
    lines.push_back(name + " = " + flat(d.list[4]));
  }
  if (lines.empty()) return raw.size() > kModelLimit ? raw.substr(0, kModelLimit) : raw;
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  out.pop_back();
  return out.size() > kModelLimit ? out.substr(0, kModelLimit) : out;
}

DischargeResult discharge(const vc::VerificationCondition& vc, const std::vector<Axiom>& theory,
                          const std::vector<logic::GhostDef>& ghosts, const SolverConfig& solver,
                          const TheoryConfig& cfg) {
  DischargeResult res;
  res.vc_id = vc.id;
  try {
    const auto start = Clock::now();
    if (auto found = find_countermodel(vc, ghosts, solver.search_trials)) {
      res.status = Status::Invalid;
      res.model = *found;
      res.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
      return res;
    }
    const std::string script = emit_script(vc, theory, ghosts, cfg, solver.seed);
    SolverConfig cfg_run = solver;
    if (vc.kind == vc::VcKind::Smoke) cfg_run.timeout_ms = std::min(solver.timeout_ms, solver.smoke_timeout_ms);
    SolverRun run = run_solver(script, cfg_run);
    res.wall_ms = run.wall_ms;
    res.stderr_text = run.err;
    if (run.timed_out) {
      res.status = Status::Timeout;
    } else if (run.answer == "unsat") {
      res.status = Status::Valid;
    } else if (run.answer == "sat") {
      res.status = Status::Invalid;
      res.model = summarize_model(trim(run.output));
    } else if (run.answer == "unknown" || run.answer == "timeout") {
      res.status = Status::Unknown;
    } else {
      res.status = Status::SolverError;
      if (res.stderr_text.empty()) res.stderr_text = trim(run.answer + run.output);
    }
  } catch (const std::exception& e) {
    res.status = Status::SolverError;
    res.stderr_text = e.what();
  }
  return res;
}

std::vector<DischargeResult> discharge_all(const std::vector<vc::VerificationCondition>& vcs,
                                           const std::vector<Axiom>& theory,
                                           const std::vector<logic::GhostDef>& ghosts, const SolverConfig& solver,
                                           const TheoryConfig& cfg, unsigned workers) {
  std::vector<DischargeResult> out(vcs.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < vcs.size(); i = next++) out[i] = discharge(vcs[i], theory, ghosts, solver, cfg);
  };
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(vcs.size())));
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return out;
}

}  // namespace contraver::smt
