// Copyright 2026 The factorsat Authors.
// SPDX-License-Identifier: Apache-2.0

#include "factorsat/bench.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <thread>
#include <tuple>

#include "factorsat/bundle.hpp"
#include "factorsat/error.hpp"

namespace factorsat {

namespace {

constexpr std::string_view kPlaceholder = "{cnf}";

std::vector<std::string> split_words(const std::string& text) {
  std::vector<std::string> words;
  std::string cur;
  bool in_word = false;
  char quote = 0;
  for (char ch : text) {
    if (quote != 0) {
      if (ch == quote) {
        quote = 0;
      } else {
        cur += ch;
      }
    } else if (ch == '\'' || ch == '"') {
      quote = ch;
      in_word = true;
    } else if (std::isspace(static_cast<unsigned char>(ch)) != 0) {
      if (in_word) words.push_back(std::move(cur));
      cur.clear();
      in_word = false;
    } else {
      cur += ch;
      in_word = true;
    }
  }
  if (quote != 0) throw Error("unbalanced quote in solver command");
  if (in_word) words.push_back(std::move(cur));
  return words;
}

std::size_t count_placeholders(const std::string& s) {
  std::size_t n = 0;
  for (std::size_t pos = s.find(kPlaceholder); pos != std::string::npos; pos = s.find(kPlaceholder, pos + 1)) ++n;
  return n;
}

}  // namespace

SolverSpec parse_solver_spec(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos || colon == 0) throw Error("solver spec must look like name:command {cnf}");
  SolverSpec spec;
  spec.name = text.substr(0, colon);
  if (spec.name.find_first_of(",\n\" ") != std::string::npos) throw Error("solver name must not contain commas, quotes or spaces");
  spec.argv = split_words(text.substr(colon + 1));
  if (spec.argv.empty()) throw Error("solver spec has an empty command");
  std::size_t holes = 0;
  for (const std::string& a : spec.argv) holes += count_placeholders(a);
  if (holes != 1) throw Error("solver command must contain {cnf} exactly once");
  return spec;
}

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::Sat: return "SAT";
    case Outcome::Unsat: return "UNSAT";
    case Outcome::Timeout: return "TIMEOUT";
    case Outcome::Error: return "ERROR";
  }
  return "ERROR";
}

Outcome outcome_from_string(const std::string& s) {
  if (s == "SAT") return Outcome::Sat;
  if (s == "UNSAT") return Outcome::Unsat;
  if (s == "TIMEOUT") return Outcome::Timeout;
  if (s == "ERROR") return Outcome::Error;
  throw ParseError("unknown outcome " + s);
}

ProcessResult run_process(const std::vector<std::string>& argv, double timeout_s) {
  if (argv.empty()) throw Error("empty command");
  int out_pipe[2];
  int err_pipe[2];
  int exec_pipe[2];
  if (pipe2(out_pipe, O_CLOEXEC) != 0 || pipe2(err_pipe, O_CLOEXEC) != 0 || pipe2(exec_pipe, O_CLOEXEC) != 0) {
    throw Error(std::string("pipe: ") + std::strerror(errno));
  }
  std::vector<char*> args;
  for (const std::string& a : argv) args.push_back(const_cast<char*>(a.c_str()));
  args.push_back(nullptr);

  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  const auto deadline = start + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(timeout_s));
  const pid_t pid = fork();
  if (pid < 0) throw Error(std::string("fork: ") + std::strerror(errno));
  if (pid == 0) {
    setpgid(0, 0);
    dup2(out_pipe[1], STDOUT_FILENO);
    dup2(err_pipe[1], STDERR_FILENO);
    execvp(args[0], args.data());
    const int e = errno;
    [[maybe_unused]] const auto n = write(exec_pipe[1], &e, sizeof e);
    _exit(127);
  }
  setpgid(pid, pid);
  close(out_pipe[1]);
  close(err_pipe[1]);
  close(exec_pipe[1]);

  int exec_errno = 0;
  const bool exec_failed = read(exec_pipe[0], &exec_errno, sizeof exec_errno) == sizeof exec_errno;
  close(exec_pipe[0]);

  ProcessResult r;
  pollfd fds[2] = {{out_pipe[0], POLLIN, 0}, {err_pipe[0], POLLIN, 0}};
  std::string* sinks[2] = {&r.out, &r.err};
  int open_fds = 2;
  char buf[65536];
  while (open_fds > 0) {
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now()).count();
    if (left <= 0) {
      r.timed_out = true;
      break;
    }
    const int n = poll(fds, 2, static_cast<int>(std::min<long long>(left, 1000)));
    if (n < 0 && errno != EINTR) break;
    for (int i = 0; i < 2; ++i) {
      if (fds[i].fd < 0 || (fds[i].revents & (POLLIN | POLLHUP | POLLERR)) == 0) continue;
      const ssize_t got = read(fds[i].fd, buf, sizeof buf);
      if (got > 0) {
        sinks[i]->append(buf, static_cast<std::size_t>(got));
      } else {
        close(fds[i].fd);
        fds[i].fd = -1;
        --open_fds;
      }
    }
  }
  int status = 0;
  // Pipes can close before exit; keep honouring the deadline.
  while (!r.timed_out) {
    const pid_t w = waitpid(pid, &status, WNOHANG);
    if (w == pid) break;
    if (Clock::now() >= deadline) {
      r.timed_out = true;
      break;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(1));
  }
  if (r.timed_out) {
    kill(-pid, SIGKILL);
    waitpid(pid, &status, 0);
  }
  r.wall_time_s = std::chrono::duration<double>(Clock::now() - start).count();
  for (const pollfd& f : fds) {
    if (f.fd >= 0) close(f.fd);
  }
  if (exec_failed) throw Error("cannot spawn " + argv[0] + ": " + std::strerror(exec_errno));
  if (!r.timed_out) r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : 128 + WTERMSIG(status);
  return r;
}

bool parse_solver_output(const std::string& text, SolverOutput& out) {
  std::istringstream in(text);
  std::string line;
  bool have_status = false;
  while (std::getline(in, line)) {
    if (line.rfind("s ", 0) == 0) {
      out.status = line.substr(2);
      while (!out.status.empty() && std::isspace(static_cast<unsigned char>(out.status.back())) != 0) out.status.pop_back();
      have_status = true;
    } else if (line.rfind("v ", 0) == 0 || line == "v") {
      std::istringstream ls(line.substr(1));
      int lit = 0;
      while (ls >> lit) {
        if (lit != 0) out.values.push_back(lit);
      }
    }
  }
  return have_status;
}

RunRecord run_solver(const std::filesystem::path& cnf, const WitnessMap& wm, const SolverSpec& spec,
                     double timeout_s) {
  std::vector<std::string> argv = spec.argv;
  for (std::string& a : argv) {
    const auto pos = a.find(kPlaceholder);
    if (pos != std::string::npos) a.replace(pos, kPlaceholder.size(), cnf.string());
  }
  RunRecord rec;
  rec.solver = spec.name;
  rec.n = wm.n.to_decimal();
  const ProcessResult pr = run_process(argv, timeout_s);
  rec.wall_time_s = pr.wall_time_s;
  if (pr.timed_out) {
    rec.outcome = Outcome::Timeout;
    return rec;
  }
  SolverOutput so;
  if (!parse_solver_output(pr.out, so)) {
    rec.outcome = Outcome::Error;
    rec.note = "no status line; exit " + std::to_string(pr.exit_code) + "; stderr: " + pr.err;
    return rec;
  }
  if (so.status == "UNSATISFIABLE") {
    rec.outcome = Outcome::Unsat;
    rec.note = "planted instance reported UNSATISFIABLE";
    return rec;
  }
  if (so.status != "SATISFIABLE") {
    rec.outcome = Outcome::Error;
    rec.note = "status " + so.status + "; stderr: " + pr.err;
    return rec;
  }
  Assignment a(wm.var_origin.size(), 0);
  for (int lit : so.values) {
    const auto v = static_cast<std::size_t>(std::abs(lit));
    if (v >= 1 && v <= a.size()) a[v - 1] = lit > 0;
  }
  rec.outcome = Outcome::Sat;
  try {
    const auto [p, q] = decode_witness(a, wm);
    rec.p = p.to_decimal();
    rec.q = q.to_decimal();
    rec.verified = p * q == wm.n && Natural(1) < p && Natural(1) < q;
    if (!rec.verified) rec.note = "witness does not factor N";
  } catch (const Error& e) {
    rec.note = e.what();
  }
  if (spec.success_codes.count(pr.exit_code) == 0) rec.note += " (unexpected exit " + std::to_string(pr.exit_code) + ")";
  return rec;
}

RunRecord run_solver(const std::filesystem::path& cnf, const std::filesystem::path& witness,
                     const SolverSpec& spec, double timeout_s) {
  std::ifstream in(witness);
  if (!in) throw Error("cannot read " + witness.string());
  return run_solver(cnf, parse_witness_map(in), spec, timeout_s);
}

std::uint64_t campaign_seed(std::uint64_t base, unsigned d, unsigned rep) { return derive_seed(base, d, rep); }

void write_run_row(const RunRecord& r, std::ostream& out) {
  char t[64];
  std::snprintf(t, sizeof t, "%.6f", r.wall_time_s);
  out << r.d << ',' << r.seed << ',' << r.solver << ',' << t << ',' << to_string(r.outcome) << ','
      << (r.verified ? 1 : 0) << ',' << r.p << ',' << r.q << ',' << r.n << '\n';
}

std::vector<RunRecord> read_runs_csv(std::istream& in) {
  std::vector<RunRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == kRunsHeader) continue;
    std::vector<std::string> f;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    if (!line.empty() && line.back() == ',') f.emplace_back();
    if (f.size() != 9) throw ParseError("runs CSV line " + std::to_string(line_no) + " has " + std::to_string(f.size()) + " fields");
    RunRecord r;
    try {
      r.d = static_cast<unsigned>(std::stoul(f[0]));
      r.seed = std::stoull(f[1]);
      r.wall_time_s = std::stod(f[3]);
    } catch (const std::logic_error&) {
      throw ParseError("runs CSV line " + std::to_string(line_no) + " has a bad number");
    }
    r.solver = f[2];
    r.outcome = outcome_from_string(f[4]);
    r.verified = f[5] == "1";
    r.p = f[6];
    r.q = f[7];
    r.n = f[8];
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<RunRecord> campaign(const CampaignOptions& o, const std::function<void(const RunRecord&)>& progress) {
  namespace fs = std::filesystem;
  const fs::path work = o.work_dir.empty() ? fs::path(o.csv.string() + ".instances") : o.work_dir;
  std::set<std::tuple<unsigned, std::uint64_t, std::string>> done;
  bool need_header = true;
  if (fs::exists(o.csv) && fs::file_size(o.csv) > 0) {
    std::ifstream in(o.csv);
    for (const RunRecord& r : read_runs_csv(in)) done.emplace(r.d, r.seed, r.solver);
    need_header = false;
  }
  if (!o.csv.parent_path().empty()) fs::create_directories(o.csv.parent_path());
  std::ofstream out(o.csv, std::ios::app);
  if (!out) throw Error("cannot append to " + o.csv.string());
  if (need_header) out << kRunsHeader << '\n' << std::flush;

  std::vector<RunRecord> fresh;
  for (unsigned d = o.d_min; d <= o.d_max; ++d) {
    for (unsigned rep = 0; rep < o.reps; ++rep) {
      const std::uint64_t seed = campaign_seed(o.seed, d, rep);
      const bool pending = std::any_of(o.solvers.begin(), o.solvers.end(), [&](const SolverSpec& s) {
        return done.count({d, seed, s.name}) == 0;
      });
      if (!pending) continue;
      GenerateOptions g;
      g.bits = d;
      g.seed = seed;
      const Instance inst = generate(g);
      const fs::path dir = work / ("d" + std::to_string(d) + "_s" + std::to_string(seed));
      write_bundle(make_bundle(inst, false), dir);
      for (const SolverSpec& spec : o.solvers) {
        if (done.count({d, seed, spec.name}) != 0) continue;
        RunRecord rec = run_solver(dir / "instance.cnf", inst.cnf.witness, spec, o.timeout_s);
        rec.d = d;
        rec.seed = seed;
        write_run_row(rec, out);
        out.flush();
        done.emplace(d, seed, spec.name);
        if (progress) progress(rec);
        fresh.push_back(std::move(rec));
      }
    }
  }
  return fresh;
}

double median(std::vector<double> v) {
  if (v.empty()) throw Error("median of an empty set");
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double mean(std::vector<double> v) {
  if (v.empty()) throw Error("mean of an empty set");
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

FitResult fit_points(const std::vector<std::pair<double, double>>& points) {
  std::set<double> xs;
  for (const auto& [x, t] : points) {
    if (!(t > 0)) throw Error("runtime must be positive for a log fit");
    xs.insert(x);
  }
  if (xs.size() < 2) throw Error("insufficient data: need at least two distinct bit-lengths");
  const double n = static_cast<double>(points.size());
  double mx = 0;
  double my = 0;
  for (const auto& [x, t] : points) {
    mx += x;
    my += std::log10(t);
  }
  mx /= n;
  my /= n;
  double sxx = 0;
  double sxy = 0;
  for (const auto& [x, t] : points) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (std::log10(t) - my);
  }
  FitResult f;
  f.alpha = sxy / sxx;
  f.intercept = my - f.alpha * mx;
  f.beta = f.alpha / std::log10(2.0);
  f.points = points;
  return f;
}

FitResult fit_loglinear(const std::vector<RunRecord>& records, const Aggregator& aggregate) {
  std::map<unsigned, std::vector<double>> by_d;
  for (const RunRecord& r : records) {
    if (r.outcome == Outcome::Sat && r.verified) by_d[r.d].push_back(r.wall_time_s);
  }
  std::vector<std::pair<double, double>> points;
  for (auto& [d, times] : by_d) points.emplace_back(d, aggregate(std::move(times)));
  return fit_points(points);
}

}  // namespace factorsat
