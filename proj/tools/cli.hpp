// Copyright 2026 The cubicreg Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

// Command-line front end. cli_main() is the whole program minus the process
// boundary so tests can drive it with in-memory streams.
//
// Exit codes: 0 ok, 1 error or failed check, 2 budget exhausted (run),
// 64 bad flags, 65 metric column missing (profile), 66 unreadable input.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cubicreg/cubicreg.hpp"
#include "json.hpp"

namespace cubicreg::cli {

inline constexpr int kOk = 0;
inline constexpr int kError = 1;
inline constexpr int kBudget = 2;
inline constexpr int kUsage = 64;
inline constexpr int kDataErr = 65;
inline constexpr int kNoInput = 66;

inline constexpr double kCheckTol = 1e-5;
inline constexpr int kCheckPoints = 20;

struct RunArgs {
  std::string problem;
  long n = 0;
  std::string solver;
  std::string subsolver = "bb";
  double eps_g = 1e-5;
  std::optional<double> lipschitz;
  std::uint64_t seed = 0;
  int max_outer = 0;
  std::string out;
  std::string trace;
};

struct BenchArgs {
  std::string config;
  std::optional<int> reps;
  std::string out_dir = ".";
  std::optional<unsigned> threads;
};

struct ProfileArgs {
  std::string in;
  std::string metric;
  std::string out;
  std::string svg;
};

struct CheckArgs {
  std::string problem;
  long n = 0;
  std::uint64_t seed = 0;
};

inline void write_trace(std::ostream& os, const SolveReport& r) {
  os << "k,f,grad_norm,alpha,branch,step_norm,model_decrease,sigma,rho,f_trial,success,trigger,sub_iters,sub_status\n";
  for (const auto& row : r.iteration_log) {
    os << row.k << ',' << format_double(row.f) << ',' << format_double(row.grad_norm) << ','
       << format_double(row.alpha) << ',' << to_string(row.branch) << ',' << format_double(row.step_norm) << ','
       << format_double(row.model_decrease) << ',' << format_double(row.sigma) << ',' << format_double(row.rho)
       << ',' << format_double(row.f_trial) << ',' << (row.success ? 1 : 0) << ',' << (row.trigger ? 1 : 0) << ','
       << row.sub_iters << ',' << to_string(row.sub_status) << '\n';
  }
}

inline int do_run(const RunArgs& a, std::ostream& out, std::ostream& err) {
  SolverSpec spec;
  Problem problem;
  try {
    spec.kind = parse_solver_kind(a.solver);
    spec.subsolver = parse_subsolver(a.subsolver);
    problem = make_problem(a.problem, a.n);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  if (spec.needs_lipschitz() && !a.lipschitz) {
    err << "error: --lipschitz is required for --solver " << a.solver << '\n';
    return kUsage;
  }
  RunOptions opt;
  opt.eps_g = a.eps_g;
  opt.lipschitz = a.lipschitz;
  opt.seed = a.seed;
  opt.max_outer = a.max_outer;
  SolveReport report;
  try {
    report = run_solver(problem, initial_point(problem, a.seed), spec, opt);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kError;
  }
  const BenchRow row = make_row(a.problem, a.n, spec.name(), static_cast<std::int64_t>(a.seed), report);
  if (!a.out.empty()) {
    std::error_code ec;
    const bool fresh = !std::filesystem::exists(a.out, ec) || std::filesystem::file_size(a.out, ec) == 0;
    std::ofstream os(a.out, std::ios::app);
    if (!os) {
      err << "error: cannot write " << a.out << '\n';
      return kError;
    }
    if (fresh) os << csv_header() << '\n';
    os << to_csv_line(row) << '\n';
  }
  if (!a.trace.empty()) {
    std::ofstream os(a.trace);
    if (!os) {
      err << "error: cannot write " << a.trace << '\n';
      return kError;
    }
    write_trace(os, report);
  }
  out << row.problem << " n=" << row.n << ' ' << row.solver << " seed=" << row.seed << " status=" << row.status
      << " f=" << format_double(row.f_final) << " |g|=" << report.grad_norm_final << " n_i=" << row.n_i
      << " n_prod=" << row.n_prod << " n_g=" << row.n_g << " n_eig=" << row.n_eig << " time=" << row.time << "s\n";
  if (!report.message.empty()) out << "note: " << report.message << '\n';
  if (report.status == SolveStatus::stationary) return kOk;
  if (report.status == SolveStatus::max_outer) return kBudget;
  return kError;
}

/// Suite configuration: {problems: [{name, n, lipschitz?}], solvers: [...],
/// eps_g, reps?, lipschitz?}. Throws ConfigError on schema problems.
struct Suite {
  struct Entry {
    std::string name;
    long n = 0;
    std::optional<double> lipschitz;
  };
  std::vector<Entry> problems;
  std::vector<std::string> solvers;
  double eps_g = 1e-5;
  int reps = 10;
  std::optional<double> lipschitz;
};

inline Suite parse_suite(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("suite config must be a JSON object");
  Suite s;
  try {
    if (!j.contains("problems") || !j.at("problems").is_array()) throw ConfigError("suite needs a 'problems' array");
    if (!j.contains("solvers") || !j.at("solvers").is_array()) throw ConfigError("suite needs a 'solvers' array");
    for (const auto& p : j.at("problems")) {
      Suite::Entry e;
      e.name = p.at("name").get<std::string>();
      e.n = p.at("n").get<long>();
      if (p.contains("lipschitz")) e.lipschitz = p.at("lipschitz").get<double>();
      s.problems.push_back(e);
    }
    for (const auto& v : j.at("solvers")) s.solvers.push_back(v.get<std::string>());
    if (j.contains("eps_g")) s.eps_g = j.at("eps_g").get<double>();
    if (j.contains("reps")) s.reps = j.at("reps").get<int>();
    if (j.contains("lipschitz")) s.lipschitz = j.at("lipschitz").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("suite config: ") + e.what());
  }
  for (const auto& name : s.solvers) parse_solver_spec(name);
  if (s.problems.empty() || s.solvers.empty()) throw ConfigError("suite lists no problems or no solvers");
  if (!(s.eps_g > 0.0)) throw ConfigError("suite eps_g must be positive");
  return s;
}

inline int do_bench(const BenchArgs& a, std::ostream& out, std::ostream& err) {
  std::ifstream is(a.config);
  if (!is) {
    err << "error: cannot read suite config " << a.config << '\n';
    return kNoInput;
  }
  Suite suite;
  try {
    suite = parse_suite(nlohmann::json::parse(is));
  } catch (const std::exception& e) {
    err << "error: " << a.config << ": " << e.what() << '\n';
    return kNoInput;
  }
  const int reps = a.reps ? *a.reps : suite.reps;
  if (reps < 1) {
    err << "error: --reps must be at least 1\n";
    return kUsage;
  }
  std::vector<BenchCell> cells;
  for (const auto& p : suite.problems)
    for (const auto& solver : suite.solvers)
      for (int seed = 1; seed <= reps; ++seed) {
        BenchCell c;
        c.problem = p.name;
        c.n = p.n;
        c.solver = solver;
        c.seed = seed;
        c.eps_g = suite.eps_g;
        c.lipschitz = p.lipschitz ? p.lipschitz : suite.lipschitz;
        cells.push_back(c);
      }
  const unsigned threads = a.threads ? *a.threads : bench_threads();
  const std::vector<BenchRow> rows = run_grid(cells, threads);

  std::error_code ec;
  std::filesystem::create_directories(a.out_dir, ec);
  const std::filesystem::path dir(a.out_dir);
  std::ofstream rows_os(dir / "rows.csv"), means_os(dir / "means.csv"), h2h_os(dir / "head_to_head.csv");
  if (!rows_os || !means_os || !h2h_os) {
    err << "error: cannot write into " << a.out_dir << '\n';
    return kError;
  }
  write_rows(rows_os, rows);
  write_means(means_os, compute_means(rows));
  write_head_to_head(h2h_os, head_to_head(rows, {"n_i", "n_prod", "n_g", "time"}));
  std::size_t solved = 0, errors = 0;
  for (const auto& r : rows) {
    solved += r.solved() ? 1 : 0;
    errors += r.status == "error" ? 1 : 0;
  }
  out << rows.size() << " runs, " << solved << " stationary, " << errors << " errors; wrote " << (dir / "rows.csv").string()
      << ", means.csv, head_to_head.csv\n";
  return kOk;
}

inline int do_profile(const ProfileArgs& a, std::ostream& out, std::ostream& err) {
  std::ifstream is(a.in);
  if (!is) {
    err << "error: cannot read " << a.in << '\n';
    return kNoInput;
  }
  std::stringstream buf;
  buf << is.rdbuf();
  try {
    std::stringstream probe(buf.str());
    const CsvTable t = read_csv(probe);
    if (!t.column(a.metric)) {
      err << "error: " << a.in << " has no column '" << a.metric << "'\n";
      return kDataErr;
    }
  } catch (const ConfigError& e) {
    err << "error: " << a.in << ": " << e.what() << '\n';
    return kNoInput;
  }
  Profile p;
  try {
    std::stringstream again(buf.str());
    p = performance_profile(read_rows(again), a.metric);
  } catch (const ConfigError& e) {
    err << "error: " << a.in << ": " << e.what() << '\n';
    return kDataErr;
  }
  std::ofstream os(a.out);
  if (!os) {
    err << "error: cannot write " << a.out << '\n';
    return kError;
  }
  write_profile(os, p);
  if (!a.svg.empty()) {
    std::ofstream svg(a.svg);
    if (!svg) {
      err << "error: cannot write " << a.svg << '\n';
      return kError;
    }
    write_profile_svg(svg, p, "performance profile: " + a.metric);
  }
  out << p.instances << " instances, " << p.solvers.size() << " solvers, " << p.taus.size() << " tau values\n";
  for (std::size_t s = 0; s < p.solvers.size(); ++s)
    out << "  " << p.solvers[s] << ": best on " << format_double(p.fractions.front()[s]) << ", solved "
        << format_double(p.solved_share[s]) << '\n';
  return kOk;
}

/// Point j of the derivative check: standard start plus U[-1, 1]^n.
inline Vector check_point(const Problem& problem, std::uint64_t seed, int j) {
  Rng rng(Rng::derive(seed, 0x636b00ULL + static_cast<std::uint64_t>(j)));
  return problem.x0_standard + rng.uniform_vector(problem.dim, -1.0, 1.0);
}

inline int do_check(const CheckArgs& a, std::ostream& out, std::ostream& err) {
  Problem problem;
  try {
    problem = make_problem(a.problem, a.n);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  FdErrors worst;
  int bad = -1;
  FdErrors bad_err;
  for (int j = 0; j < kCheckPoints; ++j) {
    const Vector x = check_point(problem, a.seed, j);
    const FdErrors e = fd_check(problem, x, fd_step(x), a.seed);
    worst.grad_err = std::max(worst.grad_err, e.grad_err);
    worst.hess_err = std::max(worst.hess_err, e.hess_err);
    if (bad < 0 && (e.grad_err > kCheckTol || e.hess_err > kCheckTol)) {
      bad = j;
      bad_err = e;
    }
  }
  out << a.problem << " n=" << a.n << ": worst gradient error " << worst.grad_err << ", worst Hessian error "
      << worst.hess_err << " over " << kCheckPoints << " points (tolerance " << kCheckTol << ")\n";
  if (bad < 0) return kOk;
  const Vector x = check_point(problem, a.seed, bad);
  err << "check failed at point " << bad << " (gradient error " << bad_err.grad_err << ", Hessian error "
      << bad_err.hess_err << "): x =";
  const Eigen::Index shown = std::min<Eigen::Index>(x.size(), 10);
  for (Eigen::Index i = 0; i < shown; ++i) err << ' ' << format_double(x[i]);
  if (shown < x.size()) err << " ...";
  err << '\n';
  return kError;
}

inline int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"cubic regularization solvers and benchmark harness", "cubicreg"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "solve one problem and report counters");
  run_cmd->add_option("--problem", run.problem, "problem name")->required();
  run_cmd->add_option("--n", run.n, "dimension")->required()->check(CLI::PositiveNumber);
  run_cmd->add_option("--solver", run.solver, "cr, arc or arc-practical")->required();
  run_cmd->add_option("--subsolver", run.subsolver, "nag or bb")->capture_default_str();
  run_cmd->add_option("--eps-g", run.eps_g, "gradient tolerance")->capture_default_str()->check(CLI::PositiveNumber);
  run_cmd->add_option("--lipschitz", run.lipschitz, "Hessian Lipschitz constant (cr, arc)")
      ->check(CLI::PositiveNumber);
  run_cmd->add_option("--seed", run.seed, "0 = standard start")->capture_default_str();
  run_cmd->add_option("--max-outer", run.max_outer, "outer iteration budget (0 = default)")
      ->check(CLI::NonNegativeNumber);
  run_cmd->add_option("--out", run.out, "append the result row to this CSV");
  run_cmd->add_option("--trace", run.trace, "write the iteration log to this CSV");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "run a suite with seeded starts");
  bench_cmd->add_option("--config", bench.config, "suite config (JSON)")->required();
  bench_cmd->add_option("--reps", bench.reps, "realizations per cell (overrides the config)");
  bench_cmd->add_option("--out-dir", bench.out_dir, "output directory")->capture_default_str();
  bench_cmd->add_option("--threads", bench.threads, "worker threads (default CUBICREG_THREADS)")
      ->check(CLI::PositiveNumber);

  ProfileArgs prof;
  auto* prof_cmd = app.add_subcommand("profile", "performance profile from rows.csv");
  prof_cmd->add_option("--in", prof.in, "rows.csv from bench")->required();
  prof_cmd->add_option("--metric", prof.metric, "n_i, n_prod, n_g or time")
      ->required()
      ->check(CLI::IsMember({"n_i", "n_prod", "n_g", "time"}));
  prof_cmd->add_option("--out", prof.out, "profile CSV")->required();
  prof_cmd->add_option("--svg", prof.svg, "optional SVG chart");

  CheckArgs chk;
  auto* chk_cmd = app.add_subcommand("check", "finite-difference derivative check");
  chk_cmd->add_option("--problem", chk.problem, "problem name")->required();
  chk_cmd->add_option("--n", chk.n, "dimension")->required()->check(CLI::PositiveNumber);
  chk_cmd->add_option("--seed", chk.seed, "seed for the sample points")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }
  if (run_cmd->parsed()) return do_run(run, out, err);
  if (bench_cmd->parsed()) return do_bench(bench, out, err);
  if (prof_cmd->parsed()) return do_profile(prof, out, err);
  return do_check(chk, out, err);
}

inline int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv = {"cubicreg"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace cubicreg::cli
