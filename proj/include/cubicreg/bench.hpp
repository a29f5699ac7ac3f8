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

// Benchmark plumbing: solver selection, metric rows, CSV round trips,
// per-solver means, pairwise win counts and performance profiles.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include "cubicreg/arc_solver.hpp"
#include "cubicreg/cr_solver.hpp"
#include "cubicreg/problems.hpp"
#include "cubicreg/solver_common.hpp"

namespace cubicreg {

enum class SolverKind { cr, arc, arc_practical };

struct SolverSpec {
  SolverKind kind = SolverKind::arc_practical;
  Subsolver subsolver = Subsolver::bb;

  std::string name() const {
    const char* base = kind == SolverKind::cr ? "cr" : kind == SolverKind::arc ? "arc" : "arc-practical";
    return std::string(base) + "-" + to_string(subsolver);
  }
  bool needs_lipschitz() const { return kind != SolverKind::arc_practical; }
};

inline SolverKind parse_solver_kind(const std::string& name) {
  if (name == "cr") return SolverKind::cr;
  if (name == "arc") return SolverKind::arc;
  if (name == "arc-practical") return SolverKind::arc_practical;
  throw ConfigError("unknown solver '" + name + "'; expected cr, arc or arc-practical");
}

/// Parses "<solver>-<subsolver>", e.g. "arc-practical-bb".
inline SolverSpec parse_solver_spec(const std::string& text) {
  const auto dash = text.rfind('-');
  if (dash == std::string::npos) throw ConfigError("solver '" + text + "' must look like <solver>-<subsolver>");
  SolverSpec spec;
  spec.kind = parse_solver_kind(text.substr(0, dash));
  spec.subsolver = parse_subsolver(text.substr(dash + 1));
  return spec;
}

struct RunOptions {
  double eps_g = 1e-5;
  std::optional<double> lipschitz;
  std::uint64_t seed = 0;
  int max_outer = 0;  // 0: solver default
};

inline SolveReport run_solver(const Problem& problem, const Vector& x0, const SolverSpec& spec,
                              const RunOptions& opt) {
  if (spec.kind == SolverKind::arc_practical) {
    ArcPracticalConfig cfg;
    cfg.grad_tol = opt.eps_g;
    cfg.reform_solver = spec.subsolver;
    cfg.seed = opt.seed;
    if (opt.max_outer > 0) cfg.max_outer = opt.max_outer;
    return arc_solve_practical(problem, x0, cfg);
  }
  if (!opt.lipschitz) throw ConfigError(spec.name() + " needs a Lipschitz constant");
  CrConfig base;
  base.eps_g = opt.eps_g;
  base.lipschitz = *opt.lipschitz;
  base.subsolver = spec.subsolver;
  base.seed = opt.seed;
  base.max_outer = opt.max_outer;
  if (spec.kind == SolverKind::cr) return cr_solve(problem, x0, base);
  ArcTheoreticalConfig cfg;
  cfg.base = base;
  return arc_solve_theoretical(problem, x0, cfg);
}

struct BenchRow {
  std::string problem;
  std::int64_t n = 0;
  std::string solver;
  std::int64_t seed = 0;
  double f_final = 0.0;
  std::int64_t n_i = 0;
  std::int64_t n_prod = 0;
  std::int64_t n_f = 0;
  std::int64_t n_g = 0;
  std::int64_t n_eig = 0;
  double time = 0.0;
  double time_eig = 0.0;
  double time_loop = 0.0;
  std::string status;

  bool solved() const { return status == "stationary"; }
};

inline bool operator==(const BenchRow& a, const BenchRow& b) {
  auto same = [](double x, double y) { return x == y || (std::isnan(x) && std::isnan(y)); };
  return a.problem == b.problem && a.n == b.n && a.solver == b.solver && a.seed == b.seed &&
         same(a.f_final, b.f_final) && a.n_i == b.n_i && a.n_prod == b.n_prod && a.n_f == b.n_f &&
         a.n_g == b.n_g && a.n_eig == b.n_eig && same(a.time, b.time) && same(a.time_eig, b.time_eig) &&
         same(a.time_loop, b.time_loop) && a.status == b.status;
}

inline BenchRow make_row(const std::string& problem, std::int64_t n, const std::string& solver, std::int64_t seed,
                         const SolveReport& report) {
  BenchRow row;
  row.problem = problem;
  row.n = n;
  row.solver = solver;
  row.seed = seed;
  row.f_final = report.f_final;
  row.n_i = report.outer_iters;
  row.n_prod = report.counters.n_prod;
  row.n_f = report.counters.n_f;
  row.n_g = report.counters.n_g;
  row.n_eig = report.counters.n_eig;
  row.time = report.counters.time_total;
  row.time_eig = std::min(report.counters.time_eig, row.time);
  row.time_loop = row.time - row.time_eig;
  row.status = to_string(report.status);
  return row;
}

inline const std::vector<std::string>& bench_columns() {
  static const std::vector<std::string> cols = {"problem", "n",     "solver",   "seed",      "f_final",
                                                "n_i",     "n_prod", "n_f",      "n_g",       "n_eig",
                                                "time",    "time_eig", "time_loop", "status"};
  return cols;
}

/// Round-trip decimal form (17 significant digits).
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline double parse_double(const std::string& s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ConfigError("not a number: '" + s + "'");
  }
  if (used != s.size()) throw ConfigError("not a number: '" + s + "'");
  return v;
}

inline std::int64_t parse_int(const std::string& s) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    throw ConfigError("not an integer: '" + s + "'");
  }
  if (used != s.size()) throw ConfigError("not an integer: '" + s + "'");
  return v;
}

inline std::string csv_header() {
  std::string out;
  for (const auto& c : bench_columns()) out += (out.empty() ? "" : ",") + c;
  return out;
}

inline std::string to_csv_line(const BenchRow& r) {
  std::ostringstream os;
  os << r.problem << ',' << r.n << ',' << r.solver << ',' << r.seed << ',' << format_double(r.f_final) << ','
     << r.n_i << ',' << r.n_prod << ',' << r.n_f << ',' << r.n_g << ',' << r.n_eig << ',' << format_double(r.time)
     << ',' << format_double(r.time_eig) << ',' << format_double(r.time_loop) << ',' << r.status;
  return os.str();
}

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

inline void write_rows(std::ostream& os, const std::vector<BenchRow>& rows, bool header = true) {
  if (header) os << csv_header() << '\n';
  for (const auto& r : rows) os << to_csv_line(r) << '\n';
}

/// Generic CSV table keyed by header names.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::optional<std::size_t> column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    return std::nullopt;
  }
};

inline CsvTable read_csv(std::istream& is) {
  CsvTable t;
  std::string line;
  if (!std::getline(is, line)) throw ConfigError("empty CSV input");
  t.header = split_csv(line);
  while (std::getline(is, line)) {
    if (line.empty() || line == "\r") continue;
    auto fields = split_csv(line);
    if (fields.size() != t.header.size()) {
      throw ConfigError("CSV row has " + std::to_string(fields.size()) + " fields, header has " +
                        std::to_string(t.header.size()));
    }
    t.rows.push_back(std::move(fields));
  }
  return t;
}

/// Parses rows in the bench schema; columns may come in any order.
inline std::vector<BenchRow> read_rows(std::istream& is) {
  const CsvTable t = read_csv(is);
  std::vector<std::size_t> idx;
  for (const auto& c : bench_columns()) {
    auto i = t.column(c);
    if (!i) throw ConfigError("missing column '" + c + "'");
    idx.push_back(*i);
  }
  std::vector<BenchRow> out;
  for (const auto& f : t.rows) {
    BenchRow r;
    r.problem = f[idx[0]];
    r.n = parse_int(f[idx[1]]);
    r.solver = f[idx[2]];
    r.seed = parse_int(f[idx[3]]);
    r.f_final = parse_double(f[idx[4]]);
    r.n_i = parse_int(f[idx[5]]);
    r.n_prod = parse_int(f[idx[6]]);
    r.n_f = parse_int(f[idx[7]]);
    r.n_g = parse_int(f[idx[8]]);
    r.n_eig = parse_int(f[idx[9]]);
    r.time = parse_double(f[idx[10]]);
    r.time_eig = parse_double(f[idx[11]]);
    r.time_loop = parse_double(f[idx[12]]);
    r.status = f[idx[13]];
    out.push_back(std::move(r));
  }
  return out;
}

inline void sort_rows(std::vector<BenchRow>& rows) {
  std::sort(rows.begin(), rows.end(), [](const BenchRow& a, const BenchRow& b) {
    return std::tie(a.problem, a.n, a.solver, a.seed) < std::tie(b.problem, b.n, b.solver, b.seed);
  });
}

/// Averages per (problem, n, solver). Integer counters are summed exactly
/// before the single division.
struct MeanRow {
  std::string problem;
  std::int64_t n = 0;
  std::string solver;
  std::int64_t reps = 0;
  std::int64_t solved = 0;
  double f_final = 0.0;
  double n_i = 0.0;
  double n_prod = 0.0;
  double n_f = 0.0;
  double n_g = 0.0;
  double n_eig = 0.0;
  double time = 0.0;
  double time_eig = 0.0;
  double time_loop = 0.0;
};

inline std::vector<MeanRow> compute_means(const std::vector<BenchRow>& rows) {
  struct Acc {
    std::int64_t reps = 0, solved = 0, n_i = 0, n_prod = 0, n_f = 0, n_g = 0, n_eig = 0;
    double f = 0.0, time = 0.0, time_eig = 0.0, time_loop = 0.0;
  };
  std::map<std::tuple<std::string, std::int64_t, std::string>, Acc> groups;
  for (const auto& r : rows) {
    Acc& a = groups[{r.problem, r.n, r.solver}];
    ++a.reps;
    a.solved += r.solved() ? 1 : 0;
    a.n_i += r.n_i;
    a.n_prod += r.n_prod;
    a.n_f += r.n_f;
    a.n_g += r.n_g;
    a.n_eig += r.n_eig;
    a.f += r.f_final;
    a.time += r.time;
    a.time_eig += r.time_eig;
    a.time_loop += r.time_loop;
  }
  std::vector<MeanRow> out;
  for (const auto& [key, a] : groups) {
    MeanRow m;
    std::tie(m.problem, m.n, m.solver) = key;
    const double k = static_cast<double>(a.reps);
    m.reps = a.reps;
    m.solved = a.solved;
    m.f_final = a.f / k;
    m.n_i = static_cast<double>(a.n_i) / k;
    m.n_prod = static_cast<double>(a.n_prod) / k;
    m.n_f = static_cast<double>(a.n_f) / k;
    m.n_g = static_cast<double>(a.n_g) / k;
    m.n_eig = static_cast<double>(a.n_eig) / k;
    m.time = a.time / k;
    m.time_eig = a.time_eig / k;
    m.time_loop = a.time_loop / k;
    out.push_back(std::move(m));
  }
  return out;
}

inline void write_means(std::ostream& os, const std::vector<MeanRow>& means) {
  os << "problem,n,solver,reps,solved,f_final,n_i,n_prod,n_f,n_g,n_eig,time,time_eig,time_loop\n";
  for (const auto& m : means) {
    os << m.problem << ',' << m.n << ',' << m.solver << ',' << m.reps << ',' << m.solved << ','
       << format_double(m.f_final) << ',' << format_double(m.n_i) << ',' << format_double(m.n_prod) << ','
       << format_double(m.n_f) << ',' << format_double(m.n_g) << ',' << format_double(m.n_eig) << ','
       << format_double(m.time) << ',' << format_double(m.time_eig) << ',' << format_double(m.time_loop) << '\n';
  }
}

/// Metric value of a row by column name; nullopt for unknown names.
inline std::optional<double> metric_value(const BenchRow& r, const std::string& metric) {
  if (metric == "n_i") return static_cast<double>(r.n_i);
  if (metric == "n_prod") return static_cast<double>(r.n_prod);
  if (metric == "n_f") return static_cast<double>(r.n_f);
  if (metric == "n_g") return static_cast<double>(r.n_g);
  if (metric == "n_eig") return static_cast<double>(r.n_eig);
  if (metric == "time") return r.time;
  if (metric == "time_eig") return r.time_eig;
  if (metric == "time_loop") return r.time_loop;
  if (metric == "f_final") return r.f_final;
  return std::nullopt;
}

/// Realizations (seeds) where `solver` has a strictly smaller metric than
/// `opponent` on the same (problem, n); both runs must have succeeded for a
/// win to count, and a solved run beats an unsolved one.
struct HeadToHead {
  std::string problem;
  std::int64_t n = 0;
  std::string metric;
  std::string solver;
  std::string opponent;
  std::int64_t wins = 0;
  std::int64_t realizations = 0;
};

inline std::vector<HeadToHead> head_to_head(const std::vector<BenchRow>& rows,
                                            const std::vector<std::string>& metrics) {
  std::map<std::tuple<std::string, std::int64_t>, std::map<std::string, std::map<std::int64_t, const BenchRow*>>>
      table;
  for (const auto& r : rows) table[{r.problem, r.n}][r.solver][r.seed] = &r;
  std::vector<HeadToHead> out;
  for (const auto& [key, by_solver] : table) {
    for (const auto& metric : metrics) {
      for (const auto& [a, runs_a] : by_solver) {
        for (const auto& [b, runs_b] : by_solver) {
          if (a == b) continue;
          HeadToHead h;
          std::tie(h.problem, h.n) = key;
          h.metric = metric;
          h.solver = a;
          h.opponent = b;
          for (const auto& [seed, ra] : runs_a) {
            auto it = runs_b.find(seed);
            if (it == runs_b.end()) continue;
            const BenchRow* rb = it->second;
            ++h.realizations;
            if (!ra->solved()) continue;
            if (!rb->solved()) {
              ++h.wins;
              continue;
            }
            const auto va = metric_value(*ra, metric);
            const auto vb = metric_value(*rb, metric);
            if (!va || !vb) throw ConfigError("unknown metric '" + metric + "'");
            if (*va < *vb) ++h.wins;
          }
          out.push_back(std::move(h));
        }
      }
    }
  }
  return out;
}

inline void write_head_to_head(std::ostream& os, const std::vector<HeadToHead>& rows) {
  os << "problem,n,metric,solver,opponent,wins,realizations\n";
  for (const auto& h : rows) {
    os << h.problem << ',' << h.n << ',' << h.metric << ',' << h.solver << ',' << h.opponent << ',' << h.wins << ','
       << h.realizations << '\n';
  }
}

/// Dolan-More profile. Instances are (problem, n, seed); a run that did not
/// reach stationarity gets ratio +inf and never defines the best value.
struct Profile {
  std::vector<std::string> solvers;
  std::vector<double> taus;                    // sorted distinct finite ratios, starting at 1
  std::vector<std::vector<double>> fractions;  // fractions[i][s] at taus[i]
  std::vector<double> solved_share;            // per solver, the tau -> inf limit
  std::size_t instances = 0;
};

inline Profile performance_profile(const std::vector<BenchRow>& rows, const std::string& metric) {
  const double inf = std::numeric_limits<double>::infinity();
  Profile p;
  std::set<std::string> solver_set;
  std::map<std::tuple<std::string, std::int64_t, std::int64_t>, std::map<std::string, double>> inst;
  for (const auto& r : rows) {
    const auto v = metric_value(r, metric);
    if (!v) throw ConfigError("unknown metric '" + metric + "'");
    solver_set.insert(r.solver);
    inst[{r.problem, r.n, r.seed}][r.solver] = (r.solved() && std::isfinite(*v)) ? *v : inf;
  }
  p.solvers.assign(solver_set.begin(), solver_set.end());
  p.instances = inst.size();
  std::vector<std::vector<double>> ratios(p.solvers.size());
  std::set<double> tau_set = {1.0};
  for (const auto& [key, vals] : inst) {
    double best = inf;
    for (const auto& [s, v] : vals) best = std::min(best, v);
    for (std::size_t j = 0; j < p.solvers.size(); ++j) {
      auto it = vals.find(p.solvers[j]);
      double r = inf;
      if (it != vals.end() && std::isfinite(it->second) && std::isfinite(best)) {
        r = best > 0.0 ? it->second / best : (it->second == best ? 1.0 : inf);
      }
      ratios[j].push_back(r);
      if (std::isfinite(r)) tau_set.insert(r);
    }
  }
  p.taus.assign(tau_set.begin(), tau_set.end());
  const double count = static_cast<double>(std::max<std::size_t>(p.instances, 1));
  for (double tau : p.taus) {
    std::vector<double> row;
    for (const auto& rs : ratios) {
      row.push_back(static_cast<double>(std::count_if(rs.begin(), rs.end(), [&](double r) { return r <= tau; })) /
                    count);
    }
    p.fractions.push_back(std::move(row));
  }
  for (const auto& rs : ratios) {
    p.solved_share.push_back(
        static_cast<double>(std::count_if(rs.begin(), rs.end(), [](double r) { return std::isfinite(r); })) /
        count);
  }
  return p;
}

inline void write_profile(std::ostream& os, const Profile& p) {
  os << "tau";
  for (const auto& s : p.solvers) os << ',' << s;
  os << '\n';
  for (std::size_t i = 0; i < p.taus.size(); ++i) {
    os << format_double(p.taus[i]);
    for (double f : p.fractions[i]) os << ',' << format_double(f);
    os << '\n';
  }
}

/// Minimal step-line chart on a log2 tau axis.
inline void write_profile_svg(std::ostream& os, const Profile& p, const std::string& title) {
  const double W = 640, H = 420, left = 60, right = 160, top = 40, bottom = 50;
  const double pw = W - left - right, ph = H - top - bottom;
  const double tmax = std::max(2.0, p.taus.empty() ? 2.0 : p.taus.back() * 1.05);
  const double lmax = std::log2(tmax);
  auto px = [&](double tau) { return left + pw * std::log2(tau) / lmax; };
  auto py = [&](double frac) { return top + ph * (1.0 - frac); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};
  char buf[160];
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << left << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">" << title << "</text>\n";
  std::snprintf(buf, sizeof buf, "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"black\"/>\n", left,
                top + ph, left + pw, top + ph);
  os << buf;
  std::snprintf(buf, sizeof buf, "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"black\"/>\n", left, top,
                left, top + ph);
  os << buf;
  for (int i = 0; i <= 4; ++i) {
    const double frac = 0.25 * i;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%g\" y=\"%g\" font-family=\"sans-serif\" font-size=\"11\" "
                  "text-anchor=\"end\">%.2f</text>\n",
                  left - 6, py(frac) + 4, frac);
    os << buf;
  }
  for (double tau = 1.0; tau <= tmax; tau *= 2.0) {
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%g\" y=\"%g\" font-family=\"sans-serif\" font-size=\"11\" "
                  "text-anchor=\"middle\">%g</text>\n",
                  px(tau), top + ph + 16, tau);
    os << buf;
  }
  os << "<text x=\"" << left + pw / 2 << "\" y=\"" << H - 12
     << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">tau (log2 scale)</text>\n";
  for (std::size_t s = 0; s < p.solvers.size(); ++s) {
    const char* color = colors[s % 6];
    std::string pts;
    double prev = 0.0;
    for (std::size_t i = 0; i < p.taus.size(); ++i) {
      const double f = p.fractions[i][s];
      std::snprintf(buf, sizeof buf, "%g,%g %g,%g ", px(p.taus[i]), py(prev), px(p.taus[i]), py(f));
      pts += buf;
      prev = f;
    }
    std::snprintf(buf, sizeof buf, "%g,%g", px(tmax), py(prev));
    pts += buf;
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"" << pts << "\"/>\n";
    const double ly = top + 16 + 18 * static_cast<double>(s);
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"%s\" stroke-width=\"2\"/>\n",
                  left + pw + 12, ly, left + pw + 32, ly, color);
    os << buf;
    os << "<text x=\"" << left + pw + 38 << "\" y=\"" << ly + 4
       << "\" font-family=\"sans-serif\" font-size=\"11\">" << p.solvers[s] << "</text>\n";
  }
  os << "</svg>\n";
}

/// One grid cell of a benchmark suite.
struct BenchCell {
  std::string problem;
  Eigen::Index n = 0;
  std::string solver;
  std::int64_t seed = 0;
  double eps_g = 1e-5;
  std::optional<double> lipschitz;
};

/// Runs one cell; configuration errors become a row with status "error".
inline BenchRow run_cell(const BenchCell& cell) {
  try {
    const Problem problem = make_problem(cell.problem, cell.n);
    const SolverSpec spec = parse_solver_spec(cell.solver);
    RunOptions opt;
    opt.eps_g = cell.eps_g;
    opt.lipschitz = cell.lipschitz ? cell.lipschitz : problem.hessian_lipschitz;
    // Quadratics have L = 0; any positive value is then a valid constant.
    if (opt.lipschitz && *opt.lipschitz == 0.0) opt.lipschitz = 1.0;
    opt.seed = static_cast<std::uint64_t>(cell.seed);
    const Vector x0 = initial_point(problem, opt.seed);
    const SolveReport report = run_solver(problem, x0, spec, opt);
    return make_row(cell.problem, cell.n, cell.solver, cell.seed, report);
  } catch (const std::exception&) {
    BenchRow row;
    row.problem = cell.problem;
    row.n = cell.n;
    row.solver = cell.solver;
    row.seed = cell.seed;
    row.f_final = std::numeric_limits<double>::quiet_NaN();
    row.status = "error";
    return row;
  }
}

/// Thread cap from CUBICREG_THREADS (>= 1), else the hardware count.
inline unsigned bench_threads() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("CUBICREG_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return hw;
}

/// Runs all cells on up to `threads` workers; rows come back sorted by
/// (problem, n, solver, seed) whatever the completion order.
inline std::vector<BenchRow> run_grid(const std::vector<BenchCell>& cells, unsigned threads) {
  std::vector<BenchRow> rows(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) rows[i] = run_cell(cells[i]);
  };
  const unsigned count = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(cells.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < count; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  sort_rows(rows);
  return rows;
}

}  // namespace cubicreg
