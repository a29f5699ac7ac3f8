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


#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "cubicreg/bench.hpp"

namespace cubicreg {
namespace {

BenchRow row(const std::string& problem, const std::string& solver, std::int64_t seed, std::int64_t n_i,
             const std::string& status = "stationary") {
  BenchRow r;
  r.problem = problem;
  r.n = 10;
  r.solver = solver;
  r.seed = seed;
  r.f_final = 0.5;
  r.n_i = n_i;
  r.n_prod = 10 * n_i;
  r.n_f = n_i + 1;
  r.n_g = n_i + 1;
  r.n_eig = 1;
  r.time = 0.25;
  r.time_eig = 0.125;
  r.time_loop = 0.125;
  r.status = status;
  return r;
}

TEST(SolverSpec, ParsesNames) {
  EXPECT_EQ(parse_solver_spec("cr-nag").kind, SolverKind::cr);
  EXPECT_EQ(parse_solver_spec("cr-nag").subsolver, Subsolver::nag);
  EXPECT_EQ(parse_solver_spec("arc-bb").kind, SolverKind::arc);
  const SolverSpec s = parse_solver_spec("arc-practical-bb");
  EXPECT_EQ(s.kind, SolverKind::arc_practical);
  EXPECT_EQ(s.subsolver, Subsolver::bb);
  EXPECT_EQ(s.name(), "arc-practical-bb");
  EXPECT_FALSE(s.needs_lipschitz());
  EXPECT_TRUE(parse_solver_spec("cr-bb").needs_lipschitz());
  EXPECT_THROW(parse_solver_spec("newton-nag"), ConfigError);
  EXPECT_THROW(parse_solver_spec("cr-cg"), ConfigError);
}

TEST(Csv, RoundTripIsExact) {
  std::vector<BenchRow> rows = {row("GENROSE", "arc-practical-bb", 1, 12), row("WOODS", "cr-nag", 2, 7, "max_outer")};
  rows[0].f_final = 0.1 + 0.2;
  rows[0].time = 1.0 / 3.0;
  rows[0].time_eig = 1e-300;
  rows[0].time_loop = rows[0].time - rows[0].time_eig;
  rows[1].f_final = std::numeric_limits<double>::quiet_NaN();
  rows[1].time = std::numeric_limits<double>::infinity();
  std::stringstream ss;
  write_rows(ss, rows);
  const std::vector<BenchRow> back = read_rows(ss);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0], rows[0]);
  EXPECT_EQ(back[1], rows[1]);
}

TEST(Csv, HeaderOrderIsFixed) {
  EXPECT_EQ(csv_header(), "problem,n,solver,seed,f_final,n_i,n_prod,n_f,n_g,n_eig,time,time_eig,time_loop,status");
}

TEST(Csv, ColumnsMayBeReordered) {
  std::stringstream ss;
  ss << "status,problem,n,solver,seed,f_final,n_i,n_prod,n_f,n_g,n_eig,time,time_eig,time_loop\n"
     << "stationary,P,3,cr-nag,4,1.5,2,3,4,5,6,0.5,0.25,0.25\n";
  const auto rows = read_rows(ss);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].problem, "P");
  EXPECT_EQ(rows[0].n_eig, 6);
  EXPECT_EQ(rows[0].status, "stationary");
}

TEST(Csv, MissingColumnAndBadNumbersAreReported) {
  std::stringstream a("problem,n\nP,3\n");
  EXPECT_THROW(read_rows(a), ConfigError);
  std::stringstream b;
  b << csv_header() << "\nP,x,cr-nag,4,1.5,2,3,4,5,6,0.5,0.25,0.25,stationary\n";
  EXPECT_THROW(read_rows(b), ConfigError);
  std::stringstream c;
  c << csv_header() << "\nP,3,cr-nag\n";
  EXPECT_THROW(read_rows(c), ConfigError);
}

TEST(MakeRow, LoopTimeIsTotalMinusEigenTime) {
  SolveReport rep;
  rep.counters.time_total = 2.5;
  rep.counters.time_eig = 0.75;
  rep.counters.n_prod = 9;
  rep.outer_iters = 4;
  rep.status = SolveStatus::stationary;
  const BenchRow r = make_row("P", 5, "cr-nag", 1, rep);
  EXPECT_NEAR(r.time_loop, r.time - r.time_eig, 1e-9);
  EXPECT_EQ(r.n_i, 4);
  EXPECT_EQ(r.n_prod, 9);
  EXPECT_EQ(r.status, "stationary");
}

TEST(Means, ExactArithmeticMeans) {
  const std::vector<BenchRow> rows = {row("A", "s", 1, 3), row("A", "s", 2, 4), row("A", "s", 3, 8),
                                      row("A", "t", 1, 5, "max_outer")};
  const auto means = compute_means(rows);
  ASSERT_EQ(means.size(), 2u);
  EXPECT_EQ(means[0].solver, "s");
  EXPECT_EQ(means[0].reps, 3);
  EXPECT_EQ(means[0].solved, 3);
  EXPECT_EQ(means[0].n_i * 3, 15.0);
  EXPECT_EQ(means[0].n_i, 5.0);
  EXPECT_EQ(means[0].n_prod, 50.0);
  EXPECT_EQ(means[1].solved, 0);
  std::stringstream ss;
  write_means(ss, means);
  const CsvTable t = read_csv(ss);
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[0][*t.column("n_i")], "5");
}

TEST(HeadToHead, CountsWinsPerRealization) {
  // Ten realizations of two solvers on one problem.
  std::vector<BenchRow> rows;
  const int a[] = {5, 6, 7, 8, 9, 10, 11, 12, 13, 14};
  const int b[] = {6, 6, 6, 9, 9, 9, 20, 1, 1, 30};
  for (int s = 0; s < 10; ++s) {
    rows.push_back(row("P", "A", s + 1, a[s], s == 8 ? "max_outer" : "stationary"));
    rows.push_back(row("P", "B", s + 1, b[s], s == 9 ? "max_outer" : "stationary"));
  }
  const auto h = head_to_head(rows, {"n_i"});
  ASSERT_EQ(h.size(), 2u);
  EXPECT_EQ(h[0].solver, "A");
  EXPECT_EQ(h[0].opponent, "B");
  EXPECT_EQ(h[0].realizations, 10);
  // seeds 1, 4, 7 by value; seed 10 because B failed; seed 9 lost (A failed).
  EXPECT_EQ(h[0].wins, 4);
  EXPECT_EQ(h[1].solver, "B");
  // seeds 3, 6, 8 by value; seed 9 because A failed; ties (2, 5) count for nobody.
  EXPECT_EQ(h[1].wins, 4);
}

TEST(HeadToHead, OnlyCommonSeedsCount) {
  const std::vector<BenchRow> rows = {row("P", "A", 1, 1), row("P", "A", 2, 1), row("P", "B", 2, 5)};
  const auto h = head_to_head(rows, {"n_i", "n_prod"});
  ASSERT_EQ(h.size(), 4u);
  for (const auto& x : h) EXPECT_EQ(x.realizations, 1);
}

TEST(Profile, ThreeProblemTwoSolverFixture) {
  const std::vector<BenchRow> rows = {row("P1", "A", 1, 1), row("P1", "B", 1, 2), row("P2", "A", 1, 2),
                                      row("P2", "B", 1, 2), row("P3", "A", 1, 4), row("P3", "B", 1, 2)};
  const Profile p = performance_profile(rows, "n_i");
  ASSERT_EQ(p.solvers, (std::vector<std::string>{"A", "B"}));
  ASSERT_EQ(p.taus, (std::vector<double>{1.0, 2.0}));
  // A is best on P1 and tied on P2; B is best on P3 and tied on P2.
  EXPECT_EQ(p.fractions[0][0], 2.0 / 3.0);
  EXPECT_EQ(p.fractions[0][1], 2.0 / 3.0);
  EXPECT_EQ(p.fractions[1][0], 1.0);
  EXPECT_EQ(p.fractions[1][1], 1.0);
  EXPECT_EQ(p.solved_share, (std::vector<double>{1.0, 1.0}));
}

TEST(Profile, SingleSolverIsAlwaysBest) {
  const std::vector<BenchRow> rows = {row("P1", "A", 1, 3), row("P2", "A", 1, 9)};
  const Profile p = performance_profile(rows, "n_prod");
  ASSERT_EQ(p.taus, (std::vector<double>{1.0}));
  EXPECT_EQ(p.fractions[0][0], 1.0);
}

TEST(Profile, FailuresOnlyReachTheCap) {
  const std::vector<BenchRow> rows = {row("P1", "A", 1, 1, "max_outer"), row("P1", "B", 1, 8),
                                      row("P2", "A", 1, 2), row("P2", "B", 1, 4)};
  const Profile p = performance_profile(rows, "n_i");
  ASSERT_EQ(p.taus, (std::vector<double>{1.0, 2.0}));
  // P1: A failed, so B is best despite the larger count.
  EXPECT_EQ(p.fractions[0][0], 0.5);
  EXPECT_EQ(p.fractions[0][1], 0.5);
  EXPECT_EQ(p.fractions[1][0], 0.5);
  EXPECT_EQ(p.fractions[1][1], 1.0);
  EXPECT_EQ(p.solved_share[0], 0.5);
  for (std::size_t i = 1; i < p.taus.size(); ++i)
    for (std::size_t s = 0; s < 2; ++s) EXPECT_GE(p.fractions[i][s], p.fractions[i - 1][s]);
}

TEST(Profile, UnknownMetricIsRejected) {
  EXPECT_THROW(performance_profile({row("P", "A", 1, 1)}, "n_flops"), ConfigError);
}

TEST(Profile, CsvAndSvgOutput) {
  const std::vector<BenchRow> rows = {row("P1", "A", 1, 1), row("P1", "B", 1, 2)};
  const Profile p = performance_profile(rows, "n_i");
  std::stringstream csv;
  write_profile(csv, p);
  EXPECT_EQ(csv.str(), "tau,A,B\n1,1,0\n2,1,1\n");
  std::stringstream svg;
  write_profile_svg(svg, p, "n_i");
  EXPECT_NE(svg.str().find("<svg"), std::string::npos);
  EXPECT_NE(svg.str().find("</svg>"), std::string::npos);
  EXPECT_NE(svg.str().find("polyline"), std::string::npos);
}

TEST(Grid, CardinalityAndOrder) {
  std::vector<BenchCell> cells;
  for (const std::string prob : {"SPHERE", "QUADRATIC"})
    for (const std::string solver : {"arc-practical-bb", "cr-nag"})
      for (int seed = 3; seed >= 1; --seed) {
        BenchCell c;
        c.problem = prob;
        c.n = 6;
        c.solver = solver;
        c.seed = seed;
        c.lipschitz = 1.0;
        cells.push_back(c);
      }
  const auto rows = run_grid(cells, 3);
  ASSERT_EQ(rows.size(), 12u);
  EXPECT_EQ(rows.front().problem, "QUADRATIC");
  EXPECT_EQ(rows.front().seed, 1);
  for (const auto& r : rows) {
    EXPECT_EQ(r.status, "stationary");
    EXPECT_NEAR(r.time_loop, r.time - r.time_eig, 1e-9);
  }
  const auto again = run_grid(cells, 1);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].n_prod, again[i].n_prod);
    EXPECT_EQ(rows[i].f_final, again[i].f_final);
  }
}

TEST(Grid, BadCellBecomesErrorRow) {
  BenchCell c;
  c.problem = "NOPE";
  c.n = 3;
  c.solver = "cr-nag";
  c.seed = 1;
  const BenchRow r = run_cell(c);
  EXPECT_EQ(r.status, "error");
  c.problem = "GENROSE";
  c.n = 10;
  EXPECT_EQ(run_cell(c).status, "error");  // cr needs a Lipschitz constant
}

}  // namespace
}  // namespace cubicreg
