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
#include <string>

#include "cubicreg/problems.hpp"
#include "support/oracle.hpp"

namespace cubicreg {
namespace {

Eigen::Index test_dim(const std::string& name) {
  if (name == "SADDLE") return 2;
  if (name == "WOODS" || name == "CHAINWOO") return 16;
  return 15;
}

double spectral_norm(const DenseMatrix& A) {
  const auto e = oracle::dense_eigs(A);
  return std::max(std::abs(e.values.front()), std::abs(e.values.back()));
}

TEST(Problems, EveryProblemPassesDerivativeChecks) {
  for (const auto& name : supported_problems()) {
    if (name == "BADGRAD") continue;
    const Problem p = make_problem(name, test_dim(name));
    Rng rng(Rng::derive(17, std::hash<std::string>{}(name)));
    for (int k = 0; k < 20; ++k) {
      const Vector x = p.x0_standard + rng.uniform_vector(p.dim, -1.0, 1.0);
      const FdErrors e = fd_check(p, x, fd_step(x), static_cast<std::uint64_t>(k));
      EXPECT_LE(e.grad_err, 1e-5) << name << " point " << k;
      EXPECT_LE(e.hess_err, 1e-5) << name << " point " << k;
    }
  }
}

TEST(Problems, AssembledHessianIsSymmetricAndMatchesDifferences) {
  for (const auto& name : supported_problems()) {
    const Problem p = make_problem(name, test_dim(name));
    const Vector x = initial_point(p, 5);
    const DenseMatrix H = assemble_dense(p.hess(x));
    EXPECT_LE((H - H.transpose()).norm(), 1e-12 * std::max(1.0, H.norm())) << name;
    const double h = fd_step(x);
    DenseMatrix J(p.dim, p.dim);
    for (Eigen::Index j = 0; j < p.dim; ++j) {
      Vector e = Vector::Zero(p.dim);
      e[j] = h;
      J.col(j) = (p.grad(x + e) - p.grad(x - e)) / (2 * h);
    }
    EXPECT_LE((H - J).norm(), 1e-5 * std::max(1.0, H.norm())) << name;
  }
}

TEST(Problems, QuadraticIsExactUnderDifferences) {
  const Problem p = make_problem("QUADRATIC", 30);
  Rng rng(2);
  for (int k = 0; k < 5; ++k) {
    const Vector x = rng.uniform_vector(30, -3, 3);
    const FdErrors e = fd_check(p, x);
    EXPECT_LE(e.grad_err, 1e-9);
    EXPECT_LE(e.hess_err, 1e-9);
  }
}

TEST(Problems, CorruptedGradientIsDetected) {
  const Problem p = make_problem("BADGRAD", 10);
  const FdErrors e = fd_check(p, p.x0_standard);
  EXPECT_GE(e.grad_err, 1e-4);
}

TEST(Problems, KnownMinimizers) {
  {
    const Problem p = make_problem("GENROSE", 100);
    EXPECT_LE(p.grad(Vector::Ones(100)).norm(), 1e-10);
    EXPECT_DOUBLE_EQ(p.f(Vector::Ones(100)), 1.0);
  }
  {
    const Problem p = make_problem("WOODS", 4);
    EXPECT_DOUBLE_EQ(p.f(Vector::Ones(4)), 0.0);
    EXPECT_EQ(p.grad(Vector::Ones(4)).norm(), 0.0);
  }
  for (const char* name : {"CHAINWOO", "EXTROSNB", "FLETCHCR", "WOODS", "GENROSE"}) {
    const Problem p = make_problem(name, 20);
    EXPECT_NEAR(p.f(Vector::Ones(20)), *p.f_known, 1e-14) << name;
    EXPECT_LE(p.grad(Vector::Ones(20)).norm(), 1e-12) << name;
  }
  {
    const Problem p = make_problem("TQUARTIC", 10);
    EXPECT_EQ(p.f(Vector::Ones(10)), 0.0);
  }
  {
    const Problem p = make_problem("SADDLE", 2);
    Vector x(2);
    x << 0, -1;
    EXPECT_DOUBLE_EQ(p.f(x), -0.25);
    EXPECT_EQ(p.grad(x).norm(), 0.0);
    EXPECT_EQ(p.grad(Vector::Zero(2)).norm(), 0.0);
    EXPECT_LT(oracle::lambda_min(assemble_dense(p.hess(Vector::Zero(2)))), -0.99);
  }
  {
    const Problem p = make_problem("COSINE", 8);
    double root = 1.9;
    for (int i = 0; i < 60; ++i) root -= (0.5 * root - std::sin(root)) / (0.5 - std::cos(root));
    const Vector x = Vector::Constant(8, root);
    EXPECT_LE(p.grad(x).norm(), 1e-12);
    EXPECT_NEAR(p.f(x), *p.f_known, 1e-12);
  }
}

TEST(Problems, BrybndResidualsByHand) {
  const Problem p = make_problem("BRYBND", 8);
  Rng rng(3);
  const Vector x = rng.uniform_vector(8, -1, 1);
  double f = 0.0;
  for (int i = 0; i < 8; ++i) {
    double r = x[i] * (2 + 5 * x[i] * x[i]) + 1;
    for (int j = std::max(0, i - 5); j <= std::min(7, i + 1); ++j)
      if (j != i) r -= x[j] * (1 + x[j]);
    f += r * r;
  }
  EXPECT_NEAR(p.f(x), f, 1e-12 * f);
}

TEST(Problems, Noncvxu2ByHand) {
  const int n = 7;
  const Problem p = make_problem("NONCVXU2", n);
  Rng rng(4);
  const Vector x = rng.uniform_vector(n, -2, 2);
  double f = 0.0;
  for (int i = 1; i <= n; ++i) {
    const double y = x[i - 1] + x[(2 * i - 1) % n] + x[(3 * i - 1) % n];
    f += y * y + 4 * std::cos(y);
  }
  EXPECT_NEAR(p.f(x), f, 1e-12 * std::abs(f));
}

TEST(Problems, LipschitzConstantsHoldOnSamples) {
  Rng rng(5);
  const Problem saddle = make_problem("SADDLE", 2);
  const Problem cosine = make_problem("COSINE", 6);
  const Problem genrose = make_problem("GENROSE", 6);
  const double Lg = genrose_hessian_lipschitz(1.5);
  for (int k = 0; k < 300; ++k) {
    Vector a(2), b(2);
    a << rng.uniform(-3, 3), rng.uniform(-5.0 / 3, 5.0 / 3);
    b << rng.uniform(-3, 3), rng.uniform(-5.0 / 3, 5.0 / 3);
    EXPECT_LE(spectral_norm(assemble_dense(saddle.hess(a)) - assemble_dense(saddle.hess(b))),
              *saddle.hessian_lipschitz * (a - b).norm() + 1e-12);
    const Vector c = rng.uniform_vector(6, -10, 10), d = rng.uniform_vector(6, -10, 10);
    EXPECT_LE(spectral_norm(assemble_dense(cosine.hess(c)) - assemble_dense(cosine.hess(d))),
              *cosine.hessian_lipschitz * (c - d).norm() + 1e-12);
    const Vector u = rng.uniform_vector(6, -1.5, 1.5), w = rng.uniform_vector(6, -1.5, 1.5);
    EXPECT_LE(spectral_norm(assemble_dense(genrose.hess(u)) - assemble_dense(genrose.hess(w))),
              Lg * (u - w).norm() + 1e-9);
  }
}

TEST(Problems, FactoryErrors) {
  try {
    make_problem("NOPE", 10);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("GENROSE"), std::string::npos);
  }
  EXPECT_THROW(make_problem("WOODS", 6), ConfigError);
  EXPECT_THROW(make_problem("CHAINWOO", 5), ConfigError);
  EXPECT_THROW(make_problem("SADDLE", 3), ConfigError);
  EXPECT_THROW(make_problem("GENROSE", 1), ConfigError);
  const Problem p = make_problem("GENROSE", 5);
  EXPECT_THROW(p.f(Vector::Zero(4)), ConfigError);
}

TEST(Problems, InitialPoints) {
  const Problem p = make_problem("GENROSE", 50);
  EXPECT_EQ(initial_point(p, 0), p.x0_standard);
  const Vector a = initial_point(p, 3), b = initial_point(p, 3), c = initial_point(p, 4);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
  EXPECT_LE((a - p.x0_standard).lpNorm<Eigen::Infinity>(), 0.1);
  EXPECT_GT((a - p.x0_standard).norm(), 0.0);
}

TEST(Problems, EvaluationIsDeterministic) {
  const Problem p = make_problem("CHAINWOO", 40);
  const Vector x = initial_point(p, 9);
  EXPECT_EQ(p.f(x), p.f(x));
  EXPECT_EQ(p.grad(x), p.grad(x));
}

}  // namespace
}  // namespace cubicreg
