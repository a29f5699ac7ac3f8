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

// Native test problems.
//
// Every objective is written as
//   f(x) = c + sum_g psi_g( r_g(x_{I_g}) )
// where each group g touches at most kMaxGroupVars variables, r_g is a
// separable cubic polynomial in those variables and psi_g is one of a few
// scalar outer functions. That covers the chained Rosenbrock/Woods family,
// the banded Broyden residuals and the cyclic nonconvex sums below, and
// gives exact gradients and Hessian actions from one piece of code.
//
// Formulas follow the usual published definitions of the named problems
// (CUTEst names); constants are noted per problem and are not claimed to be
// bit-compatible with any SIF file.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cubicreg/core.hpp"
#include "cubicreg/operators.hpp"
#include "cubicreg/problem.hpp"

namespace cubicreg {

inline constexpr int kMaxGroupVars = 8;

enum class OuterKind {
  square,       // w r^2
  cosine_well,  // w (cos r + r^2 / 4)
  noncvx,       // w (r^2 + 4 cos r)
  double_well,  // w (r^4 / 4 - r^2 / 2)
};

struct OuterEval {
  double value;
  double d1;
  double d2;
};

inline OuterEval outer_eval(OuterKind kind, double w, double r) {
  switch (kind) {
    case OuterKind::square: return {w * r * r, 2.0 * w * r, 2.0 * w};
    case OuterKind::cosine_well: {
      const double c = std::cos(r);
      return {w * (c + 0.25 * r * r), w * (0.5 * r - std::sin(r)), w * (0.5 - c)};
    }
    case OuterKind::noncvx: {
      const double c = std::cos(r);
      return {w * (r * r + 4.0 * c), w * (2.0 * r - 4.0 * std::sin(r)), w * (2.0 - 4.0 * c)};
    }
    case OuterKind::double_well: {
      const double r2 = r * r;
      return {w * (0.25 * r2 * r2 - 0.5 * r2), w * r * (r2 - 1.0), w * (3.0 * r2 - 1.0)};
    }
  }
  return {0.0, 0.0, 0.0};
}

/// One group: psi(c0 + sum_j c1_j x_j + c2_j x_j^2 + c3_j x_j^3).
class Group {
 public:
  Group& constant(double c) {
    c0_ += c;
    return *this;
  }

  /// Adds c1 x_v + c2 x_v^2 + c3 x_v^3; repeated variables are merged.
  Group& term(int var, double c1, double c2 = 0.0, double c3 = 0.0) {
    for (int j = 0; j < count_; ++j) {
      if (vars_[j] == var) {
        c1_[j] += c1;
        c2_[j] += c2;
        c3_[j] += c3;
        return *this;
      }
    }
    if (count_ == kMaxGroupVars) throw ConfigError("Group: too many variables in one group");
    vars_[count_] = var;
    c1_[count_] = c1;
    c2_[count_] = c2;
    c3_[count_] = c3;
    ++count_;
    return *this;
  }

  Group& outer(OuterKind kind, double weight = 1.0) {
    kind_ = kind;
    weight_ = weight;
    return *this;
  }

  int count() const { return count_; }
  int var(int j) const { return vars_[j]; }
  OuterKind kind() const { return kind_; }
  double weight() const { return weight_; }

  double residual(const Vector& x) const {
    double r = c0_;
    for (int j = 0; j < count_; ++j) {
      const double t = x[vars_[j]];
      r += t * (c1_[j] + t * (c2_[j] + t * c3_[j]));
    }
    return r;
  }
  double slope(int j, double t) const { return c1_[j] + t * (2.0 * c2_[j] + 3.0 * t * c3_[j]); }
  double curvature(int j, double t) const { return 2.0 * c2_[j] + 6.0 * t * c3_[j]; }

 private:
  int count_ = 0;
  std::array<int, kMaxGroupVars> vars_{};
  std::array<double, kMaxGroupVars> c1_{};
  std::array<double, kMaxGroupVars> c2_{};
  std::array<double, kMaxGroupVars> c3_{};
  double c0_ = 0.0;
  OuterKind kind_ = OuterKind::square;
  double weight_ = 1.0;
};

/// Sum of groups plus a constant; immutable once wrapped into a Problem.
class GroupFunction {
 public:
  GroupFunction(Eigen::Index dim, double constant) : dim_(dim), constant_(constant) {}

  Group& add() { return groups_.emplace_back(); }

  Eigen::Index dim() const { return dim_; }

  double value(const Vector& x) const {
    check(x);
    double f = constant_;
    for (const Group& g : groups_) f += outer_eval(g.kind(), g.weight(), g.residual(x)).value;
    return f;
  }

  Vector gradient(const Vector& x) const {
    check(x);
    Vector out = Vector::Zero(dim_);
    for (const Group& g : groups_) {
      const double d1 = outer_eval(g.kind(), g.weight(), g.residual(x)).d1;
      if (d1 == 0.0) continue;
      for (int j = 0; j < g.count(); ++j) out[g.var(j)] += d1 * g.slope(j, x[g.var(j)]);
    }
    return out;
  }

  /// Hessian action at x. Per-group derivative data are computed once here;
  /// each product is then O(total group size).
  SymmetricOperator hessian(const Vector& x) const {
    check(x);
    struct Local {
      int count;
      std::array<int, kMaxGroupVars> vars;
      std::array<double, kMaxGroupVars> slope;
      std::array<double, kMaxGroupVars> curv;
      double d1;
      double d2;
    };
    auto data = std::make_shared<std::vector<Local>>();
    data->reserve(groups_.size());
    for (const Group& g : groups_) {
      const OuterEval o = outer_eval(g.kind(), g.weight(), g.residual(x));
      Local loc{};
      loc.count = g.count();
      loc.d1 = o.d1;
      loc.d2 = o.d2;
      for (int j = 0; j < g.count(); ++j) {
        const double t = x[g.var(j)];
        loc.vars[j] = g.var(j);
        loc.slope[j] = g.slope(j, t);
        loc.curv[j] = g.curvature(j, t);
      }
      data->push_back(loc);
    }
    const Eigen::Index n = dim_;
    return SymmetricOperator(n, [data, n](const Vector& v, Vector& out) {
      out.setZero(n);
      for (const Local& loc : *data) {
        double dot = 0.0;
        for (int j = 0; j < loc.count; ++j) dot += loc.slope[j] * v[loc.vars[j]];
        const double a = loc.d2 * dot;
        for (int j = 0; j < loc.count; ++j) {
          out[loc.vars[j]] += a * loc.slope[j] + loc.d1 * loc.curv[j] * v[loc.vars[j]];
        }
      }
    });
  }

 private:
  void check(const Vector& x) const {
    if (x.size() != dim_) {
      throw ConfigError("problem evaluated at a point of dimension " + std::to_string(x.size()) + ", expected " +
                        std::to_string(dim_));
    }
  }

  Eigen::Index dim_;
  double constant_;
  std::vector<Group> groups_;
};

inline Problem make_group_problem(std::string name, std::shared_ptr<const GroupFunction> fn, Vector x0) {
  Problem p;
  p.name = std::move(name);
  p.dim = fn->dim();
  p.f = [fn](const Vector& x) { return fn->value(x); };
  p.grad = [fn](const Vector& x) { return fn->gradient(x); };
  p.hess = [fn](const Vector& x) { return fn->hessian(x); };
  p.x0_standard = std::move(x0);
  return p;
}

/// Hessian Lipschitz constant of GENROSE on the box |x_i| <= radius.
/// Each element 100 (b - a^2)^2 has third-derivative tensor with Frobenius
/// norm sqrt((2400 a)^2 + 3 * 400^2), and every variable sits in at most two
/// elements.
inline double genrose_hessian_lipschitz(double radius) {
  return 2.0 * std::sqrt(std::pow(2400.0 * radius, 2) + 3.0 * 400.0 * 400.0);
}

namespace detail {

/// Positive minimizer of cos t + t^2 / 4 (root of t/2 = sin t).
inline double cosine_well_root() {
  double t = 1.9;
  for (int it = 0; it < 50; ++it) t -= (0.5 * t - std::sin(t)) / (0.5 - std::cos(t));
  return t;
}

inline void require(bool ok, const std::string& name, const std::string& rule) {
  if (!ok) throw ConfigError(name + ": dimension must be " + rule);
}

// 1 + sum_{i>=2} 100 (x_i - x_{i-1}^2)^2 + (x_i - 1)^2
inline Problem genrose(Eigen::Index n) {
  require(n >= 2, "GENROSE", ">= 2");
  auto fn = std::make_shared<GroupFunction>(n, 1.0);
  for (int i = 1; i < n; ++i) {
    fn->add().term(i, 10.0).term(i - 1, 0.0, -10.0);
    fn->add().term(i, 1.0).constant(-1.0);
  }
  Vector x0(n);
  for (int i = 0; i < n; ++i) x0[i] = static_cast<double>(i + 1) / static_cast<double>(n + 1);
  Problem p = make_group_problem("GENROSE", fn, x0);
  p.f_known = 1.0;
  p.notes = "generalized Rosenbrock; minimizer all ones";
  return p;
}

// (x_1 - 1)^2 + sum_{i>=2} 100 (x_i - x_{i-1}^2)^2
inline Problem extrosnb(Eigen::Index n) {
  require(n >= 2, "EXTROSNB", ">= 2");
  auto fn = std::make_shared<GroupFunction>(n, 0.0);
  fn->add().term(0, 1.0).constant(-1.0);
  for (int i = 1; i < n; ++i) fn->add().term(i, 10.0).term(i - 1, 0.0, -10.0);
  Problem p = make_group_problem("EXTROSNB", fn, Vector::Constant(n, -1.0));
  p.f_known = 0.0;
  p.notes = "extended Rosenbrock chain; minimizer all ones";
  return p;
}

// sum_{i<n} 100 (x_{i+1} - x_i + 1 - x_i^2)^2
inline Problem fletchcr(Eigen::Index n) {
  require(n >= 2, "FLETCHCR", ">= 2");
  auto fn = std::make_shared<GroupFunction>(n, 0.0);
  for (int i = 0; i + 1 < n; ++i) fn->add().term(i + 1, 10.0).term(i, -10.0, -10.0).constant(10.0);
  Problem p = make_group_problem("FLETCHCR", fn, Vector::Zero(n));
  p.f_known = 0.0;
  p.notes = "Fletcher chained Rosenbrock; minimizer all ones";
  return p;
}

// Adds the Wood block on variables (a, b, c, d).
inline void add_wood_block(GroupFunction& fn, int a, int b, int c, int d) {
  fn.add().term(b, 10.0).term(a, 0.0, -10.0);
  fn.add().term(a, 1.0).constant(-1.0);
  fn.add().term(d, std::sqrt(90.0)).term(c, 0.0, -std::sqrt(90.0));
  fn.add().term(c, 1.0).constant(-1.0);
  fn.add().term(b, std::sqrt(10.0)).term(d, std::sqrt(10.0)).constant(-2.0 * std::sqrt(10.0));
  fn.add().term(b, std::sqrt(0.1)).term(d, -std::sqrt(0.1));
}

// Independent Wood blocks on (x_{4j+1}, ..., x_{4j+4}).
inline Problem woods(Eigen::Index n) {
  require(n >= 4 && n % 4 == 0, "WOODS", "a positive multiple of 4");
  auto fn = std::make_shared<GroupFunction>(n, 0.0);
  for (int j = 0; j < n; j += 4) add_wood_block(*fn, j, j + 1, j + 2, j + 3);
  Vector x0(n);
  for (int i = 0; i < n; ++i) x0[i] = (i % 2 == 0) ? -3.0 : -1.0;
  Problem p = make_group_problem("WOODS", fn, x0);
  p.f_known = 0.0;
  p.notes = "separable Wood blocks; minimizer all ones";
  return p;
}

// 1 + sum_{i=1}^{n/2-1} Wood block on (x_{2i-1}, x_{2i}, x_{2i+1}, x_{2i+2}).
inline Problem chainwoo(Eigen::Index n) {
  require(n >= 4 && n % 2 == 0, "CHAINWOO", "even and >= 4");
  auto fn = std::make_shared<GroupFunction>(n, 1.0);
  for (int i = 0; i + 3 < n; i += 2) add_wood_block(*fn, i, i + 1, i + 2, i + 3);
  Vector x0 = Vector::Constant(n, -2.0);
  x0[0] = -3.0;
  x0[1] = -1.0;
  x0[2] = -3.0;
  x0[3] = -1.0;
  Problem p = make_group_problem("CHAINWOO", fn, x0);
  p.f_known = 1.0;
  p.notes = "chained Wood function; minimizer all ones";
  return p;
}

// sum_i ( x_i (2 + 5 x_i^2) + 1 - sum_{j in J_i} x_j (1 + x_j) )^2,
// J_i = {max(1, i-5), ..., min(n, i+1)} \ {i}.
inline Problem brybnd(Eigen::Index n) {
  require(n >= 2, "BRYBND", ">= 2");
  auto fn = std::make_shared<GroupFunction>(n, 0.0);
  for (int i = 0; i < n; ++i) {
    Group& g = fn->add().term(i, 2.0, 0.0, 5.0).constant(1.0);
    const int lo = std::max(0, i - 5);
    const int hi = std::min(static_cast<int>(n) - 1, i + 1);
    for (int j = lo; j <= hi; ++j) {
      if (j != i) g.term(j, -1.0, -1.0);
    }
  }
  Problem p = make_group_problem("BRYBND", fn, Vector::Constant(n, -1.0));
  p.f_known = 0.0;
  p.notes = "Broyden banded residuals, lower band 5, upper band 1";
  return p;
}

// sum_i phi(x_i + x_{mod(2i-1,n)+1} + x_{mod(3i-1,n)+1}), phi(y) = y^2 + 4 cos y.
inline Problem noncvxu2(Eigen::Index n) {
  require(n >= 2, "NONCVXU2", ">= 2");
  auto fn = std::make_shared<GroupFunction>(n, 0.0);
  for (Eigen::Index i = 1; i <= n; ++i) {
    const int a = static_cast<int>(i - 1);
    const int b = static_cast<int>((2 * i - 1) % n);
    const int c = static_cast<int>((3 * i - 1) % n);
    fn->add().term(a, 1.0).term(b, 1.0).term(c, 1.0).outer(OuterKind::noncvx);
  }
  Vector x0(n);
  for (int i = 0; i < n; ++i) x0[i] = static_cast<double>(i + 1);
  Problem p = make_group_problem("NONCVXU2", fn, x0);
  p.notes = "cyclic nonconvex sum; optimum value not tabulated here";
  return p;
}

// (x_1 - 1)^2 + sum_{i>=2} (x_1^2 - x_i^2)^2
inline Problem tquartic(Eigen::Index n) {
  require(n >= 2, "TQUARTIC", ">= 2");
  auto fn = std::make_shared<GroupFunction>(n, 0.0);
  fn->add().term(0, 1.0).constant(-1.0);
  for (int i = 1; i < n; ++i) fn->add().term(0, 0.0, 1.0).term(i, 0.0, -1.0);
  Problem p = make_group_problem("TQUARTIC", fn, Vector::Constant(n, 0.1));
  p.f_known = 0.0;
  p.notes = "quartic coupling to x_1; minimizers x_1 = 1, |x_i| = 1";
  return p;
}

// 1/2 x_1^2 + (x_2^4 / 4 - x_2^2 / 2); strict saddle at the origin,
// minimizers (0, +-1) with f = -1/4.
inline Problem saddle(Eigen::Index n) {
  require(n == 2, "SADDLE", "2");
  auto fn = std::make_shared<GroupFunction>(n, 0.0);
  fn->add().term(0, 1.0).outer(OuterKind::square, 0.5);
  fn->add().term(1, 1.0).outer(OuterKind::double_well);
  Vector x0(2);
  x0 << 1.0, 1e-3;
  Problem p = make_group_problem("SADDLE", fn, x0);
  p.f_known = -0.25;
  // The Hessian is diag(1, 3 x_2^2 - 1); |6 x_2| <= 10 on |x_2| <= 5/3,
  // which contains the sublevel set {f <= f(x0)}.
  p.hessian_lipschitz = 10.0;
  p.notes = "two-dimensional strict saddle; Lipschitz constant valid on |x_2| <= 5/3";
  return p;
}

// 1/2 |x|^2
inline Problem sphere(Eigen::Index n) {
  require(n >= 1, "SPHERE", ">= 1");
  auto fn = std::make_shared<GroupFunction>(n, 0.0);
  for (int i = 0; i < n; ++i) fn->add().term(i, 1.0).outer(OuterKind::square, 0.5);
  Problem p = make_group_problem("SPHERE", fn, Vector::Constant(n, 5.0));
  p.f_known = 0.0;
  p.hessian_lipschitz = 0.0;
  return p;
}

// 1/2 sum_i d_i x_i^2 + 1/2 sum_{i<n} (x_i - x_{i+1})^2, d_i = 1 + (i mod 10) / 10.
inline Problem quadratic(Eigen::Index n, std::string name = "QUADRATIC") {
  require(n >= 1, name, ">= 1");
  auto fn = std::make_shared<GroupFunction>(n, 0.0);
  for (int i = 0; i < n; ++i) fn->add().term(i, 1.0).outer(OuterKind::square, 0.5 * (1.0 + 0.1 * (i % 10)));
  for (int i = 0; i + 1 < n; ++i) fn->add().term(i, 1.0).term(i + 1, -1.0).outer(OuterKind::square, 0.5);
  Problem p = make_group_problem(std::move(name), fn, Vector::Constant(n, 1.0));
  p.f_known = 0.0;
  p.hessian_lipschitz = 0.0;
  return p;
}

// QUADRATIC with 1e-3 added to the first gradient entry. Exists only to
// exercise the derivative checker.
inline Problem badgrad(Eigen::Index n) {
  Problem p = quadratic(n, "BADGRAD");
  auto grad = p.grad;
  p.grad = [grad](const Vector& x) {
    Vector g = grad(x);
    g[0] += 1e-3;
    return g;
  };
  p.f_known.reset();
  p.hessian_lipschitz.reset();
  p.notes = "deliberately inconsistent gradient";
  return p;
}

// sum_i (cos x_i + x_i^2 / 4) + 1/4 sum_{i<n} (x_i - x_{i+1})^2.
// Nonconvex near the origin; the third derivative is diag(sin x_i), so the
// Hessian is 1-Lipschitz everywhere.
inline Problem cosine(Eigen::Index n) {
  require(n >= 1, "COSINE", ">= 1");
  auto fn = std::make_shared<GroupFunction>(n, 0.0);
  for (int i = 0; i < n; ++i) fn->add().term(i, 1.0).outer(OuterKind::cosine_well);
  for (int i = 0; i + 1 < n; ++i) fn->add().term(i, 1.0).term(i + 1, -1.0).outer(OuterKind::square, 0.25);
  Vector x0(n);
  for (int i = 0; i < n; ++i) x0[i] = (i % 2 == 0 ? 0.01 : -0.01);
  Problem p = make_group_problem("COSINE", fn, x0);
  const double t = cosine_well_root();
  p.f_known = static_cast<double>(n) * (std::cos(t) + 0.25 * t * t);
  p.hessian_lipschitz = 1.0;
  return p;
}

}  // namespace detail

/// Names accepted by make_problem, in display order.
inline const std::vector<std::string>& supported_problems() {
  static const std::vector<std::string> names = {
      "GENROSE", "BRYBND",  "CHAINWOO", "WOODS",  "NONCVXU2",  "EXTROSNB", "FLETCHCR",
      "TQUARTIC", "SADDLE", "SPHERE",   "QUADRATIC", "COSINE", "BADGRAD"};
  return names;
}

inline Problem make_problem(const std::string& name, Eigen::Index dim) {
  if (name == "GENROSE") return detail::genrose(dim);
  if (name == "BRYBND") return detail::brybnd(dim);
  if (name == "CHAINWOO") return detail::chainwoo(dim);
  if (name == "WOODS") return detail::woods(dim);
  if (name == "NONCVXU2") return detail::noncvxu2(dim);
  if (name == "EXTROSNB") return detail::extrosnb(dim);
  if (name == "FLETCHCR") return detail::fletchcr(dim);
  if (name == "TQUARTIC") return detail::tquartic(dim);
  if (name == "SADDLE") return detail::saddle(dim);
  if (name == "SPHERE") return detail::sphere(dim);
  if (name == "QUADRATIC") return detail::quadratic(dim);
  if (name == "COSINE") return detail::cosine(dim);
  if (name == "BADGRAD") return detail::badgrad(dim);
  std::string list;
  for (const auto& s : supported_problems()) list += (list.empty() ? "" : ", ") + s;
  throw ConfigError("unknown problem '" + name + "'; supported: " + list);
}

/// Starting point for a seeded run: seed 0 is the standard start, any other
/// seed adds 0.1 * U[-1, 1]^n drawn from that seed.
inline Vector initial_point(const Problem& problem, std::uint64_t seed) {
  if (seed == 0) return problem.x0_standard;
  Rng rng(Rng::derive(seed, 0x7374617274ULL));
  return problem.x0_standard + 0.1 * rng.uniform_vector(problem.dim, -1.0, 1.0);
}

struct FdErrors {
  double grad_err = 0.0;
  double hess_err = 0.0;
};

/// Default difference step for fd_check.
inline double fd_step(const Vector& x) { return 1e-5 * (1.0 + x.norm()); }

/// Central-difference check of the analytic gradient (all coordinates) and
/// of the Hessian action on 5 random unit directions. Errors are
/// normwise relative: |a - fd| / max(1, |a|).
inline FdErrors fd_check(const Problem& problem, const Vector& x, double h, std::uint64_t seed = 0) {
  if (!(h > 0.0)) throw ConfigError("fd_check: step must be positive");
  const Eigen::Index n = problem.dim;
  FdErrors out;
  const Vector g = problem.grad(x);
  Vector fd(n);
  Vector xp = x;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double xi = x[i];
    xp[i] = xi + h;
    const double fp = problem.f(xp);
    xp[i] = xi - h;
    const double fm = problem.f(xp);
    xp[i] = xi;
    fd[i] = (fp - fm) / (2.0 * h);
  }
  out.grad_err = (g - fd).norm() / std::max(1.0, g.norm());

  const SymmetricOperator H = problem.hess(x);
  Rng rng(Rng::derive(seed, 0x66646368ULL));
  for (int k = 0; k < 5; ++k) {
    const Vector d = rng.unit_vector(n);
    const Vector Hd = H.apply_uncounted(d);
    const Vector fd_hd = (problem.grad(x + h * d) - problem.grad(x - h * d)) / (2.0 * h);
    out.hess_err = std::max(out.hess_err, (Hd - fd_hd).norm() / std::max(1.0, Hd.norm()));
  }
  return out;
}

inline FdErrors fd_check(const Problem& problem, const Vector& x) { return fd_check(problem, x, fd_step(x)); }

}  // namespace cubicreg
