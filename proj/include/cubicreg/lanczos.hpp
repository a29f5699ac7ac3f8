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

// Randomized Lanczos estimate of the smallest eigenpair.
//
// Lanczos runs on the shifted operator U_H I - H from a uniformly random
// unit vector, with full reorthogonalization, for at most
//   min{ n, ceil( log(n / delta^2) / (2 sqrt 2) * sqrt(U_H / eps) ) }
// steps. The largest Ritz value of the shifted operator maps back to the
// smallest Ritz value of H; with probability >= 1 - delta the returned
// Rayleigh quotient is within eps of lambda_min(H).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "cubicreg/core.hpp"
#include "cubicreg/operators.hpp"

namespace cubicreg {

struct EigenEstimate {
  double alpha = 0.0;  // v'Hv
  Vector v;            // unit vector
  Vector Hv;           // H v, kept so callers need no extra product
  double target_eps = 0.0;
  int iters_used = 0;
  double norm_bound = 0.0;      // U_H used for the iteration cap
  std::vector<double> ritz_trace;  // smallest Ritz value of H after each step (optional)
};

struct LanczosConfig {
  double eps = 1e-3;
  double delta = 1e-6;
  int norm_iters = kDefaultNormIters;
  bool record_trace = false;
};

namespace tridiag {

/// Number of eigenvalues of the symmetric tridiagonal (diag, off) below x.
inline int sturm_count(const std::vector<double>& diag, const std::vector<double>& off, double x) {
  int count = 0;
  double q = 1.0;
  const double tiny = std::numeric_limits<double>::min();
  for (std::size_t i = 0; i < diag.size(); ++i) {
    const double b2 = i == 0 ? 0.0 : off[i - 1] * off[i - 1];
    q = diag[i] - x - (i == 0 ? 0.0 : b2 / q);
    if (q == 0.0) q = -tiny;
    if (q < 0.0) ++count;
  }
  return count;
}

/// Largest eigenvalue by bisection on Sturm counts.
inline double largest_eigenvalue(const std::vector<double>& diag, const std::vector<double>& off,
                                 double rel_tol = 1e-14) {
  const std::size_t k = diag.size();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < k; ++i) {
    const double r = (i > 0 ? std::abs(off[i - 1]) : 0.0) + (i + 1 < k ? std::abs(off[i]) : 0.0);
    lo = std::min(lo, diag[i] - r);
    hi = std::max(hi, diag[i] + r);
  }
  const double scale = std::max({std::abs(lo), std::abs(hi), std::numeric_limits<double>::min()});
  while (hi - lo > rel_tol * scale) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (sturm_count(diag, off, mid) == static_cast<int>(k)) {
      hi = mid;  // every eigenvalue is below mid
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Solves (T - shift I) x = b with partial pivoting (T tridiagonal).
inline std::vector<double> shifted_solve(const std::vector<double>& diag, const std::vector<double>& off,
                                         double shift, std::vector<double> b) {
  const std::size_t k = diag.size();
  if (k == 1) {
    double d = diag[0] - shift;
    if (d == 0.0) d = std::numeric_limits<double>::epsilon();
    return {b[0] / d};
  }
  std::vector<double> d(k), du(k, 0.0), dl(k, 0.0);
  for (std::size_t i = 0; i < k; ++i) d[i] = diag[i] - shift;
  for (std::size_t i = 0; i + 1 < k; ++i) {
    du[i] = off[i];
    dl[i] = off[i];
  }
  const double tiny = std::numeric_limits<double>::epsilon() *
                      std::max(1.0, *std::max_element(d.begin(), d.end(), [](double a, double c) {
                        return std::abs(a) < std::abs(c);
                      }));
  // Gaussian elimination with row interchanges (LAPACK dgttrf layout).
  std::vector<double> du2(k, 0.0);
  for (std::size_t i = 0; i + 1 < k; ++i) {
    if (std::abs(d[i]) >= std::abs(dl[i])) {
      if (d[i] == 0.0) d[i] = tiny;
      const double fact = dl[i] / d[i];
      dl[i] = fact;
      d[i + 1] -= fact * du[i];
      b[i + 1] -= fact * b[i];
    } else {
      const double fact = d[i] / dl[i];
      d[i] = dl[i];
      dl[i] = fact;
      const double temp = du[i];
      du[i] = d[i + 1];
      d[i + 1] = temp - fact * d[i + 1];
      if (i + 2 < k) {
        du2[i] = du[i + 1];
        du[i + 1] = -fact * du[i + 1];
      }
      std::swap(b[i], b[i + 1]);
      b[i + 1] -= fact * b[i];
    }
  }
  if (d[k - 1] == 0.0) d[k - 1] = tiny;
  std::vector<double> x(k);
  for (std::size_t ii = k; ii-- > 0;) {
    double acc = b[ii];
    if (ii + 1 < k) acc -= du[ii] * x[ii + 1];
    if (ii + 2 < k) acc -= du2[ii] * x[ii + 2];
    x[ii] = acc / (d[ii] == 0.0 ? tiny : d[ii]);
  }
  return x;
}

/// Unit eigenvector for a (computed) eigenvalue by inverse iteration.
inline std::vector<double> eigenvector(const std::vector<double>& diag, const std::vector<double>& off,
                                       double lambda) {
  const std::size_t k = diag.size();
  std::vector<double> x(k);
  // Deterministic, non-degenerate start.
  for (std::size_t i = 0; i < k; ++i) x[i] = 1.0 + 0.1 * std::sin(static_cast<double>(i) + 1.0);
  double scale = 0.0;
  for (std::size_t i = 0; i < k; ++i) scale = std::max(scale, std::abs(diag[i]));
  for (double b : off) scale = std::max(scale, std::abs(b));
  // A relative perturbation keeps the shifted matrix numerically nonsingular.
  const double shift = lambda + 4.0 * std::numeric_limits<double>::epsilon() * std::max(scale, 1e-300);
  for (int it = 0; it < 3; ++it) {
    x = shifted_solve(diag, off, shift, x);
    double nrm = 0.0;
    for (double xi : x) nrm += xi * xi;
    nrm = std::sqrt(nrm);
    if (!(nrm > 0.0) || !std::isfinite(nrm)) break;
    for (double& xi : x) xi /= nrm;
  }
  return x;
}

}  // namespace tridiag

/// Iteration cap min{n, ceil(log(n/delta^2) / (2 sqrt 2) * sqrt(U_H / eps))}, at least 1.
inline int lanczos_iteration_cap(Eigen::Index n, double norm_bound, double eps, double delta) {
  const double bound =
      std::log(static_cast<double>(n) / (delta * delta)) / (2.0 * std::sqrt(2.0)) * std::sqrt(norm_bound / eps);
  double cap = std::ceil(bound);
  if (!std::isfinite(cap)) cap = static_cast<double>(n);
  cap = std::clamp(cap, 1.0, static_cast<double>(n));
  return static_cast<int>(cap);
}

/// Approximate minimum eigenpair of H. Bumps n_eig once; every Hessian action
/// (power iteration for U_H, Lanczos steps, final Rayleigh quotient) is
/// counted in n_prod.
inline EigenEstimate min_eig_estimate(const SymmetricOperator& H, const LanczosConfig& config,
                                      std::uint64_t rng_seed, EvalCounters& counters) {
  const Eigen::Index n = H.dim();
  if (n <= 0) throw ConfigError("min_eig_estimate: operator dimension must be positive");
  if (!(config.eps > 0.0)) throw ConfigError("min_eig_estimate: eps must be positive");
  if (!(config.delta > 0.0 && config.delta < 1.0)) throw ConfigError("min_eig_estimate: delta must lie in (0, 1)");
  ++counters.n_eig;

  EigenEstimate out;
  out.target_eps = config.eps;
  const double U = H.norm_bound().has_value()
                       ? *H.norm_bound()
                       : estimate_norm_bound(H, config.norm_iters, Rng::derive(rng_seed, 1), counters);
  out.norm_bound = U;
  const int cap = lanczos_iteration_cap(n, U, config.eps, config.delta);

  Rng rng(Rng::derive(rng_seed, 2));
  std::vector<Vector> basis;
  basis.reserve(static_cast<std::size_t>(cap));
  basis.push_back(rng.unit_vector(n));
  std::vector<double> diag;
  std::vector<double> off;
  const double breakdown_tol = 64.0 * std::numeric_limits<double>::epsilon() * std::max(U, 1.0);

  for (int j = 0; j < cap; ++j) {
    const Vector& q = basis.back();
    Vector w = U * q - apply_hessian(H, q, counters);
    const double a = q.dot(w);
    diag.push_back(a);
    ++out.iters_used;
    if (config.record_trace) out.ritz_trace.push_back(U - tridiag::largest_eigenvalue(diag, off));
    if (j + 1 == cap) break;
    // Full reorthogonalization, two passes.
    for (int pass = 0; pass < 2; ++pass) {
      for (const Vector& b : basis) w -= b.dot(w) * b;
    }
    const double beta = w.norm();
    if (beta <= breakdown_tol) break;  // invariant subspace found
    off.push_back(beta);
    basis.push_back(w / beta);
  }

  const double theta = tridiag::largest_eigenvalue(diag, off);
  std::vector<double> y = tridiag::eigenvector(diag, off, theta);
  Vector v = Vector::Zero(n);
  for (std::size_t i = 0; i < y.size(); ++i) v += y[i] * basis[i];
  double nrm = v.norm();
  if (!(nrm > 0.0) || !std::isfinite(nrm)) {
    v = basis.front();
    nrm = 1.0;
  }
  out.v = v / nrm;
  out.Hv = apply_hessian(H, out.v, counters);
  out.alpha = out.v.dot(out.Hv);
  return out;
}

}  // namespace cubicreg
