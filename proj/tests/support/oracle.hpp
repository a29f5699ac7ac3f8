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

// Ground truth for the tests, written without the library's numerics:
// a cyclic Jacobi eigensolver, an exact global solver for the cubic
// subproblem (secular equation with hard-case handling), and naive
// term-by-term evaluators.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

#include "cubicreg/core.hpp"

namespace oracle {

using cubicreg::DenseMatrix;
using cubicreg::Vector;

struct Eigs {
  std::vector<double> values;  // ascending
  DenseMatrix vectors;         // column j pairs with values[j]
};

/// Cyclic Jacobi until the off-diagonal Frobenius norm is <= 1e-13 max(1, |A|_F).
inline Eigs dense_eigs(const DenseMatrix& H) {
  const Eigen::Index n = H.rows();
  DenseMatrix A = H;
  DenseMatrix V = DenseMatrix::Identity(n, n);
  double fro = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) fro += A(i, j) * A(i, j);
  const double tol = 1e-13 * std::max(1.0, std::sqrt(fro));
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        if (i != j) off += A(i, j) * A(i, j);
    if (std::sqrt(off) <= tol) break;
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = A(p, q);
        if (apq == 0.0) continue;
        const double tau = (A(q, q) - A(p, p)) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = A(k, p), akq = A(k, q);
          A(k, p) = c * akp - s * akq;
          A(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = A(p, k), aqk = A(q, k);
          A(p, k) = c * apk - s * aqk;
          A(q, k) = s * apk + c * aqk;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = V(k, p), vkq = V(k, q);
          V(k, p) = c * vkp - s * vkq;
          V(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return A(a, a) < A(b, b); });
  Eigs out;
  out.vectors.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    out.values.push_back(A(order[j], order[j]));
    out.vectors.col(j) = V.col(order[j]);
  }
  return out;
}

inline double lambda_min(const DenseMatrix& H) { return dense_eigs(H).values.front(); }

/// y = H x with explicit loops.
inline Vector naive_matvec(const DenseMatrix& H, const Vector& x) {
  Vector y(H.rows());
  for (Eigen::Index i = 0; i < H.rows(); ++i) {
    double acc = 0.0;
    for (Eigen::Index j = 0; j < H.cols(); ++j) acc += H(i, j) * x[j];
    y[i] = acc;
  }
  return y;
}

inline double naive_dot(const Vector& a, const Vector& b) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

inline double naive_norm(const Vector& a) { return std::sqrt(naive_dot(a, a)); }

/// g's + 1/2 s'Hs + (sigma/3)|s|^3, term by term.
inline double cubic_value(const Vector& g, const DenseMatrix& H, double sigma, const Vector& s) {
  const double r = naive_norm(s);
  return naive_dot(g, s) + 0.5 * naive_dot(s, naive_matvec(H, s)) + sigma / 3.0 * r * r * r;
}

/// Reformulated model g's + 1/2 s'(H + shift I)s + J(s), term by term.
inline double reform_value(const Vector& g, const DenseMatrix& H, double sigma, double alpha, double shift,
                           const Vector& s) {
  const double r = naive_norm(s);
  const double y = std::max(r, -alpha / sigma);
  return naive_dot(g, s) + 0.5 * naive_dot(s, naive_matvec(H, s)) + 0.5 * shift * r * r + sigma / 3.0 * y * y * y +
         0.5 * alpha * y * y;
}

/// Central-difference gradient of a scalar function.
inline Vector fd_gradient(const std::function<double(const Vector&)>& f, const Vector& x, double h) {
  Vector out(x.size());
  Vector xp = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    xp[i] = xi + h;
    const double fp = f(xp);
    xp[i] = xi - h;
    const double fm = f(xp);
    xp[i] = xi;
    out[i] = (fp - fm) / (2.0 * h);
  }
  return out;
}

inline DenseMatrix random_symmetric(Eigen::Index n, cubicreg::Rng& rng) {
  DenseMatrix A(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) {
      const double v = rng.normal();
      A(i, j) = v;
      A(j, i) = v;
    }
  return A;
}

/// Q diag(lambda) Q' with Q from Gram-Schmidt on a Gaussian matrix.
inline DenseMatrix with_spectrum(const std::vector<double>& lambda, cubicreg::Rng& rng, DenseMatrix* q_out = nullptr) {
  const Eigen::Index n = static_cast<Eigen::Index>(lambda.size());
  DenseMatrix Q(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    Vector v = rng.normal_vector(n);
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index k = 0; k < j; ++k) v -= naive_dot(Q.col(k), v) * Vector(Q.col(k));
    Q.col(j) = v / naive_norm(v);
  }
  DenseMatrix H = DenseMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      double acc = 0.0;
      for (Eigen::Index k = 0; k < n; ++k) acc += Q(i, k) * lambda[k] * Q(j, k);
      H(i, j) = acc;
    }
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) H(j, i) = H(i, j);
  if (q_out) *q_out = Q;
  return H;
}

struct CrsExactSolution {
  Vector s_star;
  double value = 0.0;
  double r_star = 0.0;
  bool hard_case = false;
};

/// Global minimizer of g's + 1/2 s'Hs + (sigma/3)|s|^3 (n small).
/// s(r) = -(H + sigma r I)^{-1} g on r > max(0, -lambda_1/sigma); the
/// optimal radius solves |s(r)| = r. In the hard case the bottom
/// eigenvector fills the gap to the radius -lambda_1/sigma.
inline CrsExactSolution crs_global_solve(const Vector& g, const DenseMatrix& H, double sigma) {
  const Eigen::Index n = g.size();
  const Eigs eig = dense_eigs(H);
  const std::vector<double>& lam = eig.values;
  const DenseMatrix& Q = eig.vectors;
  Vector gh(n);
  for (Eigen::Index i = 0; i < n; ++i) gh[i] = naive_dot(Q.col(i), g);
  const double gnorm = naive_norm(g);
  const double l1 = lam.front();
  const double lo = std::max(0.0, -l1 / sigma);
  const double bottom_tol = 1e-10 * std::max(1.0, std::abs(l1));

  auto assemble = [&](const Vector& coef) {
    Vector s = Vector::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) s += coef[i] * Vector(Q.col(i));
    return s;
  };
  auto finish = [&](Vector s, bool hard) {
    CrsExactSolution out;
    out.r_star = naive_norm(s);
    out.value = cubic_value(g, H, sigma, s);
    out.s_star = std::move(s);
    out.hard_case = hard;
    return out;
  };

  bool bottom_free = true;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (lam[i] <= l1 + bottom_tol && std::abs(gh[i]) > 1e-12 * gnorm) bottom_free = false;
  }
  if (gnorm == 0.0 && l1 >= 0.0) return finish(Vector::Zero(n), false);
  if (bottom_free && l1 < 0.0) {
    Vector coef = Vector::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (lam[i] > l1 + bottom_tol) coef[i] = -gh[i] / (lam[i] - l1);
    }
    const double sbar = naive_norm(coef);
    if (sbar <= lo) {
      coef[0] = std::sqrt(std::max(0.0, lo * lo - sbar * sbar));
      return finish(assemble(coef), true);
    }
  }

  auto radius_gap = [&](double r) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double d = lam[i] + sigma * r;
      acc += (gh[i] / d) * (gh[i] / d);
    }
    return std::sqrt(acc) - r;
  };
  double a = lo + 1e-14;
  double b = std::sqrt(gnorm / sigma) + gnorm / std::max(1e-300, l1 + sigma * a) + lo + 1.0;
  if (!std::isfinite(b)) b = lo + 1.0;
  while (radius_gap(b) > 0.0) b *= 2.0;
  for (int it = 0; it < 400 && b - a > 1e-13 * std::max(1.0, b); ++it) {
    const double mid = 0.5 * (a + b);
    if (radius_gap(mid) > 0.0) {
      a = mid;
    } else {
      b = mid;
    }
  }
  const double r = 0.5 * (a + b);
  Vector coef(n);
  for (Eigen::Index i = 0; i < n; ++i) coef[i] = -gh[i] / (lam[i] + sigma * r);
  return finish(assemble(coef), false);
}

/// Long-run gradient descent with step 1/Lg, used as a high-accuracy
/// minimizer for smooth strongly convex functions.
inline Vector gradient_descent(const std::function<Vector(const Vector&)>& grad, Vector z, double step, double tol,
                               int max_iters) {
  for (int it = 0; it < max_iters; ++it) {
    const Vector gz = grad(z);
    if (naive_norm(gz) <= tol) break;
    z -= step * gz;
  }
  return z;
}

}  // namespace oracle
