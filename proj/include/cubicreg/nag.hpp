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

// Accelerated gradient for m-strongly convex objectives with backtracking
// and function-value restart.
//
// Per iteration l >= 1 (t_l starts from the accepted t_{l-1}):
//   gamma_l = theta_{l-1}^2 / t_{l-1}
//   theta_l : positive root of theta^2 / t_l = (1 - theta) gamma_l + m theta
//   y       = z_l + theta_l gamma_l / (gamma_l + m theta_l) (v_l - z_l)
// (y = z_0 at l = 0), then backtrack t_l <- beta t_l until
//   h(y - t_l grad h(y)) <= h(y) - t_l/2 |grad h(y)|^2,
// set z_{l+1} = y - t_l grad h(y) and v_{l+1} = z_l + (z_{l+1} - z_l)/theta_l.
// theta_l is computed with the step size carried in from the previous
// iteration and is not recomputed after backtracking.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "cubicreg/core.hpp"
#include "cubicreg/objective.hpp"

namespace cubicreg {

struct NagConfig {
  double t0 = 1.0;
  double theta0 = 1.0;
  double beta = 0.5;
  double strong_convexity = 1.0;  // m
  double grad_tol = 1e-8;
  int max_iters = 10000;
  bool restart_enabled = true;
  double zeta = 0.0;            // optional looser stop max(zeta |z|^2, grad_tol)
  bool record_values = false;   // keep h(z_l) for diagnostics

  void validate() const {
    if (!(t0 > 0.0)) throw ConfigError("NagConfig: t0 must be positive");
    if (!(theta0 > 0.0 && theta0 <= 1.0)) throw ConfigError("NagConfig: theta0 must lie in (0, 1]");
    if (!(beta > 0.0 && beta < 1.0)) throw ConfigError("NagConfig: beta must lie in (0, 1)");
    if (!(strong_convexity > 0.0)) throw ConfigError("NagConfig: strong convexity must be positive");
    if (!(grad_tol > 0.0)) throw ConfigError("NagConfig: grad_tol must be positive");
    if (max_iters < 1) throw ConfigError("NagConfig: max_iters must be positive");
  }
};

/// Safety-net iteration cap used by the outer solvers: 50 ceil(m^-1/2) + 1000.
inline int default_nag_max_iters(double strong_convexity) {
  return 50 * static_cast<int>(std::ceil(1.0 / std::sqrt(strong_convexity))) + 1000;
}

template <class Sample>
struct NagResult {
  Vector z;
  Sample last;  // sample at z (value, gradient and any cached data)
  int iters = 0;
  double grad_norm = 0.0;
  double value = 0.0;
  SubsolverStatus status = SubsolverStatus::max_iters;
  int restarts = 0;
  int backtracks = 0;
  double min_step = 0.0;      // smallest accepted step size
  std::vector<double> values;  // h(z_0), h(z_1), ... when recorded
};

/// Function-value restart test.
inline bool restart_check(double h_prev, double h_curr) { return h_curr > h_prev; }

/// Positive root of theta^2 / t + theta (gamma - m) - gamma = 0, clamped to (0, 1].
inline double nag_theta(double t, double gamma, double m) {
  const double b = gamma - m;
  const double disc = std::sqrt(b * b + 4.0 * gamma / t);
  double theta = (b > 0.0) ? 2.0 * gamma / (b + disc) : 0.5 * t * (-b + disc);
  if (!(theta > 0.0)) theta = std::numeric_limits<double>::min();
  return std::min(theta, 1.0);
}

template <RayObjective Obj>
NagResult<typename Obj::Sample> nag_minimize(const Obj& objective, const NagConfig& config, const Vector& z0,
                                             EvalCounters& counters) {
  using Sample = typename Obj::Sample;
  config.validate();
  NagResult<Sample> result;
  result.min_step = config.t0;

  Sample z = objective.sample(z0, counters);
  auto finish = [&](SubsolverStatus status) {
    result.grad_norm = z.grad.norm();
    result.value = z.value;
    result.z = z.point;
    result.status = status;
    result.last = std::move(z);
    return std::move(result);
  };
  auto finite = [](const Sample& s) { return std::isfinite(s.value) && all_finite(s.grad); };

  if (config.record_values) result.values.push_back(z.value);
  if (!finite(z)) return finish(SubsolverStatus::numerical_failure);
  if (gradient_small(z.point, z.grad.norm(), config.grad_tol, config.zeta)) {
    return finish(SubsolverStatus::converged);
  }

  constexpr int kMaxBacktracks = 200;
  const double m = config.strong_convexity;
  double t = config.t0;
  double theta = config.theta0;
  Vector v = z.point;
  // y coincides with z on the first iteration and right after a restart
  // (v = z then), so the cached sample at z is reused.
  bool momentum_free = true;

  for (int l = 0; l < config.max_iters; ++l) {
    double coef = 0.0;
    if (l > 0) {
      const double gamma = theta * theta / t;
      theta = nag_theta(t, gamma, m);
      coef = theta * gamma / (gamma + m * theta);
    }
    Sample y = momentum_free ? z : objective.sample(z.point + coef * (v - z.point), counters);
    if (!finite(y)) {
      z = std::move(y);
      return finish(SubsolverStatus::numerical_failure);
    }

    const double gnorm2 = y.grad.squaredNorm();
    auto ray = objective.ray(y, -y.grad, counters);
    int backtracks = 0;
    while (gnorm2 > 0.0 && !(ray.change(t) <= -0.5 * t * gnorm2)) {
      t *= config.beta;
      if (++backtracks > kMaxBacktracks) return finish(SubsolverStatus::numerical_failure);
    }
    result.backtracks += backtracks;
    result.min_step = std::min(result.min_step, t);

    Sample z_next = ray.sample(t);
    momentum_free = false;
    if (config.restart_enabled && restart_check(z.value, z_next.value)) {
      theta = config.theta0;
      v = z_next.point;
      momentum_free = true;
      ++result.restarts;
    } else {
      v = z.point + (z_next.point - z.point) / theta;
    }
    z = std::move(z_next);
    ++result.iters;

    if (config.record_values) result.values.push_back(z.value);
    if (!finite(z)) return finish(SubsolverStatus::numerical_failure);
    if (gradient_small(z.point, z.grad.norm(), config.grad_tol, config.zeta)) {
      return finish(SubsolverStatus::converged);
    }
  }
  return finish(SubsolverStatus::max_iters);
}

}  // namespace cubicreg
