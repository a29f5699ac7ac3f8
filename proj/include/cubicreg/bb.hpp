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

// Barzilai-Borwein gradient method with a monotone Armijo line search.

#include <algorithm>
#include <cmath>

#include "cubicreg/core.hpp"
#include "cubicreg/nag.hpp"
#include "cubicreg/objective.hpp"

namespace cubicreg {

enum class BbStep {
  short_step,  // s'y / y'y
  long_step,   // s's / s'y
};

struct BbConfig {
  double step_init = 1.0;
  double grad_tol = 1e-8;
  int max_iters = 10000;
  double ls_shrink = 0.5;
  int ls_max = 60;
  BbStep step = BbStep::short_step;
  double armijo = 1e-4;
  double step_min = 1e-12;
  double step_max = 1e12;
  double zeta = 0.0;
  bool record_values = false;

  void validate() const {
    if (!(step_init > 0.0)) throw ConfigError("BbConfig: step_init must be positive");
    if (!(grad_tol > 0.0)) throw ConfigError("BbConfig: grad_tol must be positive");
    if (max_iters < 1) throw ConfigError("BbConfig: max_iters must be positive");
    if (!(ls_shrink > 0.0 && ls_shrink < 1.0)) throw ConfigError("BbConfig: ls_shrink must lie in (0, 1)");
    if (ls_max < 1) throw ConfigError("BbConfig: ls_max must be positive");
  }
};

/// Next BB step. When s'y <= 0 both classical quotients are nonpositive, so
/// the safeguard |s| / |y| (their geometric mean in magnitude) is used.
inline double bb_step(const Vector& s, const Vector& y, const BbConfig& config, double previous) {
  const double sy = s.dot(y);
  const double yy = y.squaredNorm();
  double t;
  if (sy > 0.0) {
    t = config.step == BbStep::short_step ? sy / yy : s.squaredNorm() / sy;
  } else if (yy > 0.0) {
    t = std::sqrt(s.squaredNorm() / yy);
  } else {
    t = previous;
  }
  if (!std::isfinite(t)) t = previous;
  return std::clamp(t, config.step_min, config.step_max);
}

template <RayObjective Obj>
NagResult<typename Obj::Sample> bb_minimize(const Obj& objective, const BbConfig& config, const Vector& z0,
                                            EvalCounters& counters) {
  using Sample = typename Obj::Sample;
  config.validate();
  NagResult<Sample> result;
  result.min_step = config.step_init;

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

  double t = std::clamp(config.step_init, config.step_min, config.step_max);
  for (int l = 0; l < config.max_iters; ++l) {
    const double gnorm2 = z.grad.squaredNorm();
    auto ray = objective.ray(z, -z.grad, counters);
    double trial = t;
    bool accepted = false;
    for (int j = 0; j < config.ls_max; ++j) {
      const double change = ray.change(trial);
      if (change < 0.0 && change <= -config.armijo * trial * gnorm2) {
        accepted = true;
        break;
      }
      trial *= config.ls_shrink;
      ++result.backtracks;
    }
    if (!accepted) return finish(SubsolverStatus::stagnation);
    result.min_step = std::min(result.min_step, trial);

    Sample next = ray.sample(trial);
    if (!finite(next)) {
      z = std::move(next);
      return finish(SubsolverStatus::numerical_failure);
    }
    t = bb_step(next.point - z.point, next.grad - z.grad, config, trial);
    z = std::move(next);
    ++result.iters;
    if (config.record_values) result.values.push_back(z.value);
    if (gradient_small(z.point, z.grad.norm(), config.grad_tol, config.zeta)) {
      return finish(SubsolverStatus::converged);
    }
  }
  return finish(SubsolverStatus::max_iters);
}

}  // namespace cubicreg
