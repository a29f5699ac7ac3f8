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

// Fixed-accuracy cubic regularization with a Lanczos curvature test.
//
// With eps_E = sqrt(L eps_g) / 3 and eps_S = eps_g / 9, every outer
// iteration either certifies |g| <= eps_g, alpha >= -2 eps_E (so
// lambda_min >= -sqrt(L eps_g) whenever alpha is eps_E-accurate) or takes a
// step with plain-model decrease of order eps_E^3 / L^2. The adaptive
// variant (arc_solver.hpp) runs the same loop with sigma_k in place of L/2.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>

#include "cubicreg/core.hpp"
#include "cubicreg/problem.hpp"
#include "cubicreg/solver_common.hpp"

namespace cubicreg {

struct CrConfig {
  double eps_g = 1e-5;
  double lipschitz = 1.0;  // L
  int max_outer = 0;       // 0: 10 ceil(3 L^2 (f0 - f_lower) / eps_E^3), capped at 1e6
  double f_lower = -1e12;
  Subsolver subsolver = Subsolver::nag;
  int sub_max_iters = 0;  // 0: subsolver default
  double zeta = 0.0;      // looser subproblem stop max(zeta |s|^2, eps_S) when > 0
  double delta = 0.0;     // 0: 1e-6 / max_outer
  int norm_iters = kDefaultNormIters;
  std::uint64_t seed = 0;

  double eps_E() const { return std::sqrt(lipschitz * eps_g) / 3.0; }
  double eps_S() const { return eps_g / 9.0; }

  void validate() const {
    if (!(eps_g > 0.0)) throw ConfigError("eps_g must be positive");
    if (!(lipschitz > 0.0) || !std::isfinite(lipschitz)) throw ConfigError("lipschitz must be positive");
    if (max_outer < 0) throw ConfigError("max_outer must be nonnegative");
    if (!(zeta >= 0.0 && zeta < 1.0)) throw ConfigError("zeta must lie in [0, 1)");
    if (!(delta >= 0.0 && delta < 1.0)) throw ConfigError("delta must lie in [0, 1)");
  }
};

namespace detail {

struct SigmaRule {
  bool adaptive = false;
  double sigma0 = 0.0;
  double gamma = 1.5;
  double eta = 0.1;
};

inline SolveReport fixed_accuracy_solve(const Problem& problem, const Vector& x0, const CrConfig& cfg,
                                        const SigmaRule& rule) {
  cfg.validate();
  check_start(problem, x0);
  Stopwatch clock;
  SolveReport report;
  EvalCounters& C = report.counters;
  OuterEvaluator ev(problem, C);
  const double eps_E = cfg.eps_E();
  const double eps_S = cfg.eps_S();
  report.eps_E = eps_E;
  report.eps_S = eps_S;

  Vector x = x0;
  double f = ev.f(x);
  const int max_outer = cfg.max_outer > 0 ? cfg.max_outer : default_max_outer(cfg.lipschitz, f, cfg.f_lower, eps_E);
  LanczosConfig lanczos;
  lanczos.eps = eps_E;
  lanczos.delta = cfg.delta > 0.0 ? cfg.delta : 1e-6 / static_cast<double>(max_outer);
  lanczos.norm_iters = cfg.norm_iters;

  SubproblemSettings sub;
  sub.solver = cfg.subsolver;
  sub.grad_tol = eps_S;
  sub.max_iters = cfg.sub_max_iters;
  sub.zeta = cfg.zeta;

  double sigma = rule.adaptive ? rule.sigma0 : 0.5 * cfg.lipschitz;
  Vector g;
  SymmetricOperator H;
  EigenEstimate eig;
  bool fresh = true;  // x moved since g, H, eig were computed
  Vector best_x = x;
  double best_f = f;
  report.status = SolveStatus::max_outer;

  for (int k = 0;; ++k) {
    if (fresh) {
      g = ev.grad(x);
      H = ev.hess(x);
      if (!std::isfinite(f) || !all_finite(g)) {
        report.status = SolveStatus::numerical_failure;
        report.message = "non-finite objective or gradient";
        break;
      }
      eig = ev.eig(H, lanczos, Rng::derive(cfg.seed, static_cast<std::uint64_t>(k)));
      fresh = false;
    }
    IterationRow row;
    row.k = k;
    row.f = f;
    row.grad_norm = g.norm();
    row.alpha = eig.alpha;
    row.sigma = sigma;
    if (row.grad_norm <= cfg.eps_g && eig.alpha >= -2.0 * eps_E) {
      row.branch = Branch::terminate;
      report.iteration_log.push_back(row);
      report.status = SolveStatus::stationary;
      break;
    }
    if (k >= max_outer) break;

    RegularizedStep step = regularized_step(g, H, sigma, eig, eps_E, sub, C);
    ++report.outer_iters;
    row.branch = step.branch;
    row.step_norm = step.d.norm();
    row.model_decrease = -step.model_value;
    row.sub_iters = step.sub_iters;
    row.sub_status = step.sub_status;
    if (step.sub_status == SubsolverStatus::stagnation || step.sub_status == SubsolverStatus::numerical_failure) {
      report.iteration_log.push_back(row);
      report.status = SolveStatus::subsolver_failure;
      report.message = std::string("subsolver ") + to_string(step.sub_status);
      break;
    }

    Vector x_trial = x + step.d;
    const double f_trial = ev.f(x_trial);
    row.f_trial = f_trial;
    const std::optional<double> r = rho(f, f_trial, row.model_decrease);
    row.rho = r.value_or(kNaN);
    bool success = true;
    if (rule.adaptive) {
      success = eig.alpha < -eps_E || (r.has_value() && *r >= rule.eta);
      if (!std::isfinite(f_trial)) success = false;
    } else if (!std::isfinite(f_trial)) {
      report.iteration_log.push_back(row);
      report.status = SolveStatus::numerical_failure;
      report.message = "non-finite objective at trial point";
      break;
    }
    row.success = success;
    report.iteration_log.push_back(row);

    if (success) {
      x = std::move(x_trial);
      f = f_trial;
      fresh = true;
      if (f < best_f) {
        best_f = f;
        best_x = x;
      }
    }
    if (rule.adaptive) sigma = success ? sigma / rule.gamma : rule.gamma * sigma;
  }

  if (report.status == SolveStatus::max_outer && best_f < f) {
    x = best_x;
    f = best_f;
    fresh = true;
  }
  report.x_final = x;
  report.f_final = f;
  if (fresh) {
    report.grad_norm_final = ev.grad(x).norm();
  } else {
    report.grad_norm_final = g.norm();
    report.alpha_final = eig.alpha;
  }
  C.time_total = clock.seconds();
  return report;
}

}  // namespace detail

/// Fixed-L cubic regularization; sigma = L/2 throughout.
inline SolveReport cr_solve(const Problem& problem, const Vector& x0, const CrConfig& config) {
  return detail::fixed_accuracy_solve(problem, x0, config, detail::SigmaRule{});
}

}  // namespace cubicreg
