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

// Adaptive regularization with cubics.
//
// arc_solve_theoretical: the fixed-accuracy loop of cr_solver.hpp with an
// adaptive sigma_k. Success when alpha_k < -eps_E or rho_k >= eta, with rho
// measured against the plain model at sigma_k; sigma_k / gamma on success,
// gamma sigma_k otherwise.
//
// arc_solve_practical: Cauchy-point safeguarded ARC. The reformulated
// model (no eps_E shift) is used only when |g_k| <= max(f_k, 1) eps1 and the
// eigen estimate reports alpha_k < -eps2; otherwise the plain model is
// minimized by BB from the Cauchy point. The Cauchy point is kept whenever
// the subsolver's model value is worse. A reformulated minimizer that lands
// inside the clamped ball is pushed to the sphere along the eigenvector.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>

#include "cubicreg/core.hpp"
#include "cubicreg/cr_solver.hpp"
#include "cubicreg/cubic_model.hpp"
#include "cubicreg/problem.hpp"
#include "cubicreg/solver_common.hpp"

namespace cubicreg {

struct ArcTheoreticalConfig {
  double gamma = 1.5;
  double eta = 0.1;
  double sigma0 = 1.0;
  CrConfig base;  // eps_g, L (for eps_E and eps_S), budgets, subsolver, seed

  void validate() const {
    if (!(gamma > 1.0 && gamma < 2.0)) throw ConfigError("gamma must lie in (1, 2)");
    if (!(eta > 0.0 && eta < 1.0)) throw ConfigError("eta must lie in (0, 1)");
    if (!(sigma0 > 0.0)) throw ConfigError("sigma0 must be positive");
    base.validate();
  }
};

inline SolveReport arc_solve_theoretical(const Problem& problem, const Vector& x0,
                                         const ArcTheoreticalConfig& config) {
  config.validate();
  detail::SigmaRule rule;
  rule.adaptive = true;
  rule.sigma0 = config.sigma0;
  rule.gamma = config.gamma;
  rule.eta = config.eta;
  return detail::fixed_accuracy_solve(problem, x0, config.base, rule);
}

struct ArcPracticalConfig {
  double gamma1 = 2.0;
  double gamma2 = 5.0;
  double eta1 = 0.1;
  double eta2 = 0.9;
  double sigma0 = 1.0;
  double eps1 = 1e-2;
  double eps2 = 1e-4;
  double grad_tol = 1e-5;
  double sigma_min = 1e-16;
  int max_outer = 10000;
  Subsolver reform_solver = Subsolver::bb;  // the plain model always uses BB
  double eig_eps = 0.0;                     // 0: eps2
  double delta = 1e-6;
  double nag_strong_convexity = 1e-8;  // the reformulated model carries no eps_E shift
  int sub_max_iters = 0;
  int norm_iters = kDefaultNormIters;
  std::uint64_t seed = 0;
  // Test hook: replaces the subsolver's point before the Cauchy comparison.
  std::function<Vector(const Vector&)> step_override;

  void validate() const {
    if (!(gamma1 > 1.0 && gamma2 >= gamma1)) throw ConfigError("need gamma2 >= gamma1 > 1");
    if (!(eta1 > 0.0 && eta2 >= eta1 && eta2 < 1.0)) throw ConfigError("need 1 > eta2 >= eta1 > 0");
    if (!(sigma0 > 0.0)) throw ConfigError("sigma0 must be positive");
    if (!(eps1 > 0.0 && eps2 > 0.0)) throw ConfigError("eps1 and eps2 must be positive");
    if (!(grad_tol > 0.0)) throw ConfigError("grad_tol must be positive");
    if (!(sigma_min > 0.0)) throw ConfigError("sigma_min must be positive");
    if (max_outer < 1) throw ConfigError("max_outer must be positive");
    if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("delta must lie in (0, 1)");
    if (!(nag_strong_convexity > 0.0)) throw ConfigError("nag_strong_convexity must be positive");
  }
};

/// Subproblem tolerance for the practical scheme: min(0.1, sqrt|g|) |g|.
inline double practical_subproblem_tol(double grad_norm) {
  return std::max(std::min(0.1, std::sqrt(grad_norm)) * grad_norm, 1e-14);
}

inline SolveReport arc_solve_practical(const Problem& problem, const Vector& x0, const ArcPracticalConfig& cfg) {
  cfg.validate();
  check_start(problem, x0);
  Stopwatch clock;
  SolveReport report;
  EvalCounters& C = report.counters;
  OuterEvaluator ev(problem, C);
  LanczosConfig lanczos;
  lanczos.eps = cfg.eig_eps > 0.0 ? cfg.eig_eps : cfg.eps2;
  lanczos.delta = cfg.delta;
  lanczos.norm_iters = cfg.norm_iters;

  Vector x = x0;
  double f = ev.f(x);
  Vector g = ev.grad(x);
  double sigma = cfg.sigma0;
  bool fresh = true;
  SymmetricOperator H;
  std::optional<Vector> Hg;
  std::optional<EigenEstimate> eig;
  report.status = SolveStatus::max_outer;

  for (int k = 0;; ++k) {
    if (!std::isfinite(f) || !all_finite(g)) {
      report.status = SolveStatus::numerical_failure;
      report.message = "non-finite objective or gradient";
      break;
    }
    if (fresh) {
      H = ev.hess(x);
      Hg.reset();
      eig.reset();
      fresh = false;
    }
    auto ensure_eig = [&] {
      if (!eig) eig = ev.eig(H, lanczos, Rng::derive(cfg.seed, static_cast<std::uint64_t>(k)));
      return eig->alpha;
    };

    IterationRow row;
    row.k = k;
    row.f = f;
    row.grad_norm = g.norm();
    row.sigma = sigma;
    if (row.grad_norm <= cfg.grad_tol) {
      row.alpha = ensure_eig();
      if (row.alpha >= -cfg.eps2) {
        row.branch = Branch::terminate;
        report.iteration_log.push_back(row);
        report.status = SolveStatus::stationary;
        break;
      }
    }
    if (k >= cfg.max_outer) break;
    ++report.outer_iters;

    const RegularizedModel plain = RegularizedModel::plain(g, H, sigma);
    if (!Hg) Hg = row.grad_norm > 0.0 ? apply_hessian(H, g, C) : Vector::Zero(g.size());
    const CauchyPoint cp = cauchy_from_curvature(g, g.dot(*Hg), sigma);
    const Vector Hs_C = -cp.alpha_C * *Hg;
    const double m_C = plain_value(plain, cp.s_C, Hs_C);

    row.trigger = row.grad_norm <= std::max(f, 1.0) * cfg.eps1 && ensure_eig() < -cfg.eps2;
    if (eig) row.alpha = eig->alpha;

    SubproblemSettings sub;
    sub.grad_tol = practical_subproblem_tol(row.grad_norm);
    sub.max_iters = cfg.sub_max_iters;
    NagResult<ModelSample> res;
    if (row.trigger) {
      const RegularizedModel model = RegularizedModel::reform_reg(g, H, sigma, eig->alpha, 0.0);
      sub.solver = cfg.reform_solver;
      sub.strong_convexity = cfg.nag_strong_convexity;
      res = solve_subproblem(model, cp.s_C, sub, C);
    } else {
      sub.solver = Subsolver::bb;
      res = solve_subproblem(plain, cp.s_C, sub, C);
    }
    row.sub_iters = res.iters;
    row.sub_status = res.status;
    if (row.trigger && all_finite(res.last.point) && sigma * res.last.point.norm() + eig->alpha < 0.0) {
      // Minimizer inside the clamped ball: the model is flat along the
      // bottom eigenvector there, so finish the step on the sphere.
      const double radius = -eig->alpha / sigma;
      ModelSample best;
      for (double sign : {1.0, -1.0}) {
        Vector moved = complete_to_boundary(res.last.point, sign * eig->v, radius);
        const double tau = (moved - res.last.point).dot(sign * eig->v);
        Vector Hm = res.last.Hs + (sign * tau) * eig->Hv;
        ModelSample cand = finish_sample(plain, std::move(moved), std::move(Hm));
        if (best.point.size() == 0 || cand.value < best.value) best = std::move(cand);
      }
      res.last = std::move(best);
    }
    if (cfg.step_override) res.last = sample_model(plain, cfg.step_override(res.last.point), C);

    const double m_bar = all_finite(res.last.point) ? plain_value(plain, res.last.point, res.last.Hs) : kNaN;
    Vector s;
    double m_s;
    if (m_bar <= m_C) {
      s = std::move(res.last.point);
      m_s = m_bar;
      row.branch = row.trigger ? Branch::reform : Branch::direct;
    } else {
      s = cp.s_C;
      m_s = m_C;
      row.branch = Branch::cauchy;
    }
    row.step_norm = s.norm();
    row.model_decrease = -m_s;

    Vector x_trial = x + s;
    const double f_trial = ev.f(x_trial);
    row.f_trial = f_trial;
    const std::optional<double> r = std::isfinite(f_trial) ? rho(f, f_trial, row.model_decrease) : std::nullopt;
    row.rho = r.value_or(kNaN);
    row.success = r.has_value() && *r >= cfg.eta1;
    report.iteration_log.push_back(row);

    if (r.has_value() && *r > cfg.eta2) {
      sigma = std::max(0.5 * sigma, cfg.sigma_min);
    } else if (!(r.has_value() && *r >= cfg.eta1)) {
      sigma = cfg.gamma1 * sigma;
    }
    if (row.success) {
      x = std::move(x_trial);
      f = f_trial;
      g = ev.grad(x);
      fresh = true;
    }
  }

  report.x_final = x;
  report.f_final = f;
  report.grad_norm_final = g.norm();
  if (eig && !fresh) report.alpha_final = eig->alpha;
  C.time_total = clock.seconds();
  return report;
}

}  // namespace cubicreg
