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

// Pieces shared by the outer solvers: report types, subproblem dispatch and
// the regularized step used by both the fixed-sigma and adaptive variants.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "cubicreg/bb.hpp"
#include "cubicreg/core.hpp"
#include "cubicreg/cubic_model.hpp"
#include "cubicreg/lanczos.hpp"
#include "cubicreg/nag.hpp"
#include "cubicreg/operators.hpp"
#include "cubicreg/problem.hpp"

namespace cubicreg {

enum class SolveStatus { stationary, max_outer, subsolver_failure, numerical_failure };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::stationary: return "stationary";
    case SolveStatus::max_outer: return "max_outer";
    case SolveStatus::subsolver_failure: return "subsolver_failure";
    case SolveStatus::numerical_failure: return "numerical_failure";
  }
  return "?";
}

enum class Branch {
  terminate,
  easy,         // alpha >= -eps_E: regularized model with 3 eps_E shift
  reform_step,  // reformulated model, its minimizer kept
  neg_curv,     // reformulated model, eigenvector step taken instead
  direct,       // practical: plain model solved directly
  reform,       // practical: reformulated model (trigger fired)
  cauchy,       // practical: subsolver lost to the Cauchy point
};

inline const char* to_string(Branch b) {
  switch (b) {
    case Branch::terminate: return "terminate";
    case Branch::easy: return "easy";
    case Branch::reform_step: return "reform_step";
    case Branch::neg_curv: return "neg_curv";
    case Branch::direct: return "direct";
    case Branch::reform: return "reform";
    case Branch::cauchy: return "cauchy";
  }
  return "?";
}

enum class Subsolver { nag, bb };

inline const char* to_string(Subsolver s) { return s == Subsolver::nag ? "nag" : "bb"; }

inline Subsolver parse_subsolver(const std::string& name) {
  if (name == "nag") return Subsolver::nag;
  if (name == "bb") return Subsolver::bb;
  throw ConfigError("unknown subsolver '" + name + "'; expected nag or bb");
}

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// One outer iteration. alpha is NaN when no eigen estimate was needed.
struct IterationRow {
  int k = 0;
  double f = 0.0;
  double grad_norm = 0.0;
  double alpha = kNaN;
  Branch branch = Branch::terminate;
  double step_norm = 0.0;
  double model_decrease = 0.0;  // -m_k(d_k), plain model with the sigma used
  double sigma = 0.0;
  double rho = kNaN;
  double f_trial = kNaN;
  bool success = true;
  bool trigger = false;
  int sub_iters = 0;
  SubsolverStatus sub_status = SubsolverStatus::converged;
};

struct SolveReport {
  SolveStatus status = SolveStatus::max_outer;
  Vector x_final;
  double f_final = 0.0;
  double grad_norm_final = 0.0;
  double alpha_final = kNaN;
  EvalCounters counters;
  std::vector<IterationRow> iteration_log;
  int outer_iters = 0;  // iterations that computed a step
  double eps_E = 0.0;
  double eps_S = 0.0;
  std::string message;
};

/// Actual-to-predicted reduction; nullopt when the model predicts no decrease.
inline std::optional<double> rho(double f_k, double f_next, double model_decrease) {
  if (!(model_decrease > 0.0)) return std::nullopt;
  return (f_k - f_next) / model_decrease;
}

struct SubproblemSettings {
  Subsolver solver = Subsolver::nag;
  double grad_tol = 1e-8;
  double strong_convexity = 1.0;  // NAG only
  int max_iters = 0;              // 0: NAG safety-net default, 10000 for BB
  double zeta = 0.0;
};

inline NagResult<ModelSample> solve_subproblem(const RegularizedModel& model, const Vector& z0,
                                               const SubproblemSettings& settings, EvalCounters& counters) {
  ModelObjective obj(model);
  if (settings.solver == Subsolver::nag) {
    NagConfig cfg;
    cfg.strong_convexity = settings.strong_convexity;
    cfg.grad_tol = settings.grad_tol;
    cfg.max_iters = settings.max_iters > 0 ? settings.max_iters : default_nag_max_iters(settings.strong_convexity);
    cfg.zeta = settings.zeta;
    return nag_minimize(obj, cfg, z0, counters);
  }
  BbConfig cfg;
  cfg.grad_tol = settings.grad_tol;
  cfg.max_iters = settings.max_iters > 0 ? settings.max_iters : 10000;
  cfg.zeta = settings.zeta;
  return bb_minimize(obj, cfg, z0, counters);
}

struct RegularizedStep {
  Vector d;
  Vector Hd;
  Branch branch = Branch::easy;
  double model_value = 0.0;  // m_k(d) with plain sigma
  int sub_iters = 0;
  SubsolverStatus sub_status = SubsolverStatus::converged;
};

/// Step of the fixed-accuracy schemes at an outer iterate with gradient g,
/// Hessian H and eigen estimate (alpha, v):
///   alpha >= -eps_E : minimize the 3 eps_E-shifted model, d = s;
///   otherwise       : minimize the reformulated model; keep s when
///                     sigma |s| + alpha >= 0, else d = w / (2 sigma) with
///                     w = +-|alpha| v, w'g <= 0.
/// The subproblem starts from 0. With sigma = L/2 this is the fixed-L scheme.
inline RegularizedStep regularized_step(const Vector& g, const SymmetricOperator& H, double sigma,
                                        const EigenEstimate& eig, double eps_E, SubproblemSettings settings,
                                        EvalCounters& counters) {
  RegularizedStep out;
  const Eigen::Index n = g.size();
  const Vector zero = Vector::Zero(n);
  const RegularizedModel plain = RegularizedModel::plain(g, H, sigma);
  settings.strong_convexity = eps_E;

  if (eig.alpha >= -eps_E) {
    const RegularizedModel model = RegularizedModel::convex_reg(g, H, sigma, eps_E);
    auto res = solve_subproblem(model, zero, settings, counters);
    out.branch = Branch::easy;
    out.sub_iters = res.iters;
    out.sub_status = res.status;
    out.d = std::move(res.last.point);
    out.Hd = std::move(res.last.Hs);
  } else {
    const RegularizedModel model = RegularizedModel::reform_reg(g, H, sigma, eig.alpha, eps_E);
    auto res = solve_subproblem(model, zero, settings, counters);
    out.sub_iters = res.iters;
    out.sub_status = res.status;
    if (sigma * res.last.point.norm() + eig.alpha >= 0.0) {
      out.branch = Branch::reform_step;
      out.d = std::move(res.last.point);
      out.Hd = std::move(res.last.Hs);
    } else {
      out.branch = Branch::neg_curv;
      const double sign = eig.v.dot(g) > 0.0 ? -1.0 : 1.0;
      const double scale = sign * std::abs(eig.alpha) / (2.0 * sigma);
      out.d = scale * eig.v;
      out.Hd = scale * eig.Hv;
    }
  }
  out.model_value = plain_value(plain, out.d, out.Hd);
  return out;
}

/// Counted evaluation of f and the gradient, with the timers kept in
/// the report's counters.
class OuterEvaluator {
 public:
  OuterEvaluator(const Problem& problem, EvalCounters& counters) : problem_(&problem), counters_(&counters) {}

  double f(const Vector& x) const {
    ++counters_->n_f;
    return problem_->f(x);
  }
  Vector grad(const Vector& x) const {
    ++counters_->n_g;
    return problem_->grad(x);
  }
  SymmetricOperator hess(const Vector& x) const { return problem_->hess(x); }

  EigenEstimate eig(const SymmetricOperator& H, const LanczosConfig& cfg, std::uint64_t seed) const {
    Stopwatch sw;
    EigenEstimate e = min_eig_estimate(H, cfg, seed, *counters_);
    counters_->time_eig += sw.seconds();
    return e;
  }

 private:
  const Problem* problem_;
  EvalCounters* counters_;
};

inline void check_start(const Problem& problem, const Vector& x0) {
  if (x0.size() != problem.dim) {
    throw ConfigError("starting point has dimension " + std::to_string(x0.size()) + ", problem " + problem.name +
                      " has dimension " + std::to_string(problem.dim));
  }
  if (!all_finite(x0)) throw ConfigError("starting point is not finite");
}

/// Default outer budget 10 ceil(3 L^2 (f0 - f_lower) / eps_E^3), capped at 1e6.
inline int default_max_outer(double L, double f0, double f_lower, double eps_E) {
  const double bound = 10.0 * std::ceil(3.0 * L * L * std::max(f0 - f_lower, 0.0) / (eps_E * eps_E * eps_E));
  if (!std::isfinite(bound) || bound > 1e6) return 1000000;
  return std::max(1, static_cast<int>(bound));
}

}  // namespace cubicreg
