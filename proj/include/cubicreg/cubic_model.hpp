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

// Cubic-regularization model functions.
//
//   plain       m(s)    = g's + 1/2 s'Hs + (sigma/3)|s|^3
//   convex_reg  m^r(s)  = g's + 1/2 s'(H + 3 eps_E I)s + (sigma/3)|s|^3
//   reform_reg  m~^r(s) = g's + 1/2 s'(H - alpha I + 2 eps_E I)s + J(s)
//
// with J(s) = (sigma/3) y^3 + (alpha/2) y^2 at y = max(|s|, -alpha/sigma).
// J is convex and C^1 with grad J(s) = [sigma |s| + alpha]_+ s, so every mode
// is "quadratic + radial term" and shares one evaluation path. With
// eps_E = 0 the reform_reg mode is the unconstrained convex reformulation
// of the plain model; it agrees with m wherever sigma |s| + alpha >= 0.

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "cubicreg/core.hpp"
#include "cubicreg/operators.hpp"

namespace cubicreg {

enum class ModelMode { plain, convex_reg, reform_reg };

inline const char* to_string(ModelMode mode) {
  switch (mode) {
    case ModelMode::plain: return "plain";
    case ModelMode::convex_reg: return "convex_reg";
    case ModelMode::reform_reg: return "reform_reg";
  }
  return "?";
}

/// Minimizer of (sigma/3) y^3 + (alpha/2) y^2 over y >= s_norm, y >= -alpha/sigma.
inline double y_star(double s_norm, double alpha, double sigma) {
  return std::max(s_norm, -alpha / sigma);
}

namespace detail {

inline double j_of_radius(double r, double alpha, double sigma) {
  const double y = y_star(r, alpha, sigma);
  return (sigma / 3.0) * y * y * y + 0.5 * alpha * y * y;
}

inline double j_coefficient(double r, double alpha, double sigma) {
  return std::max(sigma * r + alpha, 0.0);
}

}  // namespace detail

inline double eval_J(const Vector& s, double alpha, double sigma) {
  return detail::j_of_radius(s.norm(), alpha, sigma);
}

inline Vector grad_J(const Vector& s, double alpha, double sigma) {
  return detail::j_coefficient(s.norm(), alpha, sigma) * s;
}

/// One subproblem instance. Invariants are checked on construction.
class RegularizedModel {
 public:
  static RegularizedModel plain(Vector g, SymmetricOperator H, double sigma) {
    return RegularizedModel(std::move(g), std::move(H), sigma, 0.0, 0.0, ModelMode::plain);
  }
  static RegularizedModel convex_reg(Vector g, SymmetricOperator H, double sigma, double eps_E) {
    return RegularizedModel(std::move(g), std::move(H), sigma, 0.0, eps_E, ModelMode::convex_reg);
  }
  static RegularizedModel reform_reg(Vector g, SymmetricOperator H, double sigma, double alpha, double eps_E) {
    return RegularizedModel(std::move(g), std::move(H), sigma, alpha, eps_E, ModelMode::reform_reg);
  }

  const Vector& g() const { return g_; }
  const SymmetricOperator& H() const { return H_; }
  double sigma() const { return sigma_; }
  double alpha() const { return alpha_; }
  double eps_E() const { return eps_E_; }
  ModelMode mode() const { return mode_; }
  Eigen::Index dim() const { return g_.size(); }

  /// Coefficient of the extra 1/2 |s|^2 term.
  double shift() const {
    switch (mode_) {
      case ModelMode::plain: return 0.0;
      case ModelMode::convex_reg: return 3.0 * eps_E_;
      case ModelMode::reform_reg: return -alpha_ + 2.0 * eps_E_;
    }
    return 0.0;
  }

  double radial(double r) const {
    if (mode_ == ModelMode::reform_reg) return detail::j_of_radius(r, alpha_, sigma_);
    return (sigma_ / 3.0) * r * r * r;
  }

  /// grad of the radial term is radial_coefficient(|s|) * s.
  double radial_coefficient(double r) const {
    if (mode_ == ModelMode::reform_reg) return detail::j_coefficient(r, alpha_, sigma_);
    return sigma_ * r;
  }

  /// radial(r1) - radial(r0), given r1^2 - r0^2 computed without cancellation.
  double radial_change(double r0, double r1, double sq_change) const {
    const double dr = (r0 + r1 > 0.0) ? sq_change / (r0 + r1) : 0.0;
    if (mode_ != ModelMode::reform_reg) {
      return (sigma_ / 3.0) * dr * (r1 * r1 + r1 * r0 + r0 * r0);
    }
    const double floor = -alpha_ / sigma_;
    const double y0 = std::max(r0, floor);
    const double y1 = std::max(r1, floor);
    double dy;
    if (r0 >= floor && r1 >= floor) {
      dy = dr;
    } else {
      dy = y1 - y0;
    }
    return dy * ((sigma_ / 3.0) * (y1 * y1 + y1 * y0 + y0 * y0) + 0.5 * alpha_ * (y1 + y0));
  }

 private:
  RegularizedModel(Vector g, SymmetricOperator H, double sigma, double alpha, double eps_E, ModelMode mode)
      : g_(std::move(g)), H_(std::move(H)), sigma_(sigma), alpha_(alpha), eps_E_(eps_E), mode_(mode) {
    if (g_.size() != H_.dim()) throw ConfigError("RegularizedModel: gradient and operator dimensions differ");
    if (!(sigma_ > 0.0)) throw ConfigError("RegularizedModel: sigma must be positive");
    if (!(eps_E_ >= 0.0)) throw ConfigError("RegularizedModel: eps_E must be nonnegative");
    if (mode_ == ModelMode::reform_reg && !(alpha_ < -eps_E_)) {
      throw ContractViolation("RegularizedModel: reform_reg requires alpha < -eps_E");
    }
  }

  Vector g_;
  SymmetricOperator H_;
  double sigma_;
  double alpha_;
  double eps_E_;
  ModelMode mode_;
};

/// Model value and gradient at one point, with the Hessian action cached.
struct ModelSample {
  Vector point;
  Vector Hs;
  double value = 0.0;
  Vector grad;
};

/// Completes a sample from a known Hessian action; no operator calls.
inline ModelSample finish_sample(const RegularizedModel& model, Vector s, Vector Hs) {
  ModelSample out;
  const double r = s.norm();
  const double shift = model.shift();
  out.value = model.g().dot(s) + 0.5 * s.dot(Hs) + 0.5 * shift * r * r + model.radial(r);
  out.grad = model.g() + Hs + (shift + model.radial_coefficient(r)) * s;
  out.point = std::move(s);
  out.Hs = std::move(Hs);
  return out;
}

/// Value and gradient of the model in its own mode; one Hessian action.
inline ModelSample sample_model(const RegularizedModel& model, const Vector& s, EvalCounters& counters) {
  Vector Hs = apply_hessian(model.H(), s, counters);
  return finish_sample(model, s, std::move(Hs));
}

/// Plain cubic model value m(s) from a cached Hs (any mode; uses g, H, sigma).
inline double plain_value(const RegularizedModel& model, const Vector& s, const Vector& Hs) {
  const double r = s.norm();
  return model.g().dot(s) + 0.5 * s.dot(Hs) + (model.sigma() / 3.0) * r * r * r;
}

inline double eval_m(const RegularizedModel& model, const Vector& s, EvalCounters& counters) {
  return plain_value(model, s, apply_hessian(model.H(), s, counters));
}

inline Vector grad_m(const RegularizedModel& model, const Vector& s, EvalCounters& counters) {
  Vector out = apply_hessian(model.H(), s, counters);
  out += model.g() + model.sigma() * s.norm() * s;
  return out;
}

inline void require_regularized(const RegularizedModel& model, const char* who) {
  if (model.mode() == ModelMode::plain) {
    throw ContractViolation(std::string(who) + ": model mode must be convex_reg or reform_reg");
  }
}

inline double eval_model_value(const RegularizedModel& model, const Vector& s, EvalCounters& counters) {
  require_regularized(model, "eval_model_value");
  return sample_model(model, s, counters).value;
}

inline Vector eval_model_grad(const RegularizedModel& model, const Vector& s, EvalCounters& counters) {
  require_regularized(model, "eval_model_grad");
  return sample_model(model, s, counters).grad;
}

/// Restriction of a model to the ray y + t d. Holds the one extra Hessian
/// action H d so that every trial value along the ray costs O(1) and the
/// sample at an accepted t costs O(n), with no further operator calls.
class ModelRay {
 public:
  ModelRay(const RegularizedModel& model, const ModelSample& base, Vector direction, EvalCounters& counters)
      : model_(&model), base_(&base), d_(std::move(direction)) {
    Hd_ = apply_hessian(model.H(), d_, counters);
    const double shift = model.shift();
    const double r0 = base.point.norm();
    // Directional slope of the quadratic part at the base point.
    slope_ = model.g().dot(d_) + base.Hs.dot(d_) + shift * base.point.dot(d_);
    curv_ = d_.dot(Hd_) + shift * d_.squaredNorm();
    yd_ = base.point.dot(d_);
    dd_ = d_.squaredNorm();
    r0_ = r0;
  }

  /// h(y + t d) - h(y), evaluated without cancellation against h(y).
  double change(double t) const {
    const double sq_change = t * (2.0 * yd_ + t * dd_);
    const double r1 = std::sqrt(std::max(0.0, r0_ * r0_ + sq_change));
    return t * slope_ + 0.5 * t * t * curv_ + model_->radial_change(r0_, r1, sq_change);
  }

  double value(double t) const { return base_->value + change(t); }

  ModelSample sample(double t) const {
    Vector p = base_->point + t * d_;
    Vector Hp = base_->Hs + t * Hd_;
    return finish_sample(*model_, std::move(p), std::move(Hp));
  }

 private:
  const RegularizedModel* model_;
  const ModelSample* base_;
  Vector d_;
  Vector Hd_;
  double slope_ = 0.0;
  double curv_ = 0.0;
  double yd_ = 0.0;
  double dd_ = 0.0;
  double r0_ = 0.0;
};

/// Adapter that lets the first-order subsolvers minimize a model.
class ModelObjective {
 public:
  using Sample = ModelSample;
  using Ray = ModelRay;

  explicit ModelObjective(const RegularizedModel& model) : model_(&model) {}

  Sample sample(const Vector& z, EvalCounters& counters) const { return sample_model(*model_, z, counters); }
  Ray ray(const Sample& base, Vector direction, EvalCounters& counters) const {
    return ModelRay(*model_, base, std::move(direction), counters);
  }
  const RegularizedModel& model() const { return *model_; }

 private:
  const RegularizedModel* model_;
};

/// Objective of the constrained (s, y) reformulation. Test support: checks
/// that partial minimization over y recovers the reformulated model.
inline double eval_mhat(const Vector& s, double y, const Vector& g, const SymmetricOperator& H, double alpha,
                        double sigma, EvalCounters& counters) {
  const double s_norm = s.norm();
  const double slack = 1e-12 * std::max(1.0, std::abs(y));
  if (y < s_norm - slack || y < -alpha / sigma - slack) {
    throw ContractViolation("eval_mhat: (s, y) is infeasible");
  }
  const Vector Hs = apply_hessian(H, s, counters);
  return g.dot(s) + 0.5 * (s.dot(Hs) - alpha * s_norm * s_norm) + (sigma / 3.0) * y * y * y + 0.5 * alpha * y * y;
}

struct CauchyPoint {
  double alpha_C = 0.0;
  Vector s_C;
  double model_value = 0.0;  // m(s_C)
};

/// Global minimizer of m(-a g) over a >= 0 given c = g'Hg. Positive root of
///   sigma |g|^3 a^2 + c a - |g|^2 = 0,
/// written in the cancellation-free form when c > 0.
inline CauchyPoint cauchy_from_curvature(const Vector& g, double gHg, double sigma) {
  CauchyPoint out;
  const double gn = g.norm();
  if (gn == 0.0) {
    out.s_C = Vector::Zero(g.size());
    return out;
  }
  const double gn2 = gn * gn;
  const double gn3 = gn2 * gn;
  const double disc = std::sqrt(gHg * gHg + 4.0 * sigma * gn3 * gn2);
  double a;
  if (gHg > 0.0) {
    a = 2.0 * gn2 / (gHg + disc);
  } else {
    a = (-gHg + disc) / (2.0 * sigma * gn3);
  }
  out.alpha_C = a;
  out.s_C = -a * g;
  out.model_value = -a * gn2 + 0.5 * a * a * gHg + (sigma / 3.0) * a * a * a * gn3;
  return out;
}

/// Cauchy point of the plain model; one Hessian action (skipped when g = 0).
inline CauchyPoint cauchy_point(const RegularizedModel& model, EvalCounters& counters) {
  if (model.g().norm() == 0.0) return cauchy_from_curvature(model.g(), 0.0, model.sigma());
  const Vector Hg = apply_hessian(model.H(), model.g(), counters);
  return cauchy_from_curvature(model.g(), model.g().dot(Hg), model.sigma());
}

/// Moves s along the unit vector v until |s + tau v| = radius (tau >= 0).
/// Used to push a clamped-region minimizer of the reformulation onto the
/// sphere |s| = -alpha/sigma in the hard case.
inline Vector complete_to_boundary(const Vector& s, const Vector& v, double radius) {
  const double sv = s.dot(v);
  const double disc = sv * sv - s.squaredNorm() + radius * radius;
  const double tau = -sv + std::sqrt(std::max(0.0, disc));
  return s + tau * v;
}

}  // namespace cubicreg
