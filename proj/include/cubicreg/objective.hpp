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

#include <concepts>
#include <functional>
#include <utility>

#include "cubicreg/core.hpp"
#include "cubicreg/operators.hpp"

namespace cubicreg {

/// What the first-order subsolvers need from an objective h:
///   sample(z)           value and gradient at z
///   ray(sample, d)      restriction t -> h(y + t d), exposing
///                       change(t) = h(y + t d) - h(y) and sample(t).
/// Model objectives implement the ray with a single Hessian action so
/// backtracking is free of operator calls.
template <class Obj>
concept RayObjective = requires(const Obj& obj, const Vector& z, const typename Obj::Sample& s, EvalCounters& c) {
  typename Obj::Sample;
  typename Obj::Ray;
  { obj.sample(z, c) } -> std::same_as<typename Obj::Sample>;
  { obj.ray(s, Vector(z), c) } -> std::same_as<typename Obj::Ray>;
  { s.point } -> std::convertible_to<const Vector&>;
  { s.grad } -> std::convertible_to<const Vector&>;
  { s.value } -> std::convertible_to<double>;
};

struct FunctionSample {
  Vector point;
  double value = 0.0;
  Vector grad;
};

/// Plain value-and-gradient callback. Trial points along a ray are full
/// evaluations; counters.n_f / n_g record them.
class FunctionObjective {
 public:
  using Callback = std::function<double(const Vector& z, Vector* grad)>;
  using Sample = FunctionSample;

  class Ray {
   public:
    Ray(const FunctionObjective& obj, const FunctionSample& base, Vector d, EvalCounters& counters)
        : obj_(&obj), base_(&base), d_(std::move(d)), counters_(&counters) {}
    double change(double t) const {
      ++counters_->n_f;
      return obj_->fn_(base_->point + t * d_, nullptr) - base_->value;
    }
    FunctionSample sample(double t) const { return obj_->sample(base_->point + t * d_, *counters_); }

   private:
    const FunctionObjective* obj_;
    const FunctionSample* base_;
    Vector d_;
    EvalCounters* counters_;
  };

  explicit FunctionObjective(Callback fn) : fn_(std::move(fn)) {}

  Sample sample(const Vector& z, EvalCounters& counters) const {
    Sample s;
    s.point = z;
    s.grad.resize(z.size());
    s.value = fn_(z, &s.grad);
    ++counters.n_f;
    ++counters.n_g;
    return s;
  }
  Ray ray(const Sample& base, Vector d, EvalCounters& counters) const {
    return Ray(*this, base, std::move(d), counters);
  }

 private:
  Callback fn_;
};

enum class SubsolverStatus { converged, max_iters, stagnation, numerical_failure };

inline const char* to_string(SubsolverStatus s) {
  switch (s) {
    case SubsolverStatus::converged: return "converged";
    case SubsolverStatus::max_iters: return "max_iters";
    case SubsolverStatus::stagnation: return "stagnation";
    case SubsolverStatus::numerical_failure: return "numerical_failure";
  }
  return "?";
}

/// Stopping rule |grad h(z)| <= max(zeta |z|^2, grad_tol); zeta = 0 gives the
/// plain gradient test.
inline bool gradient_small(const Vector& z, double grad_norm, double grad_tol, double zeta) {
  const double tol = zeta > 0.0 ? std::max(zeta * z.squaredNorm(), grad_tol) : grad_tol;
  return grad_norm <= tol;
}

}  // namespace cubicreg
