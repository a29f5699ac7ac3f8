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

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>

#include "cubicreg/core.hpp"

namespace cubicreg {

/// Evaluation counters for one solver run. Mutated only by the thread that
/// owns the run.
struct EvalCounters {
  std::int64_t n_f = 0;
  std::int64_t n_g = 0;
  std::int64_t n_prod = 0;  // Hessian-vector products
  std::int64_t n_eig = 0;   // eigen-estimate calls
  double time_total = 0.0;
  double time_eig = 0.0;
};

/// Symmetric linear operator v -> Hv. Immutable after construction; the
/// action is shared between copies.
class SymmetricOperator {
 public:
  using Action = std::function<void(const Vector& in, Vector& out)>;

  SymmetricOperator() = default;
  SymmetricOperator(Eigen::Index dim, Action action, std::optional<double> norm_bound = std::nullopt)
      : dim_(dim), action_(std::make_shared<const Action>(std::move(action))), norm_bound_(norm_bound) {
    if (dim <= 0) throw ConfigError("SymmetricOperator: dimension must be positive");
  }

  /// Wraps a dense symmetric matrix (row-major, full storage).
  static SymmetricOperator dense(DenseMatrix matrix) {
    if (matrix.rows() != matrix.cols()) throw ConfigError("SymmetricOperator::dense: matrix is not square");
    const Eigen::Index n = matrix.rows();
    auto shared = std::make_shared<const DenseMatrix>(std::move(matrix));
    return SymmetricOperator(n, [shared](const Vector& in, Vector& out) { out.noalias() = (*shared) * in; });
  }

  static SymmetricOperator diagonal(Vector diag) {
    const Eigen::Index n = diag.size();
    auto shared = std::make_shared<const Vector>(std::move(diag));
    return SymmetricOperator(n, [shared](const Vector& in, Vector& out) {
      out = shared->cwiseProduct(in);
    });
  }

  static SymmetricOperator identity(Eigen::Index n) {
    return SymmetricOperator(n, [](const Vector& in, Vector& out) { out = in; }, 1.0);
  }

  Eigen::Index dim() const { return dim_; }
  const std::optional<double>& norm_bound() const { return norm_bound_; }

  SymmetricOperator with_norm_bound(double bound) const {
    SymmetricOperator copy = *this;
    copy.norm_bound_ = bound;
    return copy;
  }

  /// Uncounted action. Solver code goes through apply_hessian().
  Vector apply_uncounted(const Vector& v) const {
    Vector out(dim_);
    (*action_)(v, out);
    return out;
  }

 private:
  Eigen::Index dim_ = 0;
  std::shared_ptr<const Action> action_;
  std::optional<double> norm_bound_;
};

/// Returns Hv and bumps counters.n_prod by one.
inline Vector apply_hessian(const SymmetricOperator& op, const Vector& v, EvalCounters& counters) {
  if (v.size() != op.dim()) {
    throw ConfigError("apply_hessian: vector has dimension " + std::to_string(v.size()) +
                      ", operator has dimension " + std::to_string(op.dim()));
  }
  ++counters.n_prod;
  return op.apply_uncounted(v);
}

inline constexpr double kNormSafetyFactor = 1.1;
inline constexpr int kDefaultNormIters = 50;

/// Power-iteration estimate of ||H||_2, inflated by kNormSafetyFactor.
/// Deterministic for a fixed seed; the zero operator yields 0.
inline double estimate_norm_bound(const SymmetricOperator& op, int iters, std::uint64_t rng_seed,
                                  EvalCounters& counters) {
  if (iters < 1) throw ConfigError("estimate_norm_bound: iters must be >= 1");
  Rng rng(rng_seed);
  Vector v = rng.unit_vector(op.dim());
  double best = 0.0;
  for (int it = 0; it < iters; ++it) {
    Vector w = apply_hessian(op, v, counters);
    const double nrm = w.norm();
    best = std::max(best, nrm);
    if (nrm == 0.0) break;
    v = w / nrm;
  }
  return kNormSafetyFactor * best;
}

inline double estimate_norm_bound(const SymmetricOperator& op, int iters, std::uint64_t rng_seed) {
  EvalCounters scratch;
  return estimate_norm_bound(op, iters, rng_seed, scratch);
}

}  // namespace cubicreg
