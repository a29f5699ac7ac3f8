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

#include <functional>
#include <optional>
#include <string>

#include "cubicreg/core.hpp"
#include "cubicreg/operators.hpp"

namespace cubicreg {

/// Smooth objective with gradient and Hessian access.
struct Problem {
  std::string name;
  Eigen::Index dim = 0;
  std::function<double(const Vector&)> f;
  std::function<Vector(const Vector&)> grad;
  std::function<SymmetricOperator(const Vector&)> hess;
  Vector x0_standard;
  std::optional<double> f_known;
  /// Hessian Lipschitz constant, when one is known for the region the
  /// standard runs visit (see the problem notes).
  std::optional<double> hessian_lipschitz;
  std::string notes;
};

/// Evaluation access that keeps the run's counters up to date.
class CountedProblem {
 public:
  CountedProblem(const Problem& problem, EvalCounters& counters) : problem_(&problem), counters_(&counters) {}

  double f(const Vector& x) const {
    ++counters_->n_f;
    return problem_->f(x);
  }
  Vector grad(const Vector& x) const {
    ++counters_->n_g;
    return problem_->grad(x);
  }
  SymmetricOperator hess(const Vector& x) const { return problem_->hess(x); }
  const Problem& problem() const { return *problem_; }
  EvalCounters& counters() const { return *counters_; }

 private:
  const Problem* problem_;
  EvalCounters* counters_;
};

/// Dense Hessian assembled column by column (tests and diagnostics).
inline DenseMatrix assemble_dense(const SymmetricOperator& op) {
  const Eigen::Index n = op.dim();
  DenseMatrix out(n, n);
  Vector e = Vector::Zero(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    e[j] = 1.0;
    out.col(j) = op.apply_uncounted(e);
    e[j] = 0.0;
  }
  return out;
}

}  // namespace cubicreg
