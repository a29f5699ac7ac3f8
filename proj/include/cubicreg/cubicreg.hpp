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

#include "cubicreg/arc_solver.hpp"
#include "cubicreg/bb.hpp"
#include "cubicreg/bench.hpp"
#include "cubicreg/core.hpp"
#include "cubicreg/cr_solver.hpp"
#include "cubicreg/cubic_model.hpp"
#include "cubicreg/lanczos.hpp"
#include "cubicreg/nag.hpp"
#include "cubicreg/objective.hpp"
#include "cubicreg/operators.hpp"
#include "cubicreg/problem.hpp"
#include "cubicreg/problems.hpp"
#include "cubicreg/solver_common.hpp"
