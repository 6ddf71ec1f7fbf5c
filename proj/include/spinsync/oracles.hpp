// Copyright 2026 The spinsync Authors
//
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

// Reference computations that avoid the production code paths they check.

#pragma once

#include <functional>

#include "spinsync/fluctuation.hpp"

namespace spinsync {

/// Integrates d(db1), d(db2) with frozen E directly in complex arithmetic
/// (no quadrature matrix involved) and, alongside, Y under
/// `assembler(E)`. Returns max_i |Y_i - sqrt(2) (Re db, Im db)_i| over the
/// grid t = 0, dt, ..., t_end.
double complex_quadrature_deviation(
    const CoeffArray& E, cplx db1, cplx db2, double t_end, double dt,
    const std::function<Mat4(const CoeffArray&)>& assembler = assemble_drift_matrix);

}  // namespace spinsync
