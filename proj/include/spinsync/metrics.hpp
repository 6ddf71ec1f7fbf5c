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

// Synchronization measures built from the error quadratures
//   q_- = (q1 - q2) / sqrt(2),  p_- = (p1 - p2) / sqrt(2).

#pragma once

#include <array>
#include <span>

#include "spinsync/fluctuation.hpp"
#include "spinsync/meanfield.hpp"

namespace spinsync {

struct ClassicalSync {
  bool perfect = false;  // error below kPerfectSyncThreshold; value is then unset
  double value = 0.0;    // 1 / (q_-^2 + p_-^2)
  double error = 0.0;    // q_-^2 + p_-^2
};

inline constexpr double kPerfectSyncThreshold = 1e-12;

ClassicalSync classical_sync(const MeanQuadratures& mq);

/// 2 / [C11 + C22 + C33 + C44 + 2 sin(phi) (C23 - C14) - 2 cos(phi) (C13 + C24)].
/// Throws kDegenerateCovariance when the bracket is not positive.
double quantum_sync_phi(const Mat4& C, double phi);

/// Complete quantum synchronization, i.e. quantum_sync_phi(C, 0).
double quantum_sync(const Mat4& C);

/// Circular mean of the unwrapped phase difference phi_2 - phi_1 over the
/// orbit samples, in (-pi, pi]. The two summaries must share a time grid.
double phase_difference(const std::array<OrbitSummary, 2>& orbits);

/// Arithmetic mean over the final `window_fraction` of the samples.
/// Throws kEmptyWindow if the window holds no samples or the fraction is
/// outside (0, 1].
double time_average(std::span<const double> series, double window_fraction = 0.2);

}  // namespace spinsync
