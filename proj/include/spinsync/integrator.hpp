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

#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace spinsync {

template <std::size_t N>
using StateVec = std::array<double, N>;

/// One classical fourth-order Runge-Kutta step of y' = rhs(t, y).
template <std::size_t N, class Rhs>
StateVec<N> rk4_step(const Rhs& rhs, double t, const StateVec<N>& y, double h) {
  auto axpy = [](const StateVec<N>& base, double s, const StateVec<N>& dir) {
    StateVec<N> out;
    for (std::size_t i = 0; i < N; ++i) out[i] = base[i] + s * dir[i];
    return out;
  };
  const StateVec<N> k1 = rhs(t, y);
  const StateVec<N> k2 = rhs(t + 0.5 * h, axpy(y, 0.5 * h, k1));
  const StateVec<N> k3 = rhs(t + 0.5 * h, axpy(y, 0.5 * h, k2));
  const StateVec<N> k4 = rhs(t + h, axpy(y, h, k3));
  StateVec<N> out;
  for (std::size_t i = 0; i < N; ++i)
    out[i] = y[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

template <std::size_t N>
bool all_finite(const StateVec<N>& y) {
  for (double v : y)
    if (!std::isfinite(v)) return false;
  return true;
}

/// Time of step `k` on a uniform grid. Computed by multiplication so that
/// runs with equal (dt, k) land on bit-identical times.
inline double grid_time(double t0, double dt, long long k) {
  return t0 + dt * static_cast<double>(k);
}

}  // namespace spinsync
