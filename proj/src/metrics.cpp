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

#include "spinsync/metrics.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace spinsync {

ClassicalSync classical_sync(const MeanQuadratures& mq) {
  const double qm = (mq.q1 - mq.q2) / std::numbers::sqrt2;
  const double pm = (mq.p1 - mq.p2) / std::numbers::sqrt2;
  ClassicalSync out;
  out.error = qm * qm + pm * pm;
  if (out.error < kPerfectSyncThreshold) {
    out.perfect = true;
  } else {
    out.value = 1.0 / out.error;
  }
  return out;
}

double quantum_sync_phi(const Mat4& C, double phi) {
  const double s = std::sin(phi), c = std::cos(phi);
  const double bracket = C(0, 0) + C(1, 1) + C(2, 2) + C(3, 3) + 2.0 * s * C(1, 2) -
                         2.0 * s * C(0, 3) - 2.0 * c * C(0, 2) - 2.0 * c * C(1, 3);
  if (!(bracket > 0.0)) {
    std::ostringstream os;
    os << "error-mode variance is not positive (" << bracket << ")";
    throw SimError(ErrorCode::kDegenerateCovariance, os.str());
  }
  return 2.0 / bracket;
}

double quantum_sync(const Mat4& C) { return quantum_sync_phi(C, 0.0); }

double phase_difference(const std::array<OrbitSummary, 2>& orbits) {
  const OrbitSummary& a = orbits[0];
  const OrbitSummary& b = orbits[1];
  if (a.phase.size() != b.phase.size() || a.phase.empty())
    throw SimError(ErrorCode::kEmptyWindow, "orbit summaries do not share a time grid");
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < a.phase.size(); ++i) {
    const double d = b.phase[i] - a.phase[i];
    sx += std::cos(d);
    sy += std::sin(d);
  }
  double phi = std::atan2(sy, sx);
  if (phi <= -std::numbers::pi) phi += 2.0 * std::numbers::pi;
  return phi;
}

double time_average(std::span<const double> series, double window_fraction) {
  if (!(window_fraction > 0.0 && window_fraction <= 1.0))
    throw SimError(ErrorCode::kEmptyWindow, "window fraction must lie in (0, 1]");
  const std::size_t n = series.size();
  const auto count = static_cast<std::size_t>(
      std::llround(window_fraction * static_cast<double>(n)));
  if (count == 0) throw SimError(ErrorCode::kEmptyWindow, "averaging window is empty");
  double sum = 0.0;
  for (std::size_t i = n - count; i < n; ++i) sum += series[i];
  return sum / static_cast<double>(count);
}

}  // namespace spinsync
