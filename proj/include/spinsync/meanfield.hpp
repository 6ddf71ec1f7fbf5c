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

// Rotating-frame mean-field amplitudes beta_1, beta_2: drift evaluation,
// fixed-step integration and limit-cycle summaries.

#pragma once

#include <array>
#include <string>
#include <vector>

#include "spinsync/errors.hpp"
#include "spinsync/model.hpp"

namespace spinsync {

/// Where the c-number drive terms F_1, F_2 enter.
///   kMeanField    - added to the mean-field drift (default)
///   kNeglect      - dropped everywhere
///   kFluctuations - added to the fluctuation system as a deterministic drive
enum class FTermMode { kMeanField, kNeglect, kFluctuations };

const char* f_mode_name(FTermMode mode);
bool parse_f_mode(const std::string& text, FTermMode& out);

struct DriftOptions {
  FTermMode f_mode = FTermMode::kMeanField;
  // true: literal uncorrected coefficients (g_j in self-terms of E1/E2/E7/E8 and
  // F2, beta_1 in the second chain's g2^2 self-term, bare b2^dagger in its
  // cross-damping term). false: the internally consistent forms.
  bool strict_paper = false;
  GuardOptions guard;
};

struct MeanFieldState {
  double t = 0.0;
  cplx beta1;
  cplx beta2;
};

/// Mean quadratures q = sqrt(2) Re(beta), p = sqrt(2) Im(beta).
struct MeanQuadratures {
  double q1, p1, q2, p2;
};
MeanQuadratures mean_quadratures(const MeanFieldState& s);

struct AmplitudeRates {
  cplx dbeta1;
  cplx dbeta2;
};

struct FTerms {
  cplx F1;
  cplx F2;
};

/// Drive terms F_1, F_2 for already-evaluated scalars.
FTerms f_terms(const ModelParams& params, const ScalarKit& kit, cplx beta1,
               cplx beta2, bool strict_paper);

/// Right-hand side of the mean-field equations. Throws kSingularCoupling or
/// kNonFinite.
AmplitudeRates mean_field_drift(const MeanFieldState& state,
                                const ModelParams& params,
                                const DerivedConstants& derived,
                                const DriftOptions& options);

/// Same drift written out by hand for lambda = 0 (all R_j vanish and every
/// exponential is 1). Ignores params.lambda. Reference path for tests and
/// the self-test.
AmplitudeRates mean_field_drift_lambda0(const MeanFieldState& state,
                                        const ModelParams& params,
                                        const DerivedConstants& derived,
                                        const DriftOptions& options);

enum class HPPolicy { kWarn, kAbort };

struct HPWarning {
  double t;
  int chain;
  double occupation;  // |beta_j|^2 at detection
};

struct IntegrationOptions {
  double dt = 0.01;
  double horizon = 1.0e4;
  int stride = 10;  // emit every stride-th step; 1 = full resolution
  HPPolicy hp_policy = HPPolicy::kWarn;
};

struct MeanFieldTrajectory {
  std::vector<MeanFieldState> states;  // includes the initial state
  std::vector<HPWarning> warnings;
  ErrorCode status = ErrorCode::kOk;
  std::string message;
  double failure_time = 0.0;
};

/// Fixed-step RK4 integration of the mean-field amplitudes. On failure the
/// trajectory holds every emitted state up to and including the last valid one.
MeanFieldTrajectory integrate_mean_field(const MeanFieldState& initial,
                                         const ModelParams& params,
                                         const IntegrationOptions& integration,
                                         const DriftOptions& drift);

struct OrbitSummary {
  double amplitude = 0.0;  // RMS radius in the (q, p) plane
  double period = 0.0;     // NaN when fewer than two upward q crossings
  std::vector<double> t;
  std::vector<double> phase;  // unwrapped atan2(p, q)
};

/// Per-oscillator orbit summaries over [t_a, t_b]. Throws kDegenerateOrbit
/// when an RMS radius is below 1e-9 and kEmptyWindow when no sample falls in
/// the window.
std::array<OrbitSummary, 2> limit_cycle_extract(
    const std::vector<MeanFieldState>& traj, double t_a, double t_b);

}  // namespace spinsync
