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

// Reduced two-chain model: physical constants, derived constants and the
// closed-form scalars shared by the mean-field and fluctuation equations.
//
// Each spin chain j is represented by a truncated Holstein-Primakoff boson
// b_j. Time is measured in units of 1/omega1.

#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

namespace spinsync {

using cplx = std::complex<double>;

struct ModelParams {
  double g1 = 1.5;
  double g2 = 2.4;
  double omega1 = 1.0;
  double omega2 = 0.8;
  double lambda = 0.0;  // inter-spin weight factor, [0, 1]
  int N1 = 5;
  int N2 = 5;
  double sigma_z_mean = -0.1;
  double gamma_l = 0.001;
  double gamma_nl = 0.002;
  double n_m = 0.0;  // thermal phonon occupation
  // Central-spin frequency. Accepted for completeness; it drops out of the
  // reduced equations and is never read by the dynamics.
  double omega0 = 0.0;

  bool operator==(const ModelParams&) const = default;
};

struct DerivedConstants {
  double B1 = 0.0;
  double B2 = 0.0;
  double theta = 0.0;  // rotating-frame detuning
};

DerivedConstants derive_constants(const ModelParams& params);

/// Returns one human-readable message per violated bound; empty when valid.
std::vector<std::string> validate_params(const ModelParams& params);

struct GuardOptions {
  double x_eps = 1e-9;       // |X| below this is a singular coupling
  double hp_fraction = 1.0;  // HP breakdown once |beta_j|^2 >= hp_fraction * 2 N_j
};

/// Closed-form scalars evaluated at one (t, beta1, beta2) point.
struct ScalarKit {
  double A1 = 0.0, A2 = 0.0;  // 1 - |b|^2 / 4N
  double a1 = 0.0, a2 = 0.0;  // 1 + 2|b|^2
  cplx R1, R2;                // purely imaginary, linear in t
  double X = 0.0;             // real, sets the 1/X interaction prefactor
  cplx U1, U2;                // noise amplitudes
  double V1 = 0.0, V2 = 0.0;  // |U|^2 (n_m + 1/2)
  std::array<bool, 2> hp_breakdown{false, false};
};

/// The pure-phase R_j(t).
cplx secular_phase(const ModelParams& params, int chain, double t);

/// X(beta1, beta2); depends on the amplitudes only through |beta_j|^2.
double coupling_denominator(const ModelParams& params, cplx beta1, cplx beta2);

/// Throws kSingularCoupling when X has a sign other than `reference_sign`
/// (+1 or -1): the path between the two points crossed the 1/X pole.
void require_same_pole_side(const ModelParams& params, cplx beta1, cplx beta2,
                            double reference_sign, double t);

/// Throws SimError(kSingularCoupling) when |X| < guard.x_eps. HP breakdown is
/// only flagged; the caller applies the policy.
ScalarKit scalar_kit_eval(const ModelParams& params, double t, cplx beta1,
                          cplx beta2, const GuardOptions& guard = {});

}  // namespace spinsync
