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

#include "spinsync/model.hpp"

#include <cmath>
#include <sstream>

#include "spinsync/errors.hpp"

namespace spinsync {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kOk: return "Ok";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kSingularCoupling: return "SingularCoupling";
    case ErrorCode::kNonFinite: return "NonFinite";
    case ErrorCode::kHPBreakdown: return "HPBreakdown";
    case ErrorCode::kPSDViolation: return "PSDViolation";
    case ErrorCode::kDegenerateOrbit: return "DegenerateOrbit";
    case ErrorCode::kDegenerateCovariance: return "DegenerateCovariance";
    case ErrorCode::kEmptyWindow: return "EmptyWindow";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

namespace {

double b_factor(double lambda, int n) {
  const double nd = static_cast<double>(n);
  return lambda * lambda * (1.0 - 1.0 / (2.0 * nd)) + 1.0 / nd;
}

}  // namespace

DerivedConstants derive_constants(const ModelParams& params) {
  DerivedConstants d;
  d.B1 = b_factor(params.lambda, params.N1);
  d.B2 = b_factor(params.lambda, params.N2);
  d.theta = 0.5 * params.omega2 * d.B2 - 0.5 * params.omega1 * d.B1;
  return d;
}

std::vector<std::string> validate_params(const ModelParams& p) {
  std::vector<std::string> out;
  auto finite = [&](double v, const char* name) {
    if (!std::isfinite(v)) out.push_back(std::string(name) + " must be finite");
    return std::isfinite(v);
  };
  if (finite(p.lambda, "lambda") && (p.lambda < 0.0 || p.lambda > 1.0))
    out.emplace_back("lambda out of [0,1]");
  if (p.N1 < 1) out.emplace_back("N1 must be >= 1");
  if (p.N2 < 1) out.emplace_back("N2 must be >= 1");
  if (finite(p.gamma_l, "gamma_l") && p.gamma_l < 0.0)
    out.emplace_back("gamma_l must be >= 0");
  if (finite(p.gamma_nl, "gamma_nl") && p.gamma_nl < 0.0)
    out.emplace_back("gamma_nl must be >= 0");
  if (finite(p.n_m, "n_m") && p.n_m < 0.0) out.emplace_back("n_m must be >= 0");
  if (finite(p.sigma_z_mean, "sigma_z_mean") && std::abs(p.sigma_z_mean) > 1.0)
    out.emplace_back("sigma_z_mean out of [-1,1]");
  finite(p.g1, "g1");
  finite(p.g2, "g2");
  finite(p.omega1, "omega1");
  finite(p.omega2, "omega2");
  finite(p.omega0, "omega0");
  return out;
}

cplx secular_phase(const ModelParams& params, int chain, double t) {
  const double omega = chain == 1 ? params.omega1 : params.omega2;
  const double n = static_cast<double>(chain == 1 ? params.N1 : params.N2);
  return {0.0, omega * (params.lambda * params.lambda / (2.0 * n)) * t};
}

double coupling_denominator(const ModelParams& params, cplx beta1, cplx beta2) {
  const double n1 = params.N1, n2 = params.N2;
  return params.g1 * (std::norm(beta1) - n1) / std::sqrt(n1) +
         params.g2 * (std::norm(beta2) - n2) / std::sqrt(n2);
}

void require_same_pole_side(const ModelParams& params, cplx beta1, cplx beta2,
                            double reference_sign, double t) {
  const double x = coupling_denominator(params, beta1, beta2);
  if (x * reference_sign > 0.0) return;
  std::ostringstream os;
  os << "singular coupling: X changed sign within a step ending at t = " << t
     << " (X = " << x << ", beta1 = " << beta1 << ", beta2 = " << beta2 << ")";
  throw SimError(ErrorCode::kSingularCoupling, os.str(), t);
}

ScalarKit scalar_kit_eval(const ModelParams& params, double t, cplx beta1,
                          cplx beta2, const GuardOptions& guard) {
  ScalarKit k;
  const double n1 = params.N1, n2 = params.N2;
  const double m1 = std::norm(beta1), m2 = std::norm(beta2);

  k.X = coupling_denominator(params, beta1, beta2);
  if (!(std::abs(k.X) >= guard.x_eps)) {
    std::ostringstream os;
    os << "singular coupling: |X| = " << std::abs(k.X) << " < " << guard.x_eps
       << " at t = " << t << ", beta1 = " << beta1 << ", beta2 = " << beta2;
    throw SimError(ErrorCode::kSingularCoupling, os.str(), t);
  }

  k.A1 = 1.0 - m1 / (4.0 * n1);
  k.A2 = 1.0 - m2 / (4.0 * n2);
  k.a1 = 1.0 + 2.0 * m1;
  k.a2 = 1.0 + 2.0 * m2;
  k.R1 = secular_phase(params, 1, t);
  k.R2 = secular_phase(params, 2, t);

  const double sl = std::sqrt(params.gamma_l);
  const double snl = std::sqrt(params.gamma_nl);
  k.U1 = sl + (snl / n1) * (2.0 * m1 - beta1 * beta1);
  k.U2 = sl + (snl / n2) * (2.0 * m2 - beta2 * beta2);
  k.V1 = std::norm(k.U1) * (params.n_m + 0.5);
  k.V2 = std::norm(k.U2) * (params.n_m + 0.5);

  k.hp_breakdown[0] = m1 >= guard.hp_fraction * 2.0 * n1;
  k.hp_breakdown[1] = m2 >= guard.hp_fraction * 2.0 * n2;
  return k;
}

}  // namespace spinsync
