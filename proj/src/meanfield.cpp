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

#include "spinsync/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "chain_view.hpp"
#include "spinsync/integrator.hpp"

namespace spinsync {

namespace {

constexpr cplx kI{0.0, 1.0};

using detail::ChainView;

// Damping part of the mean-field drift for chain `s`.
cplx damping(const ModelParams& p, const ChainView& s, bool literal_cross) {
  const double m = std::norm(s.beta);
  const double n2 = s.n * s.n;
  const double sqrt_lnl = std::sqrt(p.gamma_l * p.gamma_nl);
  cplx out = -0.5 * p.gamma_l * s.beta - (p.gamma_nl / n2) * m * m * s.beta -
             2.0 * (p.gamma_nl / n2) * m * s.beta;
  if (literal_cross)
    out -= (2.0 / s.n) * sqrt_lnl * std::conj(s.beta);
  else
    out -= (2.0 / s.n) * sqrt_lnl * m * s.beta;
  return out;
}

// Bracket multiplying i<sz>/X, self-terms excluded.
cplx interaction_cross(const ChainView& s, const ChainView& o) {
  const double m = std::norm(s.beta);
  const cplx b2 = s.beta * s.beta;
  const cplx e_fwd = std::exp(-o.R * o.a + s.R * s.a);
  const cplx e_bwd = std::exp(o.R * o.a - s.R * s.a);
  const double gg = s.g * o.g;
  return gg * std::conj(o.beta) * e_fwd * o.A *
             (b2 / (4.0 * s.n) - 2.0 * s.R * s.A * b2) +
         gg * o.A * e_bwd * o.beta *
             (m * s.beta / (4.0 * s.n) + 2.0 * s.R * s.A * m - s.A);
}

cplx interaction_self(const ChainView& s) {
  const double m = std::norm(s.beta);
  const double g2 = s.g * s.g;
  return g2 * m * s.beta / s.n - 3.0 * g2 * m * m * s.beta / (16.0 * s.n * s.n) -
         g2 * s.beta;
}

// Mean-field reduction of the literal second-chain self-terms, where the
// first factor multiplies beta_1 rather than beta_2.
cplx interaction_self_literal(const ChainView& s, const ChainView& o) {
  const double m = std::norm(s.beta);
  const double g2 = s.g * s.g;
  const double occ = 1.0 - m / (4.0 * s.n);
  return g2 * (m / (2.0 * s.n) - 1.0) * occ * o.beta +
         g2 * std::conj(s.beta) * occ * s.beta * s.beta / (4.0 * s.n);
}

// F_j with the chain-j prefactor g excluded (bracket only).
cplx f_bracket(const ChainView& s, const ChainView& o) {
  const double m = std::norm(s.beta);
  const cplx lead = -2.0 * s.A * s.beta + 3.0 * s.beta * m / (2.0 * s.n) - 2.0 * s.beta;
  const cplx cross = s.beta * s.beta * std::conj(o.beta) *
                     std::exp(s.R * s.a - o.R * o.a) *
                     ((3.0 * o.A + 1.0) / (2.0 * s.n) - 4.0 * s.R * (s.A + o.A) -
                      10.0 * s.R * s.A * o.A);
  const cplx tail = std::exp(o.R * o.a - s.R * s.a) *
                    ((5.0 * m / (2.0 * s.n) + 20.0 * m * s.R * s.A + 4.0 * m * s.R -
                      12.0 * s.A - 1.0) +
                     2.0 * o.beta * (m / (4.0 * s.n) + 4.0 * m * s.R * s.A - s.A));
  return lead + cross + tail;
}

void require_finite(cplx v, const char* what, double t) {
  if (std::isfinite(v.real()) && std::isfinite(v.imag())) return;
  std::ostringstream os;
  os << "non-finite " << what << " at t = " << t;
  throw SimError(ErrorCode::kNonFinite, os.str(), t);
}

}  // namespace

const char* f_mode_name(FTermMode mode) {
  switch (mode) {
    case FTermMode::kMeanField: return "MeanField";
    case FTermMode::kNeglect: return "Neglect";
    case FTermMode::kFluctuations: return "Fluctuations";
  }
  return "MeanField";
}

bool parse_f_mode(const std::string& text, FTermMode& out) {
  for (FTermMode m : {FTermMode::kMeanField, FTermMode::kNeglect, FTermMode::kFluctuations}) {
    if (text == f_mode_name(m)) {
      out = m;
      return true;
    }
  }
  return false;
}

MeanQuadratures mean_quadratures(const MeanFieldState& s) {
  constexpr double r2 = std::numbers::sqrt2;
  return {r2 * s.beta1.real(), r2 * s.beta1.imag(), r2 * s.beta2.real(),
          r2 * s.beta2.imag()};
}

FTerms f_terms(const ModelParams& params, const ScalarKit& kit, cplx beta1,
               cplx beta2, bool strict_paper) {
  const ChainView c1 = detail::chain_view(params, kit, 1, beta1);
  const ChainView c2 = detail::chain_view(params, kit, 2, beta2);
  const cplx pref = kI * params.sigma_z_mean / kit.X;
  const double g_second = strict_paper ? params.g1 : params.g2;
  return {pref * params.g1 * f_bracket(c1, c2), pref * g_second * f_bracket(c2, c1)};
}

AmplitudeRates mean_field_drift(const MeanFieldState& state,
                                const ModelParams& params,
                                const DerivedConstants& derived,
                                const DriftOptions& options) {
  const ScalarKit kit =
      scalar_kit_eval(params, state.t, state.beta1, state.beta2, options.guard);
  const ChainView c1 = detail::chain_view(params, kit, 1, state.beta1);
  const ChainView c2 = detail::chain_view(params, kit, 2, state.beta2);
  const cplx pref = kI * params.sigma_z_mean / kit.X;
  const bool strict = options.strict_paper;

  AmplitudeRates r;
  r.dbeta1 = kI * derived.theta * c1.beta + damping(params, c1, false) +
             pref * (interaction_self(c1) + interaction_cross(c1, c2));
  r.dbeta2 = -kI * derived.theta * c2.beta + damping(params, c2, strict) +
             pref * ((strict ? interaction_self_literal(c2, c1) : interaction_self(c2)) +
                     interaction_cross(c2, c1));

  if (options.f_mode == FTermMode::kMeanField) {
    const FTerms f = f_terms(params, kit, state.beta1, state.beta2, strict);
    r.dbeta1 += f.F1;
    r.dbeta2 += f.F2;
  }
  require_finite(r.dbeta1, "dbeta1", state.t);
  require_finite(r.dbeta2, "dbeta2", state.t);
  return r;
}

AmplitudeRates mean_field_drift_lambda0(const MeanFieldState& state,
                                        const ModelParams& params,
                                        const DerivedConstants& derived,
                                        const DriftOptions& options) {
  const cplx b1 = state.beta1, b2 = state.beta2;
  const double n1 = params.N1, n2 = params.N2;
  const double m1 = std::norm(b1), m2 = std::norm(b2);
  const double A1 = 1.0 - m1 / (4.0 * n1), A2 = 1.0 - m2 / (4.0 * n2);
  const double X = coupling_denominator(params, b1, b2);
  if (!(std::abs(X) >= options.guard.x_eps))
    throw SimError(ErrorCode::kSingularCoupling, "singular coupling", state.t);
  const double g1 = params.g1, g2 = params.g2, gg = g1 * g2;
  const double gl = params.gamma_l, gnl = params.gamma_nl;
  const double snl = std::sqrt(gl * gnl);
  const cplx pref = kI * params.sigma_z_mean / X;
  const bool strict = options.strict_paper;

  cplx d1 = kI * derived.theta * b1 - 0.5 * gl * b1 - gnl / (n1 * n1) * m1 * m1 * b1 -
            2.0 * gnl / (n1 * n1) * m1 * b1 - 2.0 / n1 * snl * m1 * b1 +
            pref * (g1 * g1 * m1 * b1 / n1 - 3.0 * g1 * g1 * m1 * m1 * b1 / (16.0 * n1 * n1) -
                    g1 * g1 * b1 + gg * std::conj(b2) * A2 * b1 * b1 / (4.0 * n1) +
                    gg * A2 * b2 * (m1 * b1 / (4.0 * n1) - A1));

  cplx self2 = g2 * g2 * m2 * b2 / n2 - 3.0 * g2 * g2 * m2 * m2 * b2 / (16.0 * n2 * n2) -
               g2 * g2 * b2;
  if (strict) {
    self2 = g2 * g2 * (m2 / (2.0 * n2) - 1.0) * A2 * b1 +
            g2 * g2 * std::conj(b2) * A2 * b2 * b2 / (4.0 * n2);
  }
  const cplx cross_damp2 = strict ? 2.0 / n2 * snl * std::conj(b2) : 2.0 / n2 * snl * m2 * b2;
  cplx d2 = -kI * derived.theta * b2 - 0.5 * gl * b2 - gnl / (n2 * n2) * m2 * m2 * b2 -
            2.0 * gnl / (n2 * n2) * m2 * b2 - cross_damp2 +
            pref * (self2 + gg * std::conj(b1) * A1 * b2 * b2 / (4.0 * n2) +
                    gg * A1 * b1 * (m2 * b2 / (4.0 * n2) - A2));

  if (options.f_mode == FTermMode::kMeanField) {
    const cplx f1 = -2.0 * A1 * b1 + 3.0 * b1 * m1 / (2.0 * n1) - 2.0 * b1 +
                    b1 * b1 * std::conj(b2) * (3.0 * A2 + 1.0) / (2.0 * n1) +
                    (5.0 * m1 / (2.0 * n1) - 12.0 * A1 - 1.0) +
                    2.0 * b2 * (m1 / (4.0 * n1) - A1);
    const cplx f2 = -2.0 * A2 * b2 + 3.0 * b2 * m2 / (2.0 * n2) - 2.0 * b2 +
                    b2 * b2 * std::conj(b1) * (3.0 * A1 + 1.0) / (2.0 * n2) +
                    (5.0 * m2 / (2.0 * n2) - 12.0 * A2 - 1.0) +
                    2.0 * b1 * (m2 / (4.0 * n2) - A2);
    d1 += pref * g1 * f1;
    d2 += pref * (strict ? g1 : g2) * f2;
  }
  return {d1, d2};
}

MeanFieldTrajectory integrate_mean_field(const MeanFieldState& initial,
                                         const ModelParams& params,
                                         const IntegrationOptions& integration,
                                         const DriftOptions& drift) {
  if (!(integration.dt > 0.0))
    throw SimError(ErrorCode::kInvalidConfig, "dt must be > 0");
  if (integration.stride < 1)
    throw SimError(ErrorCode::kInvalidConfig, "stride must be >= 1");

  const DerivedConstants derived = derive_constants(params);
  double pole_side = 1.0;
  auto rhs = [&](double t, const StateVec<4>& y) {
    const MeanFieldState s{t, {y[0], y[1]}, {y[2], y[3]}};
    require_same_pole_side(params, s.beta1, s.beta2, pole_side, t);
    const AmplitudeRates r = mean_field_drift(s, params, derived, drift);
    return StateVec<4>{r.dbeta1.real(), r.dbeta1.imag(), r.dbeta2.real(), r.dbeta2.imag()};
  };

  MeanFieldTrajectory out;
  out.states.push_back(initial);
  StateVec<4> y{initial.beta1.real(), initial.beta1.imag(), initial.beta2.real(),
                initial.beta2.imag()};
  std::array<bool, 2> in_breakdown{false, false};
  const long long steps =
      static_cast<long long>(std::floor(integration.horizon / integration.dt + 1e-9));
  double t = initial.t;
  for (long long k = 0; k < steps; ++k) {
    try {
      pole_side = coupling_denominator(params, {y[0], y[1]}, {y[2], y[3]}) < 0.0 ? -1.0 : 1.0;
      y = rk4_step<4>(rhs, t, y, integration.dt);
      if (!all_finite(y))
        throw SimError(ErrorCode::kNonFinite, "non-finite amplitude", t + integration.dt);
      require_same_pole_side(params, {y[0], y[1]}, {y[2], y[3]}, pole_side,
                             t + integration.dt);
    } catch (const SimError& e) {
      out.status = e.code();
      out.message = e.what();
      out.failure_time = t;
      return out;
    }
    t = grid_time(initial.t, integration.dt, k + 1);
    const MeanFieldState s{t, {y[0], y[1]}, {y[2], y[3]}};

    const double occ[2] = {std::norm(s.beta1), std::norm(s.beta2)};
    const int nn[2] = {params.N1, params.N2};
    for (int j = 0; j < 2; ++j) {
      const bool broken = occ[j] >= drift.guard.hp_fraction * 2.0 * nn[j];
      if (broken && !in_breakdown[j]) {
        out.warnings.push_back({t, j + 1, occ[j]});
        if (integration.hp_policy == HPPolicy::kAbort) {
          out.states.push_back(s);
          out.status = ErrorCode::kHPBreakdown;
          out.message = "HP truncation invalid for chain " + std::to_string(j + 1);
          out.failure_time = t;
          return out;
        }
      }
      in_breakdown[j] = broken;
    }
    if ((k + 1) % integration.stride == 0 || k + 1 == steps) out.states.push_back(s);
  }
  return out;
}

std::array<OrbitSummary, 2> limit_cycle_extract(
    const std::vector<MeanFieldState>& traj, double t_a, double t_b) {
  std::array<OrbitSummary, 2> out;
  for (int j = 0; j < 2; ++j) {
    OrbitSummary& o = out[j];
    double sum_r2 = 0.0;
    std::vector<double> q;
    for (const MeanFieldState& s : traj) {
      if (s.t < t_a || s.t > t_b) continue;
      const MeanQuadratures mq = mean_quadratures(s);
      const double qj = j == 0 ? mq.q1 : mq.q2;
      const double pj = j == 0 ? mq.p1 : mq.p2;
      sum_r2 += qj * qj + pj * pj;
      q.push_back(qj);
      o.t.push_back(s.t);
      double ph = std::atan2(pj, qj);
      if (!o.phase.empty()) {
        const double prev = o.phase.back();
        ph += 2.0 * std::numbers::pi * std::round((prev - ph) / (2.0 * std::numbers::pi));
      }
      o.phase.push_back(ph);
    }
    if (o.t.empty()) throw SimError(ErrorCode::kEmptyWindow, "no samples in orbit window");
    o.amplitude = std::sqrt(sum_r2 / static_cast<double>(o.t.size()));
    if (o.amplitude < 1e-9)
      throw SimError(ErrorCode::kDegenerateOrbit,
                     "orbit " + std::to_string(j + 1) + " has vanishing radius");

    std::vector<double> crossings;
    for (std::size_t i = 1; i < q.size(); ++i) {
      if (q[i - 1] < 0.0 && q[i] >= 0.0) {
        const double f = -q[i - 1] / (q[i] - q[i - 1]);
        crossings.push_back(o.t[i - 1] + f * (o.t[i] - o.t[i - 1]));
      }
    }
    o.period = crossings.size() >= 2
                   ? (crossings.back() - crossings.front()) /
                         static_cast<double>(crossings.size() - 1)
                   : std::nan("");
  }
  return out;
}

}  // namespace spinsync
