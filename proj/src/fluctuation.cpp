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

#include "spinsync/fluctuation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "chain_view.hpp"
#include "spinsync/integrator.hpp"

namespace spinsync {

namespace {

constexpr cplx kI{0.0, 1.0};
using detail::ChainView;

// Coefficient of db_s in the equation for chain s (E1 / E7).
// `inv_n_scale` multiplies the bare e^{-R a}/N term of the second bracket;
// the coefficients carry 1/N1 for the first chain and 1/(2 N2) for
// the second.
cplx diag_coeff(const ModelParams& p, const ChainView& s, const ChainView& o,
                double theta_sign, double theta, cplx pref, double g_self,
                double inv_n_scale) {
  const double m = std::norm(s.beta);
  const double n = s.n;
  const double gg = s.g * o.g;
  const cplx es = std::exp(s.R * s.a);
  const cplx ems = std::exp(-s.R * s.a);
  const cplx R = s.R;

  const cplx damp = theta_sign * kI * theta - 0.5 * p.gamma_l -
                    (3.0 / n) * p.gamma_nl * m * m - (4.0 / (n * n)) * p.gamma_nl * m -
                    (4.0 / n) * std::sqrt(p.gamma_l * p.gamma_nl) * m;

  const cplx group1 = gg * o.A * s.beta * std::conj(o.beta) * std::exp(-o.R * o.a) *
                      (es / (2.0 * n) + R * std::conj(s.beta) / (2.0 * n) +
                       R * m * es / (2.0 * n) - 4.0 * R * R * s.A * m - 4.0 * R * s.A * es);
  const cplx group2 = gg * o.A * std::conj(s.beta) * o.beta * std::exp(o.R * o.a) *
                      (-R * m / (2.0 * n) + inv_n_scale * ems / n - 4.0 * R * R * m * s.A +
                       2.0 * R * ems * s.A + 2.0 * R * s.A - R * ems * m / (2.0 * n));

  const double self = g_self * (3.0 * m / (2.0 * n) - 9.0 * m * m / (16.0 * n * n) - 1.0);
  return damp + pref * (self + group1 + group2);
}

// Coefficient of db_s^dagger in the equation for chain s (E2 / E8).
cplx conj_coeff(const ModelParams& p, const ChainView& s, const ChainView& o, cplx pref,
                double g_self) {
  const double m = std::norm(s.beta);
  const double n = s.n;
  const double gg = s.g * o.g;
  const cplx b2 = s.beta * s.beta;
  const cplx es = std::exp(s.R * s.a);
  const cplx ems = std::exp(-s.R * s.a);
  const cplx R = s.R;

  const cplx damp = -(2.0 / (n * n)) * p.gamma_nl * m * b2 -
                    (2.0 / (n * n)) * p.gamma_nl * b2 -
                    (2.0 / n) * std::sqrt(p.gamma_l * p.gamma_nl) * b2;

  const cplx group1 = gg * R * o.A * b2 * std::conj(o.beta) * std::exp(-o.R * o.a) *
                      (1.0 / (2.0 * n) + s.beta * es / (2.0 * n) - 4.0 * R * s.A * s.beta);
  const cplx group2 = gg * o.A * s.beta * o.beta * std::exp(o.R * o.a) *
                      (ems / (2.0 * n) - R * m / (2.0 * n) + 2.0 * R * s.A * ems -
                       4.0 * s.A * R * R * m - R * m * ems / (2.0 * n) + 2.0 * R * s.A);

  const double self = g_self * (3.0 * m / (2.0 * n) - 9.0 * m * m / (16.0 * n * n) - 1.0);
  return damp + pref * (self + group1 + group2);
}

// Coefficient of db_o in the equation for chain s (E3 / E5).
cplx cross_coeff(const ChainView& s, const ChainView& o, cplx pref) {
  const double ms = std::norm(s.beta), mo = std::norm(o.beta);
  const cplx Rs = s.R, Ro = o.R;
  const cplx eo = std::exp(Ro * o.a), emo = std::exp(-Ro * o.a);
  const cplx tail = ms / (4.0 * s.n) + 2.0 * Rs * s.A * ms - s.A;
  const cplx co = std::conj(o.beta);
  return pref * s.g * o.g *
         (s.beta * s.beta * co * co * std::exp(Rs * s.a) *
              (2.0 * Ro * o.A + emo / (4.0 * o.n)) * (2.0 * Rs * s.A - 1.0 / (4.0 * s.n)) +
          std::exp(-Rs * s.a) *
              (2.0 * o.A * Ro * mo - eo * mo / (4.0 * o.n) + o.A * eo) * tail);
}

// Coefficient of db_o^dagger in the equation for chain s (E4 / E6).
cplx cross_conj_coeff(const ChainView& s, const ChainView& o, cplx pref) {
  const double ms = std::norm(s.beta), mo = std::norm(o.beta);
  const cplx Rs = s.R, Ro = o.R;
  const cplx eo = std::exp(Ro * o.a), emo = std::exp(-Ro * o.a);
  const cplx tail = ms / (4.0 * s.n) + 2.0 * Rs * s.A * ms - s.A;
  return pref * s.g * o.g *
         (std::exp(Rs * s.a) * s.beta * s.beta *
              (-2.0 * Ro * o.A * mo + o.A * emo - emo * mo / (4.0 * o.n)) *
              (1.0 / (4.0 * s.n) - 2.0 * Rs * s.A) +
          std::exp(-Rs * s.a) * o.beta * o.beta * (2.0 * Ro * o.A - eo / (4.0 * o.n)) * tail);
}

bool finite(cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

}  // namespace

DriftAssembly fluct_coeffs(const MeanFieldState& state, const ModelParams& params,
                           const DerivedConstants& derived, const DriftOptions& options) {
  const ScalarKit kit =
      scalar_kit_eval(params, state.t, state.beta1, state.beta2, options.guard);
  const ChainView c1 = detail::chain_view(params, kit, 1, state.beta1);
  const ChainView c2 = detail::chain_view(params, kit, 2, state.beta2);
  const cplx pref = kI * params.sigma_z_mean / kit.X;
  const bool strict = options.strict_paper;
  const double gs1 = strict ? params.g1 : params.g1 * params.g1;
  const double gs2 = strict ? params.g2 : params.g2 * params.g2;

  DriftAssembly d;
  d.E[0] = diag_coeff(params, c1, c2, +1.0, derived.theta, pref, gs1, 1.0);
  d.E[1] = conj_coeff(params, c1, c2, pref, gs1);
  d.E[2] = cross_coeff(c1, c2, pref);
  d.E[3] = cross_conj_coeff(c1, c2, pref);
  d.E[4] = cross_coeff(c2, c1, pref);
  d.E[5] = cross_conj_coeff(c2, c1, pref);
  d.E[6] = diag_coeff(params, c2, c1, -1.0, derived.theta, pref, gs2, 0.5);
  d.E[7] = conj_coeff(params, c2, c1, pref, gs2);

  const FTerms f = f_terms(params, kit, state.beta1, state.beta2, strict);
  d.F1 = f.F1;
  d.F2 = f.F2;
  d.U1 = kit.U1;
  d.U2 = kit.U2;

  for (std::size_t i = 0; i < d.E.size(); ++i) {
    if (!finite(d.E[i])) {
      std::ostringstream os;
      os << "non-finite E" << (i + 1) << " at t = " << state.t << " (beta1 = " << state.beta1
         << ", beta2 = " << state.beta2 << ", R1 = " << kit.R1 << ", X = " << kit.X << ")";
      throw SimError(ErrorCode::kNonFinite, os.str(), state.t);
    }
  }
  d.M = assemble_drift_matrix(d.E);
  d.D = diffusion_matrix(d.U1, d.U2, params.n_m);
  return d;
}

Mat4 assemble_drift_matrix(const CoeffArray& E) {
  Mat4 M;
  // Rows (2j, 2j+1) come from chain j; columns (2k, 2k+1) from chain k.
  for (int row = 0; row < 2; ++row) {
    for (int col = 0; col < 2; ++col) {
      const cplx a = E[4 * row + 2 * col];      // coefficient of db_k
      const cplx b = E[4 * row + 2 * col + 1];  // coefficient of db_k^dagger
      const cplx sum = a + b, diff = a - b;
      M(2 * row, 2 * col) = sum.real();
      M(2 * row, 2 * col + 1) = -diff.imag();
      M(2 * row + 1, 2 * col) = sum.imag();
      M(2 * row + 1, 2 * col + 1) = diff.real();
    }
  }
  return M;
}

Mat4 diffusion_matrix(cplx U1, cplx U2, double n_m) {
  const double v1 = std::norm(U1) * (n_m + 0.5);
  const double v2 = std::norm(U2) * (n_m + 0.5);
  return Vec4(v1, v1, v2, v2).asDiagonal();
}

Mat4 lyapunov_rhs(const Mat4& M, const Mat4& C, const Mat4& D) {
  return M * C + C * M.transpose() + D;
}

Mat4 symmetrize(const Mat4& C) { return 0.5 * (C + C.transpose()); }

double min_eigenvalue(const Mat4& C) {
  Eigen::SelfAdjointEigenSolver<Mat4> es(C, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

std::array<double, 10> pack_upper(const Mat4& C) {
  std::array<double, 10> v;
  int k = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) v[k++] = C(i, j);
  return v;
}

Mat4 unpack_upper(const std::array<double, 10>& v) {
  Mat4 C;
  int k = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) {
      C(i, j) = v[k];
      C(j, i) = v[k];
      ++k;
    }
  return C;
}

namespace {

void check_psd(const Mat4& C, double t, double tol) {
  const double lo = min_eigenvalue(C);
  if (lo < -tol) {
    std::ostringstream os;
    os << "covariance lost positive semidefiniteness at t = " << t
       << " (min eigenvalue " << lo << ")";
    throw SimError(ErrorCode::kPSDViolation, os.str(), t);
  }
}

}  // namespace

std::vector<CovarianceState> propagate_covariance(const CovarianceState& initial,
                                                  const MatrixOfTime& drift,
                                                  const MatrixOfTime& diffusion,
                                                  const CovarianceOptions& options) {
  auto rhs = [&](double t, const StateVec<10>& y) {
    std::array<double, 10> packed;
    std::copy(y.begin(), y.end(), packed.begin());
    return pack_upper(lyapunov_rhs(drift(t), unpack_upper(packed), diffusion(t)));
  };

  std::vector<CovarianceState> out{{initial.t, symmetrize(initial.C)}};
  StateVec<10> y = pack_upper(out.front().C);
  for (long long k = 0; k < options.steps; ++k) {
    const double t = grid_time(initial.t, options.dt, k);
    y = rk4_step<10>(rhs, t, y, options.dt);
    const double t_next = grid_time(initial.t, options.dt, k + 1);
    if (!all_finite(y))
      throw SimError(ErrorCode::kNonFinite, "non-finite covariance", t_next);
    const Mat4 C = unpack_upper(y);
    if (options.eig_stride > 0 && (k + 1) % options.eig_stride == 0)
      check_psd(C, t_next, options.psd_tol);
    if ((k + 1) % options.stride == 0 || k + 1 == options.steps)
      out.push_back({t_next, C});
  }
  return out;
}

namespace {

// Combined state: beta (4 reals), C upper triangle (10), fluctuation mean (4).
constexpr std::size_t kCoDim = 18;
using CoVec = StateVec<kCoDim>;

struct CoView {
  MeanFieldState mf;
  Mat4 C;
  Vec4 mean;
};

CoView unpack(double t, const CoVec& y) {
  CoView v;
  v.mf = {t, {y[0], y[1]}, {y[2], y[3]}};
  std::array<double, 10> c;
  std::copy(y.begin() + 4, y.begin() + 14, c.begin());
  v.C = unpack_upper(c);
  v.mean = Vec4(y[14], y[15], y[16], y[17]);
  return v;
}

CoVec pack(const MeanFieldState& mf, const Mat4& C, const Vec4& mean) {
  CoVec y;
  y[0] = mf.beta1.real();
  y[1] = mf.beta1.imag();
  y[2] = mf.beta2.real();
  y[3] = mf.beta2.imag();
  const auto c = pack_upper(C);
  std::copy(c.begin(), c.end(), y.begin() + 4);
  for (int i = 0; i < 4; ++i) y[14 + i] = mean(i);
  return y;
}

double min_mode_det(const Mat4& C) {
  return std::min(C.block<2, 2>(0, 0).determinant(), C.block<2, 2>(2, 2).determinant());
}

}  // namespace

CoTrajectory co_integrate(const MeanFieldState& initial, const Mat4& C0,
                          const ModelParams& params, const CoIntegrationOptions& options,
                          const std::function<void(const CoSample&)>& on_step) {
  const IntegrationOptions& io = options.integration;
  if (!(io.dt > 0.0)) throw SimError(ErrorCode::kInvalidConfig, "dt must be > 0");
  if (io.stride < 1) throw SimError(ErrorCode::kInvalidConfig, "stride must be >= 1");

  const DerivedConstants derived = derive_constants(params);
  const bool f_in_fluct = options.drift.f_mode == FTermMode::kFluctuations;
  constexpr double r2 = std::numbers::sqrt2;

  double pole_side = 1.0;
  auto rhs = [&](double t, const CoVec& y) {
    const CoView v = unpack(t, y);
    require_same_pole_side(params, v.mf.beta1, v.mf.beta2, pole_side, t);
    const AmplitudeRates mf = mean_field_drift(v.mf, params, derived, options.drift);
    const DriftAssembly d = fluct_coeffs(v.mf, params, derived, options.drift);
    Mat4 dC = lyapunov_rhs(d.M, v.C, d.D);
    Vec4 dmean = Vec4::Zero();
    if (f_in_fluct) {
      const Vec4 f(r2 * d.F1.real(), r2 * d.F1.imag(), r2 * d.F2.real(), r2 * d.F2.imag());
      dmean = d.M * v.mean + f;
      dC += v.mean * f.transpose() + f * v.mean.transpose();
    }
    MeanFieldState rates{t, mf.dbeta1, mf.dbeta2};
    return pack(rates, dC, dmean);
  };

  CoTrajectory out;
  const Mat4 Cs = symmetrize(C0);
  out.min_eigenvalue = min_eigenvalue(Cs);
  out.min_mode_det = min_mode_det(Cs);
  CoVec y = pack(initial, Cs, Vec4::Zero());
  {
    const CoSample s0{initial.t, initial.beta1, initial.beta2, Cs};
    out.samples.push_back(s0);
    if (on_step) on_step(s0);
  }

  std::array<bool, 2> in_breakdown{false, false};
  const long long steps = static_cast<long long>(std::floor(io.horizon / io.dt + 1e-9));
  double t = initial.t;
  for (long long k = 0; k < steps; ++k) {
    CoSample s;
    try {
      pole_side = coupling_denominator(params, {y[0], y[1]}, {y[2], y[3]}) < 0.0 ? -1.0 : 1.0;
      y = rk4_step<kCoDim>(rhs, t, y, io.dt);
      t = grid_time(initial.t, io.dt, k + 1);
      if (!all_finite(y)) throw SimError(ErrorCode::kNonFinite, "non-finite state", t);
      const CoView v = unpack(t, y);
      require_same_pole_side(params, v.mf.beta1, v.mf.beta2, pole_side, t);
      // Re-pack so the stored upper triangle and the emitted matrix agree.
      s = {t, v.mf.beta1, v.mf.beta2, v.C};
      if (options.eig_stride > 0 && (k + 1) % options.eig_stride == 0) {
        out.min_eigenvalue = std::min(out.min_eigenvalue, min_eigenvalue(v.C));
        out.min_mode_det = std::min(out.min_mode_det, min_mode_det(v.C));
        check_psd(v.C, t, options.psd_tol);
      }
    } catch (const SimError& e) {
      out.status = e.code();
      out.message = e.what();
      out.failure_time = std::isnan(e.time()) ? t : e.time();
      return out;
    }
    out.steps_taken = k + 1;

    const double occ[2] = {std::norm(s.beta1), std::norm(s.beta2)};
    const int nn[2] = {params.N1, params.N2};
    for (int j = 0; j < 2; ++j) {
      const bool broken = occ[j] >= options.drift.guard.hp_fraction * 2.0 * nn[j];
      if (broken && !in_breakdown[j]) {
        out.warnings.push_back({t, j + 1, occ[j]});
        if (io.hp_policy == HPPolicy::kAbort) {
          out.samples.push_back(s);
          out.status = ErrorCode::kHPBreakdown;
          out.message = "HP truncation invalid for chain " + std::to_string(j + 1);
          out.failure_time = t;
          return out;
        }
      }
      in_breakdown[j] = broken;
    }
    if (on_step) on_step(s);
    if ((k + 1) % io.stride == 0 || k + 1 == steps) out.samples.push_back(s);
  }
  return out;
}

}  // namespace spinsync
