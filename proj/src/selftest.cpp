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

// Fast invariant suite behind `spinsync selftest`. Every check compares the
// production path against an independent computation.

#include <algorithm>
#include <cmath>
#include <random>

#include "format.hpp"
#include "spinsync/metrics.hpp"
#include "spinsync/oracles.hpp"
#include "spinsync/scenario.hpp"

namespace spinsync {

namespace {

using detail::format_double;

constexpr std::uint64_t kSeed = 20260101;

SelftestCheck complex_oracle_check(const SelftestOptions& opt) {
  std::mt19937_64 rng(kSeed);
  std::uniform_real_distribution<double> u(-0.2, 0.2);
  const auto assembler = opt.assembler ? opt.assembler : assemble_drift_matrix;
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    CoeffArray E;
    for (cplx& e : E) e = {u(rng), u(rng)};
    const cplx db1{u(rng), u(rng)}, db2{u(rng), u(rng)};
    worst = std::max(worst, complex_quadrature_deviation(E, db1, db2, 10.0, 1e-3, assembler));
  }
  return {"complex_oracle", worst < 1e-8, false, "max deviation " + format_double(worst)};
}

SelftestCheck fixed_point_check(const SelftestOptions& opt) {
  DriftOptions d;
  d.f_mode = FTermMode::kNeglect;
  d.strict_paper = opt.strict_paper;
  bool ok = true;
  for (const char* name : {"fig2a", "fig2d", "fig2g"}) {
    const ModelParams p = preset(name).params;
    const AmplitudeRates r = mean_field_drift({0.0, {}, {}}, p, derive_constants(p), d);
    ok = ok && r.dbeta1 == cplx{} && r.dbeta2 == cplx{};
  }
  return {"fixed_point", ok, false, "Neglect drift at beta = 0 is exactly zero"};
}

SelftestCheck origin_f_term_check(const SelftestOptions& opt) {
  DriftOptions d;
  d.f_mode = FTermMode::kMeanField;
  d.strict_paper = opt.strict_paper;
  const ModelParams p = preset("fig2a").params;
  const AmplitudeRates r = mean_field_drift({0.0, {}, {}}, p, derive_constants(p), d);
  // Symbolic value at the origin: -13 i g_j <sz> / X with X = -sum g_j sqrt(N_j).
  const double X = -(p.g1 * std::sqrt(double(p.N1)) + p.g2 * std::sqrt(double(p.N2)));
  const double g2 = opt.strict_paper ? p.g1 : p.g2;
  const cplx want1{0.0, -13.0 * p.g1 * p.sigma_z_mean / X};
  const cplx want2{0.0, -13.0 * g2 * p.sigma_z_mean / X};
  const double err = std::max(std::abs(r.dbeta1 - want1), std::abs(r.dbeta2 - want2));
  return {"origin_f_term", err < 1e-12, false, "max error " + format_double(err)};
}

SelftestCheck lambda0_check(const SelftestOptions& opt) {
  std::mt19937_64 rng(kSeed + 1);
  std::uniform_real_distribution<double> u(-1.5, 1.5), ut(0.0, 1.0e4);
  ModelParams p = preset("fig2a").params;
  const DerivedConstants dc = derive_constants(p);
  DriftOptions d;
  d.strict_paper = opt.strict_paper;
  double worst = 0.0;
  int evaluated = 0;
  for (FTermMode mode : {FTermMode::kMeanField, FTermMode::kNeglect}) {
    d.f_mode = mode;
    while (evaluated < 1000 * (mode == FTermMode::kMeanField ? 1 : 2)) {
      const MeanFieldState s{ut(rng), {u(rng), u(rng)}, {u(rng), u(rng)}};
      if (std::abs(coupling_denominator(p, s.beta1, s.beta2)) < 0.5) continue;
      const AmplitudeRates a = mean_field_drift(s, p, dc, d);
      const AmplitudeRates b = mean_field_drift_lambda0(s, p, dc, d);
      worst = std::max({worst, std::abs(a.dbeta1 - b.dbeta1), std::abs(a.dbeta2 - b.dbeta2)});
      ++evaluated;
    }
  }
  return {"lambda0_reduction", worst < 1e-12, false,
          std::to_string(evaluated) + " points, max difference " + format_double(worst)};
}

ModelParams symmetric_params() {
  ModelParams p;
  p.g1 = p.g2 = 1.5;
  p.omega1 = p.omega2 = 1.0;
  p.N1 = p.N2 = 5;
  return p;
}

SelftestCheck exchange_symmetry_check(const SelftestOptions& opt) {
  std::mt19937_64 rng(kSeed + 2);
  std::uniform_real_distribution<double> u(-1.2, 1.2), ut(0.0, 100.0);
  const ModelParams p = symmetric_params();
  const DerivedConstants dc = derive_constants(p);
  DriftOptions d;
  d.strict_paper = opt.strict_paper;
  double worst = 0.0;
  for (FTermMode mode : {FTermMode::kMeanField, FTermMode::kNeglect}) {
    d.f_mode = mode;
    for (int i = 0; i < 200; ++i) {
      const cplx b{u(rng), u(rng)};
      const MeanFieldState s{ut(rng), b, b};
      if (std::abs(coupling_denominator(p, b, b)) < 0.5) continue;
      const AmplitudeRates r = mean_field_drift(s, p, dc, d);
      worst = std::max(worst, std::abs(r.dbeta1 - r.dbeta2));
    }
  }
  const bool ok = worst < 1e-12;
  return {"exchange_symmetry", ok, opt.strict_paper,
          "max |dbeta1 - dbeta2| at equal amplitudes " + format_double(worst)};
}

SelftestCheck symmetry_run_check(const SelftestOptions& opt) {
  IntegrationOptions io;
  io.dt = 0.01;
  io.horizon = 1.0e3;
  io.stride = 1;
  DriftOptions d;
  d.f_mode = FTermMode::kNeglect;
  d.strict_paper = opt.strict_paper;
  const cplx b0{0.8, 0.3};
  const MeanFieldTrajectory tr = integrate_mean_field({0.0, b0, b0}, symmetric_params(), io, d);
  double worst = 0.0;
  for (const MeanFieldState& s : tr.states)
    worst = std::max(worst, std::abs(s.beta1 - s.beta2));
  const bool ok = tr.status == ErrorCode::kOk && worst < 1e-9;
  std::string detail = "max |beta1 - beta2| over 1e3 " + format_double(worst);
  if (tr.status != ErrorCode::kOk) detail += "; " + tr.message;
  return {"symmetry_run", ok, opt.strict_paper, detail};
}

SelftestCheck psd_batch_check() {
  std::mt19937_64 rng(kSeed + 3);
  std::normal_distribution<double> n01;
  auto random_mat = [&](double scale) {
    Mat4 m;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) m(i, j) = scale * n01(rng);
    return m;
  };
  double worst = 0.0;
  for (int c = 0; c < 100; ++c) {
    Mat4 A = random_mat(1.0);
    if (c % 4 == 0) A.col(3).setZero();  // include singular starting points
    const Mat4 C0 = A * A.transpose();
    const Mat4 M0 = random_mat(0.5), M1 = random_mat(0.5);
    Mat4 B = random_mat(0.3);
    if (c % 3 == 0) B.col(0).setZero();
    const Mat4 D = B * B.transpose();
    CovarianceOptions o;
    o.dt = 0.01;
    o.steps = 100;
    o.stride = 1;
    o.eig_stride = 1;
    o.psd_tol = 1e-9;
    try {
      const auto states = propagate_covariance(
          {0.0, C0}, [&](double t) -> Mat4 { return M0 + std::sin(t) * M1; },
          [&](double) -> Mat4 { return D; }, o);
      for (const CovarianceState& s : states) worst = std::min(worst, min_eigenvalue(s.C));
    } catch (const SimError& e) {
      return {"psd_batch", false, false, std::string("case ") + std::to_string(c) + ": " + e.what()};
    }
  }
  return {"psd_batch", worst >= -1e-9, false, "min eigenvalue " + format_double(worst)};
}

SelftestCheck sync_identity_check() {
  std::mt19937_64 rng(kSeed + 4);
  std::normal_distribution<double> n01;
  std::uniform_real_distribution<double> uphi(-3.0, 3.0);
  double worst = 0.0;
  for (int c = 0; c < 200; ++c) {
    Mat4 A;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) A(i, j) = 0.5 * n01(rng);
    const Mat4 C = A * A.transpose() + 0.5 * Mat4::Identity();
    const double phi = uphi(rng);
    // Rotating oscillator 2 by phi in its phase plane turns the phi measure
    // into the plain one.
    Mat4 R = Mat4::Identity();
    R(2, 2) = std::cos(phi);
    R(2, 3) = std::sin(phi);
    R(3, 2) = -std::sin(phi);
    R(3, 3) = std::cos(phi);
    const double a = quantum_sync_phi(C, phi);
    const double b = quantum_sync(R * C * R.transpose());
    worst = std::max({worst, std::abs(a - b) / std::abs(b),
                      std::abs(quantum_sync_phi(C, 0.0) - quantum_sync(C)),
                      std::abs(quantum_sync_phi(C, phi + 2.0 * std::numbers::pi) - a) / a});
  }
  const double vac = quantum_sync(0.5 * Mat4::Identity());
  const double id = quantum_sync(Mat4::Identity());
  const bool ok = worst < 1e-12 && std::abs(vac - 1.0) < 1e-15 && std::abs(id - 0.5) < 1e-15;
  return {"sync_identities", ok, false, "max relative error " + format_double(worst)};
}

}  // namespace

std::vector<SelftestCheck> selftest(const SelftestOptions& options) {
  std::vector<SelftestCheck> out;
  auto guarded = [&out](const char* name, auto&& fn) {
    try {
      out.push_back(fn());
    } catch (const std::exception& e) {
      out.push_back({name, false, false, std::string("exception: ") + e.what()});
    }
  };
  guarded("complex_oracle", [&] { return complex_oracle_check(options); });
  guarded("fixed_point", [&] { return fixed_point_check(options); });
  guarded("origin_f_term", [&] { return origin_f_term_check(options); });
  guarded("lambda0_reduction", [&] { return lambda0_check(options); });
  guarded("exchange_symmetry", [&] { return exchange_symmetry_check(options); });
  guarded("symmetry_run", [&] { return symmetry_run_check(options); });
  guarded("psd_batch", [] { return psd_batch_check(); });
  guarded("sync_identities", [] { return sync_identity_check(); });
  return out;
}

bool selftest_passed(const std::vector<SelftestCheck>& checks) {
  return std::all_of(checks.begin(), checks.end(),
                     [](const SelftestCheck& c) { return c.passed || c.expected_different; });
}

}  // namespace spinsync
