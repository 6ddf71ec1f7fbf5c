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


#include <doctest.h>

#include <cmath>
#include <random>

#include "spinsync/errors.hpp"
#include "spinsync/fluctuation.hpp"
#include "spinsync/oracles.hpp"

using namespace spinsync;

namespace {

DriftAssembly coeffs_at(const ModelParams& p, cplx b1, cplx b2, double t = 0.0,
                        FTermMode m = FTermMode::kMeanField) {
  DriftOptions d;
  d.f_mode = m;
  return fluct_coeffs({t, b1, b2}, p, derive_constants(p), d);
}

}  // namespace

TEST_CASE("no cross coupling without the central spin") {
  ModelParams p;
  p.sigma_z_mean = 0.0;
  p.lambda = 0.2;
  const DerivedConstants d = derive_constants(p);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const DriftAssembly a = coeffs_at(p, cplx(u(rng), u(rng)), cplx(u(rng), u(rng)), 3.0 * i);
    for (int k = 2; k <= 5; ++k) CHECK(a.E[k] == cplx{});
    CHECK(a.F1 == cplx{});
    CHECK(a.F2 == cplx{});
  }
  const DriftAssembly origin = coeffs_at(p, 0.0, 0.0);
  CHECK(std::abs(origin.E[0] - cplx(-0.5 * p.gamma_l, d.theta)) < 1e-15);
}

TEST_CASE("diagonal coefficient at the origin") {
  ModelParams p;
  p.lambda = 0.2;
  const DriftAssembly a = coeffs_at(p, 0.0, 0.0);
  // i theta - gamma_l / 2 - i <sz> g1^2 / X, theta = -0.0236, X = -3.9 sqrt(5).
  CHECK(std::abs(a.E[0].real() - (-0.0005)) < 1e-15);
  CHECK(std::abs(a.E[0].imag() - (-0.049400784355766804)) < 1e-12);
  CHECK(std::abs(a.E[0] - cplx(-0.0005, -0.0494)) < 1e-5);
}

TEST_CASE("noise amplitudes and diffusion at the origin") {
  ModelParams p;
  const DriftAssembly a = coeffs_at(p, 0.0, 0.0);
  CHECK(a.U1 == cplx(std::sqrt(p.gamma_l), 0.0));
  CHECK(a.U2 == cplx(std::sqrt(p.gamma_l), 0.0));
  const Mat4 D = diffusion_matrix(a.U1, a.U2, 0.0);
  CHECK(D.isApprox(5e-4 * Mat4::Identity(), 1e-14));
  const Mat4 D1 = diffusion_matrix(a.U1, a.U2, 1.0);
  CHECK((D1 - 3.0 * D).cwiseAbs().maxCoeff() < 1e-18);
  CHECK(diffusion_matrix(0.0, 0.0, 2.0).isZero(0.0));
}

TEST_CASE("diffusion vanishes without dissipation") {
  ModelParams p;
  p.gamma_l = 0.0;
  p.gamma_nl = 0.0;
  const DriftAssembly a = coeffs_at(p, cplx(0.4, 0.1), cplx(-0.2, 0.3));
  CHECK(a.D.isZero(0.0));
}

TEST_CASE("drift matrix blocks") {
  CoeffArray E{};
  E[0] = cplx(0.0, 0.3);
  Mat4 M = assemble_drift_matrix(E);
  CHECK(M(0, 0) == 0.0);
  CHECK(M(0, 1) == -0.3);
  CHECK(M(1, 0) == 0.3);
  CHECK(M(1, 1) == 0.0);
  CHECK(M.block<2, 2>(0, 2).isZero(0.0));
  CHECK(M.block<2, 2>(2, 0).isZero(0.0));

  E = {};
  E[1] = 0.7;
  M = assemble_drift_matrix(E);
  CHECK(M(0, 0) == 0.7);
  CHECK(M(1, 1) == -0.7);
  CHECK(M(0, 1) == 0.0);
  CHECK(M(1, 0) == 0.0);
}

TEST_CASE("quadrature drift reproduces the complex dynamics") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-0.25, 0.25);
  for (int trial = 0; trial < 25; ++trial) {
    CoeffArray E;
    for (cplx& e : E) e = {u(rng), u(rng)};
    const double dev = complex_quadrature_deviation(E, cplx(u(rng), u(rng)), cplx(u(rng), u(rng)),
                                                    10.0, 1e-3);
    CHECK(dev < 1e-8);
  }
}

TEST_CASE("a sign flip in the drift matrix is detected") {
  CoeffArray E;
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> u(-0.25, 0.25);
  for (cplx& e : E) e = {u(rng), u(rng)};
  auto flipped = [](const CoeffArray& e) {
    Mat4 M = assemble_drift_matrix(e);
    M(1, 0) = -M(1, 0);
    return M;
  };
  CHECK(complex_quadrature_deviation(E, 0.1, cplx(0.0, 0.2), 10.0, 1e-3, flipped) > 1e-4);
}

TEST_CASE("pack and unpack the covariance") {
  Mat4 C;
  C << 1, 2, 3, 4, 2, 5, 6, 7, 3, 6, 8, 9, 4, 7, 9, 10;
  const auto v = pack_upper(C);
  for (int i = 0; i < 10; ++i) CHECK(v[i] == i + 1);
  CHECK(unpack_upper(v) == C);
}

TEST_CASE("pure diffusion grows linearly") {
  CovarianceOptions o;
  o.dt = 0.01;
  o.steps = 500;
  o.stride = 50;
  const double d = 0.3;
  const auto states = propagate_covariance(
      {}, [](double) -> Mat4 { return Mat4::Zero(); },
      [d](double) -> Mat4 { return d * Mat4::Identity(); }, o);
  REQUIRE(states.size() == 11);
  for (const CovarianceState& s : states) {
    const Mat4 want = (0.5 + d * s.t) * Mat4::Identity();
    CHECK((s.C - want).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("thermal relaxation to n + 1/2") {
  const double gamma = 0.5, nbar = 1.0;
  CovarianceOptions o;
  o.dt = 0.01;
  o.steps = 10000;
  o.stride = 200;
  const auto states = propagate_covariance(
      {}, [&](double) -> Mat4 { return -0.5 * gamma * Mat4::Identity(); },
      [&](double) -> Mat4 { return gamma * (nbar + 0.5) * Mat4::Identity(); }, o);
  // Scalar Lyapunov solution: c(t) = c_inf + (c0 - c_inf) exp(-gamma t).
  for (const CovarianceState& s : states) {
    const double c = (nbar + 0.5) + (0.5 - (nbar + 0.5)) * std::exp(-gamma * s.t);
    CHECK((s.C - c * Mat4::Identity()).cwiseAbs().maxCoeff() < 1e-10);
  }
  CHECK((states.back().C - (nbar + 0.5) * Mat4::Identity()).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("PSD violation is reported") {
  CovarianceOptions o;
  o.dt = 0.01;
  o.steps = 10;
  o.eig_stride = 1;
  CovarianceState bad;
  bad.C = -Mat4::Identity();
  try {
    propagate_covariance(bad, [](double) -> Mat4 { return Mat4::Zero(); },
                         [](double) -> Mat4 { return Mat4::Zero(); }, o);
    FAIL("expected PSDViolation");
  } catch (const SimError& e) {
    CHECK(e.code() == ErrorCode::kPSDViolation);
  }
}

TEST_CASE("co-integration keeps C symmetric and decoupled without the central spin") {
  ModelParams p;
  p.sigma_z_mean = 0.0;
  p.lambda = 0.2;
  CoIntegrationOptions o;
  o.integration.dt = 0.01;
  o.integration.horizon = 50.0;
  o.integration.stride = 1;
  o.drift.f_mode = FTermMode::kMeanField;
  const auto tr = co_integrate({0.0, cplx(0.7, 0.1), cplx(-0.3, 0.5)}, 0.5 * Mat4::Identity(), p, o);
  REQUIRE(tr.status == ErrorCode::kOk);
  CHECK(tr.samples.size() == 5001);
  for (const CoSample& s : tr.samples) {
    CHECK((s.C - s.C.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(s.C.block<2, 2>(0, 2).isZero(0.0));
  }
  CHECK(tr.min_eigenvalue > 0.0);
}

TEST_CASE("co-integration matches separate mean-field integration") {
  ModelParams p;
  p.lambda = 0.2;
  CoIntegrationOptions o;
  o.integration.dt = 0.01;
  o.integration.horizon = 4.0;
  o.integration.stride = 100;
  o.drift.f_mode = FTermMode::kMeanField;
  const auto co = co_integrate({}, 0.5 * Mat4::Identity(), p, o);
  const auto mf = integrate_mean_field({}, p, o.integration, o.drift);
  REQUIRE(co.status == ErrorCode::kOk);
  REQUIRE(co.samples.size() == mf.states.size());
  for (size_t i = 0; i < mf.states.size(); ++i) {
    CHECK(co.samples[i].beta1 == mf.states[i].beta1);
    CHECK(co.samples[i].beta2 == mf.states[i].beta2);
  }
}

TEST_CASE("fluctuation mean feeds the covariance only in Fluctuations mode") {
  ModelParams p;
  p.lambda = 0.2;
  CoIntegrationOptions o;
  o.integration.dt = 0.01;
  o.integration.horizon = 2.0;
  o.integration.stride = 200;
  o.drift.f_mode = FTermMode::kNeglect;
  const auto base = co_integrate({0.0, 0.3, 0.2}, 0.5 * Mat4::Identity(), p, o);
  o.drift.f_mode = FTermMode::kFluctuations;
  const auto with_f = co_integrate({0.0, 0.3, 0.2}, 0.5 * Mat4::Identity(), p, o);
  REQUIRE(base.status == ErrorCode::kOk);
  REQUIRE(with_f.status == ErrorCode::kOk);
  CHECK(base.samples.back().beta1 == with_f.samples.back().beta1);
  CHECK((base.samples.back().C - with_f.samples.back().C).cwiseAbs().maxCoeff() > 1e-8);
}
