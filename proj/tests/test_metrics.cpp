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
#include <numbers>
#include <random>
#include <vector>

#include "spinsync/errors.hpp"
#include "spinsync/metrics.hpp"

using namespace spinsync;

namespace {

Mat4 random_covariance(std::mt19937_64& rng) {
  std::normal_distribution<double> n01;
  Mat4 A;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) A(i, j) = 0.5 * n01(rng);
  return A * A.transpose() + 0.5 * Mat4::Identity();
}

}  // namespace

TEST_CASE("classical synchronization") {
  const ClassicalSync same = classical_sync({0.3, -1.2, 0.3, -1.2});
  CHECK(same.perfect);
  CHECK(same.error == 0.0);

  const ClassicalSync half = classical_sync({1.0, 0.4, 0.0, 0.4});
  CHECK_FALSE(half.perfect);
  CHECK(half.error == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(half.value == doctest::Approx(2.0).epsilon(1e-15));

  const ClassicalSync anti = classical_sync({-1.0, 0.0, 1.0, 0.0});
  CHECK(anti.error == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(anti.value == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("quantum synchronization reference states") {
  CHECK(quantum_sync(0.5 * Mat4::Identity()) == 1.0);
  for (double phi : {0.0, 0.4, -2.0, 3.1}) CHECK(quantum_sync_phi(Mat4::Identity(), phi) == 0.5);
  Mat4 epr = 0.5 * Mat4::Identity();
  epr(0, 2) = epr(2, 0) = 0.25;
  epr(1, 3) = epr(3, 1) = 0.25;
  CHECK(quantum_sync(epr) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("phi = 0 is the plain measure") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 200; ++i) {
    const Mat4 C = random_covariance(rng);
    CHECK(quantum_sync_phi(C, 0.0) == quantum_sync(C));
  }
}

TEST_CASE("exchanging oscillators mirrors phi") {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> uphi(-3.0, 3.0);
  Mat4 P = Mat4::Zero();
  P(0, 2) = P(1, 3) = P(2, 0) = P(3, 1) = 1.0;
  for (int i = 0; i < 200; ++i) {
    const Mat4 C = random_covariance(rng);
    const double phi = uphi(rng);
    const double a = quantum_sync_phi(C, phi);
    const double b = quantum_sync_phi(P * C * P.transpose(), -phi);
    CHECK(std::abs(a - b) < 1e-13 * a);
  }
}

TEST_CASE("block-diagonal covariance ignores phi") {
  std::mt19937_64 rng(33);
  for (int i = 0; i < 50; ++i) {
    Mat4 C = random_covariance(rng);
    C.block<2, 2>(0, 2).setZero();
    C.block<2, 2>(2, 0).setZero();
    const double s0 = quantum_sync(C);
    for (double phi : {0.3, 1.049, -2.5}) CHECK(quantum_sync_phi(C, phi) == doctest::Approx(s0).epsilon(1e-14));
  }
}

TEST_CASE("phi measure equals the plain measure after rotating oscillator 2") {
  std::mt19937_64 rng(34);
  std::uniform_real_distribution<double> uphi(-3.0, 3.0);
  for (int i = 0; i < 200; ++i) {
    const Mat4 C = random_covariance(rng);
    const double phi = uphi(rng);
    Mat4 R = Mat4::Identity();
    R(2, 2) = R(3, 3) = std::cos(phi);
    R(2, 3) = std::sin(phi);
    R(3, 2) = -std::sin(phi);
    const double want = quantum_sync(R * C * R.transpose());
    CHECK(std::abs(quantum_sync_phi(C, phi) - want) < 1e-13 * want);
  }
}

TEST_CASE("degenerate covariance bracket") {
  Mat4 C = 0.5 * Mat4::Identity();
  C(0, 2) = C(2, 0) = 0.5;
  C(1, 3) = C(3, 1) = 0.5;
  try {
    quantum_sync(C);
    FAIL("expected DegenerateCovariance");
  } catch (const SimError& e) {
    CHECK(e.code() == ErrorCode::kDegenerateCovariance);
  }
}

TEST_CASE("time averages") {
  const std::vector<double> c(50, 2.5);
  CHECK(time_average(c) == 2.5);

  std::vector<double> step(100, 0.0);
  for (size_t i = 80; i < 100; ++i) step[i] = 1.0;
  CHECK(time_average(step, 0.2) == 1.0);

  // Ten full periods of 0.7 + sin inside the final 20% of the series.
  const int per_period = 100, periods = 10, n = 5 * per_period * periods;
  std::vector<double> wave(n);
  for (int i = 0; i < n; ++i) wave[i] = 0.7 + std::sin(2.0 * std::numbers::pi * i / per_period);
  CHECK(std::abs(time_average(wave, 0.2) - 0.7) < 1e-3);

  std::vector<double> scaled(wave);
  for (double& v : scaled) v *= 3.5;
  CHECK(time_average(scaled, 0.2) == doctest::Approx(3.5 * time_average(wave, 0.2)).epsilon(1e-14));
}

TEST_CASE("time average window errors") {
  const std::vector<double> empty;
  CHECK_THROWS_AS(time_average(empty), SimError);
  const std::vector<double> one(3, 1.0);
  CHECK_THROWS_AS(time_average(one, 0.0), SimError);
  CHECK_THROWS_AS(time_average(one, 1.5), SimError);
  CHECK_THROWS_AS(time_average(one, 0.1), SimError);  // rounds to zero samples
}
