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

#include "spinsync/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace spinsync {

namespace {

struct Pair {
  cplx a, b;
};

Pair complex_rhs(const CoeffArray& E, const Pair& z) {
  return {E[0] * z.a + E[1] * std::conj(z.a) + E[2] * z.b + E[3] * std::conj(z.b),
          E[4] * z.a + E[5] * std::conj(z.a) + E[6] * z.b + E[7] * std::conj(z.b)};
}

Pair step(const CoeffArray& E, const Pair& z, double h) {
  auto add = [](const Pair& x, double s, const Pair& d) {
    return Pair{x.a + s * d.a, x.b + s * d.b};
  };
  const Pair k1 = complex_rhs(E, z);
  const Pair k2 = complex_rhs(E, add(z, 0.5 * h, k1));
  const Pair k3 = complex_rhs(E, add(z, 0.5 * h, k2));
  const Pair k4 = complex_rhs(E, add(z, h, k3));
  return {z.a + (h / 6.0) * (k1.a + 2.0 * k2.a + 2.0 * k3.a + k4.a),
          z.b + (h / 6.0) * (k1.b + 2.0 * k2.b + 2.0 * k3.b + k4.b)};
}

}  // namespace

double complex_quadrature_deviation(const CoeffArray& E, cplx db1, cplx db2, double t_end,
                                    double dt,
                                    const std::function<Mat4(const CoeffArray&)>& assembler) {
  constexpr double r2 = std::numbers::sqrt2;
  const Mat4 M = assembler(E);
  Pair z{db1, db2};
  Vec4 y(r2 * db1.real(), r2 * db1.imag(), r2 * db2.real(), r2 * db2.imag());
  auto f = [&](const Vec4& v) -> Vec4 { return M * v; };

  const auto steps = static_cast<long long>(std::llround(t_end / dt));
  double worst = 0.0;
  for (long long k = 0; k < steps; ++k) {
    z = step(E, z, dt);
    const Vec4 k1 = f(y);
    const Vec4 k2 = f(y + 0.5 * dt * k1);
    const Vec4 k3 = f(y + 0.5 * dt * k2);
    const Vec4 k4 = f(y + dt * k3);
    y += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const Vec4 ref(r2 * z.a.real(), r2 * z.a.imag(), r2 * z.b.real(), r2 * z.b.imag());
    worst = std::max(worst, (y - ref).cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace spinsync
