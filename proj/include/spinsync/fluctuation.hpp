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

// Linearized quadrature fluctuations Y = (dq1, dp1, dq2, dp2) around the
// mean-field trajectory and their covariance C(t), which obeys
//
//   dC/dt = M C + C M^T + D.

#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <string>
#include <vector>

#include "spinsync/meanfield.hpp"
#include "spinsync/model.hpp"

namespace spinsync {

using Mat4 = Eigen::Matrix4d;
using Vec4 = Eigen::Vector4d;
using CoeffArray = std::array<cplx, 8>;  // E1..E8

/// Linearization coefficients of
///   d(db1) = E1 db1 + E2 db1^+ + E3 db2 + E4 db2^+ + U1 b_in1 + F1
///   d(db2) = E5 db1 + E6 db1^+ + E7 db2 + E8 db2^+ + U2 b_in2 + F2
struct DriftAssembly {
  CoeffArray E{};
  cplx F1, F2;
  cplx U1, U2;
  Mat4 M = Mat4::Zero();
  Mat4 D = Mat4::Zero();
};

/// E1..E8, F1, F2, U1, U2 at one mean-field point; M and D are filled too.
DriftAssembly fluct_coeffs(const MeanFieldState& state, const ModelParams& params,
                           const DerivedConstants& derived, const DriftOptions& options);

/// Real 4x4 drift for Y obtained from the complex coefficients through
/// db_j = (dq_j + i dp_j) / sqrt(2).
Mat4 assemble_drift_matrix(const CoeffArray& E);

/// diag(V1, V1, V2, V2) with V_j = |U_j|^2 (n_m + 1/2).
Mat4 diffusion_matrix(cplx U1, cplx U2, double n_m);

Mat4 lyapunov_rhs(const Mat4& M, const Mat4& C, const Mat4& D);

/// (C + C^T) / 2.
Mat4 symmetrize(const Mat4& C);
double min_eigenvalue(const Mat4& C);

/// Upper-triangle order C11, C12, C13, C14, C22, C23, C24, C33, C34, C44.
std::array<double, 10> pack_upper(const Mat4& C);
Mat4 unpack_upper(const std::array<double, 10>& v);

struct CovarianceState {
  double t = 0.0;
  Mat4 C = 0.5 * Mat4::Identity();
};

using MatrixOfTime = std::function<Mat4(double)>;

struct CovarianceOptions {
  double dt = 0.01;
  long long steps = 0;
  int stride = 1;
  double psd_tol = 1e-9;
  int eig_stride = 100;
};

/// RK4 propagation of C under caller-supplied M(t) and D(t). Throws
/// kPSDViolation or kNonFinite.
std::vector<CovarianceState> propagate_covariance(const CovarianceState& initial,
                                                  const MatrixOfTime& drift,
                                                  const MatrixOfTime& diffusion,
                                                  const CovarianceOptions& options);

struct CoSample {
  double t = 0.0;
  cplx beta1, beta2;
  Mat4 C = Mat4::Zero();
};

struct CoIntegrationOptions {
  IntegrationOptions integration;
  DriftOptions drift;
  double psd_tol = 1e-9;
  int eig_stride = 100;
};

struct CoTrajectory {
  std::vector<CoSample> samples;  // initial sample plus every stride-th step
  std::vector<HPWarning> warnings;
  ErrorCode status = ErrorCode::kOk;
  std::string message;
  double failure_time = 0.0;
  double min_eigenvalue = 0.0;   // smallest eigenvalue seen at checks
  double min_mode_det = 0.0;     // smallest single-mode 2x2 determinant seen
  long long steps_taken = 0;
};

/// Advances (beta1, beta2, C) with one shared RK4 grid. `on_step`, when set,
/// sees every accepted step (including t = 0), independent of the stride.
CoTrajectory co_integrate(const MeanFieldState& initial, const Mat4& C0,
                          const ModelParams& params, const CoIntegrationOptions& options,
                          const std::function<void(const CoSample&)>& on_step = {});

}  // namespace spinsync
