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

// Run configuration, figure presets, scenario runs, thermal sweeps and the
// on-disk formats (trajectory.csv, sweep.csv, summary.txt, manifest.txt).

#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "spinsync/fluctuation.hpp"
#include "spinsync/meanfield.hpp"
#include "spinsync/model.hpp"

namespace spinsync {

inline constexpr const char* kVersion = "0.1.0";

enum class InitialCovariance { kVacuum, kThermal };

struct RunConfig {
  std::string scenario = "custom";
  ModelParams params;
  FTermMode f_mode = FTermMode::kMeanField;
  bool strict_paper = false;
  double dt = 0.01;
  double horizon = 1.0e4;
  int stride = 10;
  InitialCovariance c0 = InitialCovariance::kVacuum;
  double window = 0.2;  // trailing fraction of the run used for averages and phi
  cplx beta1_0{0.0, 0.0};
  cplx beta2_0{0.0, 0.0};
  std::string output_dir = "out";
  std::optional<double> phi;  // manual phase offset; estimated when unset
  double x_eps = 1e-9;
  double hp_fraction = 1.0;
  HPPolicy hp_policy = HPPolicy::kWarn;
  double psd_tol = 1e-9;
  int eig_stride = 100;
  int threads = 0;  // sweep workers; 0 = hardware concurrency

  bool operator==(const RunConfig&) const = default;
};

/// Names of every accepted configuration key, in serialization order.
const std::vector<std::string>& config_keys();

/// Applies one key/value pair. Throws kInvalidConfig on unknown keys or
/// unparsable values.
void set_config_value(RunConfig& config, const std::string& key, const std::string& value);
std::string get_config_value(const RunConfig& config, const std::string& key);

/// Flat `key = value` text; `#` starts a comment. Keys not present keep the
/// values already in `base`.
RunConfig parse_config(const std::string& text, const RunConfig& base = {});
RunConfig load_config_file(const std::string& path, const RunConfig& base = {});
std::string serialize_config(const RunConfig& config);

const std::vector<std::string>& preset_names();
/// Throws kInvalidConfig for an unknown name.
RunConfig preset(const std::string& name);

IntegrationOptions integration_options(const RunConfig& config);
DriftOptions drift_options(const RunConfig& config);
Mat4 initial_covariance(const RunConfig& config);

struct TrajectoryRecord {
  double t;
  double q1, p1, q2, p2;
  std::array<double, 10> C;
  double Sq;
  double Sq_phi;
  bool sc_perfect;
  double Sc;
  double Sc_error;
};

struct RunSummary {
  ErrorCode status = ErrorCode::kOk;
  std::string message;
  double failure_time = std::nan("");
  double Sq_bar = std::nan("");
  double Sq_phi_bar = std::nan("");
  double phi = std::nan("");
  bool phi_estimated = false;
  std::array<double, 2> amplitude{std::nan(""), std::nan("")};
  std::array<double, 2> period{std::nan(""), std::nan("")};
  double min_eigenvalue = std::nan("");
  double min_mode_det = std::nan("");
  long long steps = 0;
  std::vector<HPWarning> hp_warnings;
  std::vector<std::string> notes;
};

struct RunResult {
  RunConfig config;
  RunSummary summary;
  std::vector<TrajectoryRecord> records;
  double wall_seconds = 0.0;
};

/// In-memory run. Numerical failures are reported in summary.status with the
/// records up to the failure; configuration problems throw kInvalidConfig.
RunResult simulate(const RunConfig& config);

/// simulate() plus trajectory.csv, summary.txt and manifest.txt in `out_dir`
/// (created if missing). Files are written for failed runs too.
RunResult run_scenario(const RunConfig& config, const std::string& out_dir);

/// Writes trajectory.csv, summary.txt and manifest.txt for an existing result.
void write_run_outputs(const RunResult& result, const std::string& out_dir);

std::string trajectory_csv_header();
std::string format_trajectory_csv(const std::vector<TrajectoryRecord>& records);
std::string format_summary(const RunSummary& summary);
std::string format_manifest(const RunResult& result);

struct SweepRow {
  double n_m;
  double Sq_bar;
  ErrorCode status;
  std::string message;
};

/// One independent simulate() per n_m value; rows keep input order. Writes
/// sweep.csv and manifest.txt when `out_dir` is non-empty.
std::vector<SweepRow> run_thermal_sweep(const RunConfig& config,
                                        const std::vector<double>& n_m_values,
                                        const std::string& out_dir);

std::string format_sweep_csv(const std::vector<SweepRow>& rows);

struct SelftestCheck {
  std::string name;
  bool passed = false;
  bool expected_different = false;  // documented deviation under strict_paper
  std::string detail;
};

struct SelftestOptions {
  bool strict_paper = false;
  // Replaces assemble_drift_matrix in the complex-plane oracle check.
  std::function<Mat4(const CoeffArray&)> assembler;
};

std::vector<SelftestCheck> selftest(const SelftestOptions& options = {});
bool selftest_passed(const std::vector<SelftestCheck>& checks);

}  // namespace spinsync
