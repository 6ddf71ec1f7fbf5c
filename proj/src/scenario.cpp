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

#include "spinsync/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <thread>

#include "format.hpp"
#include "spinsync/metrics.hpp"

namespace spinsync {

namespace {

using detail::format_double;

void validate_run_config(const RunConfig& c) {
  const auto problems = validate_params(c.params);
  if (!problems.empty()) {
    std::string msg = "invalid parameters:";
    for (const auto& p : problems) msg += " " + p + ";";
    throw SimError(ErrorCode::kInvalidConfig, msg);
  }
  auto fail = [](const std::string& m) { throw SimError(ErrorCode::kInvalidConfig, m); };
  if (!(c.dt > 0.0) || !std::isfinite(c.dt)) fail("dt must be a positive finite number");
  if (!(c.horizon >= 0.0) || !std::isfinite(c.horizon)) fail("horizon must be >= 0");
  if (c.stride < 1) fail("stride must be >= 1");
  if (!(c.window > 0.0 && c.window <= 1.0)) fail("window must lie in (0, 1]");
  if (c.phi && !std::isfinite(*c.phi)) fail("phi must be finite or 'auto'");
  if (!(c.x_eps >= 0.0)) fail("x_eps must be >= 0");
  if (!(c.hp_fraction > 0.0)) fail("hp_fraction must be > 0");
  if (!(c.psd_tol >= 0.0)) fail("psd_tol must be >= 0");
  if (c.eig_stride < 1) fail("eig_stride must be >= 1");
  if (c.threads < 0) fail("threads must be >= 0");
  if (!std::isfinite(std::abs(c.beta1_0)) || !std::isfinite(std::abs(c.beta2_0)))
    fail("initial amplitudes must be finite");
}

long long step_count(const RunConfig& c) {
  return static_cast<long long>(std::floor(c.horizon / c.dt + 1e-9));
}

// The three pieces of the S_q^phi denominator, so phi can be chosen after the
// run: trace + 2 sin(phi) * s - 2 cos(phi) * c.
struct SyncParts {
  double trace, s, c;
};

SyncParts sync_parts(const Mat4& C) {
  return {C(0, 0) + C(1, 1) + C(2, 2) + C(3, 3), C(1, 2) - C(0, 3), C(0, 2) + C(1, 3)};
}

double sync_from_parts(const SyncParts& p, double phi) {
  const double bracket = p.trace + 2.0 * std::sin(phi) * p.s - 2.0 * std::cos(phi) * p.c;
  return bracket > 0.0 ? 2.0 / bracket : std::nan("");
}

std::string status_line(const RunSummary& s) {
  return std::string(error_code_name(s.status));
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw SimError(ErrorCode::kIo, "cannot write " + path.string());
  out << text;
  if (!out) throw SimError(ErrorCode::kIo, "failed writing " + path.string());
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw SimError(ErrorCode::kIo, "cannot create directory " + dir + ": " + ec.message());
}

}  // namespace

IntegrationOptions integration_options(const RunConfig& c) {
  IntegrationOptions o;
  o.dt = c.dt;
  o.horizon = c.horizon;
  o.stride = c.stride;
  o.hp_policy = c.hp_policy;
  return o;
}

DriftOptions drift_options(const RunConfig& c) {
  DriftOptions o;
  o.f_mode = c.f_mode;
  o.strict_paper = c.strict_paper;
  o.guard.x_eps = c.x_eps;
  o.guard.hp_fraction = c.hp_fraction;
  return o;
}

Mat4 initial_covariance(const RunConfig& c) {
  const double v = c.c0 == InitialCovariance::kVacuum ? 0.5 : c.params.n_m + 0.5;
  return v * Mat4::Identity();
}

RunResult simulate(const RunConfig& config) {
  validate_run_config(config);
  const auto wall_start = std::chrono::steady_clock::now();

  RunResult result;
  result.config = config;
  RunSummary& sum = result.summary;

  const long long steps = step_count(config);
  const long long n_series = steps + 1;  // per-step samples including t = 0
  const long long n_window = std::llround(config.window * static_cast<double>(n_series));
  const long long window_start = n_series - n_window;

  std::vector<SyncParts> window_parts;
  std::vector<MeanFieldState> window_states;
  window_parts.reserve(static_cast<size_t>(std::max<long long>(n_window, 0)));
  window_states.reserve(window_parts.capacity());
  long long index = 0;
  auto on_step = [&](const CoSample& s) {
    if (index >= window_start) {
      window_parts.push_back(sync_parts(s.C));
      window_states.push_back({s.t, s.beta1, s.beta2});
    }
    ++index;
  };

  CoIntegrationOptions co;
  co.integration = integration_options(config);
  co.drift = drift_options(config);
  co.psd_tol = config.psd_tol;
  co.eig_stride = config.eig_stride;
  const MeanFieldState initial{0.0, config.beta1_0, config.beta2_0};
  const CoTrajectory traj = co_integrate(initial, initial_covariance(config), config.params, co,
                                         on_step);

  sum.status = traj.status;
  sum.message = traj.message;
  sum.failure_time = traj.status == ErrorCode::kOk ? std::nan("") : traj.failure_time;
  sum.min_eigenvalue = traj.min_eigenvalue;
  sum.min_mode_det = traj.min_mode_det;
  sum.steps = traj.steps_taken;
  sum.hp_warnings = traj.warnings;
  for (const HPWarning& w : traj.warnings)
    sum.notes.push_back("HP occupation limit reached: chain " + std::to_string(w.chain) +
                        " at t = " + format_double(w.t) +
                        " (|beta|^2 = " + format_double(w.occupation) + ")");

  const bool complete = traj.status == ErrorCode::kOk;
  if (steps == 0) sum.notes.push_back("empty horizon: no samples recorded");

  // Orbit statistics and the phase offset come from the steady-state window.
  bool have_orbits = false;
  std::array<OrbitSummary, 2> orbits;
  if (complete && steps > 0 && window_states.size() >= 2) {
    try {
      orbits = limit_cycle_extract(window_states, window_states.front().t,
                                   window_states.back().t);
      have_orbits = true;
      for (int j = 0; j < 2; ++j) {
        sum.amplitude[j] = orbits[j].amplitude;
        sum.period[j] = orbits[j].period;
      }
    } catch (const SimError& e) {
      sum.notes.push_back(std::string("orbit extraction skipped: ") + e.what());
    }
  }

  if (config.phi) {
    sum.phi = *config.phi;
  } else if (have_orbits) {
    try {
      sum.phi = phase_difference(orbits);
      sum.phi_estimated = true;
    } catch (const SimError& e) {
      sum.notes.push_back(std::string("phase estimation failed: ") + e.what());
    }
  }
  if (std::isnan(sum.phi)) {
    sum.phi = 0.0;
    sum.notes.push_back("phi unavailable; Sq_phi uses phi = 0");
  }

  if (complete && steps > 0) {
    std::vector<double> sq, sq_phi;
    sq.reserve(window_parts.size());
    sq_phi.reserve(window_parts.size());
    for (const SyncParts& p : window_parts) {
      sq.push_back(sync_from_parts(p, 0.0));
      sq_phi.push_back(sync_from_parts(p, sum.phi));
    }
    // The window series already holds exactly the trailing samples.
    sum.Sq_bar = time_average(sq, 1.0);
    sum.Sq_phi_bar = time_average(sq_phi, 1.0);
    if (std::isnan(sum.Sq_bar) || std::isnan(sum.Sq_phi_bar))
      sum.notes.push_back("covariance bracket non-positive inside the averaging window");
  } else if (!complete) {
    sum.notes.push_back("averages not computed: run stopped at t = " +
                        format_double(traj.failure_time));
  }

  if (steps > 0) {
    result.records.reserve(traj.samples.size());
    for (const CoSample& s : traj.samples) {
      const MeanQuadratures mq = mean_quadratures({s.t, s.beta1, s.beta2});
      const ClassicalSync sc = classical_sync(mq);
      const SyncParts parts = sync_parts(s.C);
      TrajectoryRecord r;
      r.t = s.t;
      r.q1 = mq.q1;
      r.p1 = mq.p1;
      r.q2 = mq.q2;
      r.p2 = mq.p2;
      r.C = pack_upper(s.C);
      r.Sq = sync_from_parts(parts, 0.0);
      r.Sq_phi = sync_from_parts(parts, sum.phi);
      r.sc_perfect = sc.perfect;
      r.Sc = sc.perfect ? std::nan("") : sc.value;
      r.Sc_error = sc.error;
      result.records.push_back(r);
    }
  }

  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
  return result;
}

RunResult run_scenario(const RunConfig& config, const std::string& out_dir) {
  RunResult result = simulate(config);
  write_run_outputs(result, out_dir);
  return result;
}

void write_run_outputs(const RunResult& result, const std::string& out_dir) {
  ensure_dir(out_dir);
  const std::filesystem::path dir(out_dir);
  write_file(dir / "trajectory.csv", format_trajectory_csv(result.records));
  write_file(dir / "summary.txt", format_summary(result.summary));
  write_file(dir / "manifest.txt", format_manifest(result));
}

std::string trajectory_csv_header() {
  return "t,q1,p1,q2,p2,C11,C12,C13,C14,C22,C23,C24,C33,C34,C44,Sq,Sq_phi,Sc,Sc_error\n";
}

std::string format_trajectory_csv(const std::vector<TrajectoryRecord>& records) {
  std::string out = trajectory_csv_header();
  out.reserve(out.size() + records.size() * 420);
  for (const TrajectoryRecord& r : records) {
    out += format_double(r.t);
    for (double v : {r.q1, r.p1, r.q2, r.p2}) out += ',' + format_double(v);
    for (double v : r.C) out += ',' + format_double(v);
    out += ',' + format_double(r.Sq);
    out += ',' + format_double(r.Sq_phi);
    out += ',';
    out += r.sc_perfect ? std::string("perfect") : format_double(r.Sc);
    out += ',' + format_double(r.Sc_error);
    out += '\n';
  }
  return out;
}

std::string format_summary(const RunSummary& s) {
  std::string out;
  auto kv = [&out](const std::string& k, const std::string& v) { out += k + " = " + v + "\n"; };
  kv("status", status_line(s));
  kv("message", s.message);
  kv("failure_time", format_double(s.failure_time));
  kv("Sq_bar", format_double(s.Sq_bar));
  kv("Sq_phi_bar", format_double(s.Sq_phi_bar));
  kv("phi", format_double(s.phi));
  kv("phi_source", s.phi_estimated ? "estimated" : "configured");
  kv("amplitude1", format_double(s.amplitude[0]));
  kv("amplitude2", format_double(s.amplitude[1]));
  kv("period1", format_double(s.period[0]));
  kv("period2", format_double(s.period[1]));
  kv("min_eigenvalue", format_double(s.min_eigenvalue));
  kv("min_mode_det", format_double(s.min_mode_det));
  kv("steps", std::to_string(s.steps));
  kv("hp_warnings", std::to_string(s.hp_warnings.size()));
  return out;
}

std::string format_manifest(const RunResult& r) {
  std::string out;
  auto kv = [&out](const std::string& k, const std::string& v) { out += k + " = " + v + "\n"; };
  kv("code_version", kVersion);
  kv("status", status_line(r.summary));
  kv("message", r.summary.message);
  kv("failure_time", format_double(r.summary.failure_time));
  kv("wall_time_s", format_double(r.wall_seconds));
  kv("steps", std::to_string(r.summary.steps));
  out += "# resolved configuration\n";
  for (const std::string& key : config_keys()) kv("config." + key, get_config_value(r.config, key));
  for (size_t i = 0; i < r.summary.notes.size(); ++i)
    kv("note." + std::to_string(i + 1), r.summary.notes[i]);
  return out;
}

std::vector<SweepRow> run_thermal_sweep(const RunConfig& config,
                                        const std::vector<double>& n_m_values,
                                        const std::string& out_dir) {
  if (n_m_values.empty()) throw SimError(ErrorCode::kInvalidConfig, "n_m list is empty");
  for (double v : n_m_values)
    if (!(v >= 0.0) || !std::isfinite(v))
      throw SimError(ErrorCode::kInvalidConfig, "n_m values must be finite and >= 0");
  // Surface configuration errors once, before any worker starts.
  {
    RunConfig probe = config;
    probe.params.n_m = n_m_values.front();
    validate_run_config(probe);
  }

  std::vector<SweepRow> rows(n_m_values.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next.fetch_add(1); i < n_m_values.size(); i = next.fetch_add(1)) {
      RunConfig point = config;
      point.params.n_m = n_m_values[i];
      SweepRow row{n_m_values[i], std::nan(""), ErrorCode::kOk, ""};
      try {
        const RunResult res = simulate(point);
        row.status = res.summary.status;
        row.message = res.summary.message;
        row.Sq_bar = res.summary.Sq_bar;
      } catch (const SimError& e) {
        row.status = e.code();
        row.message = e.what();
      }
      rows[i] = row;
    }
  };

  unsigned n_threads = config.threads > 0 ? static_cast<unsigned>(config.threads)
                                          : std::max(1u, std::thread::hardware_concurrency());
  n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(n_m_values.size()));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < n_threads; ++i) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  if (!out_dir.empty()) {
    ensure_dir(out_dir);
    const std::filesystem::path dir(out_dir);
    write_file(dir / "sweep.csv", format_sweep_csv(rows));
    std::string m;
    auto kv = [&m](const std::string& k, const std::string& v) { m += k + " = " + v + "\n"; };
    kv("code_version", kVersion);
    kv("points", std::to_string(rows.size()));
    const auto failed = std::count_if(rows.begin(), rows.end(),
                                      [](const SweepRow& r) { return r.status != ErrorCode::kOk; });
    kv("failed_points", std::to_string(failed));
    m += "# resolved base configuration (n_m varies per row)\n";
    for (const std::string& key : config_keys()) kv("config." + key, get_config_value(config, key));
    for (size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].status == ErrorCode::kOk) continue;
      kv("note." + std::to_string(i + 1), "n_m = " + format_double(rows[i].n_m) + ": " +
                                              error_code_name(rows[i].status) + ": " +
                                              rows[i].message);
    }
    write_file(dir / "manifest.txt", m);
  }
  return rows;
}

std::string format_sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "n_m,Sq_bar\n";
  for (const SweepRow& r : rows) out += format_double(r.n_m) + ',' + format_double(r.Sq_bar) + '\n';
  return out;
}

}  // namespace spinsync
