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

#include "spinsync/spinsync.h"

#include <cstring>
#include <new>
#include <string>

#include "spinsync/metrics.hpp"
#include "spinsync/scenario.hpp"

struct spinsync_config {
  spinsync::RunConfig cfg;
};

struct spinsync_result {
  spinsync::RunResult run;
};

namespace {

thread_local std::string g_last_error;

spinsync_status to_status(spinsync::ErrorCode code) {
  return static_cast<spinsync_status>(static_cast<int>(code));
}

spinsync_status fail(spinsync_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Runs `fn`, translating exceptions into status codes and last-error text.
template <typename Fn>
spinsync_status guarded(Fn&& fn) {
  try {
    g_last_error.clear();
    return fn();
  } catch (const spinsync::SimError& e) {
    return fail(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(SPINSYNC_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(SPINSYNC_E_INTERNAL, e.what());
  }
}

spinsync_status copy_out(const std::string& s, char* buf, size_t cap, size_t* needed) {
  if (needed) *needed = s.size() + 1;
  if (buf == nullptr && cap == 0) return SPINSYNC_OK;
  if (buf == nullptr || cap < s.size() + 1)
    return fail(SPINSYNC_E_BUFFER, "buffer too small: need " + std::to_string(s.size() + 1));
  std::memcpy(buf, s.c_str(), s.size() + 1);
  return SPINSYNC_OK;
}

spinsync_status null_arg(const char* what) {
  return fail(SPINSYNC_E_INVALID_ARGUMENT, std::string(what) + " must not be NULL");
}

spinsync_status finish_run(spinsync::RunResult&& run, spinsync_result** out) {
  const spinsync_status status = to_status(run.summary.status);
  if (status != SPINSYNC_OK) g_last_error = run.summary.message;
  *out = new spinsync_result{std::move(run)};
  return status;
}

}  // namespace

extern "C" {

const char* spinsync_version(void) { return spinsync::kVersion; }

const char* spinsync_status_name(spinsync_status status) {
  switch (status) {
    case SPINSYNC_E_INVALID_ARGUMENT: return "InvalidArgument";
    case SPINSYNC_E_BUFFER: return "BufferTooSmall";
    case SPINSYNC_E_INTERNAL: return "Internal";
    default: break;
  }
  if (status < SPINSYNC_OK || status > SPINSYNC_E_IO) return "Unknown";
  return spinsync::error_code_name(static_cast<spinsync::ErrorCode>(static_cast<int>(status)));
}

const char* spinsync_last_error(void) { return g_last_error.c_str(); }

spinsync_status spinsync_config_create(spinsync_config** out) {
  if (!out) return null_arg("out");
  return guarded([&] {
    *out = new spinsync_config{};
    return SPINSYNC_OK;
  });
}

spinsync_status spinsync_config_from_preset(const char* name, spinsync_config** out) {
  if (!out) return null_arg("out");
  *out = nullptr;
  if (!name) return null_arg("name");
  return guarded([&] {
    *out = new spinsync_config{spinsync::preset(name)};
    return SPINSYNC_OK;
  });
}

spinsync_status spinsync_config_load_file(spinsync_config* config, const char* path) {
  if (!config) return null_arg("config");
  if (!path) return null_arg("path");
  return guarded([&] {
    config->cfg = spinsync::load_config_file(path, config->cfg);
    return SPINSYNC_OK;
  });
}

spinsync_status spinsync_config_parse(spinsync_config* config, const char* text) {
  if (!config) return null_arg("config");
  if (!text) return null_arg("text");
  return guarded([&] {
    config->cfg = spinsync::parse_config(text, config->cfg);
    return SPINSYNC_OK;
  });
}

spinsync_status spinsync_config_set(spinsync_config* config, const char* key, const char* value) {
  if (!config) return null_arg("config");
  if (!key || !value) return null_arg("key/value");
  return guarded([&] {
    spinsync::set_config_value(config->cfg, key, value);
    return SPINSYNC_OK;
  });
}

spinsync_status spinsync_config_get(const spinsync_config* config, const char* key, char* buf,
                                    size_t cap, size_t* needed) {
  if (!config) return null_arg("config");
  if (!key) return null_arg("key");
  return guarded([&] { return copy_out(spinsync::get_config_value(config->cfg, key), buf, cap, needed); });
}

spinsync_status spinsync_config_serialize(const spinsync_config* config, char* buf, size_t cap,
                                          size_t* needed) {
  if (!config) return null_arg("config");
  return guarded([&] { return copy_out(spinsync::serialize_config(config->cfg), buf, cap, needed); });
}

void spinsync_config_destroy(spinsync_config* config) { delete config; }

spinsync_status spinsync_simulate(const spinsync_config* config, spinsync_result** out) {
  if (!out) return null_arg("out");
  *out = nullptr;
  if (!config) return null_arg("config");
  return guarded([&] { return finish_run(spinsync::simulate(config->cfg), out); });
}

spinsync_status spinsync_run_scenario(const spinsync_config* config, const char* out_dir,
                                      spinsync_result** out) {
  if (!out) return null_arg("out");
  *out = nullptr;
  if (!config) return null_arg("config");
  if (!out_dir) return null_arg("out_dir");
  return guarded([&] { return finish_run(spinsync::run_scenario(config->cfg, out_dir), out); });
}

spinsync_status spinsync_result_write(const spinsync_result* result, const char* out_dir) {
  if (!result) return null_arg("result");
  if (!out_dir) return null_arg("out_dir");
  return guarded([&] {
    spinsync::write_run_outputs(result->run, out_dir);
    return SPINSYNC_OK;
  });
}

spinsync_status spinsync_result_summary(const spinsync_result* result, spinsync_summary* out) {
  if (!result) return null_arg("result");
  if (!out) return null_arg("out");
  const spinsync::RunSummary& s = result->run.summary;
  out->status = static_cast<int>(s.status);
  out->failure_time = s.failure_time;
  out->Sq_bar = s.Sq_bar;
  out->Sq_phi_bar = s.Sq_phi_bar;
  out->phi = s.phi;
  out->phi_estimated = s.phi_estimated ? 1 : 0;
  for (int j = 0; j < 2; ++j) {
    out->amplitude[j] = s.amplitude[j];
    out->period[j] = s.period[j];
  }
  out->min_eigenvalue = s.min_eigenvalue;
  out->min_mode_det = s.min_mode_det;
  out->steps = s.steps;
  out->hp_warnings = s.hp_warnings.size();
  out->records = result->run.records.size();
  out->wall_seconds = result->run.wall_seconds;
  return SPINSYNC_OK;
}

const char* spinsync_result_message(const spinsync_result* result) {
  return result ? result->run.summary.message.c_str() : "";
}

spinsync_status spinsync_result_record(const spinsync_result* result, size_t index,
                                       spinsync_record* out) {
  if (!result) return null_arg("result");
  if (!out) return null_arg("out");
  const auto& records = result->run.records;
  if (index >= records.size())
    return fail(SPINSYNC_E_INVALID_ARGUMENT, "record index " + std::to_string(index) +
                                                 " out of range (" +
                                                 std::to_string(records.size()) + " records)");
  const spinsync::TrajectoryRecord& r = records[index];
  out->t = r.t;
  out->q1 = r.q1;
  out->p1 = r.p1;
  out->q2 = r.q2;
  out->p2 = r.p2;
  for (size_t i = 0; i < 10; ++i) out->C[i] = r.C[i];
  out->Sq = r.Sq;
  out->Sq_phi = r.Sq_phi;
  out->sc_perfect = r.sc_perfect ? 1 : 0;
  out->Sc = r.Sc;
  out->Sc_error = r.Sc_error;
  return SPINSYNC_OK;
}

void spinsync_result_destroy(spinsync_result* result) { delete result; }

spinsync_status spinsync_run_sweep(const spinsync_config* config, const double* n_m_values,
                                   size_t count, const char* out_dir, double* Sq_bar_out,
                                   int* status_out) {
  if (!config) return null_arg("config");
  if (!n_m_values && count > 0) return null_arg("n_m_values");
  return guarded([&] {
    const std::vector<double> nm(n_m_values, n_m_values + count);
    const auto rows = spinsync::run_thermal_sweep(config->cfg, nm, out_dir ? out_dir : "");
    for (size_t i = 0; i < rows.size(); ++i) {
      if (Sq_bar_out) Sq_bar_out[i] = rows[i].Sq_bar;
      if (status_out) status_out[i] = static_cast<int>(rows[i].status);
    }
    return SPINSYNC_OK;
  });
}

spinsync_status spinsync_selftest(int strict_paper, int* passed, char* report, size_t cap,
                                  size_t* needed) {
  if (!passed) return null_arg("passed");
  return guarded([&] {
    spinsync::SelftestOptions opt;
    opt.strict_paper = strict_paper != 0;
    const auto checks = spinsync::selftest(opt);
    *passed = spinsync::selftest_passed(checks) ? 1 : 0;
    std::string text;
    for (const auto& c : checks) {
      const char* tag = c.passed ? "PASS" : (c.expected_different ? "EXPECTED-DIFFERENT" : "FAIL");
      text += std::string(tag) + " " + c.name + ": " + c.detail + "\n";
    }
    return copy_out(text, report, cap, needed);
  });
}

spinsync_status spinsync_quantum_sync_phi(const double C[16], double phi, double* out) {
  if (!C) return null_arg("C");
  if (!out) return null_arg("out");
  return guarded([&] {
    spinsync::Mat4 m;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) m(i, j) = C[4 * i + j];
    *out = spinsync::quantum_sync_phi(m, phi);
    return SPINSYNC_OK;
  });
}

spinsync_status spinsync_derive_constants(const spinsync_config* config, double* B1, double* B2,
                                          double* theta) {
  if (!config) return null_arg("config");
  return guarded([&] {
    const spinsync::DerivedConstants d = spinsync::derive_constants(config->cfg.params);
    if (B1) *B1 = d.B1;
    if (B2) *B2 = d.B2;
    if (theta) *theta = d.theta;
    return SPINSYNC_OK;
  });
}

}  // extern "C"
