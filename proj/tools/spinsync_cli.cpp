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

// Command-line front end. Talks to the simulator only through the C API.
//
//   spinsync simulate --config PATH --out DIR [--preset NAME] [--set KEY=VALUE]...
//   spinsync sweep    --config PATH --nm v1,v2,... --out DIR
//   spinsync selftest [--strict]
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure,
// 4 self-test failure.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "spinsync/spinsync.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitSelftest = 4;

struct ConfigDeleter {
  void operator()(spinsync_config* c) const { spinsync_config_destroy(c); }
};
struct ResultDeleter {
  void operator()(spinsync_result* r) const { spinsync_result_destroy(r); }
};
using ConfigPtr = std::unique_ptr<spinsync_config, ConfigDeleter>;
using ResultPtr = std::unique_ptr<spinsync_result, ResultDeleter>;

int exit_code_for(spinsync_status s) {
  switch (s) {
    case SPINSYNC_OK: return kExitOk;
    case SPINSYNC_E_INVALID_CONFIG:
    case SPINSYNC_E_INVALID_ARGUMENT:
    case SPINSYNC_E_IO:
    case SPINSYNC_E_BUFFER: return kExitConfig;
    default: return kExitNumerical;
  }
}

int report_error(const char* context, spinsync_status s) {
  std::fprintf(stderr, "spinsync: %s: %s: %s\n", context, spinsync_status_name(s),
               spinsync_last_error());
  return exit_code_for(s);
}

// Builds the run configuration: preset (or defaults), then the config file,
// then individual --set overrides. Returns a non-zero exit code on failure.
int build_config(const std::string& preset, const std::string& config_path,
                 const std::vector<std::string>& overrides, ConfigPtr& out) {
  spinsync_config* raw = nullptr;
  spinsync_status s = preset.empty() ? spinsync_config_create(&raw)
                                     : spinsync_config_from_preset(preset.c_str(), &raw);
  if (s != SPINSYNC_OK) return report_error("preset", s);
  out.reset(raw);
  if (!config_path.empty()) {
    s = spinsync_config_load_file(out.get(), config_path.c_str());
    if (s != SPINSYNC_OK) return report_error("config", s);
  }
  for (const std::string& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "spinsync: --set expects KEY=VALUE, got '%s'\n", kv.c_str());
      return kExitConfig;
    }
    s = spinsync_config_set(out.get(), kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str());
    if (s != SPINSYNC_OK) return report_error("--set", s);
  }
  return kExitOk;
}

int cmd_simulate(const std::string& preset, const std::string& config_path,
                 const std::vector<std::string>& overrides, const std::string& out_dir) {
  ConfigPtr config;
  if (int rc = build_config(preset, config_path, overrides, config); rc != kExitOk) return rc;

  spinsync_result* raw = nullptr;
  const spinsync_status s = spinsync_run_scenario(config.get(), out_dir.c_str(), &raw);
  ResultPtr result(raw);
  if (!result) return report_error("simulate", s);

  spinsync_summary sum{};
  spinsync_result_summary(result.get(), &sum);
  std::printf("status=%s\n", spinsync_status_name(static_cast<spinsync_status>(sum.status)));
  std::printf("steps=%lld\n", sum.steps);
  std::printf("records=%zu\n", sum.records);
  std::printf("Sq_bar=%.17g\n", sum.Sq_bar);
  std::printf("Sq_phi_bar=%.17g\n", sum.Sq_phi_bar);
  std::printf("phi=%.17g\n", sum.phi);
  std::printf("output=%s\n", out_dir.c_str());
  if (s != SPINSYNC_OK) {
    std::fprintf(stderr, "spinsync: run stopped at t = %.17g: %s\n", sum.failure_time,
                 spinsync_result_message(result.get()));
    return exit_code_for(s);
  }
  return kExitOk;
}

int cmd_sweep(const std::string& config_path, const std::vector<double>& nm,
              const std::string& out_dir) {
  ConfigPtr config;
  if (int rc = build_config("", config_path, {}, config); rc != kExitOk) return rc;
  std::vector<double> sq(nm.size());
  std::vector<int> status(nm.size());
  const spinsync_status s = spinsync_run_sweep(config.get(), nm.data(), nm.size(),
                                               out_dir.c_str(), sq.data(), status.data());
  if (s != SPINSYNC_OK) return report_error("sweep", s);
  int failed = 0;
  for (size_t i = 0; i < nm.size(); ++i) {
    std::printf("n_m=%.17g Sq_bar=%.17g status=%s\n", nm[i], sq[i],
                spinsync_status_name(static_cast<spinsync_status>(status[i])));
    failed += status[i] != SPINSYNC_OK;
  }
  if (failed > 0) {
    std::fprintf(stderr, "spinsync: %d of %zu sweep points failed (see manifest.txt)\n", failed,
                 nm.size());
    return kExitNumerical;
  }
  return kExitOk;
}

int cmd_selftest(bool strict) {
  int passed = 0;
  size_t needed = 0;
  spinsync_status s = spinsync_selftest(strict ? 1 : 0, &passed, nullptr, 0, &needed);
  if (s != SPINSYNC_OK) return report_error("selftest", s);
  // The suite is deterministic, so a second run yields the same report.
  std::string report(needed, '\0');
  s = spinsync_selftest(strict ? 1 : 0, &passed, report.data(), report.size(), &needed);
  if (s != SPINSYNC_OK) return report_error("selftest", s);
  std::fputs(report.c_str(), stdout);
  std::printf("selftest %s\n", passed ? "passed" : "FAILED");
  return passed ? kExitOk : kExitSelftest;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spinsync: synchronization of two spin chains as pseudo-bosonic oscillators"};
  app.set_version_flag("--version", std::string(spinsync_version()));
  app.require_subcommand(1);

  std::string preset, config_path, out_dir;
  std::vector<std::string> overrides;
  auto* sim = app.add_subcommand("simulate", "Run one scenario and write its dataset");
  sim->add_option("--config", config_path, "Configuration file (key = value lines)");
  sim->add_option("--preset", preset, "Start from a named preset (fig2a, fig2d, fig2g, fig3a, fig3b)");
  sim->add_option("--set", overrides, "Override one key, KEY=VALUE (repeatable)");
  sim->add_option("--out", out_dir, "Output directory")->required();

  std::string sweep_config, sweep_out;
  std::vector<double> nm;
  auto* sweep = app.add_subcommand("sweep", "Thermal sweep of the time-averaged S_q over n_m");
  sweep->add_option("--config", sweep_config, "Configuration file")->required();
  sweep->add_option("--nm", nm, "Comma-separated n_m values")->required()->delimiter(',');
  sweep->add_option("--out", sweep_out, "Output directory")->required();

  bool strict = false;
  auto* self = app.add_subcommand("selftest", "Run the built-in invariant suite");
  self->add_flag("--strict", strict, "Use the literal uncorrected coefficient forms");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  if (*sim) {
    if (preset.empty() && config_path.empty()) {
      std::fprintf(stderr, "spinsync: simulate needs --config and/or --preset\n");
      return kExitConfig;
    }
    return cmd_simulate(preset, config_path, overrides, out_dir);
  }
  if (*sweep) return cmd_sweep(sweep_config, nm, sweep_out);
  return cmd_selftest(strict);
}
