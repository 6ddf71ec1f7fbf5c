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

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "format.hpp"
#include "spinsync/scenario.hpp"

namespace spinsync {

namespace {

[[noreturn]] void bad_value(const std::string& key, const std::string& value,
                           const char* expected) {
  throw SimError(ErrorCode::kInvalidConfig,
                 "invalid value '" + value + "' for " + key + " (expected " + expected + ")");
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const char* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) bad_value(key, v, "a number");
  return out;
}

int to_int(const std::string& key, const std::string& v) {
  int out = 0;
  const char* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) bad_value(key, v, "an integer");
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  bad_value(key, v, "true|false");
}

struct KeySpec {
  const char* name;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, const std::string&, const std::string&)> set;
};

#define SPINSYNC_DOUBLE_KEY(key, field)                                         \
  KeySpec {                                                                     \
    key, [](const RunConfig& c) { return detail::format_double(c.field); },     \
        [](RunConfig& c, const std::string& k, const std::string& v) {          \
          c.field = to_double(k, v);                                            \
        }                                                                       \
  }

#define SPINSYNC_INT_KEY(key, field)                                            \
  KeySpec {                                                                     \
    key, [](const RunConfig& c) { return std::to_string(c.field); },            \
        [](RunConfig& c, const std::string& k, const std::string& v) {          \
          c.field = to_int(k, v);                                               \
        }                                                                       \
  }

const std::vector<KeySpec>& key_table() {
  static const std::vector<KeySpec> table = {
      {"scenario", [](const RunConfig& c) { return c.scenario; },
       [](RunConfig& c, const std::string&, const std::string& v) { c.scenario = v; }},
      SPINSYNC_DOUBLE_KEY("g1", params.g1),
      SPINSYNC_DOUBLE_KEY("g2", params.g2),
      SPINSYNC_DOUBLE_KEY("omega1", params.omega1),
      SPINSYNC_DOUBLE_KEY("omega2", params.omega2),
      SPINSYNC_DOUBLE_KEY("lambda", params.lambda),
      SPINSYNC_INT_KEY("N1", params.N1),
      SPINSYNC_INT_KEY("N2", params.N2),
      SPINSYNC_DOUBLE_KEY("sigma_z_mean", params.sigma_z_mean),
      SPINSYNC_DOUBLE_KEY("gamma_l", params.gamma_l),
      SPINSYNC_DOUBLE_KEY("gamma_nl", params.gamma_nl),
      SPINSYNC_DOUBLE_KEY("n_m", params.n_m),
      SPINSYNC_DOUBLE_KEY("omega0", params.omega0),
      {"f_mode", [](const RunConfig& c) { return std::string(f_mode_name(c.f_mode)); },
       [](RunConfig& c, const std::string& k, const std::string& v) {
         if (!parse_f_mode(v, c.f_mode)) bad_value(k, v, "MeanField|Neglect|Fluctuations");
       }},
      {"strict_paper",
       [](const RunConfig& c) { return std::string(c.strict_paper ? "true" : "false"); },
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.strict_paper = to_bool(k, v);
       }},
      SPINSYNC_DOUBLE_KEY("dt", dt),
      SPINSYNC_DOUBLE_KEY("horizon", horizon),
      SPINSYNC_INT_KEY("stride", stride),
      {"c0",
       [](const RunConfig& c) {
         return std::string(c.c0 == InitialCovariance::kVacuum ? "vacuum" : "thermal");
       },
       [](RunConfig& c, const std::string& k, const std::string& v) {
         if (v == "vacuum")
           c.c0 = InitialCovariance::kVacuum;
         else if (v == "thermal")
           c.c0 = InitialCovariance::kThermal;
         else
           bad_value(k, v, "vacuum|thermal");
       }},
      SPINSYNC_DOUBLE_KEY("window", window),
      {"beta1_re", [](const RunConfig& c) { return detail::format_double(c.beta1_0.real()); },
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.beta1_0.real(to_double(k, v));
       }},
      {"beta1_im", [](const RunConfig& c) { return detail::format_double(c.beta1_0.imag()); },
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.beta1_0.imag(to_double(k, v));
       }},
      {"beta2_re", [](const RunConfig& c) { return detail::format_double(c.beta2_0.real()); },
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.beta2_0.real(to_double(k, v));
       }},
      {"beta2_im", [](const RunConfig& c) { return detail::format_double(c.beta2_0.imag()); },
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.beta2_0.imag(to_double(k, v));
       }},
      {"output_dir", [](const RunConfig& c) { return c.output_dir; },
       [](RunConfig& c, const std::string&, const std::string& v) { c.output_dir = v; }},
      {"phi",
       [](const RunConfig& c) {
         return c.phi ? detail::format_double(*c.phi) : std::string("auto");
       },
       [](RunConfig& c, const std::string& k, const std::string& v) {
         if (v == "auto")
           c.phi.reset();
         else
           c.phi = to_double(k, v);
       }},
      SPINSYNC_DOUBLE_KEY("x_eps", x_eps),
      SPINSYNC_DOUBLE_KEY("hp_fraction", hp_fraction),
      {"hp_policy",
       [](const RunConfig& c) {
         return std::string(c.hp_policy == HPPolicy::kWarn ? "warn" : "abort");
       },
       [](RunConfig& c, const std::string& k, const std::string& v) {
         if (v == "warn")
           c.hp_policy = HPPolicy::kWarn;
         else if (v == "abort")
           c.hp_policy = HPPolicy::kAbort;
         else
           bad_value(k, v, "warn|abort");
       }},
      SPINSYNC_DOUBLE_KEY("psd_tol", psd_tol),
      SPINSYNC_INT_KEY("eig_stride", eig_stride),
      SPINSYNC_INT_KEY("threads", threads),
  };
  return table;
}

#undef SPINSYNC_DOUBLE_KEY
#undef SPINSYNC_INT_KEY

const KeySpec& find_key(const std::string& key) {
  for (const KeySpec& k : key_table())
    if (key == k.name) return k;
  throw SimError(ErrorCode::kInvalidConfig, "unknown configuration key '" + key + "'");
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    for (const KeySpec& k : key_table()) out.emplace_back(k.name);
    return out;
  }();
  return keys;
}

void set_config_value(RunConfig& config, const std::string& key, const std::string& value) {
  find_key(key).set(config, key, value);
}

std::string get_config_value(const RunConfig& config, const std::string& key) {
  return find_key(key).get(config);
}

RunConfig parse_config(const std::string& text, const RunConfig& base) {
  RunConfig out = base;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw SimError(ErrorCode::kInvalidConfig,
                     "line " + std::to_string(lineno) + ": expected key = value");
    set_config_value(out, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return out;
}

RunConfig load_config_file(const std::string& path, const RunConfig& base) {
  std::ifstream in(path);
  if (!in) throw SimError(ErrorCode::kInvalidConfig, "cannot read config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), base);
}

std::string serialize_config(const RunConfig& config) {
  std::string out;
  for (const KeySpec& k : key_table()) {
    out += k.name;
    out += " = ";
    out += k.get(config);
    out += '\n';
  }
  return out;
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"fig2a", "fig2d", "fig2g", "fig3a", "fig3b"};
  return names;
}

RunConfig preset(const std::string& name) {
  // Shared by every preset: g1 = 1.5, g2 = 2.4, <sz> = -0.1, omega1 = 1,
  // omega2 = 0.8, gamma_l = 0.001, gamma_nl = 0.002 (the ModelParams defaults).
  RunConfig c;
  c.scenario = name;
  c.params = ModelParams{};
  if (name == "fig2a") {
    c.params.lambda = 0.0;
  } else if (name == "fig2d") {
    c.params.lambda = 0.0;
    c.params.N1 = 10;
    c.params.N2 = 5;
  } else if (name == "fig2g") {
    c.params.lambda = 0.2;
  } else if (name == "fig3a" || name == "fig3b") {
    c.params.lambda = 0.2;
    c.phi = 1.049;
  } else {
    throw SimError(ErrorCode::kInvalidConfig, "unknown preset '" + name + "'");
  }
  return c;
}

}  // namespace spinsync
