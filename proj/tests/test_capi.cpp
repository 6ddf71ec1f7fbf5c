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


// Exercises the shared library strictly through its C header.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "spinsync/spinsync.h"

namespace {

std::string get(const spinsync_config* c, const char* key) {
  size_t needed = 0;
  REQUIRE(spinsync_config_get(c, key, nullptr, 0, &needed) == SPINSYNC_OK);
  std::string out(needed, '\0');
  REQUIRE(spinsync_config_get(c, key, out.data(), out.size(), &needed) == SPINSYNC_OK);
  out.resize(needed - 1);
  return out;
}

spinsync_config* quiet_config() {
  spinsync_config* c = nullptr;
  REQUIRE(spinsync_config_from_preset("fig2g", &c) == SPINSYNC_OK);
  REQUIRE(spinsync_config_parse(c,
                                "f_mode = Neglect\nbeta1_re = 0.4\nbeta1_im = 0.1\n"
                                "beta2_re = -0.2\nbeta2_im = 0.3\nhorizon = 10\nstride = 10\n") ==
          SPINSYNC_OK);
  return c;
}

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::strcmp(spinsync_version(), "0.1.0") == 0);
  CHECK(std::strcmp(spinsync_status_name(SPINSYNC_OK), "Ok") == 0);
  CHECK(std::strcmp(spinsync_status_name(SPINSYNC_E_SINGULAR_COUPLING), "SingularCoupling") == 0);
  CHECK(std::strcmp(spinsync_status_name(SPINSYNC_E_BUFFER), "BufferTooSmall") == 0);
  CHECK(std::strcmp(spinsync_status_name(static_cast<spinsync_status>(99)), "Unknown") == 0);
}

TEST_CASE("config handle lifecycle") {
  spinsync_config* c = nullptr;
  REQUIRE(spinsync_config_create(&c) == SPINSYNC_OK);
  CHECK(get(c, "g1") == "1.5");
  CHECK(spinsync_config_set(c, "g1", "2.25") == SPINSYNC_OK);
  CHECK(get(c, "g1") == "2.25");
  CHECK(spinsync_config_set(c, "nope", "1") == SPINSYNC_E_INVALID_CONFIG);
  CHECK(std::string(spinsync_last_error()).find("nope") != std::string::npos);
  CHECK(spinsync_config_set(c, "N1", "x") == SPINSYNC_E_INVALID_CONFIG);

  char tiny[4];
  size_t needed = 0;
  CHECK(spinsync_config_serialize(c, tiny, sizeof tiny, &needed) == SPINSYNC_E_BUFFER);
  std::string text(needed, '\0');
  REQUIRE(spinsync_config_serialize(c, text.data(), text.size(), &needed) == SPINSYNC_OK);
  CHECK(text.find("g1 = 2.25\n") != std::string::npos);

  spinsync_config* d = nullptr;
  REQUIRE(spinsync_config_create(&d) == SPINSYNC_OK);
  REQUIRE(spinsync_config_parse(d, text.c_str()) == SPINSYNC_OK);
  CHECK(get(d, "g1") == "2.25");
  spinsync_config_destroy(d);
  spinsync_config_destroy(c);
  spinsync_config_destroy(nullptr);
}

TEST_CASE("argument checks") {
  CHECK(spinsync_config_create(nullptr) == SPINSYNC_E_INVALID_ARGUMENT);
  spinsync_config* c = reinterpret_cast<spinsync_config*>(0x1);
  CHECK(spinsync_config_from_preset("fig9", &c) == SPINSYNC_E_INVALID_CONFIG);
  CHECK(c == nullptr);
  spinsync_result* r = nullptr;
  CHECK(spinsync_simulate(nullptr, &r) == SPINSYNC_E_INVALID_ARGUMENT);
  CHECK(r == nullptr);
  spinsync_config* base = nullptr;
  REQUIRE(spinsync_config_create(&base) == SPINSYNC_OK);
  CHECK(spinsync_config_load_file(base, "/nonexistent.conf") == SPINSYNC_E_INVALID_CONFIG);
  spinsync_config_destroy(base);
}

TEST_CASE("simulate and read back records") {
  spinsync_config* c = quiet_config();
  spinsync_result* r = nullptr;
  REQUIRE(spinsync_simulate(c, &r) == SPINSYNC_OK);
  spinsync_summary s{};
  REQUIRE(spinsync_result_summary(r, &s) == SPINSYNC_OK);
  CHECK(s.status == SPINSYNC_OK);
  CHECK(s.steps == 1000);
  CHECK(s.records == 101);
  CHECK(std::isfinite(s.Sq_bar));
  spinsync_record rec{};
  REQUIRE(spinsync_result_record(r, 100, &rec) == SPINSYNC_OK);
  CHECK(rec.t == doctest::Approx(10.0));
  CHECK(spinsync_result_record(r, 101, &rec) == SPINSYNC_E_INVALID_ARGUMENT);

  const auto dir = std::filesystem::temp_directory_path() / "spinsync_capi_write";
  std::filesystem::remove_all(dir);
  CHECK(spinsync_result_write(r, dir.c_str()) == SPINSYNC_OK);
  CHECK(std::filesystem::exists(dir / "trajectory.csv"));
  CHECK(std::filesystem::exists(dir / "manifest.txt"));
  std::filesystem::remove_all(dir);
  spinsync_result_destroy(r);
  spinsync_config_destroy(c);
}

TEST_CASE("numerical failures return the status and a partial result") {
  spinsync_config* c = nullptr;
  REQUIRE(spinsync_config_from_preset("fig2a", &c) == SPINSYNC_OK);
  REQUIRE(spinsync_config_set(c, "horizon", "20") == SPINSYNC_OK);
  spinsync_result* r = nullptr;
  CHECK(spinsync_simulate(c, &r) == SPINSYNC_E_SINGULAR_COUPLING);
  REQUIRE(r != nullptr);
  spinsync_summary s{};
  spinsync_result_summary(r, &s);
  CHECK(s.records > 0);
  CHECK(std::isfinite(s.failure_time));
  CHECK(std::string(spinsync_result_message(r)).find("singular coupling") != std::string::npos);
  spinsync_result_destroy(r);
  spinsync_config_destroy(c);
}

TEST_CASE("sweep through the C interface") {
  spinsync_config* c = quiet_config();
  const double nm[3] = {0.0, 2.0, 0.0};
  double sq[3];
  int status[3];
  REQUIRE(spinsync_run_sweep(c, nm, 3, nullptr, sq, status) == SPINSYNC_OK);
  CHECK(sq[0] == sq[2]);
  CHECK(status[1] == SPINSYNC_OK);
  spinsync_result* r = nullptr;
  REQUIRE(spinsync_simulate(c, &r) == SPINSYNC_OK);
  spinsync_summary s{};
  spinsync_result_summary(r, &s);
  CHECK(s.Sq_bar == sq[0]);
  spinsync_result_destroy(r);
  const double bad[1] = {-1.0};
  CHECK(spinsync_run_sweep(c, bad, 1, nullptr, nullptr, nullptr) == SPINSYNC_E_INVALID_CONFIG);
  spinsync_config_destroy(c);
}

TEST_CASE("self-test report") {
  int passed = 0;
  size_t needed = 0;
  REQUIRE(spinsync_selftest(0, &passed, nullptr, 0, &needed) == SPINSYNC_OK);
  std::string report(needed, '\0');
  REQUIRE(spinsync_selftest(0, &passed, report.data(), report.size(), &needed) == SPINSYNC_OK);
  CHECK(passed == 1);
  CHECK(report.find("PASS complex_oracle") != std::string::npos);
}

TEST_CASE("numeric building blocks") {
  double C[16] = {0};
  for (int i = 0; i < 4; ++i) C[5 * i] = 0.5;
  double s = 0.0;
  REQUIRE(spinsync_quantum_sync_phi(C, 0.0, &s) == SPINSYNC_OK);
  CHECK(s == 1.0);
  C[2] = C[8] = C[7] = C[13] = 0.5;  // C13 = C24 = 1/2: bracket vanishes
  CHECK(spinsync_quantum_sync_phi(C, 0.0, &s) == SPINSYNC_E_DEGENERATE_COVARIANCE);

  spinsync_config* c = nullptr;
  REQUIRE(spinsync_config_from_preset("fig2g", &c) == SPINSYNC_OK);
  double b1 = 0, b2 = 0, theta = 0;
  REQUIRE(spinsync_derive_constants(c, &b1, &b2, &theta) == SPINSYNC_OK);
  CHECK(std::abs(b1 - 0.236) < 1e-15);
  CHECK(std::abs(theta + 0.0236) < 1e-15);
  spinsync_config_destroy(c);
}
