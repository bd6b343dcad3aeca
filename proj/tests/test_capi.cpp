// Copyright The dgtd Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>

#include "dgtd/dgtd.h"

namespace
{

const char *kCavity = R"(
[domain]
dim = 2
[mesh]
cells = 3 3
[discretization]
degree = 2
[time]
steps = 20
[initial]
kind = cavity
)";

}  // namespace

TEST_CASE("status strings")
{
  CHECK(std::string(dgtd_status_string(DGTD_OK)) == "ok");
  CHECK(std::string(dgtd_status_string(DGTD_INSTABILITY)) == "numerical instability");
  CHECK(std::string(dgtd_version()).size() > 0);
  CHECK(std::string(dgtd_config_reference()).find("[domain]") != std::string::npos);
}

TEST_CASE("configuration handles")
{
  dgtd_config *c = nullptr;
  REQUIRE(dgtd_config_parse(kCavity, &c) == DGTD_OK);
  CHECK(std::string(dgtd_last_error()).empty());

  CHECK(dgtd_config_set(c, "time", "steps", "abc") == DGTD_CONFIG);
  CHECK(std::string(dgtd_last_error()).find("steps") != std::string::npos);
  CHECK(dgtd_config_set(c, "discretization", "degree", "3") == DGTD_OK);

  std::size_t needed = 0;
  REQUIRE(dgtd_config_dump(c, nullptr, 0, &needed) == DGTD_OK);
  std::string text(needed, '\0');
  REQUIRE(dgtd_config_dump(c, text.data(), text.size(), nullptr) == DGTD_OK);
  CHECK(text.find("degree = 3") != std::string::npos);
  char small[8];
  REQUIRE(dgtd_config_dump(c, small, sizeof small, nullptr) == DGTD_OK);
  CHECK(std::strlen(small) == 7);

  dgtd_config *d = nullptr;
  REQUIRE(dgtd_config_parse(text.c_str(), &d) == DGTD_OK);
  dgtd_config_free(d);
  dgtd_config_free(c);

  CHECK(dgtd_config_parse("[domain]\n", &d) == DGTD_CONFIG);
  CHECK(std::string(dgtd_last_error()).find("dim") != std::string::npos);
  CHECK(dgtd_config_load("/nonexistent/x.cfg", &d) == DGTD_IO);
  CHECK(dgtd_config_parse(nullptr, &d) == DGTD_INVALID_ARGUMENT);
  CHECK(dgtd_run(nullptr, nullptr, nullptr) == DGTD_INVALID_ARGUMENT);
}

TEST_CASE("stepping")
{
  dgtd_config *c = nullptr;
  REQUIRE(dgtd_config_parse(kCavity, &c) == DGTD_OK);
  dgtd_simulation *s = nullptr;
  REQUIRE(dgtd_simulation_create(c, &s) == DGTD_OK);
  double e0 = 0.0, e1 = 0.0, tau = 0.0, t = 0.0;
  long k = 0;
  REQUIRE(dgtd_simulation_energy(s, &e0) == DGTD_OK);
  REQUIRE(dgtd_simulation_step(s, 25) == DGTD_OK);
  REQUIRE(dgtd_simulation_energy(s, &e1) == DGTD_OK);
  REQUIRE(dgtd_simulation_tau(s, &tau) == DGTD_OK);
  REQUIRE(dgtd_simulation_time(s, &t, &k) == DGTD_OK);
  CHECK(k == 25);
  CHECK(t == doctest::Approx(25 * tau));
  CHECK(std::abs(e1 - e0) < 1e-10 * e0);

  const double x[3] = {0.3, 0.4, 0.0};
  double e[3], h[3];
  REQUIRE(dgtd_simulation_sample(s, x, e, h) == DGTD_OK);
  CHECK(std::abs(h[2]) > 0.0);
  const double outside[3] = {3.0, 0.0, 0.0};
  CHECK(dgtd_simulation_sample(s, outside, e, h) == DGTD_CONFIG);
  CHECK(dgtd_simulation_step(s, -1) == DGTD_INVALID_ARGUMENT);
  dgtd_simulation_free(s);

  const auto dir = (std::filesystem::temp_directory_path() / "dgtd_capi_run").string();
  dgtd_run_summary sum{};
  REQUIRE(dgtd_run(c, dir.c_str(), &sum) == DGTD_OK);
  CHECK(sum.steps == 20);
  CHECK(sum.elements == 18);
  CHECK(std::filesystem::exists(dir + "/summary.json"));

  std::size_t needed = 0;
  REQUIRE(dgtd_info(c, 3, nullptr, 0, &needed) == DGTD_OK);
  CHECK(needed > 100);
  dgtd_config_free(c);
}
