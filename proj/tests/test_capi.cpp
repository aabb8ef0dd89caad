// Exercises the shared library through its C interface only.

#include <chiralcav/chiralcav.h>

#include <cmath>
#include <cstdlib>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace {

struct Config {
  cc_config* handle = nullptr;
  Config() { REQUIRE(cc_config_default(&handle) == CC_OK); }
  ~Config() { cc_config_free(handle); }
};

std::string take(char* text) {
  std::string s = text ? text : "";
  cc_string_free(text);
  return s;
}

}  // namespace

TEST_SUITE("capi") {

TEST_CASE("version and status names") {
  CHECK(std::string(cc_version()).size() > 0);
  CHECK(std::string(cc_status_name(CC_OK)) == "ok");
  CHECK(std::string(cc_status_name(CC_ERR_PARSE)) == "parse");
}

TEST_CASE("errors are reported per call") {
  cc_config* config = nullptr;
  CHECK(cc_config_load_string("[drive]\nlambda = 0.1\nlambda = 0.2\n", &config) == CC_ERR_PARSE);
  CHECK(config == nullptr);
  const auto j = nlohmann::json::parse(cc_last_error_json());
  CHECK(j["error"] == "parse");
  CHECK(j["line"] == 3);
  CHECK(j["column"] == 1);
  CHECK(std::string(cc_last_error()).find("duplicate") != std::string::npos);

  CHECK(cc_config_load_file("/nonexistent/x.cfg", &config) == CC_ERR_IO);
  CHECK(nlohmann::json::parse(cc_last_error_json())["error"] == "io");

  double x = 0.0;
  CHECK(cc_parse_quantity("40 mm", CC_DIM_LENGTH, &x) == CC_OK);
  CHECK(x == doctest::Approx(0.04));
  CHECK(std::string(cc_last_error()).empty());
  CHECK(cc_parse_quantity(nullptr, CC_DIM_LENGTH, &x) == CC_ERR_INVALID_ARGUMENT);
  CHECK(cc_parse_quantity("1 m", CC_DIM_LENGTH, nullptr) == CC_ERR_INVALID_ARGUMENT);
}

TEST_CASE("config handles") {
  Config c;
  uint64_t seed = 0;
  CHECK(cc_config_set_seed(c.handle, 77) == CC_OK);
  CHECK(cc_config_get_seed(c.handle, &seed) == CC_OK);
  CHECK(seed == 77);
  CHECK(cc_config_set_model(c.handle, CC_MODEL_SECOND) == CC_OK);
  cc_model model = CC_MODEL_FIRST;
  CHECK(cc_config_get_model(c.handle, &model) == CC_OK);
  CHECK(model == CC_MODEL_SECOND);
  CHECK(cc_config_set_tolerance(c.handle, -1.0) == CC_ERR_INVALID_ARGUMENT);

  cc_config* copy = nullptr;
  REQUIRE(cc_config_clone(c.handle, &copy) == CC_OK);
  uint64_t h1 = 0, h2 = 0;
  cc_config_hash(c.handle, &h1);
  cc_config_hash(copy, &h2);
  CHECK(h1 == h2);
  char* text = nullptr;
  REQUIRE(cc_config_canonical(copy, &text) == CC_OK);
  const std::string canonical = take(text);
  cc_config_free(copy);

  cc_config* reparsed = nullptr;
  REQUIRE(cc_config_load_string(canonical.c_str(), &reparsed) == CC_OK);
  uint64_t h3 = 0;
  cc_config_hash(reparsed, &h3);
  CHECK(h3 == h1);
  cc_config_free(reparsed);

  cc_config* bare = nullptr;
  REQUIRE(cc_config_load_string("[drive]\nlambda = 0.02\n", &bare) == CC_OK);
  char* notices = nullptr;
  REQUIRE(cc_config_notices(bare, &notices) == CC_OK);
  CHECK(nlohmann::json::parse(take(notices)).size() == 1);
  cc_config_free(bare);
  cc_config_free(nullptr);
}

TEST_CASE("simulate and detect") {
  Config c;
  cc_trajectory* t = nullptr;
  REQUIRE(cc_simulate(c.handle, -1, &t) == CC_OK);
  CHECK(cc_trajectory_size(t) > 100);
  cc_sample first{}, last{};
  CHECK(cc_trajectory_sample(t, 0, &first) == CC_OK);
  CHECK(cc_trajectory_sample(t, cc_trajectory_size(t) - 1, &last) == CC_OK);
  CHECK(first.sigma_z == -1.0);
  CHECK(last.t > first.t);
  CHECK(cc_trajectory_sample(t, cc_trajectory_size(t), &last) == CC_ERR_INVALID_ARGUMENT);
  double dev = 1.0, counts = 0.0;
  CHECK(cc_trajectory_bloch_deviation(t, &dev) == CC_OK);
  CHECK(dev < 1e-6);
  CHECK(cc_trajectory_counts(t, &counts) == CC_OK);
  CHECK(counts < 0.0);
  char* csv = nullptr;
  REQUIRE(cc_trajectory_csv(t, "abc", &csv) == CC_OK);
  const std::string body = take(csv);
  CHECK(body.find("abc") != std::string::npos);
  cc_trajectory_free(t);
  CHECK(cc_simulate(c.handle, 5, &t) == CC_ERR_INVALID_ARGUMENT);

  cc_detection d{};
  REQUIRE(cc_detect(c.handle, 2, &d) == CC_OK);
  CHECK(d.snr == doctest::Approx(std::abs(d.n_bar_L - d.n_bar_R) * 1e4 / (2 * d.delta)));
  CHECK(d.snr > 4.0);
  CHECK(d.snr < 7.0);
  CHECK(d.t0 < d.tf);

  cc_montecarlo mc{};
  REQUIRE(cc_montecarlo_run(c.handle, 20000, 3, &mc) == CC_OK);
  CHECK(mc.shots == 20000);
  CHECK(mc.snr == doctest::Approx(d.snr).epsilon(1e-12));
}

TEST_CASE("cavity design and ESST") {
  cc_cavity_design d{};
  REQUIRE(cc_design_cavity(0.04, 0, 5.78109e9, 1.9 * 3.33564095198152e-30, nullptr, &d) == CC_OK);
  CHECK(d.d == doctest::Approx(3.460970e-3).epsilon(1e-5));
  CHECK(d.g0 / (2 * M_PI) == doctest::Approx(3.68).epsilon(2e-3));
  CHECK(cc_design_cavity(0.04, 0, 1e9, 1e-30, nullptr, &d) == CC_ERR_NO_ROOT);

  cc_esst_result r{};
  REQUIRE(cc_esst(M_PI / 2, CC_LEFT, 1, &r) == CC_OK);
  CHECK(r.unitarity_error < 1e-12);
  CHECK(r.sigma_z0 == -1);
  CHECK(r.populations[2][1] == doctest::Approx(1.0).epsilon(1e-12));
  cc_esst_result l{};
  REQUIRE(cc_esst(M_PI / 2, CC_RIGHT, 1, &l) == CC_OK);
  CHECK(l.sigma_z0 == +1);
  CHECK(cc_esst(0.0, CC_LEFT, 4, &r) == CC_ERR_INVALID_ARGUMENT);
}

TEST_CASE("analytics, sweep, comparisons") {
  Config c;
  char* json = nullptr;
  REQUIRE(cc_analytics_json(c.handle, &json) == CC_OK);
  const auto a = nlohmann::json::parse(take(json));
  CHECK(a.contains("snr_analytic"));

  char* csv = nullptr;
  char* summary = nullptr;
  REQUIRE(cc_sweep(c.handle, R"({"axes": [{"name": "N_m", "values": [200, 600]}]})", 2, &csv, &summary) ==
          CC_OK);
  const std::string table = take(csv);
  CHECK(table.find("N_m,n_bar_L") != std::string::npos);
  CHECK(nlohmann::json::parse(take(summary)).contains("config_hash"));
  CHECK(cc_sweep(c.handle, "{", 1, &csv, nullptr) != CC_OK);
  CHECK(cc_sweep(c.handle, R"({"axes": [{"name": "colour", "values": [1]}]})", 1, nullptr, nullptr) !=
        CC_OK);

  int n = 0;
  REQUIRE(cc_critical_nm(c.handle, 3.0, 2, &n) == CC_OK);
  CHECK(n > 450);
  CHECK(n < 650);

  REQUIRE(cc_compare_json(c.handle, "dissipation", &json) == CC_OK);
  CHECK(nlohmann::json::parse(take(json)).is_object());
  CHECK(cc_compare_json(c.handle, "colour", &json) == CC_ERR_INVALID_ARGUMENT);
}

TEST_CASE("acceptance through the C interface") {
  CHECK(cc_check_count() == 11);
  int ids[] = {2, 6};
  int passed = -1;
  int calls = 0;
  auto cb = [](int, const char* name, int, const char*, double, void* user) {
    CHECK(std::string(name).size() > 0);
    ++*static_cast<int*>(user);
  };
  REQUIRE(cc_check(ids, 2, 1, cb, &calls, &passed) == CC_OK);
  CHECK(calls == 2);
  CHECK(passed == 2);
  int bad = 12;
  CHECK(cc_check(&bad, 1, 1, nullptr, nullptr, &passed) == CC_ERR_INVALID_ARGUMENT);
}

}
