#include <cmath>
#include <cstdio>
#include <string>

#include "chiralcav/config.hpp"
#include "chiralcav/error.hpp"
#include "support.hpp"

using namespace chiralcav;
using chiralcav::test::rel_err;

#ifndef CHIRALCAV_CONFIG_DIR
#error "CHIRALCAV_CONFIG_DIR must point at the shipped configs"
#endif

namespace {

constexpr double two_pi = constants::two_pi;

ParseError parse_failure(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("expected a ParseError");
  return ParseError(0, 0, "");
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("quantities and units") {
  CHECK(parse_quantity("5.78109 GHz", Dimension::Frequency) == doctest::Approx(5.78109e9).epsilon(1e-15));
  CHECK(parse_quantity("5.78109GHz", Dimension::Frequency) == doctest::Approx(5.78109e9).epsilon(1e-15));
  CHECK(parse_quantity("822.7 Hz", Dimension::Rate) == doctest::Approx(two_pi * 822.7).epsilon(1e-15));
  CHECK(parse_quantity("822.7", Dimension::Rate) == doctest::Approx(two_pi * 822.7).epsilon(1e-15));
  CHECK(parse_quantity("100 rad/s", Dimension::Rate) == doctest::Approx(100.0));
  CHECK(parse_quantity("1 kHz", Dimension::Rate) == doctest::Approx(two_pi * 1e3));
  CHECK(parse_quantity("40 mm", Dimension::Length) == doctest::Approx(0.04));
  CHECK(parse_quantity("3 cm", Dimension::Length) == doctest::Approx(0.03));
  CHECK(parse_quantity("7 um", Dimension::Length) == doctest::Approx(7e-6));
  CHECK(parse_quantity("1 m/s", Dimension::Speed) == 1.0);
  CHECK(parse_quantity("5 ms", Dimension::Time) == doctest::Approx(5e-3));
  CHECK(parse_quantity("1 D", Dimension::Dipole) == doctest::Approx(3.33564e-30).epsilon(1e-5));
  CHECK(parse_quantity("-pi/2", Dimension::Angle) == doctest::Approx(-constants::pi / 2));
  CHECK(parse_quantity("90 deg", Dimension::Angle) == doctest::Approx(constants::pi / 2));
  CHECK(parse_quantity("1e8 1/s", Dimension::PerSecond) == 1e8);
  CHECK(parse_quantity("0.01", Dimension::None) == 0.01);
  CHECK_THROWS_AS(parse_quantity("12 parsec", Dimension::Length), Error);
  CHECK_THROWS_AS(parse_quantity("abc", Dimension::None), Error);
  CHECK_THROWS_AS(parse_quantity("", Dimension::None), Error);
  CHECK_THROWS_AS(parse_quantity("3 mm", Dimension::Time), Error);
}

TEST_CASE("shipped dispersive configuration") {
  const auto loaded = load_config(std::string(CHIRALCAV_CONFIG_DIR) + "/propanediol_dispersive.cfg");
  const Scenario& s = loaded.scenario;
  CHECK(loaded.notices.empty());
  CHECK(s.drive.lambda == 0.01);
  CHECK(s.sample.N_m == 1000.0);
  CHECK(s.sample.v == 1.0);
  CHECK(s.cavity.geometry.q == 0);
  CHECK(rel_err(s.cavity.geometry.d, 3.460970e-3) < 1e-5);
  CHECK(s.molecule.chirality == Chirality::Left);
  CHECK(s.detection.phi_lo == doctest::Approx(-constants::pi / 2));
  CHECK(s.model == Model::First);
  CHECK(canonical_text(s) == canonical_text(Scenario::propanediol(0)));
}

TEST_CASE("missing molecule section falls back with a notice") {
  const auto loaded = parse_config("[drive]\nlambda = 0.02\n");
  REQUIRE(loaded.notices.size() == 1);
  CHECK(loaded.notices[0].find("molecule") != std::string::npos);
  CHECK(loaded.scenario.drive.lambda == 0.02);
}

TEST_CASE("parse errors carry positions") {
  SUBCASE("unknown key") {
    const auto e = parse_failure("[molecule]\npreset = propanediol\n  colour = blue\n");
    CHECK(e.line() == 3);
    CHECK(e.column() == 3);
    CHECK(e.detail().find("colour") != std::string::npos);
  }
  SUBCASE("duplicate key") {
    const auto e = parse_failure("[drive]\nlambda = 0.1\nlambda = 0.2\n");
    CHECK(e.line() == 3);
    CHECK(e.detail().find("duplicate") != std::string::npos);
  }
  SUBCASE("unknown section") {
    const auto e = parse_failure("# comment\n[laser]\n");
    CHECK(e.line() == 2);
  }
  SUBCASE("bad unit") {
    const auto e = parse_failure("[cavity]\nR_m = 40 parsec\n");
    CHECK(e.line() == 2);
  }
  SUBCASE("malformed JSON") {
    const auto e = parse_failure("{\n  \"drive\": {\"lambda\": }\n}");
    CHECK(e.line() == 2);
  }
  SUBCASE("error message format") {
    const auto e = parse_failure("[drive]\nlambda = 0.1\nlambda = 0.2\n");
    CHECK(std::string(e.what()).rfind("3:1: ", 0) == 0);
    CHECK(e.code() == ErrorCode::Parse);
  }
}

TEST_CASE("validation errors") {
  SUBCASE("eta inconsistent with lambda") {
    try {
      parse_config("[drive]\nlambda = 0.01\neta = 1 rad/s\n");
      FAIL("expected a validation error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Validation);
      CHECK(std::string(e.what()).find("eta") != std::string::npos);
    }
  }
  SUBCASE("consistent eta is accepted and lambda may be derived") {
    const Scenario base = Scenario::propanediol(0);
    const double eta = base.eta();
    char text[128];
    std::snprintf(text, sizeof text, "[drive]\neta = %.17g rad/s\n", eta);
    const auto loaded = parse_config(text);
    CHECK(loaded.scenario.drive.lambda == doctest::Approx(0.01).epsilon(1e-12));
  }
  SUBCASE("sigma_z0 must be +-1") {
    CHECK_THROWS_AS(parse_config("[sample]\nsigma_z0 = 0\n"), Error);
  }
  SUBCASE("negative lambda") {
    CHECK_THROWS_AS(parse_config("[drive]\nlambda = -1\n"), Error);
  }
}

TEST_CASE("JSON and key-value forms are equivalent") {
  const auto text = parse_config(
      "[molecule]\npreset = propanediol\nchirality = right\n[cavity]\nq = 1\n"
      "[drive]\nlambda = 0.05\nDelta_m = 900 Hz\n[sample]\nN_m = 250\nv = 2 m/s\n"
      "[detection]\nM_Y = 0.5\n[run]\nmodel = second\nseed = 17\n");
  const auto json = parse_config(
      R"({"molecule": {"preset": "propanediol", "chirality": "right"}, "cavity": {"q": 1},
          "drive": {"lambda": 0.05, "Delta_m": "900 Hz"}, "sample": {"N_m": 250, "v": "2 m/s"},
          "detection": {"M_Y": 0.5}, "run": {"model": "second", "seed": 17}})");
  CHECK(canonical_text(text.scenario) == canonical_text(json.scenario));
  CHECK(text.scenario.seed == 17);
  CHECK(text.scenario.model == Model::Second);
}

TEST_CASE("canonical text round-trips") {
  Scenario s = Scenario::propanediol(2);
  s.drive.lambda = 0.0371;
  s.drive.Delta_m = 1234.5678;
  s.sample.N_m = 777.25;
  s.sample.v = 3.3;
  s.sample.Ybar0 = -0.05;
  s.detection.N_lo = 2.5e7;
  s.seed = 99;
  s.model = Model::Dissipative;
  s.dissipation = DissipationParams{1e-9, 2e-8};
  const std::string first = canonical_text(s);
  const auto back = parse_config(first);
  CHECK(canonical_text(back.scenario) == first);
  CHECK(back.scenario.sample.N_m == s.sample.N_m);
  CHECK(back.scenario.drive.Delta_m == s.drive.Delta_m);
  CHECK(back.scenario.cavity.g0 == s.cavity.g0);
  CHECK(fnv1a(first) == fnv1a(canonical_text(back.scenario)));
}

TEST_CASE("fnv1a") {
  CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a("foobar") == 0x85944171f73967e8ULL);
}

}
