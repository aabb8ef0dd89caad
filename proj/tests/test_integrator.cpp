#include <cmath>
#include <vector>

#include "chiralcav/error.hpp"
#include "chiralcav/integrator.hpp"
#include "support.hpp"

using namespace chiralcav;

TEST_SUITE("integrator") {

TEST_CASE("exponential decay at the output times") {
  const std::vector<double> times = {0.0, 0.5, 1.0, 2.5, 5.0};
  std::vector<double> seen;
  double worst = 0.0;
  integrate_dopri5([](double, std::span<const double> y, std::span<double> dy) { dy[0] = -y[0]; }, 0.0, 5.0,
                   {1.0}, times, {}, [&](std::size_t i, double t, std::span<const double> y) {
                     CHECK(t == times[i]);
                     seen.push_back(t);
                     worst = std::max(worst, std::abs(y[0] - std::exp(-t)));
                   });
  CHECK(seen.size() == times.size());
  CHECK(worst < 1e-9);
}

TEST_CASE("harmonic oscillator over many periods") {
  std::vector<double> times;
  for (int i = 0; i <= 200; ++i) times.push_back(0.5 * i);
  double worst = 0.0;
  const auto stats = integrate_dopri5(
      [](double, std::span<const double> y, std::span<double> dy) {
        dy[0] = y[1];
        dy[1] = -y[0];
      },
      0.0, 100.0, {1.0, 0.0}, times, {}, [&](std::size_t, double t, std::span<const double> y) {
        worst = std::max({worst, std::abs(y[0] - std::cos(t)), std::abs(y[1] + std::sin(t))});
      });
  CHECK(worst < 1e-6);
  CHECK(stats.accepted > 0);
  CHECK(stats.evaluations >= 6 * stats.accepted);
}

TEST_CASE("tighter tolerance reduces the error") {
  auto error_at = [](double rtol) {
    IntegratorOptions o;
    o.rtol = rtol;
    o.atol = rtol * 1e-2;
    double err = 0.0;
    const std::vector<double> t = {3.0};
    integrate_dopri5([](double tt, std::span<const double> y, std::span<double> dy) { dy[0] = std::cos(tt) * y[0]; },
                     0.0, 3.0, {1.0}, t, o,
                     [&](std::size_t, double tt, std::span<const double> y) { err = std::abs(y[0] - std::exp(std::sin(tt))); });
    return err;
  };
  CHECK(error_at(1e-10) < error_at(1e-5));
}

TEST_CASE("max_step bounds the step") {
  IntegratorOptions o;
  o.max_step = 0.01;
  const std::vector<double> t = {1.0};
  const auto stats = integrate_dopri5([](double, std::span<const double>, std::span<double> dy) { dy[0] = 1.0; },
                                      0.0, 1.0, {0.0}, t, o, [](std::size_t, double, std::span<const double>) {});
  CHECK(stats.accepted >= 100);
}

TEST_CASE("blow-up raises an integration error carrying the time") {
  const std::vector<double> t = {2.0};
  try {
    integrate_dopri5([](double, std::span<const double> y, std::span<double> dy) { dy[0] = y[0] * y[0]; }, 0.0, 2.0,
                     {1.0}, t, {}, [](std::size_t, double, std::span<const double>) {});
    FAIL("expected IntegrationError");
  } catch (const IntegrationError& e) {
    CHECK(e.code() == ErrorCode::Integration);
    CHECK(e.time() > 0.9);
    CHECK(e.time() < 1.0 + 1e-6);  // the exact singularity is t = 1
  }
}

TEST_CASE("step budget exhaustion raises an integration error") {
  IntegratorOptions o;
  o.max_steps = 10;
  o.max_step = 1e-3;
  const std::vector<double> t = {1.0};
  CHECK_THROWS_AS(integrate_dopri5([](double, std::span<const double>, std::span<double> dy) { dy[0] = 1.0; }, 0.0,
                                   1.0, {0.0}, t, o, [](std::size_t, double, std::span<const double>) {}),
                  IntegrationError);
}

TEST_CASE("options validation") {
  IntegratorOptions o;
  CHECK_NOTHROW(o.validate());
  o.rtol = -1.0;
  CHECK_THROWS_AS(o.validate(), Error);
}

}
