#include <cmath>
#include <numeric>

#include "chiralcav/analytics.hpp"
#include "chiralcav/detection.hpp"
#include "chiralcav/error.hpp"
#include "chiralcav/harness.hpp"
#include "chiralcav/special.hpp"
#include "support.hpp"

using namespace chiralcav;
using chiralcav::test::rel_err;

namespace {

constexpr double pi = constants::pi;

// erf and erfc to 20 digits from an arbitrary-precision evaluation.
struct ErfRow {
  double x, erf, erfc;
};
constexpr ErfRow erf_table[] = {
    {0.0, 0.0, 1.0},
    {0.01, 0.011283415555849617151, 0.98871658444415038285},
    {0.1, 0.1124629160182848984, 0.8875370839817151016},
    {0.25, 0.27632639016823693299, 0.72367360983176306701},
    {0.5, 0.52049987781304653768, 0.47950012218695346232},
    {0.75, 0.7111556336535151316, 0.2888443663464848684},
    {0.9899494936611666, 0.83848668153245792626, 0.16151331846754207374},
    {1.0, 0.84270079294971486934, 0.15729920705028513066},
    {1.25, 0.92290012825645823014, 0.077099871743541769863},
    {1.5, 0.96610514647531072707, 0.033894853524689272933},
    {2.0, 0.99532226501895273416, 0.0046777349810472658379},
    {2.5, 0.99959304798255504106, 0.00040695201744495893956},
    {3.0, 0.99997790950300141456, 0.000022090496998585441373},
    {3.5, 0.99999925690162765859, 7.4309837234141274552e-7},
    {4.0, 0.99999998458274209972, 1.5417257900280018852e-8},
    {5.0, 0.99999999999846254021, 1.5374597944280348502e-12},
    {-0.5, -0.52049987781304653768, 1.5204998778130465377},
    {-1.5, -0.96610514647531072707, 1.9661051464753107271},
    {-3.0, -0.99997790950300141456, 1.9999779095030014146},
    {6.0, 0.99999999999999997848, 2.1519736712498913117e-17},
};

Trajectory constant_trajectory(Complex c, double kappa, double phi_lo, double t_end, int n) {
  Trajectory t;
  t.kappa = kappa;
  t.phi_lo = phi_lo;
  for (int i = 0; i <= n; ++i) {
    TrajectorySample s;
    s.t = t_end * i / n;
    s.c = c;
    s.signal = instantaneous_signal(c, kappa, phi_lo);
    t.samples.push_back(s);
  }
  return t;
}

Scenario dispersive_case() {
  Scenario s = Scenario::propanediol(0);
  s.drive.lambda = 0.01;
  s.sample.N_m = 1000;
  s.sample.v = 1.0;
  return s;
}

}  // namespace

TEST_SUITE("detection") {

TEST_CASE("error function table") {
  for (const auto& row : erf_table) {
    CAPTURE(row.x);
    CHECK(std::abs(chiralcav::erf(row.x) - row.erf) <= 1e-12 * std::max(1e-300, std::abs(row.erf)) + 1e-300);
    CHECK(std::abs(chiralcav::erfc(row.x) - row.erfc) <= 1e-12 * row.erfc);
  }
}

TEST_CASE("error probability") {
  CHECK(error_probability(0.0) == 0.5);
  CHECK(std::abs(error_probability(3.0) - 1.3499e-3) < 1e-7);
  CHECK(error_probability(3.0) == doctest::Approx(0.0013498980316300945267).epsilon(1e-12));
  CHECK(error_probability(8.0) == doctest::Approx(6.2209605742717841235e-16).epsilon(1e-12));
  CHECK(error_probability(40.0) < 1e-300);
  CHECK(error_probability(3.0) < 1e-3);
  CHECK(error_probability(2.9) > 1e-3);
  double prev = 0.5;
  for (int i = 1; i <= 100; ++i) {
    const double p = error_probability(0.08 * i);
    CHECK(p < prev);
    prev = p;
  }
}

TEST_CASE("instantaneous signal") {
  const double kappa = 764.6;
  CHECK(std::abs(instantaneous_signal({3.0, 0.0}, kappa, pi / 2)) < 1e-12);
  CHECK(instantaneous_signal({0.0, 3.0}, kappa, pi / 2) == doctest::Approx(std::sqrt(2 * kappa) * 3.0));
}

TEST_CASE("integrate_signal") {
  SUBCASE("quadrature of a real amplitude vanishes") {
    const auto t = constant_trajectory({2.0, 0.0}, 100.0, pi / 2, 1.0, 100);
    CHECK(std::abs(integrate_signal(t, {0.1, 0.9})) < 1e-12);
  }
  SUBCASE("constant signal integrates exactly, including partial cells") {
    const auto t = constant_trajectory({0.0, 2.0}, 50.0, pi / 2, 1.0, 100);
    const double s = std::sqrt(100.0) * 2.0;
    CHECK(integrate_signal(t, {0.123, 0.789}) == doctest::Approx(s * (0.789 - 0.123)).epsilon(1e-12));
  }
  SUBCASE("linear signal is integrated exactly by the trapezoid") {
    Trajectory t;
    for (int i = 0; i <= 10; ++i) t.samples.push_back({0.1 * i, {}, {}, 0, 0, 3.0 * 0.1 * i, 0});
    CHECK(integrate_signal(t, {0.05, 0.95}) == doctest::Approx(1.5 * (0.95 * 0.95 - 0.05 * 0.05)).epsilon(1e-12));
  }
  SUBCASE("window outside the trajectory") {
    const auto t = constant_trajectory({0.0, 1.0}, 1.0, 0.0, 1.0, 10);
    try {
      integrate_signal(t, {0.5, 1.5});
      FAIL("expected WindowOutOfRange");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::WindowOutOfRange);
    }
  }
}

TEST_CASE("default window is centred on the crossing") {
  const Scenario s = dispersive_case();
  const Window w = s.window();
  CHECK(w.t0 / s.tau() == doctest::Approx(3.3).epsilon(1e-12));
  CHECK(w.tf / s.tau() == doctest::Approx(4.7).epsilon(1e-12));
}

TEST_CASE("noise and SNR scaling") {
  CHECK(noise_stddev(1.0, {0.0, 1.0}) == 1.0);
  CHECK(noise_stddev(50.0, {1.0, 3.0}) == doctest::Approx(10.0));
  const Window w{0.0, 0.25};
  const double a = snr_from_counts(0.7, -0.7, 1e8, w);
  CHECK(a == doctest::Approx(1.4 / (2 * std::sqrt(0.25))).epsilon(1e-12));
  for (double k : {2.0, 1e-3, 7.7e5}) CHECK(rel_err(snr_from_counts(0.7, -0.7, 1e8 * k, w), a) < 1e-12);
  const auto st = shot_statistics(0.7, -0.7, 1e8, w);
  CHECK(st.delta == doctest::Approx(std::sqrt(1e8 * 0.25)));
  CHECK(st.p_err == doctest::Approx(error_probability(st.snr)));
}

TEST_CASE("shot sampling") {
  const Window w{0.0, 0.5};
  SUBCASE("fixed seed reproduces the sequence") {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(sample_shot(0.3, 1e6, w, a) == sample_shot(0.3, 1e6, w, b));
  }
  SUBCASE("mean of 1e6 draws") {
    Rng rng(7);
    const double n_bar = 0.3, N_lo = 1e6;
    double sum = 0.0;
    constexpr int draws = 1000000;
    for (int i = 0; i < draws; ++i) sum += sample_shot(n_bar, N_lo, w, rng);
    const double mean = sum / draws;
    const double sem = std::sqrt(N_lo * w.length() / draws);
    CHECK(std::abs(mean - n_bar * std::sqrt(N_lo)) < 4 * sem);
  }
  SUBCASE("vanishing variance returns the mean") {
    Rng rng(1);
    CHECK(sample_shot(0.3, 1e-30, {0.0, 1e-30}, rng) == doctest::Approx(0.3 * 1e-15).epsilon(1e-6));
  }
}

TEST_CASE("decision rule") {
  Rng rng(3);
  CHECK(decide(5.0, rng) == Chirality::Left);
  CHECK(decide(-5.0, rng) == Chirality::Right);
  CHECK(decide(5.0, rng, false) == Chirality::Right);
  int left = 0;
  for (int i = 0; i < 10000; ++i) left += decide(0.0, rng) == Chirality::Left;
  CHECK(left > 4700);
  CHECK(left < 5300);
}

TEST_CASE("Monte Carlo at SNR = 3") {
  const auto mc = monte_carlo_from_counts(3.0, -3.0, 1e8, {0.0, 1.0}, 500000, 11);
  CHECK(mc.statistics.snr == doctest::Approx(3.0));
  CHECK(std::abs(mc.rate - error_probability(3.0)) < 3 * mc.standard_error);
  CHECK(mc.shots == 500000);
  CHECK_THROWS_AS(monte_carlo_from_counts(3.0, -3.0, 1e8, {0.0, 1.0}, 999, 11), Error);
}

TEST_CASE("Monte Carlo on integrated scenarios") {
  SUBCASE("no molecules: coin toss") {
    Scenario s = dispersive_case();
    s.sample.N_m = 0;
    const auto mc = monte_carlo_error_rate(s, 20000, 5);
    CHECK(mc.statistics.snr == 0.0);
    CHECK(std::abs(mc.rate - 0.5) < 3 * mc.standard_error);
  }
  SUBCASE("dispersive scenario agrees with the analytic rate") {
    const auto mc = monte_carlo_error_rate(dispersive_case(), 200000, 5);
    const double se = std::sqrt(mc.p_err_analytic * (1 - mc.p_err_analytic) / (2.0 * mc.shots));
    CHECK(std::abs(mc.rate - mc.p_err_analytic) <= 3 * se + 1e-12);
  }
  SUBCASE("552 molecules: error rate of order 1e-3") {
    Scenario s = dispersive_case();
    s.sample.N_m = 552;
    const auto mc = monte_carlo_error_rate(s, 500000, 9);
    CHECK(mc.rate > 3e-4);
    CHECK(mc.rate < 3e-3);
    CHECK(std::abs(mc.rate - mc.p_err_analytic) < 3 * mc.standard_error);
  }
}

TEST_CASE("hypotheses give opposite counts and signals") {
  const auto pair = evaluate_pair(dispersive_case(), Model::First);
  const auto& st = pair.statistics;
  CHECK(st.n_bar_L > 0);
  CHECK(std::abs(st.n_bar_L + st.n_bar_R) < 0.01 * std::abs(st.n_bar_L));
  double peak = 0.0;
  for (const auto& x : pair.left->samples) peak = std::max(peak, std::abs(x.signal));
  for (std::size_t i = 0; i < pair.left->samples.size(); ++i) {
    const double a = pair.left->samples[i].signal, b = pair.right->samples[i].signal;
    if (std::max(std::abs(a), std::abs(b)) > 1e-3 * peak) CHECK(a * b < 0);
  }
}

TEST_CASE("flipping the local-oscillator phase flips the counts") {
  Scenario s = dispersive_case();
  const auto a = evaluate_pair(s, Model::First).statistics;
  s.detection.phi_lo = -s.detection.phi_lo;
  const auto b = evaluate_pair(s, Model::First).statistics;
  CHECK(b.n_bar_L == doctest::Approx(-a.n_bar_L).epsilon(1e-9));
  CHECK(b.n_bar_R == doctest::Approx(-a.n_bar_R).epsilon(1e-9));
  CHECK(b.snr == doctest::Approx(a.snr).epsilon(1e-9));
}

TEST_CASE("SNR oracle at 3000 molecules") {
  Scenario s = dispersive_case();
  s.sample.N_m = 3000;
  s.drive.Delta_m = constants::angular(882.7);
  const double snr = evaluate_pair(s, Model::First).statistics.snr;
  CHECK(rel_err(snr, 16.2) < 0.05);
}

TEST_CASE("N_lo scaling leaves every decision sign distribution unchanged") {
  Scenario s = dispersive_case();
  s.sample.N_m = 300;
  const auto a = monte_carlo_error_rate(s, 100000, 21);
  s.detection.N_lo *= 1e4;
  const auto b = monte_carlo_error_rate(s, 100000, 21);
  CHECK(rel_err(b.statistics.snr, a.statistics.snr) < 1e-9);
  CHECK(a.rate == b.rate);
}

}
