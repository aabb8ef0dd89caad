#include <utility>
#include <cmath>

#include "chiralcav/analytics.hpp"
#include "chiralcav/error.hpp"
#include "chiralcav/harness.hpp"
#include "chiralcav/special.hpp"
#include "support.hpp"

using namespace chiralcav;
using chiralcav::test::rel_err;
using chiralcav::test::uniform;

namespace {

constexpr double two_pi = constants::two_pi;

DispersiveInputs reference_inputs(double N_m = 3000.0, double Delta_hz = 882.7) {
  Scenario s = Scenario::propanediol(0);
  s.sample.N_m = N_m;
  s.drive.Delta_m = constants::angular(Delta_hz);
  return DispersiveInputs::from(s);
}

}  // namespace

TEST_SUITE("analytics") {

TEST_CASE("dispersive phase") {
  const auto in = reference_inputs(1000.0, 822.7);
  const double phase = dispersive_phase(0.5 * in.g0, in.N_m, in.kappa, in.Delta_m, +1.0);
  CHECK(rel_err(phase, -0.0338) < 0.01);
  CHECK(dispersive_phase(0.5 * in.g0, in.N_m, in.kappa, in.Delta_m, -1.0) == doctest::Approx(-phase));
  CHECK(dispersive_phase(0.5 * in.g0, 0.0, in.kappa, in.Delta_m, 1.0) == 0.0);
  CHECK_THROWS_AS(dispersive_phase(1.0, 1.0, 1.0, 0.0, 1.0), Error);
}

TEST_CASE("moving-sample SNR") {
  const auto in = reference_inputs();
  CHECK(snr_moving(in) == doctest::Approx(16.9627267268765).epsilon(1e-9));
  CHECK(rel_err(snr_moving(in), 16.8) < 0.02);
  CHECK(snr_simplified(in) == doctest::Approx(16.9257731887413).epsilon(1e-9));
  CHECK(rel_err(snr_simplified(in), snr_moving(in)) < 0.02);

  auto zero = in;
  zero.N_m = 0.0;
  CHECK(snr_moving(zero) == 0.0);
  CHECK(snr_simplified(zero) == 0.0);

  SUBCASE("monotone in N_m, lambda and 1/v") {
    for (int i = 0; i < 200; ++i) {
      auto a = in;
      a.N_m = uniform(1.0, 1e4);
      a.lambda = uniform(1e-4, 0.1);
      a.v = uniform(0.1, 10.0);
      auto b = a;
      b.N_m *= 1.1;
      CHECK(snr_moving(b) > snr_moving(a));
      b = a;
      b.lambda *= 1.1;
      CHECK(snr_moving(b) > snr_moving(a));
      b = a;
      b.v *= 1.1;
      CHECK(snr_moving(b) < snr_moving(a));
    }
  }
  SUBCASE("linear in N_m") {
    auto a = in;
    a.N_m = 250.0;
    CHECK(rel_err(snr_moving(in), 12.0 * snr_moving(a)) < 1e-12);
  }
  SUBCASE("validation") {
    auto bad = in;
    bad.v = 0.0;
    CHECK_THROWS_AS(snr_moving(bad), Error);
    bad = in;
    bad.Delta_m = 0.0;
    CHECK_THROWS_AS(snr_moving(bad), Error);
  }
}

TEST_CASE("optimal window") {
  const double m = optimal_window();
  CHECK(m == doctest::Approx(0.69999263843910211337).epsilon(1e-12));
  CHECK(std::abs(window_factor_slope(m)) < 1e-10);
  const double h = 1e-4;
  const double second = (window_factor(m + h) - 2 * window_factor(m) + window_factor(m - h)) / (h * h);
  CHECK(second < 0.0);
  for (int i = 1; i <= 400; ++i) CHECK(window_factor(0.005 * i) <= window_factor(m) + 1e-15);
  // Slope against a central difference.
  for (double x : {0.2, 0.5, 1.0, 1.7}) {
    const double fd = (window_factor(x + 1e-6) - window_factor(x - 1e-6)) / 2e-6;
    CHECK(window_factor_slope(x) == doctest::Approx(fd).epsilon(1e-7));
  }
}

TEST_CASE("critical molecule number, simplified") {
  const auto in = reference_inputs(1000.0, 822.7);
  const double n = critical_nm_simplified(in);
  CHECK(n == doctest::Approx(531.733463496168).epsilon(1e-9));
  auto at = in;
  at.N_m = 530.0;
  CHECK(std::abs(snr_simplified(at) - 3.0) < 0.01);
  at.N_m = n;
  CHECK(snr_simplified(at) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("figures of merit of the three designs") {
  const double reference[] = {8.01039e-2, 6.37345e-2, 7.32773e-2};
  for (int q = 0; q < 3; ++q) {
    const auto d = propanediol_cavity(q);
    CAPTURE(q);
    CHECK(rel_err(figure_of_merit(d.g0, d.w0, d.kappa), reference[q]) < 0.005);
  }
  CHECK(figure_of_merit(0.0, 1e-2, 1.0) == 0.0);
  CHECK_THROWS_AS(figure_of_merit(1.0, 1e-2, 0.0), Error);
}

TEST_CASE("trapped sample") {
  const auto d = propanediol_cavity(0);
  CHECK(snr_trapped(d.g0, 1.0, 1.0, d.kappa, 0.0) == 0.0);
  CHECK(trap_time_unit(d.g0, d.kappa) == doctest::Approx(25.7462460699828).epsilon(1e-9));
  CHECK(critical_trap_time(d.g0, 0.01, d.kappa, 1.0) == doctest::Approx(2574.62460699828).epsilon(1e-9));
  const double t0 = trap_time_unit(d.g0, d.kappa);
  CHECK(snr_trapped(d.g0, 1.0, 1.0, d.kappa, t0) == doctest::Approx(3.0).epsilon(1e-12));
  for (int i = 0; i < 100; ++i) {
    const double lambda = uniform(1e-3, 1.0), N = uniform(1.0, 1e3);
    const double tc = critical_trap_time(d.g0, lambda, d.kappa, N);
    CHECK(rel_err(tc, t0 / (lambda * N * N)) < 1e-12);
    CHECK(rel_err(snr_trapped(d.g0, N, lambda, d.kappa, tc), 3.0) < 1e-12);
    CHECK(rel_err(snr_trapped(d.g0, N, lambda, d.kappa, 4 * tc), 6.0) < 1e-12);
  }
  CHECK_THROWS_AS(snr_trapped(d.g0, 1.0, 1.0, d.kappa, -1.0), Error);
}

TEST_CASE("dipole-dipole bound") {
  const auto molecule = MoleculeSpec::propanediol();
  const double gamma = two_pi * 8.07562914795168e-11;
  const double k = molecule.omega32() / constants::speed_of_light;
  CHECK(dipole_bound(gamma, 0.0, 1e-3, k).V_max == 0.0);
  const double full = dipole_bound(gamma, 3000.0, 1e-3, k).V_max;
  CHECK(rel_err(dipole_bound(gamma, 3000.0, 0.5e-3, k).V_max, 8.0 * full) < 1e-12);
  CHECK(rel_err(dipole_bound(gamma, 6000.0, 1e-3, k).V_max, 2.0 * full) < 1e-12);
  CHECK(dipole_bound(gamma, 3000.0, 1e-3, k).Gamma == gamma);
  CHECK_THROWS_AS(dipole_bound(gamma, 1.0, 0.0, k), Error);

  const auto params = molecule_dissipation(molecule, 3000.0, 1e-3);
  CHECK(rel_err(params.gamma / two_pi, 8.07562914795168e-11) < 1e-9);
  CHECK(rel_err(params.V_max / two_pi, 2.04306504188540e-4) < 1e-9);
}

TEST_CASE("dipole-dipole bound against the reference value") {
  // Documented discrepancy: the closed form gives 2 pi x 2.043e-4 Hz.
  const auto params = molecule_dissipation(MoleculeSpec::propanediol(), 3000.0, 1e-3);
  CHECK(rel_err(params.V_max / two_pi, 14.4e-5) < 0.03);
}

TEST_CASE("critical photon number") {
  CHECK(critical_photon_number(882.7, 3.6) == doctest::Approx(240481.26).epsilon(1e-8));
  CHECK(critical_photon_number(882.7, 7.2) == doctest::Approx(240481.26 / 4).epsilon(1e-8));
  CHECK(critical_photon_number(0.0, 3.6) == 0.0);
  CHECK(critical_photon_number(-882.7, 3.6) == critical_photon_number(882.7, 3.6));
  CHECK_THROWS_AS(critical_photon_number(1.0, 0.0), Error);
}

TEST_CASE("dispersive validity") {
  auto in = reference_inputs(1000.0, 822.7);
  in.lambda = 0.01;
  CHECK(in.dispersive_valid());
  in.lambda = 0.5;
  CHECK_FALSE(in.dispersive_valid());
}

TEST_CASE("integrated counts follow the lagged dispersive response") {
  // Window integral of sqrt(2 kappa) Re(i c) for the linear model
  // dc/dt = -kappa c - i chi(t) c + eta, integrated independently
  // (N_m = 3000, lambda = 0.01, Delta_m = 2 pi x 822.7 Hz).
  const std::pair<double, double> oracle[] = {
      {1.0, 2.095894455086043}, {2.0, 0.9860278066030895}, {5.0, 0.3073050925793402}};
  for (const auto& [v, n] : oracle) {
    Scenario s = Scenario::propanediol(0);
    s.drive.lambda = 0.01;
    s.sample.v = v;
    s.sample.N_m = 3000;
    s.samples_per_tau = 200;
    const auto st = evaluate_pair(s, Model::First).statistics;
    CAPTURE(v);
    CHECK(rel_err(st.n_bar_L, n) < 0.02);
    CHECK(rel_err(-st.n_bar_R, n) < 0.02);
  }
}

TEST_CASE("closed form tracks the integrated SNR in the dispersive regime") {
  for (double v : {1.0, 2.0, 5.0}) {
    for (double N : {100.0, 500.0, 1000.0, 3000.0}) {
      Scenario s = Scenario::propanediol(0);
      s.drive.lambda = 0.01;
      s.sample.v = v;
      s.sample.N_m = N;
      s.samples_per_tau = 200;
      const double numeric = evaluate_pair(s, Model::First).statistics.snr;
      const double closed = snr_moving(DispersiveInputs::from(s));
      CAPTURE(v);
      CAPTURE(N);
      CHECK(rel_err(numeric, closed) < 0.05);
    }
  }
}

}
