#pragma once

// Balanced homodyne detection of the cavity output. Counts are kept per unit
// local-oscillator amplitude |c_lo|; sqrt(N_lo) is reattached when shots are
// drawn.

#include <cstdint>
#include <random>

#include "chiralcav/dynamics.hpp"
#include "chiralcav/molecule.hpp"
#include "chiralcav/scenario.hpp"

namespace chiralcav {

// sqrt(2 kappa) Re(exp(-i phi_lo) c).
double instantaneous_signal(Complex c, double kappa, double phi_lo);

// Trapezoid of the signal over the window; the window ends are linearly
// interpolated when they fall between grid points. Throws
// Error(WindowOutOfRange).
double integrate_signal(const Trajectory& trajectory, const Window& window);

// sqrt(N_lo (tf - t0)).
double noise_stddev(double N_lo, const Window& window);

// |n_L - n_R| sqrt(N_lo) / (2 delta) for unit counts n_L, n_R.
double snr_from_counts(double n_left, double n_right, double N_lo, const Window& window);

struct ShotStatistics {
  double n_bar_L = 0.0;
  double n_bar_R = 0.0;
  double delta = 0.0;
  double snr = 0.0;
  double p_err = 0.5;
};

ShotStatistics shot_statistics(double n_left, double n_right, double N_lo, const Window& window);

using Rng = std::mt19937_64;

// n ~ Normal(n_bar_unit sqrt(N_lo), N_lo (tf - t0)).
double sample_shot(double n_bar_unit, double N_lo, const Window& window, Rng& rng);

// Sign decision against threshold 0: positive counts mean Left when
// `left_positive`, ties resolved by a fair coin from `rng`.
Chirality decide(double n, Rng& rng, bool left_positive = true);

struct MonteCarloResult {
  ShotStatistics statistics;
  double p_err_analytic = 0.5;
  double rate = 0.0;
  double standard_error = 0.0;
  std::uint64_t shots = 0;  // per hypothesis
  std::uint64_t seed = 0;
};

// Draws `shots` outcomes per hypothesis from the given mean counts and counts
// misclassifications.
MonteCarloResult monte_carlo_from_counts(double n_left, double n_right, double N_lo,
                                         const Window& window, std::uint64_t shots,
                                         std::uint64_t seed);

// Integrates both hypotheses of `scenario` (sigma_z0 = +1 for Left, -1 for
// Right) and samples shots from the resulting counts.
MonteCarloResult monte_carlo_error_rate(const Scenario& scenario, std::uint64_t shots,
                                        std::uint64_t seed);

}  // namespace chiralcav
