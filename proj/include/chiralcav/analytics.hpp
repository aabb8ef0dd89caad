#pragma once

// Closed-form results of the dispersive limit, used as oracles for the
// numerics.

#include "chiralcav/scenario.hpp"

namespace chiralcav {

struct DispersiveInputs {
  double g0 = 0.0;       // rad/s
  double kappa = 0.0;    // rad/s
  double Delta_m = 0.0;  // rad/s
  double N_m = 0.0;
  double w0 = 0.0;       // m
  double v = 1.0;        // m/s
  double lambda = 0.0;
  double M_Y = 0.7;
  double sigma_z0 = 1.0;

  // lambda <= 0.1 and |gbar^2 N_m / Delta_m| < 0.1 kappa at gbar = g0/2.
  bool dispersive_valid() const;

  static DispersiveInputs from(const Scenario& scenario);
};

// -sigma_z0 gbar^2 N_m / (kappa Delta_m).
double dispersive_phase(double gbar, double N_m, double kappa, double Delta_m, double sigma_z0);

// erf(sqrt 2 M) / sqrt M, the window dependence of the moving-sample SNR.
double window_factor(double M_Y);
double window_factor_slope(double M_Y);

double snr_moving(const DispersiveInputs& in);

// Maximiser of window_factor.
double optimal_window();

double snr_simplified(const DispersiveInputs& in);

// N_m at which snr_simplified reaches `target_snr`.
double critical_nm_simplified(const DispersiveInputs& in, double target_snr = 3.0);

// (g0 / 2) sqrt(w0 pi / kappa).
double figure_of_merit(double g0, double w0, double kappa);

double snr_trapped(double g0, double N_m, double lambda, double kappa, double t);

// 18 kappa / g0^2: time for SNR = 3 with one molecule at lambda = 1.
double trap_time_unit(double g0, double kappa);

double critical_trap_time(double g0, double lambda, double kappa, double N_m,
                          double target_snr = 3.0);

struct DipoleBound {
  double V_max = 0.0;  // rad/s
  double Gamma = 0.0;  // rad/s, collective decay bound
};

// V_max = 3 gamma N_m / (2 (k_m L)^3).
DipoleBound dipole_bound(double gamma, double N_m, double L, double k_m);

// 4 Delta_m^2 / g0^2.
double critical_photon_number(double Delta_m, double g0);

}  // namespace chiralcav
