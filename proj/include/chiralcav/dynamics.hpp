#pragma once

// Mean-field dynamics of N_m identical two-level molecules (sigma = |2><3|,
// sigma_z = |3><3| - |2><2|) coupled to a driven cavity mode, in the frame of
// the probe.

#include <array>
#include <complex>
#include <vector>

#include "chiralcav/integrator.hpp"
#include "chiralcav/scenario.hpp"

namespace chiralcav {

using Complex = std::complex<double>;

struct MeanFieldState {
  Complex c{};
  Complex sigma{};
  double sigma_z = 0.0;
};

// First moments plus the homogenised second moments; "pair" moments are
// between two distinct molecules.
struct SecondOrderState {
  Complex c{};
  Complex s{};       // <sigma>
  double z = 0.0;    // <sigma_z>
  Complex zc{};      // <sigma_z c>
  Complex sdc{};     // <sigma^dag c>
  double sds = 0.0;  // <sigma^dag sigma> pair
  Complex zs{};      // <sigma_z sigma> pair
  double zz = 0.0;   // <sigma_z sigma_z> pair
  Complex cc{};      // <c c>
  Complex sc{};      // <sigma c>
  double cdc = 0.0;  // <c^dag c>
  Complex ss{};      // <sigma sigma> pair

  static constexpr std::size_t size = 20;
  std::array<double, size> pack() const;
  static SecondOrderState unpack(std::span<const double> y);

  // Second moments factorised from the first moments.
  static SecondOrderState factorized(Complex c, Complex s, double z);
  MeanFieldState first() const { return {c, s, z}; }
};

struct Rates {
  double kappa = 0.0;
  double eta = 0.0;
  double Delta_m = 0.0;
  double Delta_c = 0.0;
  double N_m = 0.0;

  static Rates from(const Scenario& scenario);
};

// gbar(t): Gaussian transit profile, or g0/2 for trapped samples (after the
// centre is reached when trap_entry is set).
double coupling_profile(const SampleConfig& sample, double g0, double w0, double t);
double coupling_profile(const Scenario& scenario, double t);

MeanFieldState deriv_first_order(const MeanFieldState& s, double gbar, const Rates& r);
MeanFieldState deriv_dissipative(const MeanFieldState& s, double gbar, const Rates& r,
                                 const DissipationParams& diss);
SecondOrderState deriv_second_order(const SecondOrderState& m, double gbar, const Rates& r);

// Quasi-steady dispersive amplitude eta / (kappa + i gbar^2 N_m sigma_z / Delta_m).
Complex steady_state_dispersive(double gbar, const Rates& r, double sigma_z);

struct TrajectorySample {
  double t = 0.0;
  Complex c{};
  Complex sigma{};
  double sigma_z = 0.0;
  double gbar = 0.0;
  double signal = 0.0;  // homodyne signal sqrt(2 kappa) Re(exp(-i phi_lo) c)
  double photons = 0.0; // <c^dag c>; |c|^2 for the first-order models
};

struct Trajectory {
  Model model = Model::First;
  double kappa = 0.0;
  double phi_lo = 0.0;
  double tau = 0.0;
  Window window;
  std::vector<TrajectorySample> samples;
  IntegrationStats stats;
  // max |sigma_z^2 + 4 |sigma|^2 - 1| over the samples (first-order model).
  double bloch_deviation = 0.0;
};

// Output grid: spacing tau / samples_per_tau for moving samples, uniform
// trapped_samples over the trapped interval.
std::vector<double> output_grid(const Scenario& scenario);

// Integrates the scenario's model from c = eta/kappa, sigma = 0,
// sigma_z = sample.sigma_z0.
Trajectory integrate(const Scenario& scenario);
Trajectory integrate(const Scenario& scenario, Model model);

}  // namespace chiralcav
