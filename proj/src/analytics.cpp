#include "chiralcav/analytics.hpp"

#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <numbers>

#include "chiralcav/error.hpp"
#include "chiralcav/special.hpp"

namespace chiralcav {

bool DispersiveInputs::dispersive_valid() const {
  if (Delta_m == 0.0 || kappa <= 0.0) return false;
  const double gbar = 0.5 * g0;
  return lambda <= 0.1 && std::abs(gbar * gbar * N_m / Delta_m) < 0.1 * kappa;
}

DispersiveInputs DispersiveInputs::from(const Scenario& scenario) {
  DispersiveInputs in;
  in.g0 = scenario.cavity.g0;
  in.kappa = scenario.cavity.kappa;
  in.Delta_m = scenario.drive.Delta_m;
  in.N_m = scenario.sample.N_m;
  in.w0 = scenario.cavity.w0;
  in.v = scenario.sample.v;
  in.lambda = scenario.drive.lambda;
  in.M_Y = scenario.detection.M_Y;
  in.sigma_z0 = scenario.sample.sigma_z0;
  return in;
}

double dispersive_phase(double gbar, double N_m, double kappa, double Delta_m, double sigma_z0) {
  require(kappa > 0.0 && Delta_m != 0.0, ErrorCode::InvalidArgument,
          "dispersive phase needs kappa > 0 and Delta_m != 0");
  return -sigma_z0 * gbar * gbar * N_m / (kappa * Delta_m);
}

double window_factor(double M_Y) {
  require(M_Y > 0.0, ErrorCode::InvalidArgument, "window half-width must be positive");
  return erf(std::numbers::sqrt2 * M_Y) / std::sqrt(M_Y);
}

double window_factor_slope(double M_Y) {
  require(M_Y > 0.0, ErrorCode::InvalidArgument, "window half-width must be positive");
  const double gauss = 2.0 * std::numbers::sqrt2 * std::numbers::inv_sqrtpi * std::exp(-2.0 * M_Y * M_Y);
  return (gauss * M_Y - 0.5 * erf(std::numbers::sqrt2 * M_Y)) / (M_Y * std::sqrt(M_Y));
}

double snr_moving(const DispersiveInputs& in) {
  require(in.g0 > 0.0 && in.kappa > 0.0 && in.Delta_m != 0.0 && in.w0 > 0.0 && in.v > 0.0 &&
              in.M_Y > 0.0 && in.lambda >= 0.0,
          ErrorCode::InvalidArgument, "moving-sample SNR needs positive rates and geometry");
  const double N0 = in.lambda * critical_photon_number(in.Delta_m, in.g0);
  const double prefactor = std::sqrt(in.kappa * N0 * in.w0 * std::numbers::pi) /
                           (4.0 * std::sqrt(2.0 * in.v * in.M_Y));
  return prefactor * erf(std::numbers::sqrt2 * in.M_Y) * in.g0 * in.g0 * in.N_m /
         (in.kappa * std::abs(in.Delta_m));
}

double optimal_window() {
  // Stationary point of erf(sqrt2 M)/sqrt M.
  auto stationary = [](double m) {
    return 4.0 * std::numbers::sqrt2 * std::numbers::inv_sqrtpi * m * std::exp(-2.0 * m * m) -
           erf(std::numbers::sqrt2 * m);
  };
  std::uintmax_t iterations = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(
      stationary, 0.1, 2.0, boost::math::tools::eps_tolerance<double>(), iterations);
  return 0.5 * (a + b);
}

double snr_simplified(const DispersiveInputs& in) {
  require(in.kappa > 0.0 && in.w0 > 0.0 && in.v > 0.0 && in.lambda >= 0.0,
          ErrorCode::InvalidArgument, "simplified SNR needs positive rates and geometry");
  return figure_of_merit(in.g0, in.w0, in.kappa) * std::sqrt(in.lambda / (2.0 * in.v)) * in.N_m;
}

double critical_nm_simplified(const DispersiveInputs& in, double target_snr) {
  DispersiveInputs unit = in;
  unit.N_m = 1.0;
  const double per_molecule = snr_simplified(unit);
  require(per_molecule > 0.0, ErrorCode::InvalidArgument, "SNR per molecule vanishes");
  return target_snr / per_molecule;
}

double figure_of_merit(double g0, double w0, double kappa) {
  require(kappa > 0.0 && w0 >= 0.0, ErrorCode::InvalidArgument, "figure of merit needs kappa > 0");
  return 0.5 * g0 * std::sqrt(w0 * std::numbers::pi / kappa);
}

double snr_trapped(double g0, double N_m, double lambda, double kappa, double t) {
  require(t >= 0.0 && kappa > 0.0 && lambda >= 0.0, ErrorCode::InvalidArgument,
          "trapped SNR needs t >= 0, kappa > 0, lambda >= 0");
  return g0 * N_m * std::sqrt(lambda * t / (2.0 * kappa));
}

double trap_time_unit(double g0, double kappa) {
  require(g0 > 0.0, ErrorCode::InvalidArgument, "g0 must be positive");
  return 18.0 * kappa / (g0 * g0);
}

double critical_trap_time(double g0, double lambda, double kappa, double N_m, double target_snr) {
  require(g0 > 0.0 && lambda > 0.0 && N_m > 0.0 && kappa > 0.0, ErrorCode::InvalidArgument,
          "critical trap time needs g0, lambda, N_m, kappa > 0");
  // target = g0 N sqrt(lambda t / (2 kappa))
  const double ratio = target_snr / (g0 * N_m);
  return 2.0 * kappa * ratio * ratio / lambda;
}

DipoleBound dipole_bound(double gamma, double N_m, double L, double k_m) {
  require(L > 0.0 && k_m > 0.0 && gamma >= 0.0 && N_m >= 0.0, ErrorCode::InvalidArgument,
          "dipole bound needs L, k_m > 0");
  const double kl = k_m * L;
  return {3.0 * gamma * N_m / (2.0 * kl * kl * kl), gamma};
}

double critical_photon_number(double Delta_m, double g0) {
  require(g0 > 0.0, ErrorCode::InvalidArgument, "g0 must be positive");
  return 4.0 * Delta_m * Delta_m / (g0 * g0);
}

}  // namespace chiralcav
