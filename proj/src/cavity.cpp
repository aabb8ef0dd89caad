#include "chiralcav/cavity.hpp"

#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <string>
#include <vector>

#include "chiralcav/constants.hpp"
#include "chiralcav/error.hpp"

namespace chiralcav {

namespace {

constexpr double c_design = constants::design_light_speed;

double frequency_at(double R_m, double d, int q) {
  return c_design / (2.0 * d) * (q + std::acos(1.0 - d / R_m) / constants::pi);
}

}  // namespace

void CavityGeometry::validate() const {
  require(R_m > 0.0, ErrorCode::InvalidArgument, "mirror radius must be positive");
  require(q >= 0, ErrorCode::InvalidArgument, "mode index must be non-negative");
  require(d > 0.0 && d < 2.0 * R_m, ErrorCode::InvalidArgument,
          "spacing must satisfy 0 < d < 2 R_m");
}

void MirrorReference::validate() const {
  require(f_ref > 0 && d_ref > 0 && Q_ref > 0 && tuning_ref > 0 && precision_ref > 0 &&
              stroke > 0 && step > 0,
          ErrorCode::Validation, "mirror reference values must be positive");
}

MirrorReference MirrorReference::from_tuning(double f_ref, double d_ref, double Q_ref,
                                             double tuning_ref, double precision_ref,
                                             double R_m, int q) {
  const double slope = std::abs(mode_frequency_slope({R_m, d_ref, q}));
  require(slope > 0.0, ErrorCode::InvalidArgument, "reference spacing is a frequency extremum");
  MirrorReference ref{f_ref, d_ref, Q_ref, tuning_ref, precision_ref, tuning_ref / slope,
                      precision_ref / slope};
  ref.validate();
  return ref;
}

double mode_frequency(const CavityGeometry& geom) {
  geom.validate();
  return frequency_at(geom.R_m, geom.d, geom.q);
}

double mode_frequency_slope(const CavityGeometry& geom) {
  geom.validate();
  const double x = 1.0 - geom.d / geom.R_m;
  const double phase = geom.q + std::acos(x) / constants::pi;
  const double dphase = 1.0 / (constants::pi * geom.R_m * std::sqrt(1.0 - x * x));
  return -c_design / (2.0 * geom.d * geom.d) * phase + c_design / (2.0 * geom.d) * dphase;
}

double solve_spacing(double R_m, int q, double f_target) {
  require(R_m > 0.0 && q >= 0 && f_target > 0.0, ErrorCode::InvalidArgument,
          "solve_spacing needs R_m > 0, q >= 0, f_target > 0");
  const double lo = 1e-6 * R_m;
  const double hi = 2.0 * R_m - 1e-6 * R_m;
  auto residual = [&](double d) { return frequency_at(R_m, d, q) - f_target; };

  // Scan for sign changes so non-monotone branches split at their extrema.
  constexpr int samples = 4096;
  std::vector<double> grid(samples + 1);
  for (int i = 0; i <= samples; ++i) grid[i] = lo + (hi - lo) * i / samples;
  double prev = residual(grid[0]);
  for (int i = 1; i <= samples; ++i) {
    const double cur = residual(grid[i]);
    if (prev == 0.0) return grid[i - 1];
    if ((prev < 0.0) != (cur < 0.0)) {
      auto tol = [](double a, double b) { return std::abs(b - a) <= 4e-16 * std::abs(a); };
      const auto [a, b] = boost::math::tools::bisect(residual, grid[i - 1], grid[i], tol);
      return 0.5 * (a + b);
    }
    prev = cur;
  }
  throw Error(ErrorCode::NoRoot, "no spacing reaches " + std::to_string(f_target) +
                                     " Hz on mode q=" + std::to_string(q));
}

double beam_waist(const CavityGeometry& geom, double f_q) {
  geom.validate();
  require(f_q > 0.0, ErrorCode::InvalidArgument, "frequency must be positive");
  const double lambda = c_design / f_q;
  return std::sqrt(lambda / constants::two_pi * std::sqrt(geom.d * (2.0 * geom.R_m - geom.d)));
}

double mode_volume(double w0, double d) { return constants::pi * w0 * w0 * d / 4.0; }

double single_photon_field(double f_q, double V) {
  require(V > 0.0, ErrorCode::InvalidArgument, "mode volume must be positive");
  const double omega = constants::two_pi * f_q;
  return std::sqrt(constants::hbar * omega / (2.0 * constants::vacuum_permittivity * V));
}

double single_photon_coupling(const CavityDesign& design, double mu_b) {
  require(mu_b >= 0.0, ErrorCode::InvalidArgument, "dipole must be non-negative");
  const double field = single_photon_field(design.f_q, mode_volume(design.w0, design.geometry.d));
  return field * (mu_b / 2.0) / constants::hbar;
}

double single_photon_coupling_closed(const CavityGeometry& geom, double f_q, double w0,
                                     double mu_b) {
  const double omega = constants::two_pi * f_q;
  return std::sqrt(2.0 * constants::hbar * omega /
                   (constants::vacuum_permittivity * constants::pi * geom.d)) *
         (mu_b / 2.0) / (w0 * constants::hbar);
}

double quality_factor(const CavityDesign& design, const MirrorReference& ref) {
  ref.validate();
  return ref.Q_ref * (design.f_q / ref.f_ref) * (design.geometry.d / ref.d_ref);
}

double decay_rate(const CavityDesign& design) {
  require(design.Qfac > 0.0, ErrorCode::InvalidArgument, "quality factor must be positive");
  return constants::two_pi * (constants::two_pi * design.f_q / design.Qfac);
}

Tuning tuning(const CavityDesign& design, const MirrorReference& ref) {
  ref.validate();
  const double slope = std::abs(mode_frequency_slope(design.geometry));
  return {ref.stroke * slope, ref.step * slope};
}

double averaged_coupling(double g0, double Ybar, double w0) {
  require(w0 > 0.0, ErrorCode::InvalidArgument, "waist must be positive");
  const double r = Ybar / w0;
  return 0.5 * g0 * std::exp(-r * r);
}

double figure_of_merit(const CavityDesign& design) {
  return 0.5 * design.g0 * std::sqrt(design.w0 * constants::pi / design.kappa);
}

CavityDesign design_cavity(double R_m, int q, double f_target, double mu_b,
                           const MirrorReference& ref) {
  CavityDesign design;
  design.geometry = {R_m, solve_spacing(R_m, q, f_target), q};
  design.f_q = mode_frequency(design.geometry);
  design.w0 = beam_waist(design.geometry, design.f_q);
  design.V = mode_volume(design.w0, design.geometry.d);
  design.field = single_photon_field(design.f_q, design.V);
  design.g0 = single_photon_coupling(design, mu_b);
  design.Qfac = quality_factor(design, ref);
  design.kappa = decay_rate(design);
  const auto t = tuning(design, ref);
  design.tuning_range = t.range;
  design.tuning_precision = t.precision;
  return design;
}

}  // namespace chiralcav
