#pragma once

// Spherical Fabry-Perot cavity design: mode frequency, spacing solver, waist,
// mode volume, single-photon coupling, quality factor, decay rate and tuning.
//
// Mode formulas use constants::design_light_speed. Frequencies f are in Hz,
// rates (g0, kappa) in rad/s.

namespace chiralcav {

struct CavityGeometry {
  double R_m = 0.0;  // mirror radius of curvature, m
  double d = 0.0;    // mirror spacing, m
  int q = 0;         // longitudinal index

  // Throws Error(InvalidArgument) unless 0 < d < 2 R_m, R_m > 0, q >= 0.
  void validate() const;
};

// Q scales as f d from a measured reference mirror pair. The tuning range and
// precision scale from mirror displacements (stroke, step) through df/dd.
struct MirrorReference {
  double f_ref = 51e9;
  double d_ref = 27.6e-3;
  double Q_ref = 2.1e10;
  double tuning_ref = 5e6;      // Hz
  double precision_ref = 2.4e3;  // Hz
  double stroke = 0.25e-6;      // mirror displacement for the tuning range, m
  double step = 1e-9;           // smallest mirror displacement, m

  void validate() const;

  // Displacements that give exactly (tuning_ref, precision_ref) at the
  // reference spacing, on mode `q` of mirrors with curvature `R_m`.
  static MirrorReference from_tuning(double f_ref, double d_ref, double Q_ref,
                                     double tuning_ref, double precision_ref, double R_m,
                                     int q);
};

struct CavityDesign {
  CavityGeometry geometry;
  double f_q = 0.0;    // Hz
  double w0 = 0.0;     // m
  double V = 0.0;      // m^3
  double field = 0.0;  // single-photon field amplitude, V/m
  double g0 = 0.0;     // rad/s
  double Qfac = 0.0;
  double kappa = 0.0;             // rad/s
  double tuning_range = 0.0;      // +- Hz
  double tuning_precision = 0.0;  // Hz
};

double mode_frequency(const CavityGeometry& geom);

// d(f_q)/d(d) at fixed q and R_m, Hz/m.
double mode_frequency_slope(const CavityGeometry& geom);

// Spacing d in (0, 2 R_m) with mode_frequency = f_target. When several
// spacings qualify, the smallest is returned. Throws Error(NoRoot).
double solve_spacing(double R_m, int q, double f_target);

double beam_waist(const CavityGeometry& geom, double f_q);
double mode_volume(double w0, double d);

// Vacuum field per photon sqrt(hbar omega / (2 eps0 V)), V/m.
double single_photon_field(double f_q, double V);

// g0 = field * (mu_b / 2) / hbar, the 3-2 matrix element being mu_b / 2.
double single_photon_coupling(const CavityDesign& design, double mu_b);

// Same quantity from sqrt(2 hbar omega / (eps0 pi d)) (mu_b / 2) / (w0 hbar).
double single_photon_coupling_closed(const CavityGeometry& geom, double f_q, double w0,
                                     double mu_b);

double quality_factor(const CavityDesign& design, const MirrorReference& ref);

// kappa = 2 pi (2 pi f_q / Q): the tabulated column value 2 pi f_q / Q is read
// as kappa / (2 pi) in Hz.
double decay_rate(const CavityDesign& design);

struct Tuning {
  double range = 0.0;      // +- Hz
  double precision = 0.0;  // Hz
};

Tuning tuning(const CavityDesign& design, const MirrorReference& ref);

// (g0 / 2) exp(-Ybar^2 / w0^2).
double averaged_coupling(double g0, double Ybar, double w0);

// (g0 / 2) sqrt(w0 pi / kappa), sqrt(m Hz).
double figure_of_merit(const CavityDesign& design);

// Full design for mode q tuned to f_target.
CavityDesign design_cavity(double R_m, int q, double f_target, double mu_b,
                           const MirrorReference& ref = {});

// R_m = 40 mm and f_target = 5.78109 GHz (the 3-2 transition of propanediol).
inline constexpr double propanediol_mirror_radius = 40e-3;
inline constexpr double propanediol_target_frequency = 5.78109e9;

}  // namespace chiralcav
