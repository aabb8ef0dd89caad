#pragma once

// Run configuration shared by dynamics, detection and the harness.

#include <cstdint>
#include <optional>
#include <string_view>

#include "chiralcav/cavity.hpp"
#include "chiralcav/constants.hpp"
#include "chiralcav/integrator.hpp"
#include "chiralcav/molecule.hpp"

namespace chiralcav {

enum class Model { First, Dissipative, Second };

std::string_view to_string(Model model) noexcept;
Model parse_model(std::string_view text);

struct DriveConfig {
  double lambda = 0.01;                           // N0 / N_cr
  double Delta_m = constants::angular(822.7);     // rad/s
  double Delta_c = 0.0;                           // rad/s
  std::optional<double> eta;                      // explicit pump, must match lambda
};

struct SampleConfig {
  double N_m = 1000.0;
  double v = 1.0;               // m/s
  std::optional<double> Ybar0;  // m, default -4 w0
  bool trapped = false;
  // Trapped sample that first travels to the cavity centre and is then held.
  bool trap_entry = false;
  double trap_time = 10.0;      // s of evolution at the centre
  int sigma_z0 = +1;
  std::optional<double> L;      // transverse size, m, default 0.1 w0
};

struct DissipationParams {
  double gamma = 0.0;  // rad/s
  double V_max = 0.0;  // rad/s
};

struct HomodyneConfig {
  double phi_lo = -constants::pi / 2.0;
  double N_lo = 1e8;  // photons/s
  double M_Y = 0.7;
  std::optional<double> t0;  // s
  std::optional<double> tf;
};

struct Window {
  double t0 = 0.0;
  double tf = 0.0;
  double length() const { return tf - t0; }
};

struct Scenario {
  MoleculeSpec molecule = MoleculeSpec::propanediol();
  CavityDesign cavity;
  DriveConfig drive;
  SampleConfig sample;
  HomodyneConfig detection;
  IntegratorOptions integrator;
  std::optional<DissipationParams> dissipation;  // default: molecule bounds
  Model model = Model::First;
  std::uint64_t seed = 1;
  double samples_per_tau = 1000.0;    // output grid density for moving samples
  std::size_t trapped_samples = 10000;

  double N_cr() const;           // 4 Delta_m^2 / g0^2
  double eta() const;            // kappa sqrt(lambda N_cr)
  double tau() const;            // w0 / v
  double Ybar0() const;
  double L() const;
  double centre_time() const;    // -Ybar0 / v
  double t_end() const;
  Window window() const;
  DissipationParams dissipation_params() const;

  // Throws Error(Validation) naming the violated invariant.
  void validate() const;

  // Propanediol molecule in the q=0 cavity, lambda = 0.01, N_m = 1000, v = 1 m/s.
  static Scenario propanediol(int q = 0);
};

CavityDesign propanediol_cavity(int q);

// Free-space decay of the 3-2 transition and the dipole-dipole bound of a
// sample of size L.
DissipationParams molecule_dissipation(const MoleculeSpec& molecule, double N_m, double L);

}  // namespace chiralcav
