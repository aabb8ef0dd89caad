#include "chiralcav/scenario.hpp"

#include <cmath>
#include <string>

#include "chiralcav/analytics.hpp"
#include "chiralcav/error.hpp"

namespace chiralcav {

std::string_view to_string(Model model) noexcept {
  switch (model) {
    case Model::First: return "first";
    case Model::Dissipative: return "dissipative";
    case Model::Second: return "second";
  }
  return "first";
}

Model parse_model(std::string_view text) {
  if (text == "first") return Model::First;
  if (text == "dissipative") return Model::Dissipative;
  if (text == "second") return Model::Second;
  throw Error(ErrorCode::InvalidArgument,
              "unknown model '" + std::string(text) + "' (first, dissipative, second)");
}

double Scenario::N_cr() const { return critical_photon_number(drive.Delta_m, cavity.g0); }

double Scenario::eta() const {
  if (drive.eta) return *drive.eta;
  return cavity.kappa * std::sqrt(drive.lambda * N_cr());
}

double Scenario::tau() const { return cavity.w0 / sample.v; }

double Scenario::Ybar0() const { return sample.Ybar0.value_or(-4.0 * cavity.w0); }

double Scenario::L() const { return sample.L.value_or(0.1 * cavity.w0); }

double Scenario::centre_time() const { return -Ybar0() / sample.v; }

double Scenario::t_end() const {
  if (!sample.trapped) return 2.0 * centre_time();
  return sample.trap_entry ? centre_time() + sample.trap_time : sample.trap_time;
}

Window Scenario::window() const {
  Window w;
  if (!sample.trapped) {
    w = {centre_time() - detection.M_Y * tau(), centre_time() + detection.M_Y * tau()};
  } else {
    w = {sample.trap_entry ? centre_time() : 0.0, t_end()};
  }
  if (detection.t0) w.t0 = *detection.t0;
  if (detection.tf) w.tf = *detection.tf;
  return w;
}

DissipationParams Scenario::dissipation_params() const {
  if (dissipation) return *dissipation;
  return molecule_dissipation(molecule, sample.N_m, L());
}

void Scenario::validate() const {
  molecule.validate();
  require(cavity.g0 > 0.0 && cavity.kappa > 0.0 && cavity.w0 > 0.0, ErrorCode::Validation,
          "cavity g0, kappa and w0 must be positive");
  require(drive.lambda >= 0.0, ErrorCode::Validation, "lambda must be non-negative");
  require(std::isfinite(drive.Delta_m) && std::isfinite(drive.Delta_c), ErrorCode::Validation,
          "detunings must be finite");
  if (drive.eta) {
    const double derived = cavity.kappa * std::sqrt(drive.lambda * N_cr());
    require(std::abs(*drive.eta - derived) <= 1e-9 * std::max(std::abs(derived), 1.0),
            ErrorCode::Validation,
            "explicit eta disagrees with kappa sqrt(lambda N_cr) = " + std::to_string(derived));
  }
  require(sample.N_m >= 0.0, ErrorCode::Validation, "N_m must be non-negative");
  require(sample.sigma_z0 == 1 || sample.sigma_z0 == -1, ErrorCode::Validation,
          "sigma_z0 must be +1 or -1");
  if (!sample.trapped || sample.trap_entry) {
    require(sample.v > 0.0, ErrorCode::Validation, "v must be positive for a moving sample");
    require(Ybar0() < 0.0, ErrorCode::Validation, "Ybar0 must be negative for a moving sample");
  }
  if (sample.trapped)
    require(sample.trap_time > 0.0, ErrorCode::Validation, "trap_time must be positive");
  require(!sample.L || *sample.L > 0.0, ErrorCode::Validation, "L must be positive");
  require(detection.N_lo > 0.0, ErrorCode::Validation, "N_lo must be positive");
  require(detection.M_Y > 0.0, ErrorCode::Validation, "M_Y must be positive");
  const Window w = window();
  require(w.tf > w.t0, ErrorCode::Validation, "detection window needs tf > t0");
  require(samples_per_tau > 0.0 && trapped_samples > 0, ErrorCode::Validation,
          "output grid density must be positive");
  if (dissipation)
    require(dissipation->gamma >= 0.0 && dissipation->V_max >= 0.0, ErrorCode::Validation,
            "gamma and V_max must be non-negative");
  integrator.validate();
}

CavityDesign propanediol_cavity(int q) {
  return design_cavity(propanediol_mirror_radius, q, propanediol_target_frequency,
                       MoleculeSpec::propanediol().mu_b);
}

Scenario Scenario::propanediol(int q) {
  Scenario s;
  s.cavity = propanediol_cavity(q);
  return s;
}

DissipationParams molecule_dissipation(const MoleculeSpec& molecule, double N_m, double L) {
  const double omega = molecule.omega32();
  const double gamma = free_space_decay_rate(omega, coupling_dipole(molecule, Transition::T32));
  const double k_m = omega / constants::speed_of_light;
  return {gamma, dipole_bound(gamma, N_m, L, k_m).V_max};
}

}  // namespace chiralcav
