#include "chiralcav/molecule.hpp"

#include <cmath>
#include <string>

#include "chiralcav/constants.hpp"
#include "chiralcav/error.hpp"

namespace chiralcav {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::Parse: return "parse";
    case ErrorCode::Validation: return "validation";
    case ErrorCode::NoRoot: return "no-root";
    case ErrorCode::Integration: return "integration-failure";
    case ErrorCode::WindowOutOfRange: return "window-out-of-range";
    case ErrorCode::BracketNotFound: return "bracket-not-found";
    case ErrorCode::Io: return "io";
  }
  return "unknown";
}

std::string_view to_string(Chirality chirality) noexcept {
  return chirality == Chirality::Left ? "L" : "R";
}

Chirality parse_chirality(std::string_view text) {
  if (text == "L" || text == "l" || text == "left" || text == "Left") return Chirality::Left;
  if (text == "R" || text == "r" || text == "right" || text == "Right") return Chirality::Right;
  throw Error(ErrorCode::InvalidArgument, "unknown chirality '" + std::string(text) + "'");
}

double MoleculeSpec::omega(Transition t) const {
  switch (t) {
    case Transition::T21: return omega21();
    case Transition::T31: return omega31();
    case Transition::T32: return omega32();
  }
  return 0.0;
}

void MoleculeSpec::validate() const {
  require(A > B && B > C && C > 0.0, ErrorCode::Validation,
          "rotational constants must satisfy A > B > C > 0");
  require(mu_a >= 0.0 && mu_b >= 0.0 && mu_c >= 0.0, ErrorCode::Validation,
          "dipole components must be non-negative");
}

MoleculeSpec MoleculeSpec::propanediol(Chirality chirality) {
  using constants::angular;
  using constants::debye;
  MoleculeSpec spec;
  spec.A = angular(8.57205e9);
  spec.B = angular(3.6401e9);
  spec.C = angular(2.79096e9);
  spec.mu_a = 1.2 * debye;
  spec.mu_b = 1.9 * debye;
  spec.mu_c = 0.36 * debye;
  spec.chirality = chirality;
  return spec;
}

double coupling_dipole(const MoleculeSpec& spec, Transition t) {
  switch (t) {
    case Transition::T21: return spec.mu_a / 2.0;
    case Transition::T31: return spec.mu_c / (2.0 * std::sqrt(3.0));
    case Transition::T32: return spec.mu_b / 4.0;
  }
  return 0.0;
}

ThreeLevelState ThreeLevelState::basis(int level) {
  require(level >= 1 && level <= 3, ErrorCode::InvalidArgument, "level must be 1, 2 or 3");
  ThreeLevelState s;
  s.amplitudes[level - 1] = 1.0;
  return s;
}

double ThreeLevelState::norm() const {
  double n = 0.0;
  for (const auto& a : amplitudes) n += std::norm(a);
  return std::sqrt(n);
}

double fidelity(const ThreeLevelState& a, const ThreeLevelState& b) {
  Complex overlap{};
  for (int i = 0; i < 3; ++i) overlap += std::conj(a.amplitudes[i]) * b.amplitudes[i];
  return std::abs(overlap);
}

CouplingSet coupling_set(const MoleculeSpec& spec, const FieldAmplitudes& fields,
                         const FieldPhases& phases) {
  require(fields.e21 >= 0.0 && fields.e31 >= 0.0 && fields.e32 >= 0.0,
          ErrorCode::InvalidArgument, "field amplitudes must be non-negative");
  const double hbar = constants::hbar;
  CouplingSet set;
  set.omega21 = fields.e21 * coupling_dipole(spec, Transition::T21) / hbar;
  set.omega32 = fields.e32 * coupling_dipole(spec, Transition::T32) / hbar;
  set.phi = phases.phi31 - phases.phi21 - phases.phi32;
  const double magnitude = fields.e31 * coupling_dipole(spec, Transition::T31) / hbar;
  set.omega31 = std::polar(magnitude, two_level_phase(set.phi, spec.chirality));
  return set;
}

Matrix3 multiply(const Matrix3& a, const Matrix3& b) {
  Matrix3 out{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) out[i][j] += a[i][k] * b[k][j];
  return out;
}

Matrix3 adjoint(const Matrix3& m) {
  Matrix3 out{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[i][j] = std::conj(m[j][i]);
  return out;
}

ThreeLevelState apply(const Matrix3& m, const ThreeLevelState& s) {
  ThreeLevelState out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out.amplitudes[i] += m[i][j] * s.amplitudes[j];
  return out;
}

Matrix3 two_level_rotation(int lower, int upper, double theta, double alpha) {
  require(lower >= 1 && upper <= 3 && lower < upper, ErrorCode::InvalidArgument,
          "rotation needs two distinct levels in 1..3");
  const int a = lower - 1;
  const int b = upper - 1;
  const Complex i{0.0, 1.0};
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  Matrix3 m{};
  for (int k = 0; k < 3; ++k) m[k][k] = 1.0;
  // sx = |a><b| + |b><a|, sy = -i|a><b| + i|b><a|
  m[a][a] = c;
  m[b][b] = c;
  m[b][a] = -i * s * std::polar(1.0, alpha);
  m[a][b] = -i * s * std::polar(1.0, -alpha);
  return m;
}

double two_level_phase(double phi, Chirality chirality) {
  return chirality == Chirality::Left ? phi : phi + constants::pi;
}

std::array<Matrix3, 3> esst_pulses(double phi, Chirality chirality) {
  const double pi = constants::pi;
  const double loop = two_level_phase(phi, chirality);
  return {two_level_rotation(1, 2, pi / 2.0, pi),
          two_level_rotation(1, 3, pi, pi - loop),
          two_level_rotation(2, 3, pi / 2.0, pi)};
}

Matrix3 esst_unitary(double phi, Chirality chirality) {
  const auto pulses = esst_pulses(phi, chirality);
  return multiply(pulses[2], multiply(pulses[1], pulses[0]));
}

PulseSequenceResult apply_pulse_sequence(const ThreeLevelState& state, double phi,
                                         Chirality chirality) {
  const auto pulses = esst_pulses(phi, chirality);
  PulseSequenceResult r;
  r.after_first = apply(pulses[0], state);
  r.after_second = apply(pulses[1], r.after_first);
  r.final_state = apply(pulses[2], r.after_second);
  return r;
}

int hypothesis_inversion(Chirality chirality, double phi) {
  const double half_pi = constants::pi / 2.0;
  const double wrapped = std::remainder(phi, constants::two_pi);
  const bool perfect =
      std::abs(wrapped - half_pi) < 1e-9 || std::abs(wrapped + half_pi) < 1e-9;
  require(perfect, ErrorCode::InvalidArgument,
          "hypothesis inversion needs a perfect-transfer phase (+-pi/2)");
  const auto final_state =
      apply(esst_unitary(phi, chirality), ThreeLevelState::basis(1));
  return std::norm(final_state[3]) > 0.5 ? +1 : -1;
}

double free_space_decay_rate(double omega, double mu) {
  require(omega > 0.0 && mu >= 0.0, ErrorCode::InvalidArgument,
          "decay rate needs omega > 0 and mu >= 0");
  const double c = constants::speed_of_light;
  return 1.0 / (4.0 * constants::pi * constants::vacuum_permittivity) * 4.0 * omega * omega *
         omega * mu * mu / (3.0 * constants::hbar * c * c * c);
}

}  // namespace chiralcav
