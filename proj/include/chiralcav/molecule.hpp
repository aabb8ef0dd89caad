#pragma once

// Cyclic three-level model of a chiral molecule and the enantio-specific
// state transfer (three non-overlapping resonant pulses).
//
// Levels are ordered |1>, |2>, |3>. Frequencies are angular (rad/s), dipoles
// in C m.

#include <array>
#include <complex>
#include <string_view>

namespace chiralcav {

using Complex = std::complex<double>;

enum class Chirality { Left, Right };

std::string_view to_string(Chirality chirality) noexcept;
Chirality parse_chirality(std::string_view text);

// Dipole-allowed transitions of the working loop.
enum class Transition { T21, T31, T32 };

struct MoleculeSpec {
  double A = 0.0;  // rotational constants, rad/s
  double B = 0.0;
  double C = 0.0;
  double mu_a = 0.0;  // |dipole components|, C m
  double mu_b = 0.0;
  double mu_c = 0.0;
  Chirality chirality = Chirality::Left;

  double omega21() const { return B + C; }
  double omega31() const { return A + B; }
  double omega32() const { return A - C; }
  double omega(Transition t) const;

  // Throws Error(Validation) unless A > B > C > 0 and all dipoles >= 0.
  void validate() const;

  // 1,2-propanediol.
  static MoleculeSpec propanediol(Chirality chirality = Chirality::Left);
};

// Coupling per unit field amplitude for each working transition (the
// coefficient d in Omega = E d / hbar): mu_a/2, mu_c/(2 sqrt 3), mu_b/4.
double coupling_dipole(const MoleculeSpec& spec, Transition t);

struct ThreeLevelState {
  std::array<Complex, 3> amplitudes{};

  static ThreeLevelState basis(int level);  // level in {1, 2, 3}
  double norm() const;
  const Complex& operator[](int level) const { return amplitudes.at(level - 1); }
};

double fidelity(const ThreeLevelState& a, const ThreeLevelState& b);

struct CouplingSet {
  double omega21 = 0.0;  // rad/s
  double omega32 = 0.0;
  Complex omega31{};
  double phi = 0.0;  // loop phase seen by the left-handed enantiomer
};

struct FieldAmplitudes {
  double e21 = 0.0;  // V/m
  double e31 = 0.0;
  double e32 = 0.0;
};

struct FieldPhases {
  double phi21 = 0.0;
  double phi31 = 0.0;
  double phi32 = 0.0;
};

// Couplings in the gauge where Omega21 and Omega32 are real and positive; the
// gauge-invariant loop phase phi31 - phi21 - phi32 ends up on Omega31, plus pi
// for the right-handed enantiomer.
CouplingSet coupling_set(const MoleculeSpec& spec, const FieldAmplitudes& fields,
                         const FieldPhases& phases);

using Matrix3 = std::array<std::array<Complex, 3>, 3>;

Matrix3 multiply(const Matrix3& a, const Matrix3& b);
Matrix3 adjoint(const Matrix3& m);
ThreeLevelState apply(const Matrix3& m, const ThreeLevelState& s);

// exp(-i theta (cos(alpha) sx + sin(alpha) sy) / 2) acting on levels
// (lower, upper); identity on the spectator level.
Matrix3 two_level_rotation(int lower, int upper, double theta, double alpha);

// Loop phase of the two-level picture of the pi pulse: phi (left), phi + pi (right).
double two_level_phase(double phi, Chirality chirality);

// The three pulses in application order: pi/2 on 1-2, pi on 1-3, pi/2 on 2-3.
std::array<Matrix3, 3> esst_pulses(double phi, Chirality chirality);
Matrix3 esst_unitary(double phi, Chirality chirality);

struct PulseSequenceResult {
  ThreeLevelState after_first;
  ThreeLevelState after_second;
  ThreeLevelState final_state;
};

PulseSequenceResult apply_pulse_sequence(const ThreeLevelState& state, double phi,
                                         Chirality chirality);

// sigma_z(0) of the |2>-|3> two-level system after the transfer from |1>:
// +1 for |3>, -1 for |2>. Only the perfect-transfer phases +-pi/2 are accepted.
int hypothesis_inversion(Chirality chirality, double phi);

// Free-space spontaneous decay rate (rad/s) of a transition with angular
// frequency `omega` and coupling dipole `mu`.
double free_space_decay_rate(double omega, double mu);

}  // namespace chiralcav
