#pragma once

#include "noonsim/fockspace.hpp"

namespace noonsim {

/// Population allowed within two quanta of the cutoff before evolve_cavity
/// refuses to run.
inline constexpr double kLeakageLimit = 1e-8;

/// Gamma_n = (Delta + chi (n + 1)) / 2. Defined for n >= -2.
double gamma_n(int n, const Params& p);

/// delta_n = sqrt(Gamma_n^2 + (n + 1)(n + 2)), the half Rabi frequency of the
/// doublet {|e, n>, |g, n + 2>}. Defined for n >= -2.
double delta_n(int n, const Params& p);

/// Matrix elements of the two-photon propagator at photon number n and
/// scaled time tau, in the atomic basis (e, g):
///
///   U = global_phase * | c_upper                    -i s_val a^2 |
///                      | -i a^+2 s_val              c_lower      |
///
/// c_upper multiplies |e, n>, c_lower multiplies |g, n> and s_val is S_n.
/// c_lower is the complex conjugate of C_{n-2}; the conjugate is what makes
/// each doublet block unitary once Gamma != 0.
struct PropagatorCoefficients {
  Complex c_upper;
  Complex c_lower;
  double s_val;
  Complex global_phase;
};

/// C_n = cos(delta_n tau) - i (Gamma_n / delta_n) sin(delta_n tau).
/// Switches to the small-angle series when |delta_n tau| < 1e-6.
Complex c_coefficient(int n, double tau, const Params& p);

/// S_n = sin(delta_n tau) / delta_n, with the same series switch.
double s_coefficient(int n, double tau, const Params& p);

PropagatorCoefficients coefficients(int n, double tau, const Params& p);

/// Propagates `s` through one cavity for scaled time tau. The other cavity
/// is a spectator.
///
/// Throws LeakageError if more than 1e-8 of the population sits within two
/// quanta of the cutoff in either mode, and CutoffMismatch if the state and
/// parameters disagree on the cutoff.
JointState evolve_cavity(const JointState& s, Cavity cavity, double tau, const Params& p);

/// Classical-field rotation of the atom:
///   e' = cos(theta/2) e - sin(theta/2) g
///   g' = sin(theta/2) e + cos(theta/2) g
/// theta = pi/2 turns -(|e>|4,0> + |g>|0,4>)/sqrt(2) into the rotated chain
/// state; theta = pi sends |g> to -|e>.
JointState rotate_atom(const JointState& s, double theta);

}  // namespace noonsim
