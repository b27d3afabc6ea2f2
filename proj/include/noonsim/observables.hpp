#pragma once

#include <vector>

#include "noonsim/fockspace.hpp"

namespace noonsim {

/// W(tau_k) = P_e - P_g sampled on a uniform grid.
struct InversionSeries {
  std::vector<double> taus;
  std::vector<double> w;
};

/// (|N, 0> + sign |0, N>) / sqrt(2).
struct NoonTarget {
  int n_photons = 4;
  int relative_sign = +1;
};

double atomic_inversion(const JointState& s);

/// Evolves |atom0> |n0> in `cavity` (the other mode empty) and samples the
/// inversion at tau_k = k * tau_max / (steps - 1), k = 0 .. steps - 1. Every
/// sample is propagated directly from the initial state.
InversionSeries inversion_trace(AtomLevel atom0, int n0, Cavity cavity, const Params& p,
                                double tau_max, int steps);

/// Marginal photon-number distribution of one mode.
std::vector<double> photon_distribution(const JointState& s, Cavity cavity);

/// Embeds the target field state with the atom in `atom`.
JointState make_noon_state(const NoonTarget& target, AtomLevel atom, int cutoff);

/// F = |<NOON|psi>|^2 for a state whose atom has already been projected.
/// Throws std::invalid_argument if both atomic blocks carry population.
double noon_fidelity(const JointState& field_state, const NoonTarget& target);

}  // namespace noonsim
