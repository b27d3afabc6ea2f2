#pragma once

#include <Eigen/Dense>

#include "noonsim/fockspace.hpp"

namespace noonsim::oracle {

/// Dense single-mode two-photon Hamiltonian (lambda = 1)
///
///   H = (Delta + chi n) sigma_z / 2 + a^2 sigma_+ + a^+2 sigma_-
///
/// over the product basis atom (x) Fock, ordered atom-major: row
/// `level * (cutoff + 1) + n`, with Excited before Ground.
///
/// The factor 1/2 on sigma_z is what reproduces the closed-form propagator:
/// on each doublet {|e, n>, |g, n + 2>} the traceless part is
/// Gamma_n sigma_z + sqrt((n+1)(n+2)) sigma_x and the trace part is -chi/2,
/// which exponentiates to the global factor exp(i chi tau / 2).
struct DenseHamiltonian {
  Eigen::MatrixXcd matrix;
  Params params;
  int cutoff = 0;
};

DenseHamiltonian build_hamiltonian(int cavity_cutoff, const Params& p);

/// exp(-i H tau) = V exp(-i E tau) V^+ from the Hermitian eigendecomposition.
Eigen::MatrixXcd propagator(const DenseHamiltonian& h, double tau);

/// Applies the exact exponential to the selected mode of `s`, slice by slice
/// over the spectator mode. Same leakage precondition as evolve_cavity.
JointState expm_evolve(const JointState& s, Cavity cavity, double tau, const Params& p);

/// <s| H_cavity (x) 1_spectator |s>.
double energy(const JointState& s, Cavity cavity, const Params& p);

}  // namespace noonsim::oracle
