#include "noonsim/oracle.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "noonsim/dynamics.hpp"

namespace noonsim::oracle {

namespace {

Eigen::Index row(AtomLevel level, int n, int cutoff) {
  return static_cast<Eigen::Index>(level) * (cutoff + 1) + n;
}

Eigen::VectorXcd gather(const JointState& s, Cavity cavity, int spectator) {
  const int c = s.cutoff();
  Eigen::VectorXcd v(2 * (c + 1));
  for (auto level : {AtomLevel::Excited, AtomLevel::Ground}) {
    for (int n = 0; n <= c; ++n) {
      v(row(level, n, c)) = cavity == Cavity::A ? s.amplitude(level, n, spectator)
                                                : s.amplitude(level, spectator, n);
    }
  }
  return v;
}

void scatter(JointState& s, Cavity cavity, int spectator, const Eigen::VectorXcd& v) {
  const int c = s.cutoff();
  for (auto level : {AtomLevel::Excited, AtomLevel::Ground}) {
    for (int n = 0; n <= c; ++n) {
      auto& slot = cavity == Cavity::A ? s.amplitude(level, n, spectator)
                                       : s.amplitude(level, spectator, n);
      slot = v(row(level, n, c));
    }
  }
}

void check_state(const JointState& s, Cavity cavity, const Params& p) {
  if (s.cutoff() != p.cutoff) {
    throw CutoffMismatch("state cutoff " + std::to_string(s.cutoff()) +
                         " does not match parameter cutoff " + std::to_string(p.cutoff));
  }
  const double leak = boundary_leakage(s, 2);
  if (leak > kLeakageLimit) {
    std::ostringstream msg;
    msg << "oracle refuses cavity " << to_string(cavity) << ": boundary mass " << leak;
    throw LeakageError(msg.str(), leak);
  }
}

}  // namespace

DenseHamiltonian build_hamiltonian(int cavity_cutoff, const Params& p) {
  if (cavity_cutoff < 2) throw std::invalid_argument("oracle cutoff must be at least 2");
  const int c = cavity_cutoff;
  const Eigen::Index dim = 2 * (c + 1);
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (int n = 0; n <= c; ++n) {
    const double level_shift = (p.delta + p.chi * n) / 2.0;
    h(row(AtomLevel::Excited, n, c), row(AtomLevel::Excited, n, c)) = level_shift;
    h(row(AtomLevel::Ground, n, c), row(AtomLevel::Ground, n, c)) = -level_shift;
  }
  // <e, n| a^2 sigma_+ |g, n + 2> = sqrt((n + 1)(n + 2)).
  for (int n = 0; n + 2 <= c; ++n) {
    const double element = std::sqrt(static_cast<double>(n + 1) * (n + 2));
    h(row(AtomLevel::Excited, n, c), row(AtomLevel::Ground, n + 2, c)) = element;
    h(row(AtomLevel::Ground, n + 2, c), row(AtomLevel::Excited, n, c)) = element;
  }
  return {std::move(h), p, c};
}

Eigen::MatrixXcd propagator(const DenseHamiltonian& h, double tau) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h.matrix);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eigendecomposition of the Hamiltonian failed");
  }
  const Eigen::VectorXd& energies = solver.eigenvalues();
  Eigen::VectorXcd phases(energies.size());
  for (Eigen::Index k = 0; k < energies.size(); ++k) phases(k) = std::polar(1.0, -energies(k) * tau);
  const Eigen::MatrixXcd& v = solver.eigenvectors();
  return v * phases.asDiagonal() * v.adjoint();
}

JointState expm_evolve(const JointState& s, Cavity cavity, double tau, const Params& p) {
  check_state(s, cavity, p);
  const Eigen::MatrixXcd u = propagator(build_hamiltonian(s.cutoff(), p), tau);
  JointState out(s.cutoff());
  for (int spectator = 0; spectator <= s.cutoff(); ++spectator) {
    scatter(out, cavity, spectator, u * gather(s, cavity, spectator));
  }
  return out;
}

double energy(const JointState& s, Cavity cavity, const Params& p) {
  if (s.cutoff() != p.cutoff) throw CutoffMismatch("state and parameter cutoffs differ");
  const DenseHamiltonian h = build_hamiltonian(s.cutoff(), p);
  double total = 0.0;
  for (int spectator = 0; spectator <= s.cutoff(); ++spectator) {
    const Eigen::VectorXcd v = gather(s, cavity, spectator);
    total += v.dot(h.matrix * v).real();
  }
  return total;
}

}  // namespace noonsim::oracle
