#include "noonsim/observables.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "noonsim/dynamics.hpp"

namespace noonsim {

double atomic_inversion(const JointState& s) {
  const double w =
      atom_probability(s, AtomLevel::Excited) - atom_probability(s, AtomLevel::Ground);
  return std::clamp(w, -1.0, 1.0);
}

InversionSeries inversion_trace(AtomLevel atom0, int n0, Cavity cavity, const Params& p,
                                double tau_max, int steps) {
  if (steps < 2) throw std::invalid_argument("inversion trace needs at least 2 steps");
  if (!(tau_max > 0.0) || !std::isfinite(tau_max)) {
    throw std::invalid_argument("tau_max must be positive and finite");
  }
  p.validate();
  const JointState initial = cavity == Cavity::A ? make_basis_state(atom0, n0, 0, p.cutoff)
                                                 : make_basis_state(atom0, 0, n0, p.cutoff);
  InversionSeries series;
  series.taus.reserve(static_cast<std::size_t>(steps));
  series.w.reserve(static_cast<std::size_t>(steps));
  const double step = tau_max / (steps - 1);
  for (int k = 0; k < steps; ++k) {
    const double tau = k == steps - 1 ? tau_max : k * step;
    series.taus.push_back(tau);
    series.w.push_back(atomic_inversion(evolve_cavity(initial, cavity, tau, p)));
  }
  return series;
}

std::vector<double> photon_distribution(const JointState& s, Cavity cavity) {
  std::vector<double> dist(static_cast<std::size_t>(s.modes()), 0.0);
  for (auto level : {AtomLevel::Excited, AtomLevel::Ground}) {
    for (int na = 0; na <= s.cutoff(); ++na) {
      for (int nb = 0; nb <= s.cutoff(); ++nb) {
        dist[static_cast<std::size_t>(cavity == Cavity::A ? na : nb)] +=
            std::norm(s.amplitude(level, na, nb));
      }
    }
  }
  return dist;
}

namespace {

void check_target(const NoonTarget& target, int cutoff) {
  if (target.n_photons < 1 || target.n_photons > cutoff) {
    throw std::invalid_argument("NOON photon number " + std::to_string(target.n_photons) +
                                " outside [1, " + std::to_string(cutoff) + "]");
  }
  if (target.relative_sign != 1 && target.relative_sign != -1) {
    throw std::invalid_argument("NOON relative sign must be +1 or -1");
  }
}

}  // namespace

JointState make_noon_state(const NoonTarget& target, AtomLevel atom, int cutoff) {
  check_target(target, cutoff);
  JointState s(cutoff);
  const double h = 1.0 / std::sqrt(2.0);
  s.amplitude(atom, target.n_photons, 0) = h;
  s.amplitude(atom, 0, target.n_photons) = target.relative_sign * h;
  return s;
}

double noon_fidelity(const JointState& field_state, const NoonTarget& target) {
  check_target(target, field_state.cutoff());
  const double pe = atom_probability(field_state, AtomLevel::Excited);
  const double pg = atom_probability(field_state, AtomLevel::Ground);
  if (pe > kNormTolerance && pg > kNormTolerance) {
    throw std::invalid_argument("noon_fidelity expects a state with the atom projected out");
  }
  const AtomLevel level = pe >= pg ? AtomLevel::Excited : AtomLevel::Ground;
  const double h = 1.0 / std::sqrt(2.0);
  const Complex overlap =
      h * (field_state.amplitude(level, target.n_photons, 0) +
           static_cast<double>(target.relative_sign) * field_state.amplitude(level, 0, target.n_photons));
  return std::clamp(std::norm(overlap), 0.0, 1.0);
}

}  // namespace noonsim
