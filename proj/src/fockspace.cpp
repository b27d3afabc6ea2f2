#include "noonsim/fockspace.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace noonsim {

void Params::validate() const {
  if (cutoff < kMinimumCutoff) {
    throw std::invalid_argument("cutoff must be at least " + std::to_string(kMinimumCutoff) +
                                ", got " + std::to_string(cutoff));
  }
  if (!std::isfinite(chi)) throw std::invalid_argument("chi must be finite");
  if (!std::isfinite(delta)) throw std::invalid_argument("delta must be finite");
}

std::string_view to_string(AtomLevel level) {
  return level == AtomLevel::Excited ? "e" : "g";
}

std::string_view to_string(Cavity cavity) { return cavity == Cavity::A ? "A" : "B"; }

AtomLevel other(AtomLevel level) {
  return level == AtomLevel::Excited ? AtomLevel::Ground : AtomLevel::Excited;
}

JointState::JointState(int cutoff) : cutoff_(cutoff) {
  if (cutoff < 0) throw std::invalid_argument("cutoff must be non-negative");
  const auto m = static_cast<std::size_t>(cutoff + 1);
  amps_.assign(2 * m * m, Complex{0.0, 0.0});
}

std::span<const Complex> JointState::block(AtomLevel level) const {
  const auto m = static_cast<std::size_t>(modes());
  return std::span<const Complex>(amps_).subspan(static_cast<std::size_t>(level) * m * m, m * m);
}

std::span<Complex> JointState::block(AtomLevel level) {
  const auto m = static_cast<std::size_t>(modes());
  return std::span<Complex>(amps_).subspan(static_cast<std::size_t>(level) * m * m, m * m);
}

double JointState::squared_norm() const {
  return std::accumulate(amps_.begin(), amps_.end(), 0.0,
                         [](double acc, Complex z) { return acc + std::norm(z); });
}

double JointState::norm() const { return std::sqrt(squared_norm()); }

bool JointState::is_normalized(double tol) const { return std::abs(norm() - 1.0) <= tol; }

bool JointState::is_finite() const {
  for (const auto& z : amps_) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

JointState& JointState::operator*=(Complex factor) {
  for (auto& z : amps_) z *= factor;
  return *this;
}

JointState& JointState::operator+=(const JointState& other) {
  if (other.cutoff_ != cutoff_) throw CutoffMismatch("cannot add states with different cutoffs");
  for (std::size_t i = 0; i < amps_.size(); ++i) amps_[i] += other.amps_[i];
  return *this;
}

JointState operator*(Complex factor, JointState s) {
  s *= factor;
  return s;
}

JointState operator+(JointState lhs, const JointState& rhs) {
  lhs += rhs;
  return lhs;
}

namespace {

void check_occupation(char mode, int n, int cutoff) {
  if (n < 0 || n > cutoff) {
    throw OccupationOutOfRange("occupation of mode " + std::string(1, mode) + " is " +
                               std::to_string(n) + ", outside [0, " + std::to_string(cutoff) +
                               "]");
  }
}

}  // namespace

JointState make_basis_state(AtomLevel atom, int n_a, int n_b, int cutoff) {
  check_occupation('a', n_a, cutoff);
  check_occupation('b', n_b, cutoff);
  JointState s(cutoff);
  s.amplitude(atom, n_a, n_b) = 1.0;
  return s;
}

JointState superposition_atom(int n_a, int n_b, int cutoff) {
  check_occupation('a', n_a, cutoff);
  check_occupation('b', n_b, cutoff);
  JointState s(cutoff);
  const double h = 1.0 / std::sqrt(2.0);
  s.amplitude(AtomLevel::Excited, n_a, n_b) = h;
  s.amplitude(AtomLevel::Ground, n_a, n_b) = h;
  return s;
}

Complex inner(const JointState& s1, const JointState& s2) {
  if (s1.cutoff() != s2.cutoff()) {
    throw CutoffMismatch("inner product of states with cutoffs " + std::to_string(s1.cutoff()) +
                         " and " + std::to_string(s2.cutoff()));
  }
  const auto a = s1.amplitudes();
  const auto b = s2.amplitudes();
  Complex acc{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

double atom_probability(const JointState& s, AtomLevel level) {
  double p = 0.0;
  for (const auto& z : s.block(level)) p += std::norm(z);
  return p;
}

Projection project_atom(const JointState& s, AtomLevel outcome) {
  const double p = atom_probability(s, outcome);
  if (p < kImpossibleProbability) {
    throw ImpossibleOutcome("atom outcome '" + std::string(to_string(outcome)) +
                                "' has probability " + std::to_string(p) + " (impossible)",
                            p);
  }
  JointState collapsed(s.cutoff());
  const auto src = s.block(outcome);
  auto dst = collapsed.block(outcome);
  const double scale = 1.0 / std::sqrt(p);
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] * scale;
  return {std::min(p, 1.0), std::move(collapsed)};
}

double boundary_leakage(const JointState& s, int margin) {
  if (margin < 0 || margin >= s.cutoff()) {
    throw std::invalid_argument("leakage margin must lie in [0, cutoff)");
  }
  const int edge = s.cutoff() - margin;
  double mass = 0.0;
  for (auto level : {AtomLevel::Excited, AtomLevel::Ground}) {
    for (int na = 0; na <= s.cutoff(); ++na) {
      for (int nb = 0; nb <= s.cutoff(); ++nb) {
        if (na > edge || nb > edge) mass += std::norm(s.amplitude(level, na, nb));
      }
    }
  }
  return mass;
}

JointState normalized(const JointState& s) {
  const double n = s.norm();
  if (!(n > 0.0)) throw std::invalid_argument("cannot normalize a zero state");
  return Complex{1.0 / n, 0.0} * s;
}

}  // namespace noonsim
