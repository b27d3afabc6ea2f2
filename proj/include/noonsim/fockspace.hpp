#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "noonsim/errors.hpp"

namespace noonsim {

using Complex = std::complex<double>;

inline constexpr int kDefaultCutoff = 20;
inline constexpr int kMinimumCutoff = 6;
inline constexpr double kNormTolerance = 1e-10;
inline constexpr double kImpossibleProbability = 1e-12;

/// Physical parameters in units of the two-photon coupling (lambda = 1).
/// Times everywhere are scaled times tau = lambda * t.
struct Params {
  double chi = 0.0;    // Stark-shift coefficient chi / lambda
  double delta = 0.0;  // detuning Delta / lambda
  int cutoff = kDefaultCutoff;

  /// Throws std::invalid_argument if cutoff < 6 or chi/delta are not finite.
  void validate() const;

  friend bool operator==(const Params&, const Params&) = default;
};

/// Excited is the first basis row (index 0), ground the second.
enum class AtomLevel { Excited = 0, Ground = 1 };
enum class Cavity { A, B };

std::string_view to_string(AtomLevel level);
std::string_view to_string(Cavity cavity);
AtomLevel other(AtomLevel level);

/// Pure state of one two-level atom and two cavity modes truncated at
/// `cutoff` photons each. Amplitudes are stored densely, atom-major, then
/// n_a, then n_b.
class JointState {
 public:
  explicit JointState(int cutoff);

  int cutoff() const noexcept { return cutoff_; }
  int modes() const noexcept { return cutoff_ + 1; }

  Complex amplitude(AtomLevel level, int n_a, int n_b) const {
    return amps_[index(level, n_a, n_b)];
  }
  Complex& amplitude(AtomLevel level, int n_a, int n_b) {
    return amps_[index(level, n_a, n_b)];
  }

  std::span<const Complex> amplitudes() const noexcept { return amps_; }
  std::span<Complex> amplitudes() noexcept { return amps_; }

  /// Contiguous (n_a, n_b) block belonging to one atomic level.
  std::span<const Complex> block(AtomLevel level) const;
  std::span<Complex> block(AtomLevel level);

  double squared_norm() const;
  double norm() const;
  bool is_normalized(double tol = kNormTolerance) const;
  bool is_finite() const;

  JointState& operator*=(Complex factor);
  JointState& operator+=(const JointState& other);

 private:
  std::size_t index(AtomLevel level, int n_a, int n_b) const {
    const auto m = static_cast<std::size_t>(modes());
    return (static_cast<std::size_t>(level) * m + static_cast<std::size_t>(n_a)) * m +
           static_cast<std::size_t>(n_b);
  }

  int cutoff_;
  std::vector<Complex> amps_;
};

JointState operator*(Complex factor, JointState s);
JointState operator+(JointState lhs, const JointState& rhs);

/// |atom, n_a, n_b>. Throws OccupationOutOfRange naming the offending mode.
JointState make_basis_state(AtomLevel atom, int n_a, int n_b, int cutoff);

/// (|e> + |g>)|n_a, n_b> / sqrt(2).
JointState superposition_atom(int n_a, int n_b, int cutoff);

/// <s1|s2>, conjugate-linear in the first argument.
Complex inner(const JointState& s1, const JointState& s2);

struct Projection {
  double probability;
  JointState collapsed;
};

/// Measures the atom and keeps `outcome`. The collapsed state is the selected
/// atom block renormalized, with the other block zeroed.
/// Throws ImpossibleOutcome if the probability is below 1e-12.
Projection project_atom(const JointState& s, AtomLevel outcome);

/// Probability of the selected atomic block, without collapsing.
double atom_probability(const JointState& s, AtomLevel level);

/// Total probability with n_a > cutoff - margin or n_b > cutoff - margin.
double boundary_leakage(const JointState& s, int margin);

/// Copy of `s` rescaled to unit norm. Throws std::invalid_argument on a zero state.
JointState normalized(const JointState& s);

}  // namespace noonsim
