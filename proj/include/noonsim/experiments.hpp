#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "noonsim/fockspace.hpp"
#include "noonsim/observables.hpp"

namespace noonsim {

/// Both detection branches of the NOON protocol.
struct NoonReport {
  double tau = 0.0;
  double p_ground = 0.0;
  double p_excited = 0.0;
  double fidelity_ground = 0.0;                 // to (|4,0> + |0,4>)/sqrt(2)
  std::optional<double> fidelity_excited;       // to (|4,0> - |0,4>)/sqrt(2); empty if impossible
};

/// Runs the NOON protocol at `tau` (>= 0) and evaluates both outcomes.
/// A branch with probability below 1e-12 reports fidelity 0 (ground) or none
/// (excited).
NoonReport noon_report(double tau, const Params& p);

/// Ground-detected NOON fidelity at `tau`.
double noon_ground_fidelity(double tau, const Params& p);

struct SweepRow {
  double chi = 0.0;
  double delta = 0.0;
  double fidelity = 0.0;
  double p_ground = 0.0;
};

/// chi on the uniform grid [0, chi_max] with `steps` points, for every delta
/// in `deltas` (delta-major order).
std::vector<SweepRow> sweep_chi(double tau, double chi_max, int steps,
                                const std::vector<double>& deltas, int cutoff = kDefaultCutoff);

/// For each chi, the detuning on the uniform grid [delta_lo, delta_hi]
/// (`delta_steps` points) that maximizes ground-branch fidelity. Ties keep
/// the smallest |delta|.
std::vector<SweepRow> compensate_detuning(double tau, const std::vector<double>& chis,
                                          double delta_lo, double delta_hi, int delta_steps,
                                          int cutoff = kDefaultCutoff);

struct TauSearchResult {
  double tau_star = 0.0;
  double fidelity = 0.0;
};

inline constexpr int kTauGridPoints = 201;

/// Maximizes ground-branch NOON fidelity over [lo, hi]: a uniform grid of
/// `grid_points` (>= 200) followed by golden-section refinement around the
/// best grid point. An interval no wider than `tol` returns its better
/// endpoint. Throws std::invalid_argument if lo >= hi or tol <= 0.
TauSearchResult find_tau(double lo, double hi, double tol, const Params& p = {},
                         int grid_points = kTauGridPoints);

struct ValidationReport {
  int trials = 0;
  int compared = 0;
  int rejected = 0;  // refused by the leakage precondition
  double max_deviation = 0.0;
  bool passed = false;
};

inline constexpr double kOracleTolerance = 1e-9;

/// Compares evolve_cavity against the dense oracle on seeded random states
/// with support n_a, n_b <= max_support, tau in [0, 10], chi and delta in
/// [-1, 1]. max_support defaults to cutoff - 4. With `at_boundary` set,
/// states also get population at n = cutoff - 1 and must be rejected by both
/// propagators. Passes iff every comparison deviates by less than 1e-9 in
/// max-norm and every boundary state was rejected.
ValidationReport validate_oracle(int cutoff, int trials, std::uint64_t seed,
                                 std::optional<int> max_support = std::nullopt,
                                 bool at_boundary = false);

/// Random normalized state with support confined to n_a, n_b <= max_support.
JointState random_state(int cutoff, int max_support, std::uint64_t seed);

void write_inversion_csv(std::ostream& out, const InversionSeries& series);
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace noonsim
