#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace noonsim {

/// A Fock occupation outside [0, cutoff].
class OccupationOutOfRange : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Two states (or a state and an operator) built with different cutoffs.
class CutoffMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Post-selection onto an outcome whose Born probability is below the
/// impossibility threshold.
class ImpossibleOutcome : public std::runtime_error {
 public:
  ImpossibleOutcome(const std::string& what, double probability)
      : std::runtime_error(what), probability_(probability) {}
  double probability() const noexcept { return probability_; }

 private:
  double probability_;
};

/// Population within two quanta of the Fock cutoff, where the n <-> n+2
/// propagator would be truncated.
class LeakageError : public std::runtime_error {
 public:
  LeakageError(const std::string& what, double boundary_mass)
      : std::runtime_error(what), boundary_mass_(boundary_mass) {}
  double boundary_mass() const noexcept { return boundary_mass_; }

 private:
  double boundary_mass_;
};

}  // namespace noonsim
