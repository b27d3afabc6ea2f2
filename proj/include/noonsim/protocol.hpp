#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "noonsim/fockspace.hpp"

namespace noonsim {

enum class AtomPreparation { Excited, Ground, Superposition };

namespace step {

struct PrepareAtom {
  AtomPreparation preparation = AtomPreparation::Ground;
  friend bool operator==(const PrepareAtom&, const PrepareAtom&) = default;
};

struct PrepareCavity {
  Cavity cavity = Cavity::A;
  int fock = 0;
  friend bool operator==(const PrepareCavity&, const PrepareCavity&) = default;
};

struct Rotate {
  double theta = 0.0;  // radians
  friend bool operator==(const Rotate&, const Rotate&) = default;
};

struct Interact {
  Cavity cavity = Cavity::A;
  double tau = 0.0;  // scaled time
  friend bool operator==(const Interact&, const Interact&) = default;
};

/// Post-selects `outcome` unless a seed is given, in which case the outcome
/// is drawn from the Born probabilities and `outcome` is only the label the
/// program was written with.
struct MeasureAtom {
  AtomLevel outcome = AtomLevel::Ground;
  std::optional<std::uint64_t> seed;
  bool sampled() const { return seed.has_value(); }
  friend bool operator==(const MeasureAtom&, const MeasureAtom&) = default;
};

}  // namespace step

using Step = std::variant<step::PrepareAtom, step::PrepareCavity, step::Rotate, step::Interact,
                          step::MeasureAtom>;

struct Program {
  Params params;
  std::vector<Step> steps;
  friend bool operator==(const Program&, const Program&) = default;
};

struct Event {
  std::size_t step_index = 0;
  std::string description;
  std::optional<double> probability;    // measurement steps only
  std::optional<AtomLevel> outcome;     // measurement steps only
  friend bool operator==(const Event&, const Event&) = default;
};

struct RunResult {
  JointState final_state;
  std::vector<Event> events;
  double joint_postselect_probability = 1.0;
};

/// A program that violates the structural rules: bad parameters, preparation
/// after the first interaction, more than one atom preparation, a
/// measurement before any interaction, or out-of-range step arguments.
class ProgramError : public std::invalid_argument {
 public:
  ProgramError(const std::string& what, std::size_t step_index)
      : std::invalid_argument(what), step_index_(step_index) {}
  std::size_t step_index() const noexcept { return step_index_; }

 private:
  std::size_t step_index_;
};

/// Execution stopped at `step_index` (impossible post-selection or leakage).
class RunAborted : public std::runtime_error {
 public:
  RunAborted(const std::string& what, std::size_t step_index)
      : std::runtime_error(what), step_index_(step_index) {}
  std::size_t step_index() const noexcept { return step_index_; }

 private:
  std::size_t step_index_;
};

/// Throws ProgramError describing the first offending step. Parameter
/// problems are reported at index `prog.steps.size()`.
void validate(const Program& prog);

/// Called after every step with the step index and the state it produced.
using StepObserver = std::function<void(std::size_t, const JointState&)>;

/// Executes the steps in order starting from |g, 0, 0>.
RunResult run(const Program& prog, const StepObserver& observer = {});

/// Excited atom through empty cavity A, post-select ground, pi rotation,
/// through empty cavity B, post-select ground: |0,0> -> |2,2>.
Program twotwo_program(double tau, const Params& params = {});

/// Superposed atom through |2>_a then |2>_b, pi/2 rotation, ground detection.
Program noon_program(double tau, const Params& params = {});

std::string describe(const Step& s);

}  // namespace noonsim
