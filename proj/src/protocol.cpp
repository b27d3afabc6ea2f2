#include "noonsim/protocol.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "noonsim/dynamics.hpp"

namespace noonsim {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string_view preparation_name(AtomPreparation prep) {
  switch (prep) {
    case AtomPreparation::Excited:
      return "e";
    case AtomPreparation::Ground:
      return "g";
    case AtomPreparation::Superposition:
      return "superposition";
  }
  return "?";
}

// Uniform double in [0, 1) built from the top 53 bits, so sampling does not
// depend on the standard library's distribution implementation.
double uniform01(std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

// Product state built up by the preparation phase, before the first
// interaction entangles anything.
struct Preparation {
  std::array<Complex, 2> atom{Complex{0.0}, Complex{1.0}};  // (e, g)
  int n_a = 0;
  int n_b = 0;

  JointState materialize(int cutoff) const {
    JointState s(cutoff);
    s.amplitude(AtomLevel::Excited, n_a, n_b) = atom[0];
    s.amplitude(AtomLevel::Ground, n_a, n_b) = atom[1];
    return s;
  }
};

}  // namespace

std::string describe(const Step& s) {
  std::ostringstream out;
  std::visit(overloaded{
                 [&](const step::PrepareAtom& st) {
                   out << "prepare atom " << preparation_name(st.preparation);
                 },
                 [&](const step::PrepareCavity& st) {
                   out << "prepare cavity " << to_string(st.cavity) << " fock " << st.fock;
                 },
                 [&](const step::Rotate& st) { out << "rotate " << st.theta; },
                 [&](const step::Interact& st) {
                   out << "interact " << to_string(st.cavity) << " " << st.tau;
                 },
                 [&](const step::MeasureAtom& st) {
                   out << "measure atom " << to_string(st.outcome);
                   if (st.seed) out << " sample " << *st.seed;
                 },
             },
             s);
  return out.str();
}

void validate(const Program& prog) {
  try {
    prog.params.validate();
  } catch (const std::invalid_argument& e) {
    throw ProgramError(e.what(), prog.steps.size());
  }
  bool interacted = false;
  bool atom_prepared = false;
  for (std::size_t i = 0; i < prog.steps.size(); ++i) {
    auto fail = [&](const std::string& why) {
      throw ProgramError("step " + std::to_string(i) + " (" + describe(prog.steps[i]) + "): " + why,
                         i);
    };
    std::visit(overloaded{
                   [&](const step::PrepareAtom&) {
                     if (interacted) fail("atom preparation after the first interaction");
                     if (atom_prepared) fail("the atom is prepared more than once");
                     atom_prepared = true;
                   },
                   [&](const step::PrepareCavity& st) {
                     if (interacted) fail("cavity preparation after the first interaction");
                     if (st.fock < 0 || st.fock > prog.params.cutoff) {
                       fail("Fock number outside [0, " + std::to_string(prog.params.cutoff) + "]");
                     }
                   },
                   [&](const step::Rotate& st) {
                     if (!std::isfinite(st.theta)) fail("rotation angle must be finite");
                   },
                   [&](const step::Interact& st) {
                     if (!std::isfinite(st.tau) || st.tau < 0.0) {
                       fail("interaction time must be finite and non-negative");
                     }
                     interacted = true;
                   },
                   [&](const step::MeasureAtom&) {
                     if (!interacted) fail("measurement before any interaction");
                   },
               },
               prog.steps[i]);
  }
}

RunResult run(const Program& prog, const StepObserver& observer) {
  validate(prog);
  const Params& p = prog.params;

  Preparation prep;
  std::optional<JointState> state;  // engaged from the first interaction on
  std::vector<Event> events;
  double joint = 1.0;

  auto current = [&]() -> JointState { return state ? *state : prep.materialize(p.cutoff); };

  for (std::size_t i = 0; i < prog.steps.size(); ++i) {
    Event event{i, describe(prog.steps[i]), std::nullopt, std::nullopt};
    std::visit(
        overloaded{
            [&](const step::PrepareAtom& st) {
              const double h = 1.0 / std::numbers::sqrt2;
              switch (st.preparation) {
                case AtomPreparation::Excited:
                  prep.atom = {Complex{1.0}, Complex{0.0}};
                  break;
                case AtomPreparation::Ground:
                  prep.atom = {Complex{0.0}, Complex{1.0}};
                  break;
                case AtomPreparation::Superposition:
                  prep.atom = {Complex{h}, Complex{h}};
                  break;
              }
            },
            [&](const step::PrepareCavity& st) {
              (st.cavity == Cavity::A ? prep.n_a : prep.n_b) = st.fock;
            },
            [&](const step::Rotate& st) {
              if (state) {
                state = rotate_atom(*state, st.theta);
              } else {
                const double c = std::cos(st.theta / 2.0);
                const double s = std::sin(st.theta / 2.0);
                prep.atom = {c * prep.atom[0] - s * prep.atom[1], s * prep.atom[0] + c * prep.atom[1]};
              }
            },
            [&](const step::Interact& st) {
              try {
                state = evolve_cavity(current(), st.cavity, st.tau, p);
              } catch (const LeakageError& e) {
                throw RunAborted("step " + std::to_string(i) + ": " + e.what(), i);
              }
            },
            [&](const step::MeasureAtom& st) {
              AtomLevel outcome = st.outcome;
              if (st.seed) {
                const double pe = atom_probability(*state, AtomLevel::Excited);
                outcome = uniform01(*st.seed) < pe ? AtomLevel::Excited : AtomLevel::Ground;
              }
              try {
                auto projection = project_atom(*state, outcome);
                state = std::move(projection.collapsed);
                joint *= projection.probability;
                event.probability = projection.probability;
                event.outcome = outcome;
              } catch (const ImpossibleOutcome& e) {
                throw RunAborted("step " + std::to_string(i) + ": " + e.what(), i);
              }
            },
        },
        prog.steps[i]);
    events.push_back(std::move(event));
    if (observer) observer(i, current());
  }
  return {current(), std::move(events), joint};
}

Program twotwo_program(double tau, const Params& params) {
  if (!(tau > 0.0)) throw std::invalid_argument("twotwo_program needs tau > 0");
  return {params,
          {step::PrepareAtom{AtomPreparation::Excited}, step::PrepareCavity{Cavity::A, 0},
           step::PrepareCavity{Cavity::B, 0}, step::Interact{Cavity::A, tau},
           step::MeasureAtom{AtomLevel::Ground, std::nullopt}, step::Rotate{std::numbers::pi},
           step::Interact{Cavity::B, tau}, step::MeasureAtom{AtomLevel::Ground, std::nullopt}}};
}

Program noon_program(double tau, const Params& params) {
  if (!(tau > 0.0)) throw std::invalid_argument("noon_program needs tau > 0");
  return {params,
          {step::PrepareCavity{Cavity::A, 2}, step::PrepareCavity{Cavity::B, 2},
           step::PrepareAtom{AtomPreparation::Superposition}, step::Interact{Cavity::A, tau},
           step::Interact{Cavity::B, tau}, step::Rotate{std::numbers::pi / 2.0},
           step::MeasureAtom{AtomLevel::Ground, std::nullopt}}};
}

}  // namespace noonsim
