#include "noonsim/protocol.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "noonsim/dynamics.hpp"
#include "noonsim/observables.hpp"
#include "test_support.hpp"

namespace noonsim {
namespace {

using std::numbers::pi;
using testing::max_diff;
using testing::overlap_fidelity;
using testing::uniform;

constexpr AtomLevel E = AtomLevel::Excited;
constexpr AtomLevel G = AtomLevel::Ground;

double fidelity_to_22(const JointState& s) {
  return std::norm(s.amplitude(G, 2, 2)) + std::norm(s.amplitude(E, 2, 2));
}

TEST(Run, EmptyProgramIsVacuum) {
  const auto result = run(Program{});
  EXPECT_EQ(max_diff(result.final_state, make_basis_state(G, 0, 0, kDefaultCutoff)), 0.0);
  EXPECT_EQ(result.joint_postselect_probability, 1.0);
  EXPECT_TRUE(result.events.empty());
}

TEST(Run, PreparationBuildsProductState) {
  Program prog;
  prog.steps = {step::PrepareCavity{Cavity::B, 3}, step::PrepareAtom{AtomPreparation::Superposition},
                step::PrepareCavity{Cavity::A, 1}};
  const auto result = run(prog);
  EXPECT_EQ(max_diff(result.final_state, superposition_atom(1, 3, kDefaultCutoff)), 0.0);
  EXPECT_EQ(result.events.size(), 3u);
}

TEST(TwoTwo, JointProbabilityAtPaperTime) {
  const auto result = run(twotwo_program(3.16));
  const double expected = std::pow(std::sin(std::sqrt(2.0) * 3.16), 4);
  EXPECT_NEAR(result.joint_postselect_probability, expected, 1e-9);
  EXPECT_NEAR(result.joint_postselect_probability, 0.887, 1e-3);
  ASSERT_EQ(result.events.size(), 8u);
  EXPECT_NEAR(*result.events[4].probability, std::pow(std::sin(std::sqrt(2.0) * 3.16), 2), 1e-12);
  EXPECT_NEAR(*result.events[4].probability, 0.9417, 1e-3);
  EXPECT_NEAR(fidelity_to_22(result.final_state), 1.0, 1e-10);
}

TEST(TwoTwo, ExactQuarterPeriodIsDeterministic) {
  const auto result = run(twotwo_program(pi / (2.0 * std::sqrt(2.0))));
  EXPECT_NEAR(result.joint_postselect_probability, 1.0, 1e-10);
}

TEST(TwoTwo, ConditionalFieldIsAlwaysTwoTwo) {
  for (double tau : {0.3, 1.0, 2.2, 3.16, 5.0}) {
    const auto result = run(twotwo_program(tau));
    EXPECT_NEAR(fidelity_to_22(result.final_state), 1.0, 1e-10) << tau;
  }
}

TEST(Noon, GroundBranchAtPaperTime) {
  const auto result = run(noon_program(3.16));
  EXPECT_NEAR(result.joint_postselect_probability, 0.50, 0.01);
  EXPECT_NEAR(noon_fidelity(result.final_state, NoonTarget{4, +1}), 0.94, 0.01);
}

TEST(Noon, ExcitedBranchGivesOppositeSign) {
  Program prog = noon_program(3.16);
  std::get<step::MeasureAtom>(prog.steps.back()).outcome = E;
  const auto excited = run(prog);
  const auto ground = run(noon_program(3.16));
  const double f_minus = noon_fidelity(excited.final_state, NoonTarget{4, -1});
  const double f_plus = noon_fidelity(ground.final_state, NoonTarget{4, +1});
  EXPECT_NEAR(f_minus, f_plus, 1e-3);
  EXPECT_NEAR(noon_fidelity(excited.final_state, NoonTarget{4, +1}), 0.0, 1e-3);
}

TEST(Run, ProbabilityBookkeepingOverAllOutcomes) {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 40; ++trial) {
    const Params p{uniform(rng, -1, 1), uniform(rng, -1, 1)};
    const double tau = uniform(rng, 0.1, 6);
    for (const Program& base : {twotwo_program(tau, p), noon_program(tau, p)}) {
      std::vector<std::size_t> measures;
      for (std::size_t i = 0; i < base.steps.size(); ++i) {
        if (std::holds_alternative<step::MeasureAtom>(base.steps[i])) measures.push_back(i);
      }
      double total = 0.0;
      for (unsigned mask = 0; mask < (1U << measures.size()); ++mask) {
        Program prog = base;
        for (std::size_t k = 0; k < measures.size(); ++k) {
          std::get<step::MeasureAtom>(prog.steps[measures[k]]).outcome = (mask >> k) & 1U ? E : G;
        }
        try {
          total += run(prog).joint_postselect_probability;
        } catch (const RunAborted&) {
        }
      }
      EXPECT_NEAR(total, 1.0, 1e-10);
    }
  }
}

TEST(Run, SampledMeasurementIsDeterministicPerSeed) {
  Program prog = noon_program(3.16);
  std::get<step::MeasureAtom>(prog.steps.back()).seed = 2024;
  const auto a = run(prog);
  const auto b = run(prog);
  EXPECT_EQ(a.events, b.events);
  EXPECT_EQ(a.joint_postselect_probability, b.joint_postselect_probability);
  EXPECT_EQ(max_diff(a.final_state, b.final_state), 0.0);
  ASSERT_TRUE(a.events.back().outcome.has_value());
}

TEST(Run, SampledOutcomesFollowBornRule) {
  Program prog = noon_program(3.16);
  int ground = 0;
  const int shots = 4000;
  for (int seed = 0; seed < shots; ++seed) {
    std::get<step::MeasureAtom>(prog.steps.back()).seed = static_cast<std::uint64_t>(seed);
    if (run(prog).events.back().outcome == G) ++ground;
  }
  // p_ground ~ 0.50007; five standard deviations is ~0.04.
  EXPECT_NEAR(static_cast<double>(ground) / shots, 0.5, 0.04);
}

TEST(Run, AbortsOnImpossiblePostSelection) {
  Program prog;
  prog.steps = {step::PrepareAtom{AtomPreparation::Ground}, step::Interact{Cavity::A, 1.0},
                step::MeasureAtom{E, std::nullopt}};
  try {
    run(prog);
    FAIL() << "expected RunAborted";
  } catch (const RunAborted& e) {
    EXPECT_EQ(e.step_index(), 2u);
  }
}

TEST(Run, AbortsOnLeakage) {
  Program prog;
  prog.params.cutoff = 8;
  prog.steps = {step::PrepareAtom{AtomPreparation::Excited}, step::PrepareCavity{Cavity::A, 7},
                step::Interact{Cavity::A, 1.0}};
  try {
    run(prog);
    FAIL() << "expected RunAborted";
  } catch (const RunAborted& e) {
    EXPECT_EQ(e.step_index(), 2u);
  }
}

TEST(Validate, StructuralRules) {
  auto expect_error_at = [](std::vector<Step> steps, std::size_t index, Params p = {}) {
    try {
      validate(Program{p, std::move(steps)});
      FAIL() << "expected ProgramError";
    } catch (const ProgramError& e) {
      EXPECT_EQ(e.step_index(), index) << e.what();
    }
  };
  expect_error_at({step::MeasureAtom{G, std::nullopt}}, 0);
  expect_error_at({step::PrepareAtom{}, step::PrepareAtom{}}, 1);
  expect_error_at({step::Interact{Cavity::A, 1.0}, step::PrepareCavity{Cavity::A, 1}}, 1);
  expect_error_at({step::Interact{Cavity::A, 1.0}, step::PrepareAtom{}}, 1);
  expect_error_at({step::PrepareCavity{Cavity::B, 21}}, 0);
  expect_error_at({step::Interact{Cavity::B, -1.0}}, 0);
  expect_error_at({step::Rotate{NAN}}, 0);
  expect_error_at({}, 0, Params{0.0, 0.0, 4});
  EXPECT_NO_THROW(validate(noon_program(3.16)));
  EXPECT_NO_THROW(validate(twotwo_program(3.16)));
  EXPECT_THROW(noon_program(0.0), std::invalid_argument);
}

TEST(Run, RotationBeforeInteractionActsOnPreparedAtom) {
  Program prog;
  prog.steps = {step::PrepareAtom{AtomPreparation::Ground}, step::Rotate{pi},
                step::Interact{Cavity::A, 0.0}};
  const auto result = run(prog);
  EXPECT_NEAR(std::abs(result.final_state.amplitude(E, 0, 0) + 1.0), 0.0, 1e-15);
}

TEST(EquationChain, ExactQuarterPeriodsPerBranch) {
  const Params p{};
  const int c = p.cutoff;
  const double h = 1.0 / std::sqrt(2.0);
  // Photon pairs enter or leave at rate sqrt(12) from |e,2> and sqrt(2) from |g,2>.
  const double quarter_e2 = pi / (2.0 * std::sqrt(12.0));
  const double quarter_g2 = pi / (2.0 * std::sqrt(2.0));

  const auto start = superposition_atom(2, 2, c);
  auto branch = [&](const JointState& s, AtomLevel level) {
    JointState part(c);
    for (int na = 0; na <= c; ++na)
      for (int nb = 0; nb <= c; ++nb) part.amplitude(level, na, nb) = s.amplitude(level, na, nb);
    return part;
  };

  // After cavity A: (i/sqrt 2)(|e>|0>_a + |g>|4>_a) |2>_b.
  const auto after_a = evolve_cavity(branch(start, E), Cavity::A, quarter_e2, p) +
                       evolve_cavity(branch(start, G), Cavity::A, quarter_g2, p);
  JointState eq8(c);
  eq8.amplitude(E, 0, 2) = Complex{0.0, h};
  eq8.amplitude(G, 4, 2) = Complex{0.0, h};
  EXPECT_NEAR(overlap_fidelity(after_a, eq8), 1.0, 1e-10);

  // After cavity B: -(1/sqrt 2)(|e>|4,0> + |g>|0,4>).
  const auto after_b = evolve_cavity(branch(after_a, E), Cavity::B, quarter_e2, p) +
                       evolve_cavity(branch(after_a, G), Cavity::B, quarter_g2, p);
  JointState eq9(c);
  eq9.amplitude(E, 4, 0) = -h;
  eq9.amplitude(G, 0, 4) = -h;
  EXPECT_NEAR(overlap_fidelity(after_b, eq9), 1.0, 1e-10);

  // Rotation: -(1/2)(|e>(|4,0> - |0,4>) + |g>(|0,4> + |4,0>)).
  const auto rotated = rotate_atom(after_b, pi / 2.0);
  JointState eq10(c);
  eq10.amplitude(E, 4, 0) = -0.5;
  eq10.amplitude(E, 0, 4) = 0.5;
  eq10.amplitude(G, 0, 4) = -0.5;
  eq10.amplitude(G, 4, 0) = -0.5;
  EXPECT_NEAR(overlap_fidelity(rotated, eq10), 1.0, 1e-10);

  const auto detected = project_atom(rotated, G);
  EXPECT_NEAR(detected.probability, 0.5, 1e-10);
  EXPECT_NEAR(noon_fidelity(detected.collapsed, NoonTarget{4, +1}), 1.0, 1e-10);
}

TEST(EquationChain, ObserverSeesProtocolIntermediates) {
  std::vector<JointState> states;
  run(noon_program(3.16), [&](std::size_t, const JointState& s) { states.push_back(s); });
  ASSERT_EQ(states.size(), 7u);
  // After both interactions the population is concentrated on the chain states.
  const double h = 1.0 / std::sqrt(2.0);
  JointState eq9(kDefaultCutoff);
  eq9.amplitude(E, 4, 0) = -h;
  eq9.amplitude(G, 0, 4) = -h;
  EXPECT_GT(overlap_fidelity(states[4], eq9), 0.85);
  for (const auto& s : states) EXPECT_NEAR(s.norm(), 1.0, 1e-10);
}

}  // namespace
}  // namespace noonsim
