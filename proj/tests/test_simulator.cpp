#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "symctl/simulator.hpp"

using namespace symctl;
using namespace symctl::sim;
using std::numbers::pi;
using tensor::mat_exp;
using tensor::max_abs;

namespace {

PulseSchedule random_schedule(int n, int segments, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-3.0, 3.0), dt(0.0, 1.0);
  PulseSchedule s{n, {}};
  for (int k = 0; k < segments; ++k) s.segments.push_back({u(rng), u(rng), dt(rng)});
  return s;
}

Matrix block(int n, const Matrix& full) {
  const Matrix v = spin::symmetric_isometry(n);
  return v.adjoint() * full * v;
}

}  // namespace

TEST(Evolve, EmptyScheduleIsIdentity) {
  EXPECT_EQ(max_abs(schedule_unitary({3, {}}) - tensor::identity(8)), 0.0);
}

TEST(Evolve, FreeSegmentIsIsingEvolution) {
  const PulseSchedule s{2, {{0.0, 0.0, 0.7}}};
  EXPECT_LT(max_abs(schedule_unitary(s) - mat_exp(-kI * 0.7 * spin::model(2).zz)), 1e-14);
}

TEST(Evolve, HardPulseConvergesToRotation) {
  const Matrix ideal = mat_exp(-kI * (pi / 4) * spin::model(2).x);
  double previous = 1e9;
  for (double a : {10.0, 100.0, 1000.0}) {
    const double err = max_abs(schedule_unitary({2, {{a, 0.0, pi / (4 * a)}}}) - ideal);
    EXPECT_LT(err, previous);
    previous = err;
  }
  EXPECT_LT(previous, 5e-3);
}

TEST(Evolve, UnitaryAndNormPreserving) {
  std::mt19937_64 rng(83);
  for (int k = 0; k < 10; ++k) {
    const auto s = random_schedule(3, 20, rng);
    EXPECT_TRUE(tensor::is_unitary(schedule_unitary(s), 1e-10));
    EXPECT_NEAR(evolve(s, spin::ghz_state(3)).amplitudes().norm(), 1.0, 1e-10);
  }
}

TEST(Evolve, Concatenation) {
  std::mt19937_64 rng(89);
  const auto a = random_schedule(3, 8, rng), b = random_schedule(3, 8, rng);
  PulseSchedule ab = a;
  ab.segments.insert(ab.segments.end(), b.segments.begin(), b.segments.end());
  const auto once = evolve(ab, spin::w_state(3));
  const auto twice = evolve(b, evolve(a, spin::w_state(3)));
  EXPECT_LT((once.amplitudes() - twice.amplitudes()).norm(), 1e-10);
  const Matrix m = evolve(a, tensor::identity(8));
  EXPECT_LT(max_abs(m - schedule_unitary(a)), 1e-15);
}

TEST(Evolve, KeepsSymmetricStatesSymmetric) {
  std::mt19937_64 rng(97);
  for (int n : {2, 3, 4}) {
    const auto s = random_schedule(n, 15, rng);
    EXPECT_LE(spin::symmetric_leakage(evolve(s, spin::phi_state(n, 1))), 1e-9);
  }
}

TEST(Evolve, Preconditions) {
  EXPECT_THROW(evolve({2, {{0, 0, -1.0}}}, spin::ghz_state(2)), PreconditionError);
  EXPECT_THROW(evolve({2, {}}, spin::ghz_state(3)), PreconditionError);
  EXPECT_THROW(evolve({2, {}}, tensor::identity(8)), PreconditionError);
}

TEST(Realize, EmptyPlan) {
  synth::SynthesisPlan p;
  p.n = 3;
  EXPECT_TRUE(realize(p, 100.0).segments.empty());
  EXPECT_THROW(realize(p, 0.0), PreconditionError);
}

TEST(Realize, IsingStepIsRescaledFreeEvolution) {
  for (double t : {0.3, -1.1, 2.5}) {
    synth::SynthesisPlan p;
    p.n = 3;
    p.steps = {{synth::Gen::BZZ, t}};
    const auto s = realize(p, 1.0);
    ASSERT_EQ(s.segments.size(), 1u);
    EXPECT_EQ(s.segments[0].ux, 0.0);
    EXPECT_EQ(s.segments[0].uy, 0.0);
    EXPECT_GE(s.segments[0].dt, 0.0);
    const Matrix got = block(3, schedule_unitary(s));
    EXPECT_LT(synth::phase_aligned_error(got, mat_exp(t * synth::algebra::Bzz())), 1e-13);
  }
}

TEST(Realize, ControlStepsMatchAbstractExponentials) {
  using synth::Gen;
  for (Gen g : {Gen::AX, Gen::AY, Gen::AZZ, Gen::BX, Gen::BY}) {
    const int n = synth::gen_spins(g);
    for (double t : {0.4, -0.9}) {
      synth::SynthesisPlan p;
      p.n = n;
      p.steps = {{g, t}};
      const Matrix got = block(n, schedule_unitary(realize(p, 1e6)));
      EXPECT_LT(synth::phase_aligned_error(got, synth::replay(n, p.steps)), 1e-5)
          << synth::gen_name(g) << " t=" << t;
    }
  }
}

TEST(Realize, GhzPlanAtHighAmplitude) {
  const auto plan = synth::state_transfer_plan(3, spin::basis_ket("000"), spin::ghz_state(3));
  const auto out = evolve(realize(plan, 1000.0), spin::basis_ket("000"));
  EXPECT_GE(state_fidelity(out, spin::ghz_state(3)), 0.995);
  EXPECT_GE(state_fidelity(ideal_evolve(plan, spin::basis_ket("000")), spin::ghz_state(3)),
            1.0 - 1e-9);
}

TEST(Realize, InfidelityDecreasesWithAmplitude) {
  const auto plan = synth::state_transfer_plan(2, spin::basis_ket("00"), spin::ghz_state(2));
  double previous = 1.0;
  for (double a : {10.0, 100.0, 1000.0}) {
    const double infid =
        1.0 - state_fidelity(evolve(realize(plan, a), spin::basis_ket("00")), spin::ghz_state(2));
    EXPECT_LT(infid, previous);
    previous = infid;
  }
}

TEST(Fidelity, GateExamples) {
  const Matrix u = mat_exp(kI * 0.3 * tensor::pauli(tensor::PauliLabel::Y));
  EXPECT_NEAR(gate_fidelity(u, u), 1.0, 1e-15);
  EXPECT_NEAR(gate_fidelity(u, std::polar(1.0, 0.8) * u), 1.0, 1e-15);
  EXPECT_NEAR(gate_fidelity(tensor::identity(2), tensor::pauli(tensor::PauliLabel::X)), 0.0, 1e-15);
  EXPECT_THROW(gate_fidelity(tensor::identity(2), 2.0 * tensor::identity(2)), PreconditionError);
}

TEST(Fidelity, StateExamples) {
  EXPECT_NEAR(state_fidelity(spin::w_state(3), spin::w_state(3)), 1.0, 1e-15);
  EXPECT_NEAR(state_fidelity(spin::phi_state(3, 0), spin::phi_state(3, 1)), 0.0, 1e-15);
  EXPECT_NEAR(state_fidelity(spin::ghz_state(2), spin::basis_ket("00")), 0.5, 1e-15);
  EXPECT_THROW(state_fidelity(spin::ghz_state(2), spin::ghz_state(3)), PreconditionError);
}

TEST(ScheduleJson, RoundTrip) {
  std::mt19937_64 rng(101);
  const auto s = random_schedule(3, 5, rng);
  const auto back = PulseSchedule::from_json(io::json::parse(io::dump(s.to_json())));
  ASSERT_EQ(back.segments.size(), 5u);
  for (std::size_t k = 0; k < 5; ++k) {
    EXPECT_EQ(back.segments[k].ux, s.segments[k].ux);
    EXPECT_EQ(back.segments[k].dt, s.segments[k].dt);
  }
  EXPECT_THROW(PulseSchedule::from_json(io::json{{"n", 2}, {"segments", {{{"dt", -1.0}}}}}),
               PreconditionError);
  EXPECT_THROW(PulseSchedule::from_json(io::json{{"segments", io::json::array()}}),
               PreconditionError);
}
