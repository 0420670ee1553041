#pragma once

#include <optional>
#include <string>
#include <vector>

#include "symctl/json_io.hpp"
#include "symctl/spin_model.hpp"
#include "symctl/synthesis.hpp"
#include "symctl/tensor_core.hpp"

namespace symctl::sim {

struct PulseSegment {
  double ux = 0.0;
  double uy = 0.0;
  double dt = 0.0;  // >= 0
};

struct PulseSchedule {
  int n = 0;
  std::vector<PulseSegment> segments;

  double total_time() const;
  io::json to_json() const;
  static PulseSchedule from_json(const io::json& j);
};

// H_zz + ux H_x + uy H_y
Matrix segment_hamiltonian(int n, const PulseSegment& s);

// Product of exp(-i H_j dt_j), first segment applied first.
Matrix schedule_unitary(const PulseSchedule& schedule);
Matrix evolve(const PulseSchedule& schedule, const Matrix& initial);
spin::SpinState evolve(const PulseSchedule& schedule, const spin::SpinState& initial);

// Square-pulse realization. Control steps become segments of amplitude
// `amplitude` (sign carries the direction); free-evolution steps become
// zero-control segments with durations rescaled to the H_zz clock.
PulseSchedule realize(const synth::SynthesisPlan& plan, double amplitude);

// Exact exponentials of the abstract plan applied to a symmetric state.
spin::SpinState ideal_evolve(const synth::SynthesisPlan& plan, const spin::SpinState& initial);

double gate_fidelity(const Matrix& u, const Matrix& v);  // |tr(u^dagger v)| / d
double state_fidelity(const spin::SpinState& a, const spin::SpinState& b);

struct SimulationReport {
  std::string mode;  // "ideal" | "physical"
  std::optional<spin::SpinState> final_state;
  std::optional<Matrix> final_unitary;
  std::optional<double> fidelity;
  std::optional<double> reconstruction_error;  // operator mode with a plan target
  std::string target_ref;

  io::json to_json() const;
};

}  // namespace symctl::sim
