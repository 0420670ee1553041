#include "symctl/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace symctl::sim {

namespace {

using std::numbers::pi;

void check_segment(const PulseSegment& s) {
  if (!std::isfinite(s.ux) || !std::isfinite(s.uy) || !std::isfinite(s.dt))
    throw PreconditionError("pulse segment: non-finite value");
  if (s.dt < 0) throw PreconditionError("pulse segment: negative duration");
}

double positive_mod(double t, double period) {
  double r = std::fmod(t, period);
  if (r < 0) r += period;
  return r;
}

}  // namespace

double PulseSchedule::total_time() const {
  double t = 0.0;
  for (const auto& s : segments) t += s.dt;
  return t;
}

io::json PulseSchedule::to_json() const {
  io::json segs = io::json::array();
  for (const auto& s : segments) segs.push_back({{"ux", s.ux}, {"uy", s.uy}, {"dt", s.dt}});
  return {{"n", n}, {"segments", segs}};
}

PulseSchedule PulseSchedule::from_json(const io::json& j) {
  PulseSchedule p;
  try {
    p.n = j.at("n").get<int>();
    for (const auto& s : j.at("segments")) {
      PulseSegment seg{s.value("ux", 0.0), s.value("uy", 0.0), s.at("dt").get<double>()};
      check_segment(seg);
      p.segments.push_back(seg);
    }
  } catch (const io::json::exception& e) {
    throw PreconditionError(std::string("schedule: malformed JSON: ") + e.what());
  }
  if (p.n < 1 || p.n > spin::kMaxSpins) throw PreconditionError("schedule: n out of range");
  return p;
}

Matrix segment_hamiltonian(int n, const PulseSegment& s) {
  const auto& m = spin::model(n);
  return m.zz + s.ux * m.x + s.uy * m.y;
}

Matrix schedule_unitary(const PulseSchedule& schedule) {
  const auto& m = spin::model(schedule.n);
  const Eigen::Index d = m.zz.rows();
  Matrix u = Matrix::Identity(d, d);
  for (const auto& s : schedule.segments) {
    check_segment(s);
    if (s.dt == 0.0) continue;
    u = tensor::mat_exp(-kI * s.dt * segment_hamiltonian(schedule.n, s)) * u;
  }
  return u;
}

Matrix evolve(const PulseSchedule& schedule, const Matrix& initial) {
  const Eigen::Index d = Eigen::Index{1} << schedule.n;
  if (initial.rows() != d) throw PreconditionError("evolve: dimension mismatch");
  return schedule_unitary(schedule) * initial;
}

spin::SpinState evolve(const PulseSchedule& schedule, const spin::SpinState& initial) {
  if (initial.n() != schedule.n) throw PreconditionError("evolve: spin count mismatch");
  Vector v = initial.amplitudes();
  for (const auto& s : schedule.segments) {
    check_segment(s);
    if (s.dt == 0.0) continue;
    v = tensor::mat_exp(-kI * s.dt * segment_hamiltonian(schedule.n, s)) * v;
  }
  return spin::SpinState(schedule.n, v / v.norm());
}

PulseSchedule realize(const synth::SynthesisPlan& plan, double amplitude) {
  using synth::Gen;
  if (!(amplitude > 0) || !std::isfinite(amplitude))
    throw PreconditionError("realize: amplitude must be positive");
  PulseSchedule out;
  out.n = plan.n;
  for (const auto& st : plan.steps) {
    if (synth::gen_spins(st.gen) != plan.n) throw PreconditionError("realize: tag does not match n");
    const double sgn = st.t < 0 ? -1.0 : 1.0;
    const double dt = std::abs(st.t) / amplitude;
    switch (st.gen) {
      case Gen::BX:  // B_x is the block of +iH_x
        out.segments.push_back({-sgn * amplitude, 0.0, dt});
        break;
      case Gen::AX:
        out.segments.push_back({sgn * amplitude, 0.0, dt});
        break;
      case Gen::AY:
      case Gen::BY:
        out.segments.push_back({0.0, sgn * amplitude, dt});
        break;
      case Gen::AZZ:  // exp(-iH_zz pi) = -1 for two spins
        out.segments.push_back({0.0, 0.0, positive_mod(st.t, pi)});
        break;
      case Gen::BZZ:  // B_zz = -(B~_zz + i)/2; exp(-iH_zz pi/2) = i for three spins
        out.segments.push_back({0.0, 0.0, positive_mod(-st.t / 2, pi / 2)});
        break;
    }
    if (out.segments.back().dt == 0.0) out.segments.pop_back();
  }
  return out;
}

spin::SpinState ideal_evolve(const synth::SynthesisPlan& plan, const spin::SpinState& initial) {
  if (initial.n() != plan.n) throw PreconditionError("ideal_evolve: spin count mismatch");
  if (spin::symmetric_leakage(initial) > 1e-10)
    throw PreconditionError("ideal_evolve: initial state is not permutation invariant");
  const Vector c = synth::replay(plan.n, plan.steps) * spin::symmetric_coordinates(initial);
  return spin::from_symmetric_coordinates(plan.n, c / c.norm());
}

double gate_fidelity(const Matrix& u, const Matrix& v) {
  tensor::require_same_dim(u, v, "gate_fidelity");
  if (!tensor::is_unitary(u, 1e-8) || !tensor::is_unitary(v, 1e-8))
    throw PreconditionError("gate_fidelity: inputs must be unitary");
  return std::min(1.0, std::abs((u.adjoint() * v).trace()) / static_cast<double>(u.rows()));
}

double state_fidelity(const spin::SpinState& a, const spin::SpinState& b) {
  if (a.n() != b.n()) throw PreconditionError("state_fidelity: spin count mismatch");
  return std::min(1.0, std::norm(a.amplitudes().dot(b.amplitudes())));
}

io::json SimulationReport::to_json() const {
  io::json j{{"mode", mode}, {"target_ref", target_ref}};
  if (final_state) j["final_state"] = spin::state_to_json(*final_state);
  if (final_unitary) j["final_unitary"] = io::matrix_to_json(*final_unitary);
  j["fidelity"] = fidelity ? io::json(*fidelity) : io::json(nullptr);
  if (reconstruction_error) j["reconstruction_error"] = *reconstruction_error;
  return j;
}

}  // namespace symctl::sim
