#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "symctl/acceptance.hpp"
#include "symctl/coordinates.hpp"
#include "symctl/json_io.hpp"
#include "symctl/lie_engine.hpp"
#include "symctl/simulator.hpp"
#include "symctl/spin_model.hpp"
#include "symctl/synthesis.hpp"

namespace {

using namespace symctl;
using io::json;

constexpr int kValidationExit = 1;
constexpr int kUsageExit = 2;

void emit_error(const std::string& kind, const std::string& message) {
  std::cerr << io::dump(json{{"error", {{"kind", kind}, {"message", message}}}}) << "\n";
}

void emit(const json& j) { std::cout << io::dump(j, 2) << "\n"; }

kernels::Execution execution(bool serial) {
  return serial ? kernels::Execution::Serial : kernels::Execution::Parallel;
}

// NAME (ghz | w | phi:m | ket:bits) or a state JSON file.
spin::SpinState resolve_state(int n, const std::string& ref) {
  if (std::filesystem::is_regular_file(ref)) {
    auto s = spin::state_from_json(io::read_json_file(ref));
    if (s.n() != n) throw PreconditionError("state file " + ref + " has the wrong spin count");
    return s;
  }
  return spin::named_state(n, ref);
}

json cmd_model(int n) {
  const auto& m = spin::model(n);
  return {{"n", n},
          {"H_zz", io::matrix_to_json(m.zz)},
          {"H_x", io::matrix_to_json(m.x)},
          {"H_y", io::matrix_to_json(m.y)}};
}

json cmd_invariance(int n, const std::string& file) {
  const Matrix a = io::matrix_from_json(io::read_json_file(file));
  if (a.rows() != (Eigen::Index{1} << n) || a.cols() != a.rows())
    throw PreconditionError("matrix dimension does not match 2^n");
  const double res = spin::permutation_residual(a);
  return {{"n", n}, {"invariant", res <= 1e-10}, {"residual", res}, {"tolerance", 1e-10}};
}

json cmd_basis(int n) {
  const auto& m = spin::model(n);
  json j{{"n", n}};
  auto conj = [&](const coords::BasisChange& b) {
    return json{{"H_x", io::matrix_to_json(coords::conjugate(b, -kI * m.x))},
                {"H_y", io::matrix_to_json(coords::conjugate(b, -kI * m.y))},
                {"H_zz", io::matrix_to_json(coords::conjugate(b, -kI * m.zz))}};
  };
  if (n == 2) {
    const auto t = coords::basis_T();
    const Matrix th = coords::basis_T_hat();
    j["T"] = io::matrix_to_json(t.matrix);
    j["T_hat"] = io::matrix_to_json(th);
    j["block_sizes"] = t.block_sizes;
    j["conjugated"] = conj(t);
    json hat;
    for (const auto& [name, h] : {std::pair{"H_x", &m.x}, {"H_y", &m.y}, {"H_zz", &m.zz}})
      hat[name] = io::matrix_to_json(th * coords::conjugate(t, -kI * *h) * th.adjoint());
    j["hat_conjugated"] = hat;
  } else {
    const auto b = coords::basis_M();
    j["M"] = io::matrix_to_json(b.matrix);
    j["block_sizes"] = b.block_sizes;
    j["conjugated"] = conj(b);
    j["conjugated"]["Pi_23"] = io::matrix_to_json(coords::conjugate(b, spin::transposition(3, 2)));
  }
  j["note"] = "conjugated entries are b (-iH) b^dagger; Pi_23 is b Pi_23 b^dagger";
  return j;
}

json cmd_identities(int n) {
  json arr = json::array();
  int holding = 0;
  for (const auto& id : lie::identity_catalog(n)) {
    const auto r = lie::check_bracket_identity(id);
    holding += r.holds ? 1 : 0;
    arr.push_back(r.to_json());
  }
  return {{"n", n}, {"evaluated", arr.size()}, {"holding", holding}, {"results", arr}};
}

json cmd_simulate(const std::string& file, const std::optional<std::string>& initial,
                  const std::optional<std::string>& target, std::optional<double> amplitude) {
  const json in = io::read_json_file(file);
  std::optional<synth::SynthesisPlan> plan;
  sim::PulseSchedule schedule;
  sim::SimulationReport rep;
  if (in.contains("steps")) {
    plan = synth::SynthesisPlan::from_json(in);
    schedule.n = plan->n;
    if (amplitude) schedule = sim::realize(*plan, *amplitude);
  } else if (in.contains("segments")) {
    if (amplitude) throw PreconditionError("--amplitude applies to plans, not schedules");
    schedule = sim::PulseSchedule::from_json(in);
  } else {
    throw PreconditionError("input is neither a plan nor a schedule");
  }
  const int n = schedule.n;
  const bool ideal = plan && !amplitude;
  rep.mode = ideal ? "ideal" : "physical";

  std::optional<spin::SpinState> start, goal;
  if (initial)
    start = resolve_state(n, *initial);
  else if (plan && plan->source_state)
    start = plan->source_state;
  if (target) {
    goal = resolve_state(n, *target);
    rep.target_ref = *target;
  } else if (plan && plan->target_state) {
    goal = plan->target_state;
    rep.target_ref = "plan.target_state";
  }

  if (start) {
    rep.final_state = ideal ? sim::ideal_evolve(*plan, *start) : sim::evolve(schedule, *start);
    if (goal) rep.fidelity = sim::state_fidelity(*rep.final_state, *goal);
  } else {
    Matrix block;
    if (ideal) {
      block = synth::replay(n, plan->steps);
      rep.final_unitary = block;
    } else {
      const Matrix full = sim::schedule_unitary(schedule);
      rep.final_unitary = full;
      const Matrix v = spin::symmetric_isometry(n);
      block = v.adjoint() * full * v;
    }
    if (plan && plan->target.size() > 0) {
      rep.target_ref = "plan.target";
      rep.fidelity = sim::gate_fidelity(block, plan->target);
      rep.reconstruction_error = synth::phase_aligned_error(block, plan->target);
    }
  }
  json j = rep.to_json();
  j["n"] = n;
  if (amplitude) j["amplitude"] = *amplitude;
  j["segments"] = schedule.segments.size();
  j["total_time"] = schedule.total_time();
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Collective-control synthesis and verification for symmetric spin networks"};
  app.require_subcommand(1, 1);
  app.set_help_all_flag("--help-all");

  int n = 0;
  bool serial = false;
  std::string matrix_file, target_file, out_file, from_ref, to_ref, input_file;
  std::string method = "automatic";
  std::uint64_t seed = 7;
  std::optional<std::string> initial, target_state;
  std::optional<double> amplitude;
  int criterion = 0;

  auto* model = app.add_subcommand("model", "dump H_zz, H_x, H_y");
  model->add_option("--n", n, "spin count")->required()->check(CLI::Range(2, spin::kMaxSpins));

  auto* closure = app.add_subcommand("closure", "Lie closure and predicted dimension");
  closure->add_option("--n", n)->required()->check(CLI::Range(2, spin::kMaxSpins));
  closure->add_flag("--serial", serial, "use the serial bracket kernel");

  auto* inv = app.add_subcommand("invariance", "permutation-invariance check of a matrix");
  inv->add_option("--n", n)->required()->check(CLI::Range(1, spin::kMaxSpins));
  inv->add_option("--matrix", matrix_file)->required();

  auto* basis = app.add_subcommand("basis", "adapted bases and conjugated generators");
  basis->add_option("--n", n)->required()->check(CLI::Range(2, 3));

  auto* ids = app.add_subcommand("identities", "bracket-identity catalog");
  ids->add_option("--n", n)->required()->check(CLI::Range(3, 5));

  auto* syn = app.add_subcommand("synth", "synthesize a symmetric-block unitary");
  syn->add_option("--n", n)->required()->check(CLI::Range(2, 3));
  syn->add_option("--target", target_file)->required();
  syn->add_option("--out", out_file);
  syn->add_option("--method", method)->check(CLI::IsMember({"automatic", "cartan", "compact"}));
  syn->add_option("--seed", seed);

  auto* tr = app.add_subcommand("transfer", "state-to-state plan");
  tr->add_option("--n", n)->required()->check(CLI::Range(2, 3));
  tr->add_option("--from", from_ref)->required();
  tr->add_option("--to", to_ref)->required();
  tr->add_option("--out", out_file);
  tr->add_option("--method", method)->check(CLI::IsMember({"automatic", "cartan", "compact"}));
  tr->add_option("--seed", seed);

  auto* simc = app.add_subcommand("simulate", "run a plan or a pulse schedule");
  simc->add_option("--schedule", input_file, "plan or schedule JSON")->required();
  simc->add_option("--initial", initial);
  simc->add_option("--target", target_state);
  simc->add_option("--amplitude", amplitude)->check(CLI::PositiveNumber);

  auto* all = app.add_subcommand("verify-all", "acceptance suite");
  all->add_flag("--serial", serial);
  all->add_option("--seed", seed);
  all->add_option("--criterion", criterion)->check(CLI::Range(1, acceptance::kCriteria));
  bool all_seed_given = false;
  all->callback([&] { all_seed_given = all->count("--seed") > 0; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    emit_error("usage", e.what());
    return kUsageExit;
  }

  try {
    synth::SynthesisOptions so;
    so.method = synth::parse_method(method);
    so.seed = seed;
    if (*model) {
      emit(cmd_model(n));
    } else if (*closure) {
      lie::ClosureOptions co;
      co.execution = execution(serial);
      json j = lie::closure_report(n, co);
      emit(j);
      return j["generated_dim"].get<long>() == j["predicted_dim"].get<long>() ? 0 : kValidationExit;
    } else if (*inv) {
      emit(cmd_invariance(n, matrix_file));
    } else if (*basis) {
      emit(cmd_basis(n));
    } else if (*ids) {
      emit(cmd_identities(n));
    } else if (*syn) {
      const Matrix t = io::matrix_from_json(io::read_json_file(target_file));
      const auto plan = synth::synthesize(n, t, so);
      if (!out_file.empty()) io::write_json_file(out_file, plan.to_json());
      emit(plan.to_json());
    } else if (*tr) {
      const auto plan =
          synth::state_transfer_plan(n, resolve_state(n, from_ref), resolve_state(n, to_ref), so);
      if (!out_file.empty()) io::write_json_file(out_file, plan.to_json());
      emit(plan.to_json());
    } else if (*simc) {
      emit(cmd_simulate(input_file, initial, target_state, amplitude));
    } else if (*all) {
      acceptance::Options ao;
      ao.execution = execution(serial);
      if (all_seed_given) ao.seed = seed;
      std::vector<acceptance::Result> results;
      if (criterion > 0)
        results.push_back(acceptance::run(criterion, ao));
      else
        results = acceptance::run_all(ao);
      json arr = json::array();
      bool ok = true;
      for (const auto& r : results) {
        arr.push_back(r.to_json());
        ok = ok && r.passed;
      }
      emit({{"passed", ok}, {"criteria", arr}});
      return ok ? 0 : kValidationExit;
    }
  } catch (const PreconditionError& e) {
    emit_error("validation", e.what());
    return kValidationExit;
  } catch (const std::exception& e) {
    emit_error("runtime", e.what());
    return kValidationExit;
  }
  return 0;
}
