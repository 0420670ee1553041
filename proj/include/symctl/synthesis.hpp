#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "symctl/json_io.hpp"
#include "symctl/kernels.hpp"
#include "symctl/spin_model.hpp"
#include "symctl/tensor_core.hpp"
#include "symctl/two_axis.hpp"

namespace symctl::synth {

// Generator tags. A* act on the 3-dim symmetric block of n = 2 (basis
// phi_0..phi_2), B* on the 4-dim block of n = 3 (phi_0..phi_3).
//   AX, AY, AZZ : blocks of -iH_x, -iH_y, -iH_zz
//   BX          : B_x, the negated block of -iH_x
//   BY          : B_y, the block of -iH_y
//   BZZ         : B_zz = diag(i, -i, -i, i)
enum class Gen { AX, AY, AZZ, BX, BY, BZZ };

std::string gen_name(Gen g);
Gen parse_gen(const std::string& name);
int gen_spins(Gen g);
bool is_free_evolution(Gen g);
const Matrix& generator_matrix(Gen g);

struct Step {
  Gen gen;
  double t;

  friend bool operator==(const Step&, const Step&) = default;
};

// exp(G_last t_last) ... exp(G_first t_first) on the symmetric block.
Matrix replay(int n, const std::vector<Step>& steps);

// Merge equal neighbours, reduce durations by the generator period (controls to
// (-pi/2, pi/2], free evolutions to [0, pi)), drop identity steps. Exact up to
// a global sign.
std::vector<Step> normalize_steps(const std::vector<Step>& steps);

// Smallest max-entry |u - e^{i phi} x| over phi, with phi = arg tr(x^dagger u).
double phase_aligned_error(const Matrix& u, const Matrix& x, double* phase = nullptr);

// ---- fixed matrices of the n = 3 construction ----
namespace algebra {
Matrix A1();
Matrix A2();
Matrix A3();
Matrix E();
Matrix B1();
Matrix B2();
Matrix B3();
Matrix F();
Matrix C3();
Matrix Bx();
Matrix By();
Matrix Bzz_tilde();  // block of -iH_zz
Matrix Bzz();
Matrix Bx_hat();  // e^{B_zz pi/2} B_x e^{-B_zz pi/2}, computed
Matrix By_hat();
Matrix Bx_hat_tabulated();
Matrix By_hat_tabulated();
Matrix Z_P();  // diag(i, 1, 1, -i), conjugates A_3 to B_3
}  // namespace algebra

// ---- Cartan decompositions ----

struct CartanFactors {
  Matrix k1, a, k2;
  // su3: a = exp(i diag(d)); aiii: a = exp(s A_3) exp(r C_3)
  Eigen::VectorXd d;
  double s = 0.0, r = 0.0;
};

// x in SU(3): k1, k2 real orthogonal with det 1, a = exp(i diag(d)), tr d = 0.
CartanFactors kak_su3(const Matrix& x);

// x in SU(4): k1, k2 block unitary on rows/cols {1,4} and {2,3}
// (det U_1 det U_2 = 1), a = exp(s A_3) exp(r C_3).
CartanFactors kak_aiii_su4(const Matrix& x);

// Off-block magnitude of k with respect to the {1,4} / {2,3} split.
double k_subgroup_residual(const Matrix& k);

// Group element of span{A_1, A_2, A_3, E} (tag BY) or span{B_2 + F, B_2 - F, ...}
// (tag BX) as a step sequence, exact up to global sign.
std::vector<Step> subalgebra_plan(Gen control, const Matrix& element);

std::vector<Step> k_factor_plan(const Matrix& k);
std::vector<Step> torus_factor_plan(double s, double r);
std::vector<Step> torus_factor_plan(const Matrix& a);

// ---- plans ----

enum class Method { Automatic, Cartan, Compact };
std::string method_name(Method m);
Method parse_method(const std::string& name);

struct SynthesisOptions {
  Method method = Method::Automatic;
  std::uint64_t seed = 7;
  int compact_layers = 8;     // template [X, Y, ZZ] x layers
  int compact_restarts = 64;
};

struct SynthesisPlan {
  int n = 0;
  std::vector<Step> steps;
  Matrix target;
  double phase = 0.0;
  double reconstruction_error = 0.0;
  std::string method;
  std::optional<spin::SpinState> source_state, target_state;

  int factors() const { return static_cast<int>(steps.size()); }
  io::json to_json() const;
  static SynthesisPlan from_json(const io::json& j);
};

// Fills phase and reconstruction_error from a replay of steps.
void finalize(SynthesisPlan& plan);

SynthesisPlan synthesize(int n, const Matrix& target, const SynthesisOptions& options = {});

std::vector<SynthesisPlan> synthesize_batch(int n, const std::vector<Matrix>& targets,
                                            const SynthesisOptions& options,
                                            kernels::Execution exec);

// Any unitary on the symmetric block taking source to dest (up to phase).
Matrix transfer_unitary(const Vector& source, const Vector& dest);

SynthesisPlan state_transfer_plan(int n, const spin::SpinState& source,
                                  const spin::SpinState& dest,
                                  const SynthesisOptions& options = {});

}  // namespace symctl::synth
