#pragma once

#include <string>
#include <vector>

#include "symctl/json_io.hpp"
#include "symctl/spin_model.hpp"
#include "symctl/tensor_core.hpp"

namespace symctl::coords {

// Unitary change of basis whose rows are the adapted basis vectors (conjugated).
struct BasisChange {
  int n = 0;
  Matrix matrix;
  std::vector<int> block_sizes;
};

// n = 2: rows psi_0, phi_0, phi_1, phi_2; blocks [1, 3].
BasisChange basis_T();
// Extra unitary acting on T coordinates that turns the control generators into
// real rotation generators.
Matrix basis_T_hat();
// n = 3: rows psi_0, psi_1, chi_0, chi_1, phi_0..phi_3; blocks [2, 2, 4].
BasisChange basis_M();

// b.matrix * a * b.matrix^dagger
Matrix conjugate(const BasisChange& b, const Matrix& a);

struct BlockForm {
  std::vector<Matrix> blocks;
  double residual = 0.0;            // max off-block magnitude
  double duplicate_residual = 0.0;  // n = 3 only: max |W1 - W2|
};

// Throws PreconditionError if the off-block residual (or, for n = 3, the
// duplicate-block mismatch) exceeds 1e-10, unless strict is false.
BlockForm block_split(const BasisChange& b, const Matrix& a, bool strict = true);

// Antisymmetric n = 3 states.
spin::SpinState psi_state(int j);  // j in {0, 1}
spin::SpinState chi_state(int j);

// Tabulated reference matrices, entered by hand.
namespace tabulated {
Matrix A_x();  // T(-iH_x)T^dagger, n = 2
Matrix A_y();
Matrix A_zz();
Matrix A_x_hat();  // T_hat A T_hat^dagger
Matrix A_y_hat();
Matrix A_zz_hat();
Matrix MHxM();  // M(-iH_x)M^dagger, n = 3
Matrix MHyM();
Matrix MHzzM();
Matrix MPiM();  // M Pi_23 M^dagger
}  // namespace tabulated

struct Check {
  std::string label;
  double residual = 0.0;
  double tolerance = 0.0;
  std::string note;

  bool ok() const { return residual <= tolerance; }
  io::json to_json() const;
};

struct CheckReport {
  std::vector<Check> checks;

  bool passed() const;
  io::json to_json() const;
};

// Computed conjugations against the tabulated matrices. Sign-only
// mismatches are named in Check::note.
CheckReport compare_tabulated();

// The 24 actions of H_x, H_y, H_zz on psi/chi/phi for n = 3, tolerance 1e-12.
CheckReport verify_appendix_b();

// Pi_23 on psi_j / chi_j, tolerance 1e-12.
CheckReport verify_pi23_relations();

// Derives the invariant subspaces numerically from the transposition
// eigenspaces and compares projectors with the hard-coded columns; also checks
// that each subspace is invariant under H_zz, H_x, H_y.
CheckReport subspace_self_check(int n);

}  // namespace symctl::coords
