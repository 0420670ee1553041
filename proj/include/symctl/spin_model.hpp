#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "symctl/json_io.hpp"
#include "symctl/tensor_core.hpp"

namespace symctl::spin {

inline constexpr int kMaxSpins = 6;

// Collective Ising model H(t) = H_zz + u_x H_x + u_y H_y on n spins.
// Basis is computational with spin 1 as the most significant bit.
Matrix hamiltonian_zz(int n);  // needs n >= 2
Matrix hamiltonian_x(int n);
Matrix hamiltonian_y(int n);

// Cached H_zz, H_x, H_y for 1 <= n <= kMaxSpins (H_zz is zero for n = 1).
struct ModelHamiltonians {
  Matrix zz, x, y;
};
const ModelHamiltonians& model(int n);

// X^n_(kx,ky,kz) = i * sum of all Pauli strings with kx x's, ky y's, kz z's.
struct SymmetricGenerator {
  int n = 1;
  int kx = 0, ky = 0, kz = 0;

  bool valid() const;
  int weight() const { return kx + ky + kz; }
  std::string str() const;  // "X3(1,0,2)"
  friend bool operator==(const SymmetricGenerator&, const SymmetricGenerator&) = default;
};

Matrix symmetric_generator(const SymmetricGenerator& g);

// Every valid triple for n, ordered by (weight, kx desc, ky desc).
std::vector<SymmetricGenerator> all_symmetric_generators(int n);

// Swap of spins j and j+1 (1-based), i.e. 1^{j-1} (x) Pi (x) 1^{n-j-1}.
Matrix transposition(int n, int j);

// max_j || Pi_j a Pi_j - a ||_max
double permutation_residual(const Matrix& a);
bool is_permutation_invariant(const Matrix& a, double tolerance = 1e-10);

// Spin count for a 2^n x 2^n matrix; throws otherwise.
int spins_for_dim(Eigen::Index dim);

class SpinState {
 public:
  SpinState(int n, Vector amplitudes);

  int n() const { return n_; }
  const Vector& amplitudes() const { return amplitudes_; }

 private:
  int n_;
  Vector amplitudes_;
};

SpinState phi_state(int n, int m);  // symmetric Dicke state with m ones
SpinState ghz_state(int n);
SpinState w_state(int n);
SpinState basis_ket(std::string_view bits);  // "010", MSB first

// ghz | w | phi:m | ket:bits
SpinState named_state(int n, std::string_view name);

// Coordinates (<phi_0|psi>, ..., <phi_n|psi>) and the norm of what is left.
Vector symmetric_coordinates(const SpinState& s);
double symmetric_leakage(const SpinState& s);
SpinState from_symmetric_coordinates(int n, const Vector& coords);

// Columns phi_0..phi_n as a 2^n x (n+1) isometry.
Matrix symmetric_isometry(int n);

io::json state_to_json(const SpinState& s);
SpinState state_from_json(const io::json& j);

}  // namespace symctl::spin
