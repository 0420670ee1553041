#pragma once

#include <optional>
#include <string>
#include <vector>

#include "symctl/json_io.hpp"
#include "symctl/kernels.hpp"
#include "symctl/spin_model.hpp"
#include "symctl/tensor_core.hpp"

namespace symctl::lie {

namespace tol {
inline constexpr double kClosure = 1e-9;
inline constexpr double kMembership = 1e-8;  // relative to ||a||_HS
inline constexpr double kIdentity = 1e-10;
}  // namespace tol

// Orthonormal basis of a real subspace of u(N) under Re trace(a^dagger b).
class LieBasis {
 public:
  explicit LieBasis(Eigen::Index dim_space) : dim_space_(dim_space) {}

  Eigen::Index dim_space() const { return dim_space_; }
  int size() const { return static_cast<int>(elements_.size()); }
  const std::vector<Matrix>& elements() const { return elements_; }
  const Matrix& operator[](int k) const { return elements_[static_cast<std::size_t>(k)]; }

  // What is left of a after removing its projection on the span
  // (modified Gram-Schmidt, applied twice).
  Matrix residual(const Matrix& a) const;

  // Appends the normalized residual if its HS norm exceeds threshold.
  bool try_insert(const Matrix& a, double threshold = tol::kClosure);

 private:
  Eigen::Index dim_space_;
  std::vector<Matrix> elements_;
};

struct ClosureOptions {
  kernels::Execution execution = kernels::Execution::Parallel;
  int max_passes = 64;
};

struct ClosureStats {
  int passes = 0;
  long brackets = 0;
};

// Smallest bracket-closed real span containing the generators.
LieBasis closure(const std::vector<Matrix>& generators, const ClosureOptions& options = {},
                 ClosureStats* stats = nullptr);

// {iH_zz, iH_x, iH_y} for n spins.
std::vector<Matrix> model_generators(int n);

// C(n+3, n) - 1
long predicted_dimension(int n);

double membership_residual(const LieBasis& basis, const Matrix& a);
bool contains(const LieBasis& basis, const Matrix& a);

struct Theorem1Report {
  int n = 0;
  int generated_dim = 0;
  long predicted_dim = 0;
  double max_invariance_residual = 0.0;
  double max_trace = 0.0;
  double max_skew_residual = 0.0;
  int generators_checked = 0;
  std::vector<std::string> missing;  // triples that failed `contains`
  double seconds = 0.0;
  bool dimension_ok = false;
  bool invariance_ok = false;
  bool membership_ok = false;

  bool passed() const { return dimension_ok && invariance_ok && membership_ok; }
  io::json to_json() const;
};

Theorem1Report verify_theorem1(int n, const ClosureOptions& options = {},
                               const LieBasis* precomputed = nullptr);

// ---- bracket identities over symmetric generators ----

struct Term {
  double coefficient = 0.0;
  spin::SymmetricGenerator generator;
};

struct BracketIdentity {
  std::string name;
  int n = 0;
  std::optional<int> kbar;
  spin::SymmetricGenerator lhs_a, lhs_b;
  std::vector<Term> rhs;

  bool well_formed() const;
  std::string lhs_str() const;
};

std::string terms_str(const std::vector<Term>& terms);

struct IdentityResult {
  BracketIdentity identity;
  std::vector<Term> measured;
  bool holds = false;               // measured == stated within kIdentity
  double coefficient_deviation = 0.0;
  double expansion_residual = 0.0;  // part of the commutator outside the symmetric span
  double consistency_residual = 0.0;

  io::json to_json() const;
};

// Every catalog identity whose triples are valid for n (3 <= n <= 5).
std::vector<BracketIdentity> identity_catalog(int n);

// Expands [lhs_a, lhs_b] in the symmetric-generator basis. Throws
// PreconditionError if the identity is malformed or the commutator leaves the
// symmetric span.
IdentityResult check_bracket_identity(const BracketIdentity& id);

// Real coefficients of a in the (orthogonal) symmetric-generator basis.
std::vector<Term> expand_symmetric(int n, const Matrix& a, double* residual = nullptr);

io::json closure_report(int n, const ClosureOptions& options = {});

}  // namespace symctl::lie
