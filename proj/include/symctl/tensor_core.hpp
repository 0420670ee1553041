#pragma once

#include <complex>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace symctl {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr cplx kI{0.0, 1.0};

// Raised when an operation's precondition does not hold (bad dimensions,
// non-unitary input, out-of-range spin counts, ...).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace tol {
// Structural predicates (unitary / Hermitian / skew-Hermitian), max-entry norm.
inline constexpr double kStructural = 1e-12;
}  // namespace tol

namespace tensor {

enum class PauliLabel : char { I = '0', X = 'x', Y = 'y', Z = 'z' };

PauliLabel parse_pauli_label(char c);

struct PauliString {
  std::vector<PauliLabel> labels;

  // Accepts strings over {0,x,y,z}, e.g. "zz0".
  static PauliString parse(std::string_view text);
  std::string str() const;
  int size() const { return static_cast<int>(labels.size()); }
};

// 2x2 Pauli matrix. Note sigma_y = [[0, i], [-i, 0]], the negative of the
// usual physics convention; every identity in this library uses this sign.
Matrix pauli(PauliLabel label);

Matrix identity(int dim);
Matrix kron(const Matrix& a, const Matrix& b);
Matrix pauli_string_matrix(const PauliString& s);

Matrix commutator(const Matrix& a, const Matrix& b);

// Hilbert-Schmidt inner product trace(a^dagger b).
cplx hs_inner(const Matrix& a, const Matrix& b);
double hs_norm(const Matrix& a);
double max_abs(const Matrix& a);

bool is_square(const Matrix& a);
bool is_finite(const Matrix& a);
bool is_unitary(const Matrix& a, double tolerance = tol::kStructural);
bool is_hermitian(const Matrix& a, double tolerance = tol::kStructural);
bool is_skew_hermitian(const Matrix& a, double tolerance = tol::kStructural);

// Matrix exponential. Skew-Hermitian and Hermitian inputs go through the
// spectral path; everything else through Pade scaling-and-squaring.
Matrix mat_exp(const Matrix& a);

struct HermitianEigen {
  Eigen::VectorXd values;  // ascending
  Matrix vectors;          // columns; first nonzero component real positive
};

HermitianEigen hermitian_eig(const Matrix& a);

// exp(t * g) for a fixed skew-Hermitian g, diagonalized once.
class SkewExponential {
 public:
  SkewExponential() = default;
  explicit SkewExponential(const Matrix& generator);

  Matrix operator()(double t) const;
  const Matrix& generator() const { return generator_; }

 private:
  Matrix generator_;
  Eigen::VectorXd rates_;  // generator = V diag(i * rates) V^dagger
  Matrix vectors_;
};

// Haar-distributed unitary: QR of a complex Gaussian matrix with R's diagonal
// phases moved into Q.
Matrix random_unitary(Eigen::Index dim, std::mt19937_64& rng);

void require_same_dim(const Matrix& a, const Matrix& b, const char* what);

}  // namespace tensor
}  // namespace symctl
