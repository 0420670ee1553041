#include "symctl/tensor_core.hpp"

#include <algorithm>
#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

namespace symctl::tensor {

namespace {

double scale_of(const Matrix& a) { return std::max(1.0, max_abs(a)); }

}  // namespace

PauliLabel parse_pauli_label(char c) {
  switch (c) {
    case '0':
    case 'I':
    case 'i':
      return PauliLabel::I;
    case 'x':
    case 'X':
      return PauliLabel::X;
    case 'y':
    case 'Y':
      return PauliLabel::Y;
    case 'z':
    case 'Z':
      return PauliLabel::Z;
    default:
      throw PreconditionError(std::string("invalid Pauli label '") + c + "'");
  }
}

PauliString PauliString::parse(std::string_view text) {
  if (text.empty()) throw PreconditionError("empty Pauli string");
  PauliString s;
  s.labels.reserve(text.size());
  for (char c : text) s.labels.push_back(parse_pauli_label(c));
  return s;
}

std::string PauliString::str() const {
  std::string out;
  out.reserve(labels.size());
  for (auto l : labels) out.push_back(static_cast<char>(l));
  return out;
}

Matrix pauli(PauliLabel label) {
  Matrix m = Matrix::Zero(2, 2);
  switch (label) {
    case PauliLabel::I:
      m(0, 0) = 1.0;
      m(1, 1) = 1.0;
      break;
    case PauliLabel::X:
      m(0, 1) = 1.0;
      m(1, 0) = 1.0;
      break;
    case PauliLabel::Y:
      m(0, 1) = kI;
      m(1, 0) = -kI;
      break;
    case PauliLabel::Z:
      m(0, 0) = 1.0;
      m(1, 1) = -1.0;
      break;
  }
  return m;
}

Matrix identity(int dim) { return Matrix::Identity(dim, dim); }

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix pauli_string_matrix(const PauliString& s) {
  if (s.labels.empty()) throw PreconditionError("empty Pauli string");
  Matrix out = pauli(s.labels.front());
  for (std::size_t k = 1; k < s.labels.size(); ++k) out = kron(out, pauli(s.labels[k]));
  return out;
}

Matrix random_unitary(Eigen::Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Matrix z(dim, dim);
  for (Eigen::Index c = 0; c < dim; ++c)
    for (Eigen::Index r = 0; r < dim; ++r) z(r, c) = cplx(normal(rng), normal(rng));
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ();
  for (Eigen::Index j = 0; j < dim; ++j) {
    const cplx d = qr.matrixQR()(j, j);
    q.col(j) *= d / std::abs(d);
  }
  return q;
}

void require_same_dim(const Matrix& a, const Matrix& b, const char* what) {
  if (!is_square(a) || !is_square(b) || a.rows() != b.rows())
    throw PreconditionError(std::string(what) + ": dimension mismatch (" +
                            std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " vs " +
                            std::to_string(b.rows()) + "x" + std::to_string(b.cols()) + ")");
}

Matrix commutator(const Matrix& a, const Matrix& b) {
  require_same_dim(a, b, "commutator");
  return a * b - b * a;
}

cplx hs_inner(const Matrix& a, const Matrix& b) {
  require_same_dim(a, b, "hs_inner");
  // trace(a^dagger b) = sum conj(a_ij) b_ij
  return (a.conjugate().cwiseProduct(b)).sum();
}

double hs_norm(const Matrix& a) { return a.norm(); }

double max_abs(const Matrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

bool is_square(const Matrix& a) { return a.rows() == a.cols() && a.rows() > 0; }

bool is_finite(const Matrix& a) { return a.allFinite(); }

bool is_unitary(const Matrix& a, double tolerance) {
  if (!is_square(a)) return false;
  return max_abs(a.adjoint() * a - Matrix::Identity(a.rows(), a.cols())) <= tolerance;
}

bool is_hermitian(const Matrix& a, double tolerance) {
  if (!is_square(a)) return false;
  return max_abs(a - a.adjoint()) <= tolerance * scale_of(a);
}

bool is_skew_hermitian(const Matrix& a, double tolerance) {
  if (!is_square(a)) return false;
  return max_abs(a + a.adjoint()) <= tolerance * scale_of(a);
}

HermitianEigen hermitian_eig(const Matrix& a) {
  if (!is_hermitian(a)) throw PreconditionError("hermitian_eig: input is not Hermitian");
  // Symmetrize so the solver sees an exactly Hermitian matrix.
  const Matrix h = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  if (solver.info() != Eigen::Success) throw std::runtime_error("hermitian_eig: solver failed");
  HermitianEigen out{solver.eigenvalues(), solver.eigenvectors()};
  for (Eigen::Index c = 0; c < out.vectors.cols(); ++c) {
    auto col = out.vectors.col(c);
    for (Eigen::Index r = 0; r < col.size(); ++r) {
      if (std::abs(col(r)) > 1e-9) {
        col *= std::conj(col(r)) / std::abs(col(r));
        col(r) = std::abs(col(r));
        break;
      }
    }
  }
  return out;
}

Matrix mat_exp(const Matrix& a) {
  if (!is_square(a)) throw PreconditionError("mat_exp: matrix is not square");
  if (!is_finite(a)) throw PreconditionError("mat_exp: non-finite entries");
  if (is_skew_hermitian(a)) return SkewExponential(a)(1.0);
  if (is_hermitian(a)) {
    const auto eig = hermitian_eig(a);
    const Vector d = eig.values.array().exp().cast<cplx>();
    return eig.vectors * d.asDiagonal() * eig.vectors.adjoint();
  }
  return a.exp();
}

SkewExponential::SkewExponential(const Matrix& generator) : generator_(generator) {
  if (!is_skew_hermitian(generator))
    throw PreconditionError("SkewExponential: generator is not skew-Hermitian");
  const auto eig = hermitian_eig(-kI * generator);
  rates_ = eig.values;
  vectors_ = eig.vectors;
}

Matrix SkewExponential::operator()(double t) const {
  Vector phases(rates_.size());
  for (Eigen::Index k = 0; k < rates_.size(); ++k) phases(k) = std::polar(1.0, rates_(k) * t);
  return vectors_ * phases.asDiagonal() * vectors_.adjoint();
}

}  // namespace symctl::tensor
