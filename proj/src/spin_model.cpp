#include "symctl/spin_model.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <string>

namespace symctl::spin {

using tensor::PauliLabel;
using tensor::PauliString;

namespace {

void require_spins(int n, int lo, const char* what) {
  if (n < lo || n > kMaxSpins)
    throw PreconditionError(std::string(what) + ": n = " + std::to_string(n) + " outside [" +
                            std::to_string(lo) + ", " + std::to_string(kMaxSpins) + "]");
}

// Sum over placements of `letter` at each single site.
Matrix single_site_sum(int n, PauliLabel letter) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  Matrix out = Matrix::Zero(dim, dim);
  for (int k = 0; k < n; ++k) {
    PauliString s{std::vector<PauliLabel>(n, PauliLabel::I)};
    s.labels[k] = letter;
    out += tensor::pauli_string_matrix(s);
  }
  return out;
}

long binomial(int n, int k) {
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Basis index permutation swapping spins j and j+1 (1-based, spin 1 = MSB).
std::size_t swap_spins(std::size_t index, int n, int j) {
  const int hi = n - j;
  const int lo = n - j - 1;
  const std::size_t bh = (index >> hi) & 1U;
  const std::size_t bl = (index >> lo) & 1U;
  if (bh == bl) return index;
  return index ^ ((std::size_t{1} << hi) | (std::size_t{1} << lo));
}

}  // namespace

Matrix hamiltonian_zz(int n) {
  require_spins(n, 2, "hamiltonian_zz");
  const Eigen::Index dim = Eigen::Index{1} << n;
  Matrix out = Matrix::Zero(dim, dim);
  for (int k = 0; k < n; ++k)
    for (int m = k + 1; m < n; ++m) {
      PauliString s{std::vector<PauliLabel>(n, PauliLabel::I)};
      s.labels[k] = PauliLabel::Z;
      s.labels[m] = PauliLabel::Z;
      out += tensor::pauli_string_matrix(s);
    }
  return out;
}

Matrix hamiltonian_x(int n) {
  require_spins(n, 1, "hamiltonian_x");
  return single_site_sum(n, PauliLabel::X);
}

Matrix hamiltonian_y(int n) {
  require_spins(n, 1, "hamiltonian_y");
  return single_site_sum(n, PauliLabel::Y);
}

const ModelHamiltonians& model(int n) {
  static const auto cache = [] {
    std::array<ModelHamiltonians, kMaxSpins + 1> c;
    for (int k = 1; k <= kMaxSpins; ++k) {
      const Eigen::Index dim = Eigen::Index{1} << k;
      c[k].zz = k >= 2 ? hamiltonian_zz(k) : Matrix::Zero(dim, dim);
      c[k].x = hamiltonian_x(k);
      c[k].y = hamiltonian_y(k);
    }
    return c;
  }();
  require_spins(n, 1, "model");
  return cache[n];
}

bool SymmetricGenerator::valid() const {
  return n >= 1 && n <= kMaxSpins && kx >= 0 && ky >= 0 && kz >= 0 && kx + ky + kz <= n;
}

std::string SymmetricGenerator::str() const {
  return "X" + std::to_string(n) + "(" + std::to_string(kx) + "," + std::to_string(ky) + "," +
         std::to_string(kz) + ")";
}

Matrix symmetric_generator(const SymmetricGenerator& g) {
  if (!g.valid()) throw PreconditionError("symmetric_generator: invalid triple " + g.str());
  std::string letters = std::string(g.n - g.weight(), '0') + std::string(g.kx, 'x') +
                        std::string(g.ky, 'y') + std::string(g.kz, 'z');
  std::sort(letters.begin(), letters.end());
  const Eigen::Index dim = Eigen::Index{1} << g.n;
  Matrix sum = Matrix::Zero(dim, dim);
  do {
    sum += tensor::pauli_string_matrix(PauliString::parse(letters));
  } while (std::next_permutation(letters.begin(), letters.end()));
  return kI * sum;
}

std::vector<SymmetricGenerator> all_symmetric_generators(int n) {
  require_spins(n, 1, "all_symmetric_generators");
  std::vector<SymmetricGenerator> out;
  for (int w = 0; w <= n; ++w)
    for (int kx = w; kx >= 0; --kx)
      for (int ky = w - kx; ky >= 0; --ky) out.push_back({n, kx, ky, w - kx - ky});
  return out;
}

Matrix transposition(int n, int j) {
  require_spins(n, 2, "transposition");
  if (j < 1 || j > n - 1)
    throw PreconditionError("transposition: j = " + std::to_string(j) + " outside [1, n-1]");
  const std::size_t dim = std::size_t{1} << n;
  Matrix p = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t b = 0; b < dim; ++b)
    p(static_cast<Eigen::Index>(swap_spins(b, n, j)), static_cast<Eigen::Index>(b)) = 1.0;
  return p;
}

int spins_for_dim(Eigen::Index dim) {
  if (dim < 2 || !std::has_single_bit(static_cast<std::size_t>(dim)))
    throw PreconditionError("dimension " + std::to_string(dim) + " is not a power of two");
  const int n = std::countr_zero(static_cast<std::size_t>(dim));
  require_spins(n, 1, "spins_for_dim");
  return n;
}

double permutation_residual(const Matrix& a) {
  if (!tensor::is_square(a)) throw PreconditionError("permutation_residual: matrix not square");
  const int n = spins_for_dim(a.rows());
  const auto dim = static_cast<std::size_t>(a.rows());
  double worst = 0.0;
  for (int j = 1; j < n; ++j)
    for (std::size_t r = 0; r < dim; ++r) {
      const auto pr = static_cast<Eigen::Index>(swap_spins(r, n, j));
      for (std::size_t c = 0; c < dim; ++c) {
        const auto pc = static_cast<Eigen::Index>(swap_spins(c, n, j));
        worst = std::max(worst, std::abs(a(pr, pc) - a(static_cast<Eigen::Index>(r),
                                                       static_cast<Eigen::Index>(c))));
      }
    }
  return worst;
}

bool is_permutation_invariant(const Matrix& a, double tolerance) {
  return permutation_residual(a) <= tolerance;
}

SpinState::SpinState(int n, Vector amplitudes) : n_(n), amplitudes_(std::move(amplitudes)) {
  require_spins(n, 1, "SpinState");
  if (amplitudes_.size() != (Eigen::Index{1} << n))
    throw PreconditionError("SpinState: expected " + std::to_string(1 << n) + " amplitudes, got " +
                            std::to_string(amplitudes_.size()));
  if (!amplitudes_.allFinite()) throw PreconditionError("SpinState: non-finite amplitude");
  if (std::abs(amplitudes_.norm() - 1.0) > 1e-12)
    throw PreconditionError("SpinState: norm is not 1 within 1e-12");
}

SpinState phi_state(int n, int m) {
  require_spins(n, 1, "phi_state");
  if (m < 0 || m > n)
    throw PreconditionError("phi_state: m = " + std::to_string(m) + " outside [0, n]");
  const std::size_t dim = std::size_t{1} << n;
  Vector v = Vector::Zero(static_cast<Eigen::Index>(dim));
  const double amp = 1.0 / std::sqrt(static_cast<double>(binomial(n, m)));
  for (std::size_t b = 0; b < dim; ++b)
    if (std::popcount(b) == m) v(static_cast<Eigen::Index>(b)) = amp;
  return {n, std::move(v)};
}

SpinState ghz_state(int n) {
  Vector v = (phi_state(n, 0).amplitudes() + phi_state(n, n).amplitudes()) / std::sqrt(2.0);
  return {n, std::move(v)};
}

SpinState w_state(int n) { return phi_state(n, 1); }

SpinState basis_ket(std::string_view bits) {
  const int n = static_cast<int>(bits.size());
  require_spins(n, 1, "basis_ket");
  std::size_t index = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw PreconditionError("basis_ket: bits must be 0/1");
    index = (index << 1) | static_cast<std::size_t>(c == '1');
  }
  Vector v = Vector::Zero(Eigen::Index{1} << n);
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return {n, std::move(v)};
}

SpinState named_state(int n, std::string_view name) {
  if (name == "ghz") return ghz_state(n);
  if (name == "w") return w_state(n);
  if (name.starts_with("phi:")) {
    const std::string digits(name.substr(4));
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(), ::isdigit))
      throw PreconditionError("bad state name '" + std::string(name) + "'");
    return phi_state(n, std::stoi(digits));
  }
  if (name.starts_with("ket:")) {
    const auto bits = name.substr(4);
    if (static_cast<int>(bits.size()) != n)
      throw PreconditionError("ket '" + std::string(bits) + "' does not have " +
                              std::to_string(n) + " bits");
    return basis_ket(bits);
  }
  throw PreconditionError("unknown state name '" + std::string(name) + "'");
}

Matrix symmetric_isometry(int n) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  Matrix iso(dim, n + 1);
  for (int m = 0; m <= n; ++m) iso.col(m) = phi_state(n, m).amplitudes();
  return iso;
}

Vector symmetric_coordinates(const SpinState& s) {
  return symmetric_isometry(s.n()).adjoint() * s.amplitudes();
}

double symmetric_leakage(const SpinState& s) {
  const Matrix iso = symmetric_isometry(s.n());
  return (s.amplitudes() - iso * (iso.adjoint() * s.amplitudes())).norm();
}

SpinState from_symmetric_coordinates(int n, const Vector& coords) {
  require_spins(n, 1, "from_symmetric_coordinates");
  if (coords.size() != n + 1)
    throw PreconditionError("from_symmetric_coordinates: expected n+1 coordinates");
  return {n, symmetric_isometry(n) * coords};
}

io::json state_to_json(const SpinState& s) {
  return io::json{{"n", s.n()}, {"amplitudes", io::vector_to_json(s.amplitudes())}};
}

SpinState state_from_json(const io::json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("amplitudes"))
    throw PreconditionError("state JSON needs \"n\" and \"amplitudes\"");
  return {j.at("n").get<int>(), io::vector_from_json(j.at("amplitudes"))};
}

}  // namespace symctl::spin
