#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "symctl/spin_model.hpp"

using namespace symctl;
using namespace symctl::spin;
using tensor::max_abs;

TEST(Hamiltonians, TwoSpinIsing) {
  Matrix expect = Matrix::Zero(4, 4);
  expect.diagonal() << 1, -1, -1, 1;
  EXPECT_EQ(max_abs(hamiltonian_zz(2) - expect), 0.0);
}

TEST(Hamiltonians, CollectiveXIsSumOfSites) {
  const Matrix x = tensor::pauli(tensor::PauliLabel::X);
  const Matrix i2 = tensor::identity(2);
  EXPECT_EQ(max_abs(hamiltonian_x(2) - (tensor::kron(x, i2) + tensor::kron(i2, x))), 0.0);
}

TEST(Hamiltonians, ThreeSpinIsingSpectrum) {
  // Three aligned spins give +3, any other configuration -1.
  const Matrix h = hamiltonian_zz(3);
  for (int k = 0; k < 8; ++k) EXPECT_DOUBLE_EQ(h(k, k).real(), (k == 0 || k == 7) ? 3.0 : -1.0);
}

TEST(Hamiltonians, PreconditionsOnSpinCount) {
  EXPECT_THROW(hamiltonian_zz(1), PreconditionError);
  EXPECT_THROW(hamiltonian_x(0), PreconditionError);
  EXPECT_THROW(model(kMaxSpins + 1), PreconditionError);
  EXPECT_EQ(max_abs(model(1).zz), 0.0);
}

TEST(Hamiltonians, AreHermitianAndInvariant) {
  for (int n = 2; n <= 5; ++n) {
    const auto& m = model(n);
    for (const Matrix* h : {&m.zz, &m.x, &m.y}) {
      EXPECT_TRUE(tensor::is_hermitian(*h));
      EXPECT_TRUE(is_permutation_invariant(*h));
    }
  }
}

TEST(SymmetricGenerator, TwoSpinXY) {
  const Matrix g = symmetric_generator({2, 1, 1, 0});
  const Matrix expect = kI * (tensor::pauli_string_matrix(tensor::PauliString::parse("xy")) +
                              tensor::pauli_string_matrix(tensor::PauliString::parse("yx")));
  EXPECT_LT(max_abs(g - expect), 1e-15);
  EXPECT_EQ(SymmetricGenerator({2, 1, 1, 0}).str(), "X2(1,1,0)");
}

TEST(SymmetricGenerator, CountMatchesTetrahedralNumber) {
  // Triples with kx + ky + kz <= n: C(n+3, 3).
  for (int n = 1; n <= 5; ++n) {
    const long expect = (n + 1L) * (n + 2) * (n + 3) / 6;
    EXPECT_EQ(static_cast<long>(all_symmetric_generators(n).size()), expect);
  }
}

TEST(SymmetricGenerator, InvalidTripleThrows) {
  EXPECT_THROW(symmetric_generator({2, 2, 1, 0}), PreconditionError);
}

TEST(SymmetricGenerator, SkewHermitianAndInvariant) {
  for (const auto& g : all_symmetric_generators(3)) {
    const Matrix m = symmetric_generator(g);
    EXPECT_TRUE(tensor::is_skew_hermitian(m));
    EXPECT_TRUE(is_permutation_invariant(m));
  }
}

TEST(Transposition, InvolutionAndAction) {
  const Matrix p = transposition(3, 1);
  EXPECT_LT(max_abs(p * p - tensor::identity(8)), 1e-15);
  // |100> <-> |010>
  EXPECT_EQ(p(2, 4), cplx(1.0));
  EXPECT_THROW(transposition(3, 3), PreconditionError);
}

TEST(Permutation, DetectsNonInvariant) {
  const Matrix z1 = tensor::pauli_string_matrix(tensor::PauliString::parse("z00"));
  EXPECT_FALSE(is_permutation_invariant(z1));
  EXPECT_GT(permutation_residual(z1), 1.0);
}

TEST(States, DickeStates) {
  const auto p = phi_state(3, 1);
  for (int k : {1, 2, 4}) EXPECT_NEAR(p.amplitudes()(k).real(), 1.0 / std::sqrt(3.0), 1e-15);
  EXPECT_LT((w_state(3).amplitudes() - p.amplitudes()).norm(), 1e-15);
  EXPECT_NEAR(std::abs(phi_state(4, 2).amplitudes().dot(phi_state(4, 1).amplitudes())), 0.0, 1e-15);
}

TEST(States, GhzCoordinates) {
  const Vector c = symmetric_coordinates(ghz_state(3));
  EXPECT_NEAR(c(0).real(), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(c(3).real(), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(std::abs(c(1)) + std::abs(c(2)), 0.0, 1e-15);
  EXPECT_NEAR(symmetric_leakage(ghz_state(3)), 0.0, 1e-15);
}

TEST(States, BasisKetIsMsbFirst) {
  const auto s = basis_ket("01");
  EXPECT_EQ(s.amplitudes()(1), cplx(1.0));
  EXPECT_NEAR(symmetric_leakage(s), std::sqrt(0.5), 1e-15);
}

TEST(States, NamedStates) {
  EXPECT_LT((named_state(3, "phi:2").amplitudes() - phi_state(3, 2).amplitudes()).norm(), 1e-15);
  EXPECT_LT((named_state(2, "ket:11").amplitudes() - basis_ket("11").amplitudes()).norm(), 1e-15);
  EXPECT_THROW(named_state(2, "ket:1"), PreconditionError);
  EXPECT_THROW(named_state(2, "bogus"), PreconditionError);
  EXPECT_THROW(named_state(2, "phi:x"), PreconditionError);
}

TEST(States, RejectsUnnormalized) {
  EXPECT_THROW(SpinState(1, Vector::Ones(2)), PreconditionError);
}

TEST(States, SymmetricRoundTrip) {
  Vector c(4);
  c << 0.5, cplx(0, 0.5), -0.5, 0.5;
  const auto s = from_symmetric_coordinates(3, c);
  EXPECT_LT((symmetric_coordinates(s) - c).norm(), 1e-15);
  EXPECT_LT(max_abs(symmetric_isometry(3).adjoint() * symmetric_isometry(3) - tensor::identity(4)),
            1e-15);
}

TEST(States, JsonRoundTrip) {
  const auto s = ghz_state(2);
  const auto back = state_from_json(state_to_json(s));
  EXPECT_EQ(back.n(), 2);
  EXPECT_EQ((back.amplitudes() - s.amplitudes()).norm(), 0.0);
  EXPECT_THROW(state_from_json(io::json{{"n", 2}}), PreconditionError);
}
