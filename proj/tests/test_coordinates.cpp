#include <gtest/gtest.h>

#include <random>

#include "symctl/coordinates.hpp"
#include "symctl/lie_engine.hpp"

using namespace symctl;
using namespace symctl::coords;
using tensor::max_abs;

namespace {

// Real dimension of the span of the given complex matrices.
int real_rank(const std::vector<Matrix>& ms) {
  if (ms.empty()) return 0;
  const Eigen::Index entries = ms.front().size();
  Eigen::MatrixXd a(2 * entries, static_cast<Eigen::Index>(ms.size()));
  for (std::size_t k = 0; k < ms.size(); ++k)
    for (Eigen::Index q = 0; q < entries; ++q) {
      a(q, static_cast<Eigen::Index>(k)) = ms[k](q).real();
      a(entries + q, static_cast<Eigen::Index>(k)) = ms[k](q).imag();
    }
  Eigen::FullPivHouseholderQR<Eigen::MatrixXd> qr(a);
  qr.setThreshold(1e-9);
  return static_cast<int>(qr.rank());
}

Matrix random_combination(const lie::LieBasis& b, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix out = Matrix::Zero(b.dim_space(), b.dim_space());
  for (const auto& e : b.elements()) out += g(rng) * e;
  return out;
}

}  // namespace

TEST(BasisT, DiagonalizesSwap) {
  const auto t = basis_T();
  EXPECT_TRUE(tensor::is_unitary(t.matrix));
  Matrix expect = Matrix::Zero(4, 4);
  expect.diagonal() << -1, 1, 1, 1;
  EXPECT_LT(max_abs(conjugate(t, spin::transposition(2, 1)) - expect), 1e-15);
  EXPECT_EQ(t.block_sizes, (std::vector<int>{1, 3}));
}

TEST(BasisT, MapsPhiOneToThirdUnitVector) {
  const Vector v = basis_T().matrix * spin::phi_state(2, 1).amplitudes();
  EXPECT_LT((v - Vector::Unit(4, 2)).norm(), 1e-15);
}

TEST(BasisTHat, UnitaryAndRealRotations) {
  const Matrix th = basis_T_hat();
  EXPECT_TRUE(tensor::is_unitary(th));
  const Matrix ax = th * conjugate(basis_T(), -kI * spin::model(2).x) * th.adjoint();
  EXPECT_LT(max_abs(ax - tabulated::A_x_hat()), 1e-15);
  EXPECT_LT(ax.imag().cwiseAbs().maxCoeff(), 1e-15);
}

TEST(BasisM, UnitaryAndPhiZeroIsFifthUnitVector) {
  const auto m = basis_M();
  EXPECT_TRUE(tensor::is_unitary(m.matrix));
  const Vector v = m.matrix * spin::phi_state(3, 0).amplitudes();
  EXPECT_LT((v - Vector::Unit(8, 4)).norm(), 1e-15);
  EXPECT_EQ(m.block_sizes, (std::vector<int>{2, 2, 4}));
}

TEST(BasisM, IsingIsDiagonal) {
  Matrix expect = Matrix::Zero(8, 8);
  expect.diagonal() << -1, -1, -1, -1, 3, -1, -1, 3;
  EXPECT_LT(max_abs(conjugate(basis_M(), -kI * spin::model(3).zz) + kI * expect), 1e-14);
}

TEST(Conjugate, IdentityAndDimensionCheck) {
  EXPECT_LT(max_abs(conjugate(basis_T(), tensor::identity(4)) - tensor::identity(4)), 1e-15);
  EXPECT_THROW(conjugate(basis_T(), tensor::identity(8)), PreconditionError);
}

TEST(Tabulated, EverythingButThePi23DisplayMatches) {
  const auto rep = compare_tabulated();
  for (const auto& c : rep.checks) {
    if (c.label == "M Pi_23 M^dagger") continue;
    EXPECT_TRUE(c.ok()) << c.label << " residual " << c.residual;
  }
}

TEST(Tabulated, Pi23DisplayHasWrongSignInChiBlock) {
  const Matrix computed = conjugate(basis_M(), spin::transposition(3, 2));
  const Matrix printed = tabulated::MPiM();
  EXPECT_TRUE(tensor::is_unitary(computed));
  EXPECT_FALSE(tensor::is_unitary(printed));
  Matrix diff = computed - printed;
  EXPECT_NEAR(diff(2, 2).real(), -1.0, 1e-15);
  EXPECT_NEAR(diff(3, 3).real(), -1.0, 1e-15);
  diff(2, 2) = diff(3, 3) = 0.0;
  EXPECT_LT(max_abs(diff), 1e-15);
}

TEST(BlockSplit, ScalarMultipleOfIdentity) {
  const auto f = block_split(basis_T(), kI * tensor::identity(4));
  ASSERT_EQ(f.blocks.size(), 2u);
  EXPECT_LT(max_abs(f.blocks[0] - kI * tensor::identity(1)), 1e-15);
  EXPECT_LT(max_abs(f.blocks[1] - kI * tensor::identity(3)), 1e-15);
}

TEST(BlockSplit, CollectiveXAnnihilatesSinglet) {
  const auto f = block_split(basis_T(), kI * spin::model(2).x);
  EXPECT_LT(std::abs(f.blocks[0](0, 0)), 1e-15);
}

TEST(BlockSplit, RejectsNonInvariant) {
  const Matrix local = kI * tensor::pauli_string_matrix(tensor::PauliString::parse("x0"));
  EXPECT_THROW(block_split(basis_T(), local), PreconditionError);
  EXPECT_GT(block_split(basis_T(), local, false).residual, 0.1);
}

TEST(BlockSplit, ThreeSpinClosureHasDuplicatedBlocks) {
  const auto b = lie::closure(lie::model_generators(3));
  std::mt19937_64 rng(4);
  for (int k = 0; k < 5; ++k) {
    const auto f = block_split(basis_M(), random_combination(b, rng));
    EXPECT_LE(f.residual, 1e-10);
    EXPECT_LE(f.duplicate_residual, 1e-10);
  }
}

TEST(BlockSplit, BlocksSpanExpectedDimensions) {
  {
    std::vector<Matrix> blocks;
    const auto basis = lie::closure(lie::model_generators(2));
    for (const auto& e : basis.elements()) {
      const auto f = block_split(basis_T(), e);
      Matrix packed = Matrix::Zero(4, 4);
      packed.block(0, 0, 1, 1) = f.blocks[0];
      packed.block(1, 1, 3, 3) = f.blocks[1];
      blocks.push_back(packed);
    }
    EXPECT_EQ(real_rank(blocks), 9);
  }
  {
    std::vector<Matrix> blocks;
    const auto basis = lie::closure(lie::model_generators(3));
    for (const auto& e : basis.elements()) {
      const auto f = block_split(basis_M(), e);
      Matrix packed = Matrix::Zero(6, 6);
      packed.block(0, 0, 2, 2) = f.blocks[0];
      packed.block(2, 2, 4, 4) = f.blocks[2];
      blocks.push_back(packed);
    }
    EXPECT_EQ(real_rank(blocks), 19);
  }
}

TEST(PhiBasisActions, AllHold) {
  const auto rep = verify_appendix_b();
  EXPECT_EQ(rep.checks.size(), 24u);
  EXPECT_TRUE(rep.passed()) << io::dump(rep.to_json());
}

TEST(PhiBasisActions, SampleActionByHand) {
  // H_x phi_1 = sqrt3 phi_0 + 2 phi_2
  const Vector lhs = spin::model(3).x * spin::phi_state(3, 1).amplitudes();
  const Vector rhs = std::sqrt(3.0) * spin::phi_state(3, 0).amplitudes() +
                     2.0 * spin::phi_state(3, 2).amplitudes();
  EXPECT_LT((lhs - rhs).norm(), 1e-14);
}

TEST(Pi23, RelationsHold) { EXPECT_TRUE(verify_pi23_relations().passed()); }

TEST(SubspaceSelfCheck, NumericEigenspacesAgree) {
  for (int n : {2, 3}) EXPECT_TRUE(subspace_self_check(n).passed()) << "n=" << n;
}

TEST(States, AntisymmetricStatesAreOrthogonalToSymmetric) {
  for (int j : {0, 1}) {
    EXPECT_LT(spin::symmetric_coordinates(psi_state(j)).norm(), 1e-15);
    EXPECT_LT(spin::symmetric_coordinates(chi_state(j)).norm(), 1e-15);
  }
  EXPECT_THROW(psi_state(2), PreconditionError);
}
