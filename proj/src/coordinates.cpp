#include "symctl/coordinates.hpp"

#include <algorithm>
#include <cmath>

namespace symctl::coords {

namespace {

const double kA = 1.0 / std::sqrt(2.0);
const double kS3 = std::sqrt(3.0);
const double kS6 = std::sqrt(6.0);

Matrix from_rows(int dim, std::initializer_list<cplx> entries) {
  Matrix m(dim, dim);
  auto it = entries.begin();
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) m(r, c) = *it++;
  return m;
}

// M^dagger: columns psi_0, psi_1, chi_0, chi_1, phi_0, phi_1, phi_2, phi_3.
Matrix m_dagger() {
  const double r23 = std::sqrt(2.0) / kS3, r3 = 1.0 / kS3, r6 = 1.0 / kS6;
  return from_rows(8, {0,   0,   0,    0,    1, 0,  0,  0,  //
                       0,   0,   r23,  0,    0, r3, 0,  0,  //
                       -kA, 0,   -r6,  0,    0, r3, 0,  0,  //
                       0,   -kA, 0,    r6,   0, 0,  r3, 0,  //
                       kA,  0,   -r6,  0,    0, r3, 0,  0,  //
                       0,   kA,  0,    r6,   0, 0,  r3, 0,  //
                       0,   0,   0,    -r23, 0, 0,  r3, 0,  //
                       0,   0,   0,    0,    0, 0,  0,  1});
}

Matrix projector(const Matrix& columns) { return columns * columns.adjoint(); }

// Sign-only mismatch: |computed| == |expected| entrywise but some entry differs.
bool sign_only(const Matrix& computed, const Matrix& expected) {
  return tensor::max_abs(computed.cwiseAbs() - expected.cwiseAbs()) <= 1e-12 &&
         tensor::max_abs(computed - expected) > 1e-12;
}

Check compare(std::string label, const Matrix& computed, const Matrix& expected) {
  Check c{std::move(label), tensor::max_abs(computed - expected), 1e-12, ""};
  if (sign_only(computed, expected)) {
    std::string where;
    for (Eigen::Index r = 0; r < computed.rows(); ++r)
      for (Eigen::Index col = 0; col < computed.cols(); ++col)
        if (std::abs(computed(r, col) - expected(r, col)) > 1e-12)
          where += " (" + std::to_string(r + 1) + "," + std::to_string(col + 1) + ")";
    c.note = "sign deviation at" + where;
  }
  return c;
}

}  // namespace

BasisChange basis_T() {
  const Matrix t_dagger = from_rows(4, {0, 1, 0, 0,    //
                                        -kA, 0, kA, 0,  //
                                        kA, 0, kA, 0,   //
                                        0, 0, 0, 1});
  return {2, t_dagger.adjoint(), {1, 3}};
}

Matrix basis_T_hat() {
  const cplx mi{0.0, -kA};
  return from_rows(4, {1, 0, 0, 0,   //
                       0, mi, 0, mi,  //
                       0, 0, 1, 0,    //
                       0, kA, 0, -kA});
}

BasisChange basis_M() { return {3, m_dagger().adjoint(), {2, 2, 4}}; }

Matrix conjugate(const BasisChange& b, const Matrix& a) {
  tensor::require_same_dim(b.matrix, a, "conjugate");
  return b.matrix * a * b.matrix.adjoint();
}

BlockForm block_split(const BasisChange& b, const Matrix& a, bool strict) {
  const Matrix c = conjugate(b, a);
  BlockForm out;
  Matrix off = c;
  Eigen::Index at = 0;
  for (int size : b.block_sizes) {
    out.blocks.push_back(c.block(at, at, size, size));
    off.block(at, at, size, size).setZero();
    at += size;
  }
  out.residual = tensor::max_abs(off);
  if (b.n == 3) out.duplicate_residual = tensor::max_abs(out.blocks[0] - out.blocks[1]);
  if (strict && out.residual > 1e-10)
    throw PreconditionError("block_split: off-block residual " + std::to_string(out.residual) +
                            " (input not permutation invariant)");
  if (strict && out.duplicate_residual > 1e-10)
    throw PreconditionError("block_split: duplicated blocks differ by " +
                            std::to_string(out.duplicate_residual));
  return out;
}

spin::SpinState psi_state(int j) {
  if (j != 0 && j != 1) throw PreconditionError("psi_state: j must be 0 or 1");
  return {3, m_dagger().col(j)};
}

spin::SpinState chi_state(int j) {
  if (j != 0 && j != 1) throw PreconditionError("chi_state: j must be 0 or 1");
  return {3, m_dagger().col(2 + j)};
}

namespace tabulated {

Matrix A_x() {
  const cplx v{0.0, -std::sqrt(2.0)};
  return from_rows(4, {0, 0, 0, 0, 0, 0, v, 0, 0, v, 0, v, 0, 0, v, 0});
}

Matrix A_y() {
  const double v = std::sqrt(2.0);
  return from_rows(4, {0, 0, 0, 0, 0, 0, v, 0, 0, -v, 0, v, 0, 0, -v, 0});
}

Matrix A_zz() {
  Matrix m = Matrix::Zero(4, 4);
  m.diagonal() << kI, -kI, kI, -kI;
  return m;
}

Matrix A_x_hat() { return from_rows(4, {0, 0, 0, 0, 0, 0, -2, 0, 0, 2, 0, 0, 0, 0, 0, 0}); }

Matrix A_y_hat() { return from_rows(4, {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, -2, 0, 0, 2, 0}); }

Matrix A_zz_hat() { return A_zz(); }

Matrix MHxM() {
  Matrix m = Matrix::Zero(8, 8);
  m(0, 1) = m(1, 0) = m(2, 3) = m(3, 2) = 1.0;
  m(4, 5) = m(5, 4) = m(6, 7) = m(7, 6) = kS3;
  m(5, 6) = m(6, 5) = 2.0;
  return -kI * m;
}

Matrix MHyM() {
  Matrix m = Matrix::Zero(8, 8);
  m(0, 1) = m(2, 3) = 1.0;
  m(1, 0) = m(3, 2) = -1.0;
  m(4, 5) = m(6, 7) = kS3;
  m(5, 4) = m(7, 6) = -kS3;
  m(5, 6) = 2.0;
  m(6, 5) = -2.0;
  return m;
}

Matrix MHzzM() {
  Matrix m = Matrix::Zero(8, 8);
  m.diagonal() << -1, -1, -1, -1, 3, -1, -1, 3;
  return -kI * m;
}

Matrix MPiM() {
  Matrix m = Matrix::Identity(8, 8);
  const Matrix i2 = Matrix::Identity(2, 2);
  m.block(0, 0, 2, 2) = 0.5 * i2;
  m.block(0, 2, 2, 2) = -0.5 * kS3 * i2;
  m.block(2, 0, 2, 2) = -0.5 * kS3 * i2;
  m.block(2, 2, 2, 2) = 0.5 * i2;
  return m;
}

}  // namespace tabulated

io::json Check::to_json() const {
  io::json j{{"label", label}, {"residual", residual}, {"tolerance", tolerance}, {"ok", ok()}};
  if (!note.empty()) j["note"] = note;
  return j;
}

bool CheckReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.ok(); });
}

io::json CheckReport::to_json() const {
  io::json arr = io::json::array();
  for (const auto& c : checks) arr.push_back(c.to_json());
  return io::json{{"passed", passed()}, {"checks", std::move(arr)}};
}

CheckReport compare_tabulated() {
  CheckReport r;
  const auto& m2 = spin::model(2);
  const auto t = basis_T();
  const Matrix th = basis_T_hat();
  const Matrix ax = conjugate(t, -kI * m2.x), ay = conjugate(t, -kI * m2.y),
               azz = conjugate(t, -kI * m2.zz);
  r.checks.push_back(compare("T(-iH_x)T^dagger", ax, tabulated::A_x()));
  r.checks.push_back(compare("T(-iH_y)T^dagger", ay, tabulated::A_y()));
  r.checks.push_back(compare("T(-iH_zz)T^dagger", azz, tabulated::A_zz()));
  r.checks.push_back(compare("T_hat A_x T_hat^dagger", th * ax * th.adjoint(), tabulated::A_x_hat()));
  r.checks.push_back(compare("T_hat A_y T_hat^dagger", th * ay * th.adjoint(), tabulated::A_y_hat()));
  r.checks.push_back(
      compare("T_hat A_zz T_hat^dagger", th * azz * th.adjoint(), tabulated::A_zz_hat()));

  const auto& m3 = spin::model(3);
  const auto m = basis_M();
  r.checks.push_back(compare("M(-iH_x)M^dagger", conjugate(m, -kI * m3.x), tabulated::MHxM()));
  r.checks.push_back(compare("M(-iH_y)M^dagger", conjugate(m, -kI * m3.y), tabulated::MHyM()));
  r.checks.push_back(compare("M(-iH_zz)M^dagger", conjugate(m, -kI * m3.zz), tabulated::MHzzM()));
  Check pi = compare("M Pi_23 M^dagger", conjugate(m, spin::transposition(3, 2)),
                     tabulated::MPiM());
  pi.tolerance = 0.0;  // exact match required
  r.checks.push_back(pi);
  return r;
}

CheckReport verify_appendix_b() {
  // Basis order: psi_0, psi_1, chi_0, chi_1, phi_0, phi_1, phi_2, phi_3.
  static const char* names[] = {"psi_0", "psi_1", "chi_0", "chi_1",
                                "phi_0", "phi_1", "phi_2", "phi_3"};
  struct Action {
    char op;
    int input;
    std::vector<std::pair<cplx, int>> output;
  };
  const cplx i = kI;
  const std::vector<Action> table = {
      {'x', 0, {{1, 1}}},
      {'x', 1, {{1, 0}}},
      {'x', 2, {{1, 3}}},
      {'x', 3, {{1, 2}}},
      {'x', 4, {{kS3, 5}}},
      {'x', 5, {{kS3, 4}, {2, 6}}},
      {'x', 6, {{kS3, 7}, {2, 5}}},
      {'x', 7, {{kS3, 6}}},
      {'y', 0, {{-i, 1}}},
      {'y', 1, {{i, 0}}},
      {'y', 2, {{-i, 3}}},
      {'y', 3, {{i, 2}}},
      {'y', 4, {{-i * kS3, 5}}},
      {'y', 5, {{i * kS3, 4}, {-2.0 * i, 6}}},
      {'y', 6, {{-i * kS3, 7}, {2.0 * i, 5}}},
      {'y', 7, {{i * kS3, 6}}},
      {'z', 0, {{-1, 0}}},
      {'z', 1, {{-1, 1}}},
      {'z', 2, {{-1, 2}}},
      {'z', 3, {{-1, 3}}},
      {'z', 4, {{3, 4}}},
      {'z', 5, {{-1, 5}}},
      {'z', 6, {{-1, 6}}},
      {'z', 7, {{3, 7}}},
  };
  const Matrix basis = m_dagger();
  const auto& m3 = spin::model(3);
  CheckReport r;
  for (const auto& a : table) {
    const Matrix& h = a.op == 'x' ? m3.x : a.op == 'y' ? m3.y : m3.zz;
    Vector expected = Vector::Zero(8);
    for (const auto& [coef, k] : a.output) expected += coef * basis.col(k);
    const Vector got = h * basis.col(a.input);
    const std::string label = std::string("H_") + (a.op == 'z' ? "zz" : std::string(1, a.op)) +
                              "|" + names[a.input] + ">";
    r.checks.push_back({label, (got - expected).cwiseAbs().maxCoeff(), 1e-12, ""});
  }
  return r;
}

CheckReport verify_pi23_relations() {
  const Matrix p = spin::transposition(3, 2);
  const double h = 0.5, s = 0.5 * kS3;
  CheckReport r;
  for (int j = 0; j < 2; ++j) {
    const Vector psi = psi_state(j).amplitudes(), chi = chi_state(j).amplitudes();
    const Vector e_psi = h * psi - s * chi;
    const Vector e_chi = -h * chi - s * psi;
    r.checks.push_back({"Pi_23|psi_" + std::to_string(j) + ">",
                        (p * psi - e_psi).cwiseAbs().maxCoeff(), 1e-12, ""});
    r.checks.push_back({"Pi_23|chi_" + std::to_string(j) + ">",
                        (p * chi - e_chi).cwiseAbs().maxCoeff(), 1e-12, ""});
  }
  return r;
}

CheckReport subspace_self_check(int n) {
  if (n != 2 && n != 3) throw PreconditionError("subspace_self_check: n must be 2 or 3");
  const Eigen::Index dim = Eigen::Index{1} << n;
  const Matrix id = Matrix::Identity(dim, dim);

  // Symmetric subspace: common +1 eigenspace of all adjacent transpositions.
  Matrix defect = Matrix::Zero(dim, dim);
  for (int j = 1; j < n; ++j) defect += id - spin::transposition(n, j);
  const auto eig = tensor::hermitian_eig(defect);
  Matrix sym_cols(dim, 0);
  for (Eigen::Index k = 0; k < eig.values.size(); ++k)
    if (std::abs(eig.values(k)) < 1e-9) {
      sym_cols.conservativeResize(Eigen::NoChange, sym_cols.cols() + 1);
      sym_cols.col(sym_cols.cols() - 1) = eig.vectors.col(k);
    }
  const Matrix p_sym = projector(sym_cols);
  const Matrix p_anti = 0.5 * (id - spin::transposition(n, 1));

  const Matrix basis = n == 2 ? basis_T().matrix.adjoint() : m_dagger();
  std::vector<std::pair<std::string, Matrix>> spaces;  // name, hard-coded projector
  CheckReport r;
  if (n == 2) {
    spaces = {{"S_psi", projector(basis.leftCols(1))}, {"S_phi", projector(basis.rightCols(3))}};
    r.checks.push_back({"S_psi vs (1 - Pi)/2", tensor::max_abs(spaces[0].second - p_anti), 1e-12, ""});
    r.checks.push_back({"S_phi vs symmetric eigenspace", tensor::max_abs(spaces[1].second - p_sym), 1e-10, ""});
  } else {
    spaces = {{"S_psi", projector(basis.leftCols(2))},
              {"S_chi", projector(basis.middleCols(2, 2))},
              {"S_phi", projector(basis.rightCols(4))}};
    r.checks.push_back({"S_psi vs (1 - Pi_12)/2", tensor::max_abs(spaces[0].second - p_anti), 1e-12, ""});
    r.checks.push_back({"S_chi vs remaining complement",
                        tensor::max_abs(spaces[1].second - (id - p_anti - p_sym)), 1e-10, ""});
    r.checks.push_back({"S_phi vs symmetric eigenspace", tensor::max_abs(spaces[2].second - p_sym), 1e-10, ""});
  }
  const auto& m = spin::model(n);
  for (const auto& [name, p] : spaces)
    for (const auto& [hname, h] : {std::pair{"H_zz", &m.zz}, {"H_x", &m.x}, {"H_y", &m.y}})
      r.checks.push_back({name + " invariant under " + hname,
                          tensor::max_abs(p * *h - *h * p), 1e-12, ""});
  return r;
}

}  // namespace symctl::coords
