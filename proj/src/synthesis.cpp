#include "symctl/synthesis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>
#include <numbers>
#include <random>
#include <stdexcept>

#include "symctl/coordinates.hpp"

namespace symctl::synth {

namespace {

using std::numbers::pi;
const double kS3 = std::sqrt(3.0);

Matrix from_rows(int d, std::initializer_list<cplx> v) {
  Matrix m(d, d);
  auto it = v.begin();
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) m(r, c) = *it++;
  return m;
}

Matrix symmetric_block(int n, const Matrix& full) {
  const Matrix v = spin::symmetric_isometry(n);
  return v.adjoint() * full * v;
}

// Reduce to (-pi/2, pi/2] for controls and [0, pi) for free evolution.
double reduce(Gen g, double t) {
  if (is_free_evolution(g)) {
    double r = std::fmod(t, pi);
    if (r < 0) r += pi;
    return r;
  }
  double r = std::remainder(t, pi);
  if (r <= -pi / 2) r += pi;
  return r;
}

bool negligible(Gen g, double t) {
  constexpr double eps = 1e-13;
  if (is_free_evolution(g)) return t < eps || pi - t < eps;
  return std::abs(t) < eps;
}

void append(std::vector<Step>& out, const std::vector<Step>& more) {
  out.insert(out.end(), more.begin(), more.end());
}

Matrix remove_det_phase(const Matrix& x) {
  const cplx det = x.determinant();
  return x * std::polar(1.0, -std::arg(det) / static_cast<double>(x.rows()));
}

void require_unitary(const Matrix& x, Eigen::Index dim, const char* what) {
  if (x.rows() != dim || x.cols() != dim)
    throw PreconditionError(std::string(what) + ": expected a " + std::to_string(dim) + "x" +
                            std::to_string(dim) + " matrix");
  if (!tensor::is_finite(x) || !tensor::is_unitary(x, 1e-10))
    throw PreconditionError(std::string(what) + ": input is not unitary");
}

void require_special(const Matrix& x, const char* what) {
  if (std::abs(x.determinant() - 1.0) > 1e-10)
    throw PreconditionError(std::string(what) + ": determinant must be 1");
}

// ---- n = 2 ----

// Lower 3x3 block of T_hat: maps phi coordinates to coordinates in which AX
// and AY generate real rotations about z and x.
const Matrix& hat_map() {
  static const Matrix s = coords::basis_T_hat().block(1, 1, 3, 3);
  return s;
}

// O = Rz(p1) Rx(th) Rz(p2); exp(AX t) = Rz(2t), exp(AY t) = Rx(2t) in hat coordinates.
std::vector<Step> euler_plan(const Eigen::Matrix3d& o) {
  const double p1 = std::atan2(o(0, 2), -o(1, 2));
  Eigen::Matrix3d rz;
  rz << std::cos(p1), std::sin(p1), 0, -std::sin(p1), std::cos(p1), 0, 0, 0, 1;
  const Eigen::Matrix3d r = rz * o;
  const double th = std::atan2(-r(1, 2), r(2, 2));
  const double p2 = std::atan2(-r(0, 1), r(0, 0));
  return {{Gen::AX, p2 / 2}, {Gen::AY, th / 2}, {Gen::AX, p1 / 2}};
}

std::vector<Step> diagonal_plan(const Eigen::VectorXd& d) {
  const double c = (d(0) + d(1)) / 2;
  const double a = (c - d(2) - (d(0) - d(1)) / 2) / 2;
  const double b = (c - d(2) + (d(0) - d(1)) / 2) / 2;
  return {{Gen::AX, -pi / 4}, {Gen::AZZ, b}, {Gen::AX, pi / 4}, {Gen::AZZ, a}};
}

std::vector<Step> cartan_plan_n2(const Matrix& target) {
  const Matrix& s = hat_map();
  const CartanFactors f = kak_su3(s * remove_det_phase(target) * s.adjoint());
  std::vector<Step> steps = euler_plan(f.k2.real());
  append(steps, diagonal_plan(f.d));
  append(steps, euler_plan(f.k1.real()));
  return steps;
}

// ---- n = 3 subalgebra realizer ----

struct Realizer {
  Gen control;
  Matrix w;  // rows: eigenvectors of -iG with eigenvalues (1, -3, 3, -1)
};

// Steps for exp(G_hat t) = exp(B_zz pi/2) exp(G t) exp(-B_zz pi/2).
std::vector<Step> hat_steps(Gen control, double t) {
  return {{Gen::BZZ, 3 * pi / 2}, {control, t}, {Gen::BZZ, pi / 2}};
}

Realizer make_realizer(Gen control) {
  const Matrix g = generator_matrix(control);
  const Matrix gh = control == Gen::BY ? algebra::By_hat() : algebra::Bx_hat();
  const auto eig = tensor::hermitian_eig(-kI * g);
  const std::array<double, 4> order{1, -3, 3, -1};
  Matrix v(4, 4);
  for (int k = 0; k < 4; ++k) {
    int best = 0;
    for (int j = 1; j < 4; ++j)
      if (std::abs(eig.values(j) - order[k]) < std::abs(eig.values(best) - order[k])) best = j;
    v.col(k) = eig.vectors.col(best);
  }
  Realizer r{control, v.adjoint()};
  for (auto [row, col] : {std::pair{1, 0}, std::pair{3, 2}}) {
    const cplx e = (r.w * gh * r.w.adjoint())(col, row);
    r.w.row(row) *= std::polar(1.0, std::arg(e));
  }
  Matrix expect = Matrix::Zero(4, 4);
  const Matrix& z2 = axis_matrix(Axis::Z2);
  expect.block(0, 0, 2, 2) = z2 - kI * Matrix::Identity(2, 2);
  expect.block(2, 2, 2, 2) = z2 + kI * Matrix::Identity(2, 2);
  if (tensor::max_abs(r.w * gh * r.w.adjoint() - expect) > 1e-10)
    throw std::logic_error("subalgebra realizer: unexpected eigenbasis form");
  return r;
}

const Realizer& realizer(Gen control) {
  static const Realizer ry = make_realizer(Gen::BY);
  static const Realizer rx = make_realizer(Gen::BX);
  return control == Gen::BY ? ry : rx;
}

const std::vector<AxisStep>& flip_sequence() {
  static const std::vector<AxisStep> f = su2_two_axis(from_rows(2, {0, 1, -1, 0}));
  return f;
}

std::vector<Step> axis_to_steps(Gen control, const std::vector<AxisStep>& seq, double sign) {
  std::vector<Step> out;
  for (const auto& a : seq) {
    if (a.axis == Axis::Z1)
      out.push_back({control, sign * a.t});
    else
      append(out, hat_steps(control, sign * a.t));
  }
  return out;
}

// ---- AIII helpers ----

constexpr std::array<int, 4> kPerm{0, 3, 2, 1};

Matrix permute(const Matrix& x) {
  Matrix y(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) y(i, j) = x(kPerm[i], kPerm[j]);
  return y;
}

Matrix unpermute(const Matrix& y) {
  Matrix x(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) x(kPerm[i], kPerm[j]) = y(i, j);
  return x;
}

Matrix torus_matrix(double s, double r) {
  return tensor::mat_exp(s * algebra::A3()) * tensor::mat_exp(r * algebra::C3());
}

// S in SU(2) as exp(Jy a) exp(Jx b) exp(Jy c), Jy = [[0,1],[-1,0]], Jx = [[0,i],[i,0]].
std::array<double, 3> yxy_angles(const Matrix& s) {
  const double q0 = s(0, 0).real(), q3 = s(0, 0).imag();
  const double q2 = s(0, 1).real(), q1 = s(0, 1).imag();
  const double b = std::atan2(std::hypot(q1, q3), std::hypot(q0, q2));
  const double sum = std::atan2(q2, q0), diff = std::atan2(q3, q1);
  return {(sum + diff) / 2, b, (sum - diff) / 2};
}

Matrix pair_block(const Matrix& k, int i, int j) {
  Matrix b(2, 2);
  b << k(i, i), k(i, j), k(j, i), k(j, j);
  return b;
}

// exp(a_p X_p + a_q X_q) with X_p on indices {0,3}, X_q on {1,2}.
Matrix pair_exp(const Matrix& jp, double ap, double aq) {
  Matrix m = Matrix::Identity(4, 4);
  const Matrix ep = tensor::mat_exp(ap * jp), eq = tensor::mat_exp(aq * jp);
  m(0, 0) = ep(0, 0), m(0, 3) = ep(0, 1), m(3, 0) = ep(1, 0), m(3, 3) = ep(1, 1);
  m(1, 1) = eq(0, 0), m(1, 2) = eq(0, 1), m(2, 1) = eq(1, 0), m(2, 2) = eq(1, 1);
  return m;
}

// ---- compact n = 3 method ----

std::optional<std::vector<Step>> compact_plan(const Matrix& target, const SynthesisOptions& o) {
  const std::array<Gen, 3> cycle{Gen::BX, Gen::BY, Gen::BZZ};
  ExpProductProblem p;
  std::vector<Gen> tags;
  for (int l = 0; l < o.compact_layers; ++l)
    for (Gen g : cycle) {
      tags.push_back(g);
      p.generators.push_back(generator_matrix(g));
    }
  p.target = target;
  p.free_phase = true;
  std::mt19937_64 rng(o.seed);
  std::uniform_real_distribution<double> unif(-pi / 2, pi / 2);
  for (int attempt = 0; attempt < o.compact_restarts; ++attempt) {
    std::vector<double> x0(tags.size() + 1);
    for (auto& v : x0) v = unif(rng);
    const auto fit = fit_exp_product(p, x0, 1e-13, 300);
    if (fit.error > 1e-11) continue;
    std::vector<Step> steps;
    for (std::size_t k = 0; k < tags.size(); ++k) steps.push_back({tags[k], fit.durations[k]});
    return steps;
  }
  return std::nullopt;
}

std::vector<Step> cartan_plan_n3(const Matrix& target) {
  const CartanFactors f = kak_aiii_su4(remove_det_phase(target));
  std::vector<Step> steps = k_factor_plan(f.k2);
  append(steps, torus_factor_plan(f.s, f.r));
  append(steps, k_factor_plan(f.k1));
  return steps;
}

}  // namespace

// ---- tags ----

std::string gen_name(Gen g) {
  switch (g) {
    case Gen::AX: return "AX";
    case Gen::AY: return "AY";
    case Gen::AZZ: return "AZZ";
    case Gen::BX: return "BX";
    case Gen::BY: return "BY";
    case Gen::BZZ: return "BZZ";
  }
  return "?";
}

Gen parse_gen(const std::string& name) {
  for (Gen g : {Gen::AX, Gen::AY, Gen::AZZ, Gen::BX, Gen::BY, Gen::BZZ})
    if (gen_name(g) == name) return g;
  throw PreconditionError("unknown generator tag '" + name + "'");
}

int gen_spins(Gen g) { return (g == Gen::AX || g == Gen::AY || g == Gen::AZZ) ? 2 : 3; }

bool is_free_evolution(Gen g) { return g == Gen::AZZ || g == Gen::BZZ; }

const Matrix& generator_matrix(Gen g) {
  static const std::array<Matrix, 6> mats = [] {
    const auto& m2 = spin::model(2);
    const auto& m3 = spin::model(3);
    return std::array<Matrix, 6>{
        symmetric_block(2, -kI * m2.x), symmetric_block(2, -kI * m2.y),
        symmetric_block(2, -kI * m2.zz), -symmetric_block(3, -kI * m3.x),
        symmetric_block(3, -kI * m3.y), algebra::Bzz()};
  }();
  return mats[static_cast<int>(g)];
}

Matrix replay(int n, const std::vector<Step>& steps) {
  static const std::array<tensor::SkewExponential, 6> exps = [] {
    std::array<tensor::SkewExponential, 6> e;
    for (int k = 0; k < 6; ++k) e[k] = tensor::SkewExponential(generator_matrix(static_cast<Gen>(k)));
    return e;
  }();
  if (n != 2 && n != 3) throw PreconditionError("replay: n must be 2 or 3");
  Matrix u = Matrix::Identity(n + 1, n + 1);
  for (const auto& s : steps) {
    if (gen_spins(s.gen) != n)
      throw PreconditionError("replay: generator " + gen_name(s.gen) + " does not act on n = " +
                              std::to_string(n));
    if (!std::isfinite(s.t)) throw PreconditionError("replay: non-finite duration");
    u = exps[static_cast<int>(s.gen)](s.t) * u;
  }
  return u;
}

std::vector<Step> normalize_steps(const std::vector<Step>& steps) {
  std::vector<Step> out;
  for (const auto& s : steps) {
    const double t = reduce(s.gen, s.t);
    if (!out.empty() && out.back().gen == s.gen) {
      out.back().t = reduce(s.gen, out.back().t + t);
      if (negligible(s.gen, out.back().t)) out.pop_back();
      continue;
    }
    if (!negligible(s.gen, t)) out.push_back({s.gen, t});
  }
  return out;
}

double phase_aligned_error(const Matrix& u, const Matrix& x, double* phase) {
  tensor::require_same_dim(u, x, "phase_aligned_error");
  const cplx tr = (x.adjoint() * u).trace();
  const double phi = std::abs(tr) > 0 ? std::arg(tr) : 0.0;
  if (phase) *phase = phi;
  return tensor::max_abs(u - std::polar(1.0, phi) * x);
}

// ---- algebra ----

namespace algebra {

Matrix A1() { return 0.5 * from_rows(4, {0, 1, 0, 0, -1, 0, 0, 0, 0, 0, 0, 1, 0, 0, -1, 0}); }
Matrix A2() { return 0.5 * from_rows(4, {0, 0, 0, 1, 0, 0, 1, 0, 0, -1, 0, 0, -1, 0, 0, 0}); }
Matrix A3() { return 0.5 * from_rows(4, {0, 0, 1, 0, 0, 0, 0, -1, -1, 0, 0, 0, 0, 1, 0, 0}); }
Matrix E() { return 0.5 * from_rows(4, {0, 0, 0, 1, 0, 0, -1, 0, 0, 1, 0, 0, -1, 0, 0, 0}); }
Matrix B1() { return A1(); }
Matrix B2() { return 0.5 * kI * from_rows(4, {0, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 0}); }
Matrix B3() { return 0.5 * kI * from_rows(4, {0, 0, 1, 0, 0, 0, 0, -1, 1, 0, 0, 0, 0, -1, 0, 0}); }
Matrix F() { return 0.5 * kI * from_rows(4, {0, 0, 0, 1, 0, 0, -1, 0, 0, -1, 0, 0, 1, 0, 0, 0}); }
Matrix C3() { return from_rows(4, {0, 0, 1, 0, 0, 0, 0, 1, -1, 0, 0, 0, 0, -1, 0, 0}); }

Matrix Bx() {
  return kI * from_rows(4, {0, kS3, 0, 0, kS3, 0, 2, 0, 0, 2, 0, kS3, 0, 0, kS3, 0});
}

Matrix By() {
  return from_rows(4, {0, kS3, 0, 0, -kS3, 0, 2, 0, 0, -2, 0, kS3, 0, 0, -kS3, 0});
}

Matrix Bzz_tilde() {
  Matrix m = Matrix::Zero(4, 4);
  m.diagonal() << -3.0 * kI, kI, kI, -3.0 * kI;
  return m;
}

Matrix Bzz() {
  Matrix m = Matrix::Zero(4, 4);
  m.diagonal() << kI, -kI, -kI, kI;
  return m;
}

Matrix Bx_hat() {
  const Matrix e = tensor::mat_exp(Bzz() * (pi / 2));
  return e * Bx() * e.adjoint();
}

Matrix By_hat() {
  const Matrix e = tensor::mat_exp(Bzz() * (pi / 2));
  return e * By() * e.adjoint();
}

Matrix Bx_hat_tabulated() {
  return kI * from_rows(4, {0, -kS3, 0, 0, -kS3, 0, 2, 0, 0, 2, 0, -kS3, 0, 0, -kS3, 0});
}

Matrix By_hat_tabulated() {
  return from_rows(4, {0, -kS3, 0, 0, kS3, 0, 2, 0, 0, -2, 0, -kS3, 0, 0, kS3, 0});
}

Matrix Z_P() {
  Matrix m = Matrix::Zero(4, 4);
  m.diagonal() << kI, 1.0, 1.0, -kI;
  return m;
}

}  // namespace algebra

// ---- Cartan ----

CartanFactors kak_su3(const Matrix& x) {
  require_unitary(x, 3, "kak_su3");
  require_special(x, "kak_su3");
  const Matrix y = x * x.transpose();
  Eigen::Matrix3d o1;
  bool found = false;
  for (double c : {0.7548776662, 1.3247179572, -0.5698402910, 2.2055694304}) {
    const Eigen::Matrix3d m = y.real() + c * y.imag();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(m);
    o1 = es.eigenvectors();
    Matrix od = o1.transpose().cast<cplx>() * y * o1.cast<cplx>();
    od.diagonal().setZero();
    if (tensor::max_abs(od) < 1e-9) {
      found = true;
      break;
    }
  }
  if (!found) throw std::runtime_error("kak_su3: failed to diagonalize x x^T");
  if (o1.determinant() < 0) o1.col(0) *= -1.0;

  const Matrix o1c = o1.cast<cplx>();
  const Matrix yd = o1c.transpose() * y * o1c;
  Eigen::VectorXd d(3);
  for (int k = 0; k < 3; ++k) d(k) = std::arg(yd(k, k)) / 2;
  auto phases = [&] {
    Matrix p = Matrix::Zero(3, 3);
    for (int k = 0; k < 3; ++k) p(k, k) = std::polar(1.0, d(k));
    return p;
  };
  Matrix o2 = phases().adjoint() * o1c.transpose() * x;
  Eigen::Matrix3d o2r = o2.real();
  if (o2r.determinant() < 0) {
    o2r.row(0) *= -1.0;
    d(0) += pi;
  }
  d(0) -= d.sum();

  CartanFactors f;
  f.k1 = o1c;
  f.a = phases();
  f.k2 = o2r.cast<cplx>();
  f.d = d;
  if (tensor::max_abs(f.k1 * f.a * f.k2 - x) > 1e-10)
    throw std::runtime_error("kak_su3: reconstruction failed");
  return f;
}

double k_subgroup_residual(const Matrix& k) {
  if (k.rows() != 4 || k.cols() != 4) throw PreconditionError("k_subgroup_residual: need 4x4");
  double r = 0.0;
  for (int i : {0, 3})
    for (int j : {1, 2}) r = std::max({r, std::abs(k(i, j)), std::abs(k(j, i))});
  return r;
}

CartanFactors kak_aiii_su4(const Matrix& x) {
  require_unitary(x, 4, "kak_aiii_su4");
  require_special(x, "kak_aiii_su4");
  const Matrix xq = permute(x);
  const Matrix x11 = xq.block(0, 0, 2, 2), x21 = xq.block(2, 0, 2, 2);
  Eigen::JacobiSVD<Matrix> svd(x11, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Matrix u1 = svd.matrixU();
  const Matrix v1 = svd.matrixV().adjoint();
  const Eigen::Vector2d c = svd.singularValues().cwiseMin(1.0);

  // X21 = -U2 S V1 with S = diag(s) >= 0.
  const Matrix z = -x21 * v1.adjoint();
  const int big = z.col(0).norm() >= z.col(1).norm() ? 0 : 1, other = 1 - big;
  Matrix u2(2, 2);
  Eigen::Vector2d s;
  u2.col(big) = z.col(big).norm() > 0 ? Vector(z.col(big).normalized()) : Vector(Vector::Unit(2, big));
  s(big) = z.col(big).norm();
  Vector comp(2);
  comp << -std::conj(u2(1, big)), std::conj(u2(0, big));
  const cplx ip = comp.dot(z.col(other));  // conj(comp) . z
  if (std::abs(ip) > 0) comp *= std::polar(1.0, std::arg(ip));
  u2.col(other) = comp;
  s(other) = std::abs(ip);

  const double phi1 = std::atan2(s(0), c(0)), phi2 = std::atan2(s(1), c(1));
  Matrix k1q = Matrix::Zero(4, 4);
  k1q.block(0, 0, 2, 2) = u1;
  k1q.block(2, 2, 2, 2) = u2;
  Matrix sigma = Matrix::Zero(4, 4);
  sigma(0, 0) = sigma(2, 2) = std::cos(phi1);
  sigma(1, 1) = sigma(3, 3) = std::cos(phi2);
  sigma(0, 2) = std::sin(phi1), sigma(2, 0) = -std::sin(phi1);
  sigma(1, 3) = std::sin(phi2), sigma(3, 1) = -std::sin(phi2);
  Matrix k2q = sigma.transpose() * k1q.adjoint() * xq;
  const double off = std::max(tensor::max_abs(k2q.block(0, 2, 2, 2)),
                              tensor::max_abs(k2q.block(2, 0, 2, 2)));
  if (off > 1e-9) throw std::runtime_error("kak_aiii_su4: CS decomposition failed");
  k2q.block(0, 2, 2, 2).setZero();
  k2q.block(2, 0, 2, 2).setZero();

  const double gamma = -std::arg(k1q.determinant()) / 4;
  k1q *= std::polar(1.0, gamma);
  k2q *= std::polar(1.0, -gamma);

  CartanFactors f;
  f.k1 = unpermute(k1q);
  f.k2 = unpermute(k2q);
  f.s = phi1 + phi2;
  f.r = (phi1 - phi2) / 2;
  f.a = torus_matrix(f.s, f.r);
  if (tensor::max_abs(f.k1 * f.a * f.k2 - x) > 1e-10)
    throw std::runtime_error("kak_aiii_su4: reconstruction failed");
  return f;
}

// ---- plans for n = 3 building blocks ----

std::vector<Step> subalgebra_plan(Gen control, const Matrix& element) {
  if (control != Gen::BX && control != Gen::BY)
    throw PreconditionError("subalgebra_plan: control must be BX or BY");
  require_unitary(element, 4, "subalgebra_plan");
  const Realizer& r = realizer(control);
  const Matrix gw = r.w * element * r.w.adjoint();
  const double off = std::max(tensor::max_abs(gw.block(0, 2, 2, 2)), tensor::max_abs(gw.block(2, 0, 2, 2)));
  const Matrix top = gw.block(0, 0, 2, 2), bottom = gw.block(2, 2, 2, 2);
  const double mu = -std::arg(top.determinant()) / 2;
  const Matrix su = std::polar(1.0, mu) * top;
  const double mismatch = tensor::max_abs(bottom - std::polar(1.0, mu) * su);
  if (off > 1e-9 || mismatch > 1e-9)
    throw PreconditionError("subalgebra_plan: element outside the subgroup generated by " +
                            gen_name(control) + " and its hat conjugate");

  const auto seq = su2_two_axis(su);
  double total = 0.0;
  for (const auto& a : seq) total += a.t;
  double alpha = std::fmod(mu - total, pi);
  if (alpha < 0) alpha += pi;
  alpha /= 2;

  std::vector<Step> out;
  if (alpha > 1e-14 && pi / 2 - alpha > 1e-14) {
    const auto& flip = flip_sequence();
    append(out, axis_to_steps(control, flip, 1.0));
    out.push_back({control, alpha});
    std::vector<AxisStep> inv(flip.rbegin(), flip.rend());
    append(out, axis_to_steps(control, inv, -1.0));
    out.push_back({control, alpha});
  }
  append(out, axis_to_steps(control, seq, 1.0));
  return normalize_steps(out);
}

std::vector<Step> k_factor_plan(const Matrix& k) {
  require_unitary(k, 4, "k_factor_plan");
  if (k_subgroup_residual(k) > 1e-10)
    throw PreconditionError("k_factor_plan: input has entries outside the {1,4}/{2,3} blocks");
  const Matrix ks = remove_det_phase(k);
  const Matrix up = pair_block(ks, 0, 3), uq = pair_block(ks, 1, 2);
  const double alpha = std::arg(up.determinant()) / 2;
  const auto ap = yxy_angles(std::polar(1.0, -alpha) * up);
  const auto aq = yxy_angles(std::polar(1.0, alpha) * uq);

  const Matrix jy = from_rows(2, {0, 1, -1, 0});
  const Matrix jx = from_rows(2, {0, kI, kI, 0});
  std::vector<Step> out = subalgebra_plan(Gen::BY, pair_exp(jy, ap[2], aq[2]));
  append(out, subalgebra_plan(Gen::BX, pair_exp(jx, ap[1], aq[1])));
  append(out, subalgebra_plan(Gen::BY, pair_exp(jy, ap[0], aq[0])));
  out.push_back({Gen::BZZ, alpha});
  return normalize_steps(out);
}

std::vector<Step> torus_factor_plan(double s, double r) {
  static std::once_flag once;
  static std::vector<Step> zp, zp_inv;
  std::call_once(once, [] {
    zp = k_factor_plan(algebra::Z_P());
    zp_inv = k_factor_plan(algebra::Z_P().adjoint());
  });
  std::vector<Step> out = subalgebra_plan(Gen::BY, tensor::mat_exp(s * algebra::A3()));
  if (std::abs(r) > 1e-15) {
    out.push_back({Gen::BZZ, pi / 4});
    append(out, zp_inv);
    append(out, subalgebra_plan(Gen::BY, tensor::mat_exp(2 * r * algebra::A3())));
    append(out, zp);
    out.push_back({Gen::BZZ, -pi / 4});
  }
  return normalize_steps(out);
}

std::vector<Step> torus_factor_plan(const Matrix& a) {
  require_unitary(a, 4, "torus_factor_plan");
  const double phi1 = std::atan2(a(0, 2).real(), a(0, 0).real());
  const double phi2 = std::atan2(a(3, 1).real(), a(3, 3).real());
  const double s = phi1 + phi2, r = (phi1 - phi2) / 2;
  if (tensor::max_abs(torus_matrix(s, r) - a) > 1e-10)
    throw PreconditionError("torus_factor_plan: input is not exp(s A3) exp(r C3)");
  return torus_factor_plan(s, r);
}

// ---- plans ----

std::string method_name(Method m) {
  switch (m) {
    case Method::Automatic: return "automatic";
    case Method::Cartan: return "cartan";
    case Method::Compact: return "compact";
  }
  return "?";
}

Method parse_method(const std::string& name) {
  for (Method m : {Method::Automatic, Method::Cartan, Method::Compact})
    if (method_name(m) == name) return m;
  throw PreconditionError("unknown synthesis method '" + name + "'");
}

io::json SynthesisPlan::to_json() const {
  io::json steps_json = io::json::array();
  for (const auto& s : steps) steps_json.push_back({{"gen", gen_name(s.gen)}, {"t", s.t}});
  io::json j{{"n", n},
             {"steps", steps_json},
             {"phase", phase},
             {"reconstruction_error", reconstruction_error},
             {"method", method},
             {"target", io::matrix_to_json(target)}};
  if (source_state) j["source_state"] = spin::state_to_json(*source_state);
  if (target_state) j["target_state"] = spin::state_to_json(*target_state);
  return j;
}

SynthesisPlan SynthesisPlan::from_json(const io::json& j) {
  SynthesisPlan p;
  try {
    p.n = j.at("n").get<int>();
    if (p.n != 2 && p.n != 3) throw PreconditionError("plan: n must be 2 or 3");
    for (const auto& s : j.at("steps")) {
      Step st{parse_gen(s.at("gen").get<std::string>()), s.at("t").get<double>()};
      if (gen_spins(st.gen) != p.n) throw PreconditionError("plan: tag does not match n");
      if (!std::isfinite(st.t)) throw PreconditionError("plan: non-finite duration");
      p.steps.push_back(st);
    }
    p.phase = j.value("phase", 0.0);
    p.reconstruction_error = j.value("reconstruction_error", 0.0);
    p.method = j.value("method", std::string{});
    if (j.contains("target")) p.target = io::matrix_from_json(j.at("target"));
    if (j.contains("source_state")) p.source_state = spin::state_from_json(j.at("source_state"));
    if (j.contains("target_state")) p.target_state = spin::state_from_json(j.at("target_state"));
  } catch (const io::json::exception& e) {
    throw PreconditionError(std::string("plan: malformed JSON: ") + e.what());
  }
  return p;
}

void finalize(SynthesisPlan& plan) {
  const Matrix u = replay(plan.n, plan.steps);
  plan.reconstruction_error = phase_aligned_error(u, plan.target, &plan.phase);
}

SynthesisPlan synthesize(int n, const Matrix& target, const SynthesisOptions& options) {
  if (n != 2 && n != 3) throw PreconditionError("synthesize: n must be 2 or 3");
  require_unitary(target, n + 1, "synthesize");

  SynthesisPlan plan;
  plan.n = n;
  plan.target = target;
  Method m = options.method;
  if (m == Method::Automatic) m = n == 2 ? Method::Cartan : Method::Compact;
  if (m == Method::Compact && n == 3) {
    if (auto steps = compact_plan(target, options)) {
      plan.steps = normalize_steps(*steps);
      plan.method = "compact";
    } else {
      m = Method::Cartan;
    }
  } else if (m == Method::Compact) {
    m = Method::Cartan;  // n = 2 Cartan plans are already short
  }
  if (plan.method.empty()) {
    plan.steps = normalize_steps(n == 2 ? cartan_plan_n2(target) : cartan_plan_n3(target));
    plan.method = "cartan";
  }
  finalize(plan);
  return plan;
}

std::vector<SynthesisPlan> synthesize_batch(int n, const std::vector<Matrix>& targets,
                                            const SynthesisOptions& options,
                                            kernels::Execution exec) {
  // Build the lazily cached tables before fanning out.
  (void)generator_matrix(Gen::AX);
  if (n == 3) {
    (void)realizer(Gen::BX);
    (void)flip_sequence();
    (void)torus_factor_plan(0.0, 0.0);
  }
  std::vector<SynthesisPlan> out(targets.size());
  kernels::for_each_index(
      targets.size(), [&](std::size_t i) { out[i] = synthesize(n, targets[i], options); }, exec);
  return out;
}

Matrix transfer_unitary(const Vector& source, const Vector& dest) {
  if (source.size() != dest.size()) throw PreconditionError("transfer_unitary: size mismatch");
  auto frame = [](const Vector& v) {
    const Eigen::Index d = v.size();
    Matrix a(d, d + 1);
    a.col(0) = v;
    a.rightCols(d) = Matrix::Identity(d, d);
    Eigen::HouseholderQR<Matrix> qr(a);
    Matrix q = qr.householderQ();
    // Column 0 of q is v up to a phase; make it v exactly.
    const cplx ph = q.col(0).dot(v);
    q.col(0) *= ph / std::abs(ph);
    return q;
  };
  return frame(dest) * frame(source).adjoint();
}

SynthesisPlan state_transfer_plan(int n, const spin::SpinState& source,
                                  const spin::SpinState& dest, const SynthesisOptions& options) {
  if (n != 2 && n != 3) throw PreconditionError("state_transfer_plan: n must be 2 or 3");
  if (source.n() != n || dest.n() != n)
    throw PreconditionError("state_transfer_plan: state spin count does not match n");
  for (const auto* s : {&source, &dest})
    if (spin::symmetric_leakage(*s) > 1e-10)
      throw PreconditionError("state_transfer_plan: state is not permutation invariant");
  const Vector a = spin::symmetric_coordinates(source);
  const Vector b = spin::symmetric_coordinates(dest);

  SynthesisPlan plan;
  if (std::abs(a.dot(b)) >= 1.0 - 1e-12) {
    plan.n = n;
    plan.target = Matrix::Identity(n + 1, n + 1);
    plan.method = "identity";
    finalize(plan);
  } else {
    plan = synthesize(n, transfer_unitary(a, b), options);
  }
  plan.source_state = source;
  plan.target_state = dest;
  return plan;
}

}  // namespace symctl::synth
