#include "symctl/two_axis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace symctl::synth {

namespace {

using std::numbers::pi;

// ---- product of exponentials ----

struct Evaluation {
  Matrix u;
  Eigen::VectorXd residual;
  Eigen::MatrixXd jacobian;
  double max_error = 0.0;
};

Evaluation evaluate(const ExpProductProblem& p, const std::vector<tensor::SkewExponential>& exps,
                    const std::vector<double>& x, bool with_jacobian) {
  const std::size_t m = p.generators.size();
  const Eigen::Index d = p.target.rows();
  std::vector<Matrix> prefix(m + 1);  // prefix[k] = E_k ... E_1
  prefix[0] = Matrix::Identity(d, d);
  std::vector<Matrix> factor(m);
  for (std::size_t k = 0; k < m; ++k) {
    factor[k] = exps[k](x[k]);
    prefix[k + 1] = factor[k] * prefix[k];
  }
  const double phase = p.free_phase ? x[m] : 0.0;
  const cplx rot = std::polar(1.0, phase);

  Evaluation e;
  e.u = prefix[m];
  const Matrix diff = e.u - rot * p.target;
  e.max_error = tensor::max_abs(diff);
  const Eigen::Index entries = d * d;
  e.residual.resize(2 * entries);
  for (Eigen::Index k = 0; k < entries; ++k) {
    e.residual(k) = diff(k).real();
    e.residual(entries + k) = diff(k).imag();
  }
  if (!with_jacobian) return e;

  const auto cols = static_cast<Eigen::Index>(x.size());
  e.jacobian.resize(2 * entries, cols);
  Matrix suffix = Matrix::Identity(d, d);  // E_m ... E_{k+1}
  for (std::size_t k = m; k-- > 0;) {
    const Matrix deriv = suffix * p.generators[k] * prefix[k + 1];
    for (Eigen::Index q = 0; q < entries; ++q) {
      e.jacobian(q, static_cast<Eigen::Index>(k)) = deriv(q).real();
      e.jacobian(entries + q, static_cast<Eigen::Index>(k)) = deriv(q).imag();
    }
    suffix = suffix * factor[k];
  }
  if (p.free_phase) {
    const Matrix deriv = -kI * rot * p.target;
    for (Eigen::Index q = 0; q < entries; ++q) {
      e.jacobian(q, cols - 1) = deriv(q).real();
      e.jacobian(entries + q, cols - 1) = deriv(q).imag();
    }
  }
  return e;
}

// ---- SO(3) helpers for the closed form ----

using R3 = Eigen::Matrix3d;
using V3 = Eigen::Vector3d;

R3 rotation(const V3& n, double angle) {
  R3 cross;
  cross << 0, -n.z(), n.y(), n.z(), 0, -n.x(), -n.y(), n.x(), 0;
  return std::cos(angle) * R3::Identity() + std::sin(angle) * cross +
         (1.0 - std::cos(angle)) * n * n.transpose();
}

// Standard-convention Pauli matrices; the map is U sigma_j U^dagger = sum_i R_ij sigma_i.
R3 so3_of(const Matrix& u) {
  static const std::array<Matrix, 3> s = [] {
    std::array<Matrix, 3> out;
    for (auto& m : out) m = Matrix::Zero(2, 2);
    out[0](0, 1) = out[0](1, 0) = 1.0;
    out[1](0, 1) = -kI;
    out[1](1, 0) = kI;
    out[2](0, 0) = 1.0;
    out[2](1, 1) = -1.0;
    return out;
  }();
  R3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = 0.5 * (s[i] * u * s[j] * u.adjoint()).trace().real();
  return r;
}

// exp(Z t) rotates by -4t about its axis.
const V3 kN1(0.0, 0.0, 1.0);
const V3 kN2(0.0, std::sqrt(3.0) / 2.0, -0.5);

double reduce_period(double t) {
  double r = std::fmod(t, pi);
  if (r < 0) r += pi;
  return r;
}

// Angles (alpha, beta, gamma) with R = Rot(n1, alpha) Rot(n2, beta) Rot(n1, gamma).
std::optional<std::array<double, 3>> euler_n1n2n1(const R3& r) {
  const V3 v = r * kN1;
  double c = (4.0 * v.z() - 1.0) / 3.0;
  if (c < -1.0 - 1e-9) return std::nullopt;
  c = std::clamp(c, -1.0, 1.0);
  const double b0 = std::acos(c);
  for (double beta : {b0, -b0}) {
    const R3 r2 = rotation(kN2, beta);
    const V3 w = r2 * kN1;
    double alpha = 0.0;
    if (std::hypot(v.x(), v.y()) > 1e-14 || std::hypot(w.x(), w.y()) > 1e-14)
      alpha = std::atan2(v.y(), v.x()) - std::atan2(w.y(), w.x());
    const R3 rest = r2.transpose() * rotation(kN1, alpha).transpose() * r;
    const double gamma = std::atan2(rest(1, 0), rest(0, 0));
    const R3 rebuilt = rotation(kN1, alpha) * r2 * rotation(kN1, gamma);
    if ((rebuilt - r).cwiseAbs().maxCoeff() < 1e-9) return std::array<double, 3>{alpha, beta, gamma};
  }
  return std::nullopt;
}

// Reduce, drop identity factors, merge neighbours.
std::vector<AxisStep> tidy(const std::vector<AxisStep>& raw) {
  std::vector<AxisStep> out;
  for (const auto& s : raw) {
    double t = reduce_period(s.t);
    if (t < 1e-13 || pi - t < 1e-13) continue;
    if (!out.empty() && out.back().axis == s.axis) {
      out.back().t = reduce_period(out.back().t + t);
      const double b = out.back().t;
      if (b < 1e-13 || pi - b < 1e-13) out.pop_back();
      continue;
    }
    out.push_back({s.axis, t});
  }
  return out;
}

// Fixes the SU(2) sign (exp(Z pi/2) = -1) and tidies.
std::vector<AxisStep> finish(std::vector<AxisStep> steps, const Matrix& target) {
  const Matrix u = two_axis_product(steps);
  if (tensor::max_abs(u + target) < tensor::max_abs(u - target)) {
    if (steps.empty()) steps.push_back({Axis::Z1, 0.0});
    steps.front().t += pi / 2.0;
  }
  return tidy(steps);
}

// Angle if r is a rotation about n.
std::optional<double> single_axis_angle(const R3& r, const V3& n) {
  if ((r * n - n).norm() > 1e-12) return std::nullopt;
  const V3 p = n.unitOrthogonal();
  const V3 q = r * p;
  const double angle = std::atan2(n.dot(p.cross(q)), p.dot(q));
  if ((rotation(n, angle) - r).cwiseAbs().maxCoeff() > 1e-9) return std::nullopt;
  return angle;
}

std::vector<AxisStep> closed_form(const Matrix& target) {
  const R3 r = so3_of(target);
  if (auto a = single_axis_angle(r, kN1)) return finish({{Axis::Z1, -*a / 4.0}}, target);
  if (auto a = single_axis_angle(r, kN2)) return finish({{Axis::Z2, -*a / 4.0}}, target);
  if (auto a = euler_n1n2n1(r)) {
    return finish({{Axis::Z1, -(*a)[2] / 4.0}, {Axis::Z2, -(*a)[1] / 4.0}, {Axis::Z1, -(*a)[0] / 4.0}},
                  target);
  }
  // Peel off a Z2 factor so that the remainder has a three-factor form.
  const V3 u = r.transpose() * kN1;
  double best = -2.0, best_delta = 0.0;
  for (int k = 0; k < 720; ++k) {
    const double delta = 2.0 * pi * k / 720.0;
    const double score = u.dot(rotation(kN2, -delta) * kN1);
    if (score > best) {
      best = score;
      best_delta = delta;
    }
  }
  const R3 rest = r * rotation(kN2, -best_delta);
  if (auto a = euler_n1n2n1(rest)) {
    return finish({{Axis::Z2, -best_delta / 4.0},
                   {Axis::Z1, -(*a)[2] / 4.0},
                   {Axis::Z2, -(*a)[1] / 4.0},
                   {Axis::Z1, -(*a)[0] / 4.0}},
                  target);
  }
  return {};
}

}  // namespace

ExpProductFit fit_exp_product(const ExpProductProblem& problem, std::vector<double> x,
                              double tolerance, int max_iterations) {
  const std::size_t m = problem.generators.size();
  if (x.size() != m + (problem.free_phase ? 1 : 0))
    throw PreconditionError("fit_exp_product: initial point has wrong size");
  std::vector<tensor::SkewExponential> exps;
  exps.reserve(m);
  for (const auto& g : problem.generators) exps.emplace_back(g);

  ExpProductFit fit;
  double lambda = 1e-3;
  Evaluation cur = evaluate(problem, exps, x, true);
  double cost = cur.residual.squaredNorm();
  int it = 0;
  for (; it < max_iterations && cur.max_error > tolerance; ++it) {
    const Eigen::MatrixXd a = cur.jacobian.transpose() * cur.jacobian;
    const Eigen::VectorXd g = cur.jacobian.transpose() * cur.residual;
    bool accepted = false;
    while (lambda < 1e12) {
      Eigen::MatrixXd damped = a;
      damped.diagonal().array() += lambda * (a.diagonal().array() + 1e-9);
      const Eigen::VectorXd step = damped.ldlt().solve(-g);
      std::vector<double> trial = x;
      for (std::size_t k = 0; k < trial.size(); ++k) trial[k] += step(static_cast<Eigen::Index>(k));
      Evaluation next = evaluate(problem, exps, trial, true);
      const double next_cost = next.residual.squaredNorm();
      if (next_cost < cost) {
        x = std::move(trial);
        cur = std::move(next);
        cost = next_cost;
        lambda = std::max(lambda / 3.0, 1e-12);
        accepted = true;
        break;
      }
      lambda *= 4.0;
    }
    if (!accepted) break;
  }
  fit.iterations = it;
  fit.error = cur.max_error;
  fit.converged = cur.max_error <= tolerance;
  fit.durations.assign(x.begin(), x.begin() + static_cast<long>(m));
  if (problem.free_phase) fit.phase = x[m];
  return fit;
}

const Matrix& axis_matrix(Axis a) {
  static const Matrix z1 = [] {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = 2.0 * kI;
    m(1, 1) = -2.0 * kI;
    return m;
  }();
  static const Matrix z2 = [] {
    Matrix m(2, 2);
    m << -kI, std::sqrt(3.0), -std::sqrt(3.0), kI;
    return m;
  }();
  return a == Axis::Z1 ? z1 : z2;
}

std::string axis_name(Axis a) { return a == Axis::Z1 ? "Z1" : "Z2"; }

Matrix two_axis_product(const std::vector<AxisStep>& steps) {
  static const tensor::SkewExponential e1(axis_matrix(Axis::Z1)), e2(axis_matrix(Axis::Z2));
  Matrix u = Matrix::Identity(2, 2);
  for (const auto& s : steps) u = (s.axis == Axis::Z1 ? e1 : e2)(s.t) * u;
  return u;
}

std::vector<AxisStep> su2_two_axis(const Matrix& target, const TwoAxisOptions& options) {
  if (target.rows() != 2 || target.cols() != 2 || !tensor::is_unitary(target, 1e-10))
    throw PreconditionError("su2_two_axis: target must be a 2x2 unitary");
  if (std::abs(target.determinant() - 1.0) > 1e-10)
    throw PreconditionError("su2_two_axis: target must have determinant 1");

  constexpr double kTol = 1e-10;
  if (options.allow_closed_form) {
    auto steps = closed_form(target);
    if (!steps.empty() || tensor::max_abs(target - Matrix::Identity(2, 2)) <= kTol) {
      if (tensor::max_abs(two_axis_product(steps) - target) <= kTol) return steps;
    }
  }

  // Iterative fallback over five alternating factors.
  ExpProductProblem p;
  const std::array<Axis, 5> pattern{Axis::Z1, Axis::Z2, Axis::Z1, Axis::Z2, Axis::Z1};
  for (Axis a : pattern) p.generators.push_back(axis_matrix(a));
  p.target = target;
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unif(0.0, pi);
  for (int attempt = 0; attempt < options.restarts; ++attempt) {
    std::vector<double> x0(pattern.size());
    for (auto& v : x0) v = unif(rng);
    const auto fit = fit_exp_product(p, x0, 1e-14, 300);
    if (fit.error > 1e-12) continue;
    std::vector<AxisStep> raw;
    for (std::size_t k = 0; k < pattern.size(); ++k) raw.push_back({pattern[k], fit.durations[k]});
    auto steps = tidy(raw);
    if (tensor::max_abs(two_axis_product(steps) - target) <= kTol) return steps;
  }
  throw std::runtime_error("su2_two_axis: no factorization found");
}

}  // namespace symctl::synth
