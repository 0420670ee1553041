#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "symctl/tensor_core.hpp"

namespace symctl::synth {

// ---- least-squares fit of a product of exponentials ----

// U(theta) = exp(theta_m G_m) ... exp(theta_1 G_1): the first generator acts first.
struct ExpProductProblem {
  std::vector<Matrix> generators;  // skew-Hermitian, common dimension
  Matrix target;
  bool free_phase = false;  // fit U = e^{i phi} target instead of U = target
};

struct ExpProductFit {
  std::vector<double> durations;
  double phase = 0.0;
  double error = 0.0;  // max-entry |U - e^{i phi} target|
  int iterations = 0;
  bool converged = false;
};

// Levenberg-Marquardt from x0 (durations, then phase if free_phase).
ExpProductFit fit_exp_product(const ExpProductProblem& problem, std::vector<double> x0,
                              double tolerance, int max_iterations = 200);

// ---- two-axis SU(2) factorization ----

enum class Axis { Z1, Z2 };

struct AxisStep {
  Axis axis;
  double t;
};

// Z1 = diag(2i, -2i); Z2 = [[-i, sqrt3], [-sqrt3, i]]. Both have period pi.
const Matrix& axis_matrix(Axis a);
std::string axis_name(Axis a);

// exp(Z t_last) ... exp(Z t_first)
Matrix two_axis_product(const std::vector<AxisStep>& steps);

struct TwoAxisOptions {
  std::uint64_t seed = 20240611;
  int restarts = 32;
  bool allow_closed_form = true;  // false forces the iterative solver (testing)
};

// Alternating factorization with durations in [0, pi) and at most six factors.
// Reconstruction error is at most 1e-10; throws std::runtime_error otherwise.
std::vector<AxisStep> su2_two_axis(const Matrix& target, const TwoAxisOptions& options = {});

}  // namespace symctl::synth
