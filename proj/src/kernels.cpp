#include "symctl/kernels.hpp"

#include <omp.h>

namespace symctl::kernels {

int max_threads() { return omp_get_max_threads(); }

namespace {

Matrix bracket(const Matrix& a, const Matrix& b) { return a * b - b * a; }

}  // namespace

std::vector<Matrix> bracket_batch(const std::vector<Matrix>& basis,
                                  const std::vector<std::pair<int, int>>& pairs,
                                  Execution exec) {
  std::vector<Matrix> out(pairs.size());
  const auto count = static_cast<long>(pairs.size());
  if (exec == Execution::Serial) {
    for (long k = 0; k < count; ++k)
      out[k] = bracket(basis[pairs[k].first], basis[pairs[k].second]);
    return out;
  }
#pragma omp parallel for schedule(dynamic, 4)
  for (long k = 0; k < count; ++k)
    out[k] = bracket(basis[pairs[k].first], basis[pairs[k].second]);
  return out;
}

void for_each_index(std::size_t count, const std::function<void(std::size_t)>& fn,
                    Execution exec) {
  const auto n = static_cast<long>(count);
  if (exec == Execution::Serial) {
    for (long i = 0; i < n; ++i) fn(static_cast<std::size_t>(i));
    return;
  }
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < n; ++i) fn(static_cast<std::size_t>(i));
}

}  // namespace symctl::kernels
