#pragma once

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "symctl/tensor_core.hpp"

namespace symctl::kernels {

// Serial is the reference; Parallel must give bit-identical results.
enum class Execution { Serial, Parallel };

int max_threads();

// out[k] = [basis[pairs[k].first], basis[pairs[k].second]]
std::vector<Matrix> bracket_batch(const std::vector<Matrix>& basis,
                                  const std::vector<std::pair<int, int>>& pairs,
                                  Execution exec);

// Calls fn(i) for i in [0, count). Each index is independent.
void for_each_index(std::size_t count, const std::function<void(std::size_t)>& fn,
                    Execution exec);

}  // namespace symctl::kernels
