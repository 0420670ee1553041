#include <gtest/gtest.h>

#include <atomic>
#include <vector>

#include "symctl/kernels.hpp"
#include "symctl/spin_model.hpp"

using namespace symctl;
using kernels::Execution;

TEST(Kernels, BracketBatchParallelMatchesSerialBitwise) {
  std::vector<Matrix> basis;
  for (const auto& g : spin::all_symmetric_generators(4)) basis.push_back(spin::symmetric_generator(g));
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < static_cast<int>(basis.size()); ++i)
    for (int j = i + 1; j < static_cast<int>(basis.size()); ++j) pairs.emplace_back(i, j);
  const auto s = kernels::bracket_batch(basis, pairs, Execution::Serial);
  const auto p = kernels::bracket_batch(basis, pairs, Execution::Parallel);
  ASSERT_EQ(s.size(), p.size());
  for (std::size_t k = 0; k < s.size(); ++k) EXPECT_TRUE((s[k].array() == p[k].array()).all());
}

TEST(Kernels, BracketBatchValues) {
  const std::vector<Matrix> basis{tensor::pauli(tensor::PauliLabel::X),
                                  tensor::pauli(tensor::PauliLabel::Y)};
  const auto out = kernels::bracket_batch(basis, {{0, 1}, {1, 0}}, Execution::Serial);
  EXPECT_EQ(tensor::max_abs(out[0] + out[1]), 0.0);
  EXPECT_EQ(tensor::max_abs(out[0] - tensor::commutator(basis[0], basis[1])), 0.0);
}

TEST(Kernels, ForEachIndexVisitsEveryIndexOnce) {
  for (Execution e : {Execution::Serial, Execution::Parallel}) {
    std::vector<std::atomic<int>> hits(257);
    kernels::for_each_index(hits.size(), [&](std::size_t i) { hits[i]++; }, e);
    for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
  }
  EXPECT_GE(kernels::max_threads(), 1);
}
