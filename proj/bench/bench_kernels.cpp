// Serial vs OpenMP timings for the hot kernels.
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <utility>
#include <vector>

#include "symctl/lie_engine.hpp"
#include "symctl/synthesis.hpp"

using namespace symctl;
using kernels::Execution;

namespace {

double seconds(const std::function<void()>& fn, int reps = 1) {
  const auto t0 = std::chrono::steady_clock::now();
  for (int r = 0; r < reps; ++r) fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / reps;
}

void row(const char* name, double serial, double parallel) {
  std::printf("%-28s %10.4f %10.4f %7.2fx\n", name, serial, parallel, serial / parallel);
}

}  // namespace

int main() {
  std::printf("threads: %d\n", kernels::max_threads());
  std::printf("%-28s %10s %10s %8s\n", "kernel", "serial[s]", "omp[s]", "speedup");

  for (int n : {4, 5}) {
    const auto gens = lie::model_generators(n);
    auto run = [&](Execution e) {
      return seconds([&] { lie::closure(gens, {e}); });
    };
    char name[32];
    std::snprintf(name, sizeof name, "closure n=%d", n);
    row(name, run(Execution::Serial), run(Execution::Parallel));
  }

  {
    const auto basis = lie::closure(lie::model_generators(5)).elements();
    std::vector<std::pair<int, int>> pairs;
    const int m = static_cast<int>(basis.size());
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) pairs.emplace_back(i, j);
    auto run = [&](Execution e) {
      return seconds([&] { kernels::bracket_batch(basis, pairs, e); }, 3);
    };
    row("bracket_batch n=5 all pairs", run(Execution::Serial), run(Execution::Parallel));
  }

  for (int n : {2, 3}) {
    std::mt19937_64 rng(11);
    const Eigen::Index d = n + 1;
    std::vector<Matrix> targets;
    for (int k = 0; k < 32; ++k) targets.push_back(tensor::random_unitary(d, rng));
    auto run = [&](Execution e) {
      return seconds([&] { synth::synthesize_batch(n, targets, {}, e); });
    };
    char name[32];
    std::snprintf(name, sizeof name, "synthesize_batch n=%d x32", n);
    row(name, run(Execution::Serial), run(Execution::Parallel));
  }
  return 0;
}
