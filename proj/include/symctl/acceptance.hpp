#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "symctl/json_io.hpp"
#include "symctl/kernels.hpp"

namespace symctl::acceptance {

struct Options {
  std::uint64_t seed = 20240611;
  kernels::Execution execution = kernels::Execution::Parallel;
};

struct Result {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string summary;  // one line
  io::json details;
  double seconds = 0.0;

  io::json to_json() const;
  std::string line() const;  // "PASS  3  block structure: ..."
};

inline constexpr int kCriteria = 10;

// Runs criterion `id` (1..10).
Result run(int id, const Options& options = {});
std::vector<Result> run_all(const Options& options = {});

}  // namespace symctl::acceptance
