// One line per acceptance criterion; exit status 1 if any criterion fails.
#include <cstdio>

#include "symctl/acceptance.hpp"

int main() {
  bool ok = true;
  double total = 0.0;
  for (int id = 1; id <= symctl::acceptance::kCriteria; ++id) {
    const auto r = symctl::acceptance::run(id);
    std::printf("%s  [%.2f s]\n", r.line().c_str(), r.seconds);
    std::fflush(stdout);
    ok = ok && r.passed;
    total += r.seconds;
  }
  std::printf("total %.2f s\n", total);
  return ok ? 0 : 1;
}
