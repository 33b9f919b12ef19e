// Acceptance suite: one line per criterion, nonzero exit on any failure.
#include <cstdio>
#include <iostream>

#include "semilt/acceptance.hpp"

int main() {
  semilt::AcceptanceOptions opt;
  auto results = semilt::run_acceptance(opt, &std::cout);
  int failed = 0;
  for (const auto& r : results)
    if (!r.pass) ++failed;
  std::printf("%d/%d criteria passed\n", static_cast<int>(results.size()) - failed,
              static_cast<int>(results.size()));
  return failed;
}
