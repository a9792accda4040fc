// Acceptance suite: one PASS/FAIL/SKIPPED line per criterion.
// Usage: acceptance [max_n]

#include <cstdlib>
#include <iostream>
#include <string>

#include "spinbus/acceptance.hpp"

int main(int argc, char** argv) {
  spinbus::AcceptanceOptions opt;
  if (argc > 1) opt.max_n = std::atoi(argv[1]);
  int fails = 0;
  spinbus::run_acceptance(opt, [&](const spinbus::CriterionResult& r) {
    std::cout << spinbus::format_line(r) << std::endl;
    fails += r.status == spinbus::Status::fail;
  });
  std::cout << (fails ? std::to_string(fails) + " criteria failed" : std::string("all criteria passed")) << "\n";
  return fails ? 1 : 0;
}
