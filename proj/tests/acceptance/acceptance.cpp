// One PASS/FAIL line per acceptance criterion; exit status 0 iff all pass.
// An optional first argument scales the trial counts (default 1).

#include <cstdio>
#include <cstdlib>

#include "schwarz/suite.hpp"

int main(int argc, char** argv) {
  schwarz::SuiteOptions opt;
  if (argc > 1) opt.scale = std::atof(argv[1]);
  int failed = 0;
  schwarz::run_suite(opt, [&](const schwarz::CheckResult& r) {
    if (!r.pass) ++failed;
    std::printf("%s  %2d  %s  [%.2f s]\n      %s\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds,
                r.detail.c_str());
    std::fflush(stdout);
  });
  std::printf("%s: %d of %zu criteria failed\n", failed ? "FAIL" : "PASS", failed,
              schwarz::invariant_checks().size());
  return failed ? 1 : 0;
}
