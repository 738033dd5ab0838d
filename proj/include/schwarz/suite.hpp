#pragma once

// The invariant suite: one check per acceptance criterion, shared by the
// acceptance binary (full size) and `schwarz selftest` (scaled down).

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace schwarz {

struct SuiteOptions {
  double scale = 1.0;  // multiplies every trial count
  std::uint64_t seed = 20240601;
  int threads = 0;     // scan workers, 0 = hardware concurrency
};

struct CheckResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

struct SuiteCheck {
  int id;
  std::string name;
  std::function<CheckResult(const SuiteOptions&)> run;
};

const std::vector<SuiteCheck>& invariant_checks();

/// Runs every check in order; `on_result` sees each result as it finishes.
std::vector<CheckResult> run_suite(const SuiteOptions& opt,
                                   const std::function<void(const CheckResult&)>& on_result = {});

}  // namespace schwarz
