#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace bfo {

// One acceptance criterion group: every check must pass (failures == 0).
struct SuiteResult {
  std::string name;
  bool pass = false;
  uint64_t checked = 0;
  uint64_t failures = 0;
  double seconds = 0;
  std::string note;
};

std::vector<std::string> suite_names();
SuiteResult run_suite(const std::string& name, uint64_t seed);
std::vector<SuiteResult> run_all_suites(uint64_t seed);

}  // namespace bfo
