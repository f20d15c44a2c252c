#pragma once

#include <string>
#include <vector>

#include "opnorm/bounds.hpp"

namespace opnorm {

struct PropertyCheck {
  std::string name;
  bool passed = false;
  double measured = 0.0;  // the fitted constant / ratio / margin checked
  std::string detail;
};

struct SuiteResult {
  std::string suite;
  std::vector<PropertyCheck> checks;
  bool passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }
};

// Property suites, one per probabilistic inequality or structural
// invariant the library relies on. Throws PreconditionError for an
// unknown suite name.
SuiteResult run_suite(const std::string& name, std::uint64_t seed);

std::vector<std::string> suite_names();

}  // namespace opnorm
