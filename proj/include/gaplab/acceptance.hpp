#pragma once

#include <functional>
#include <set>
#include <string>
#include <vector>

namespace gaplab {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  bool fast = false;       // accepted for interface stability; the full suite already runs in well under 5 minutes
  std::set<int> only;      // empty: all criteria
};

/// Runs the acceptance criteria 1..11 in order; `report` sees each result as
/// soon as it is known.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options = {},
                                            const std::function<void(const CriterionResult&)>& report = {});

std::string format_result(const CriterionResult& r);

}  // namespace gaplab
