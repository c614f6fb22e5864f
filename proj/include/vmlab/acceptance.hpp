#pragma once

#include <span>
#include <string>
#include <vector>

namespace vmlab::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

/// Criterion ids 1..11 in order.
std::vector<int> all_criteria();
std::string criterion_name(int id);

CriterionResult run_criterion(int id);
std::vector<CriterionResult> run(std::span<const int> ids);

/// "[PASS] AC01 name (1.23 s): detail"
std::string format_line(const CriterionResult& result);

}  // namespace vmlab::acceptance
