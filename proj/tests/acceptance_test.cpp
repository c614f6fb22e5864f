#include <iostream>

#include "vmlab/acceptance.hpp"

int main() {
  int failures = 0;
  for (int id : vmlab::acceptance::all_criteria()) {
    const auto result = vmlab::acceptance::run_criterion(id);
    std::cout << vmlab::acceptance::format_line(result) << std::endl;
    if (!result.passed) ++failures;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
