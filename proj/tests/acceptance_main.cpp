#include <iostream>

#include "magtb/acceptance.hpp"

int main() {
  int failed = 0;
  for (int id : magtb::acceptance_criteria()) {
    const magtb::CriterionResult r = magtb::run_criterion(id);
    std::cout << magtb::summary_line(r) << std::endl;
    if (!r.passed) {
      ++failed;
      std::cout << "  detail: " << magtb::to_json(r).dump() << std::endl;
    }
  }
  std::cout << (magtb::acceptance_criteria().size() - failed) << "/" << magtb::acceptance_criteria().size()
            << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
