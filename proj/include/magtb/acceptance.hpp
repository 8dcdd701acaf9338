#pragma once

#include <limits>
#include <string>
#include <vector>

#include "json.hpp"

namespace magtb {

struct Check {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  double upper = std::numeric_limits<double>::quiet_NaN();  // only for "in"
  std::string relation;  // "<", "<=", ">", ">=", "==", "in", "true"
  bool passed = false;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  bool errored = false;
  std::string error;
  double seconds = 0.0;
  double time_limit = 0.0;
  std::vector<Check> checks;
  nlohmann::json detail = nlohmann::json::object();
};

const std::vector<int>& acceptance_criteria();
double criterion_time_limit(int id);
std::string criterion_title(int id);

// Never throws: module errors are caught and reported as errored.
CriterionResult run_criterion(int id);

std::string summary_line(const CriterionResult& r);
nlohmann::json to_json(const CriterionResult& r);

// Gap Chern number of the Harper model at flux 2 pi p / q with r bands below
// the Fermi level: the solution t of r = p t (mod q) with |t| <= q/2.
int tknn_gap_chern(int p, int q, int r);

}  // namespace magtb
