#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace iva {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

/// Runs the acceptance criteria for a suite ("eating", "cp", "matroid", or
/// "all"), one result per criterion. Every tolerance is pinned in code.
std::vector<CriterionResult> run_acceptance(const std::string& suite);

/// One "CRITERION k <name>: PASS|FAIL (detail)" line per result; returns
/// true when everything passed.
bool print_acceptance(const std::vector<CriterionResult>& results, std::ostream& out);

}  // namespace iva
