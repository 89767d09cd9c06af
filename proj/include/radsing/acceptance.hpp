#pragma once
// The acceptance battery, shared by the `acceptance` test binary and `radsing verify`.
#include <string>
#include <vector>

namespace radsing::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;  // measured quantities behind the verdict
  double seconds = 0;
};

struct Options {
  int jobs = 1;
  std::vector<int> only;  // empty: all twelve
};

constexpr int kCriteria = 12;
const char* criterion_name(int id);

// Runs one criterion; exceptions are caught and reported as failures.
CriterionResult run_criterion(int id);
// Results ordered by id regardless of `jobs`.
std::vector<CriterionResult> run_acceptance(const Options& opt = {});

// "PASS  3  name  (0.01 s)  detail"
std::string format_line(const CriterionResult& r);

}  // namespace radsing::acceptance
