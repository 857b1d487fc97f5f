#pragma once

// The eleven acceptance criteria as runnable checks. Every tolerance is fixed
// here; options only choose seeds and threads.

#include <string>
#include <vector>

#include "hermitia/report.hpp"

namespace hermitia {

inline constexpr int kCriterionCount = 11;

struct AcceptanceOptions {
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

struct CriterionResult {
  int number = 0;
  std::string title;
  std::vector<Check> checks;
  double seconds = 0;
  double time_limit = 0;  // 0 when the criterion has no runtime bound
  Json data = Json::object();

  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  Json to_json() const;
};

std::string criterion_title(int number);

/// Runs one criterion (1..kCriterionCount). Geometry errors inside a criterion
/// become failed checks rather than exceptions.
CriterionResult run_criterion(int number, const AcceptanceOptions& options);

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options);

/// One line per criterion: "[PASS] 3 Einstein check  (0.12 s)" plus failing checks.
std::string summary_line(const CriterionResult& r);

}  // namespace hermitia
