#pragma once

#include <string>
#include <vector>

namespace hcalg {

struct CriterionResult {
  int id = 0;
  std::string name;
  std::string status = "FAIL";  // PASS | FAIL | INCONCLUSIVE
  std::string detail;
  double seconds = 0.0;
  double limit = 0.0;  // runtime budget in seconds; exceeding it is a failure
};

// A brute-force comparison made inside one of the witness criteria.
struct OracleRecord {
  int criterion = 0;
  std::string what;
  double rel_error = 0.0;
  bool pass = false;
};

struct SuiteResult {
  std::vector<CriterionResult> criteria;  // ordered by id
  std::vector<OracleRecord> oracle;
  bool all_pass() const;
};

// Runs the acceptance battery on `jobs` worker threads (0 = hardware
// concurrency). Results do not depend on the job count. The full mode adds
// more seeded cases where a criterion samples.
SuiteResult run_acceptance(bool quick = true, unsigned jobs = 0);

// Single criterion by id (1-based); oracle records are appended to `oracle`.
CriterionResult run_criterion(int id, bool quick, std::vector<OracleRecord>& oracle);
int criterion_count();

}  // namespace hcalg
