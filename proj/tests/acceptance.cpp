// Prints one PASS/FAIL line per acceptance criterion; exits nonzero unless all pass.
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

#include "hcalg/suite.hpp"

int main(int argc, char** argv) {
  bool quick = true;
  unsigned jobs = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--full") == 0) quick = false;
    if (std::strcmp(argv[i], "--jobs") == 0 && i + 1 < argc) jobs = static_cast<unsigned>(std::atoi(argv[++i]));
  }
  auto res = hcalg::run_acceptance(quick, jobs);
  for (const auto& r : res.criteria) {
    // INCONCLUSIVE counts as not passing.
    const char* tag = r.status == "PASS" ? "PASS" : "FAIL";
    std::printf("%s criterion %2d %-32s %7.3fs  %s%s\n", tag, r.id, r.name.c_str(), r.seconds,
                r.status == "INCONCLUSIVE" ? "inconclusive: " : "", r.detail.c_str());
  }
  return res.all_pass() ? 0 : 1;
}
