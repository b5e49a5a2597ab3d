#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace trek {

struct SelfTestLine {
  std::string name;
  int cases = 0;
  double worst = 0.0;  // worst relative (or scaled) discrepancy observed
  double tol = 0.0;
  bool pass = false;
};

struct SelfTestReport {
  std::vector<SelfTestLine> lines;
  bool all_pass() const;
};

// Cross-checks every frequency-domain operation against the materialized
// block-circulant route on `instances` random systems with extents <= 8
// (roughly a third of them made rank-deficient by slice duplication).
SelfTestReport run_selftest(int instances, std::uint64_t seed);

void print_report(const SelfTestReport& report, std::ostream& out);

}  // namespace trek
