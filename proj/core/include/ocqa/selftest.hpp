#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ocqa {

struct SelftestReport {
  bool ok = false;
  std::vector<std::string> lines;  // one "pass:"/"FAIL:" entry per check
};

// Seeded oracle-vs-pipeline property suites plus the generator sanity
// checks; deterministic for a fixed seed and instance count.
SelftestReport run_selftest(std::uint64_t seed, std::size_t instances);

}  // namespace ocqa
