#pragma once

// Reproduction of the reference deletion tables and of the truncated
// announcement-mechanism argument, compared against embedded golden data.

#include <cstdint>
#include <string>
#include <vector>

#include "domlab/verify.hpp"

namespace domlab {

struct ReproduceResult {
  bool pass = false;
  std::string table;                    // rendered table, reference layout
  std::vector<std::string> mismatches;  // one line per failed comparison
  double seconds = 0;
};

// Golden data, one row per line, '|' separated; guarded by FNV-1a checksums.
const std::string& lemma5_golden();
const std::string& theorem4_golden();
std::uint64_t golden_checksum(const std::string& text);
bool golden_intact();

// The 3x3 hat mechanism on its seven-state domain: robust and canonical
// deletion traces and the exact one-round sets must equal the table.
ReproduceResult reproduce_lemma5();

// The star mechanism for |Z| = outcome_count >= 4: per state group, robust
// survivors stay inside the tabulated supersets, UD^3 is {f(theta)}, and
// ALL-mode UD-infinity verification succeeds.
ReproduceResult reproduce_theorem4(std::size_t outcome_count);

struct TruncationCounts {
  std::size_t step_checks = 0;       // (z,n,zh) vs (z,n+1,top), 1 < n < N
  std::size_t step_failures = 0;
  std::size_t threshold_checks = 0;  // (z,1,zh) vs (z,n_threshold,top)
  std::size_t threshold_failures = 0;
  std::size_t threshold_beyond_cap = 0;  // representations with n_threshold > N
  std::size_t projection_checks = 0;
  std::size_t projection_failures = 0;
};

// Truncated announcement mechanism with cap N on {a,b,c}, two agents,
// disagreement state i1:b>a>c; i2:c>a>b with f = a, at the canonical and
// `samples` sampled representations of every state.
ReproduceResult reproduce_theorem5(std::size_t cap, std::size_t samples = 50,
                                   std::uint64_t seed = kDefaultSeed,
                                   TruncationCounts* counts = nullptr);

}  // namespace domlab
