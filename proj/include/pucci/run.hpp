#pragma once

#include <cstdint>
#include <string>

#include "pucci/config.hpp"

namespace pucci {

struct RunOptions {
  std::string out_dir;  // overrides the config's when nonempty
  int threads = 0;      // 0: all cores
  std::uint64_t seed = 1;
};

/// Executes the configured command and writes its artifacts (JSON record,
/// field files, plot data, plus a separate metadata file with timings).
/// Exit status: 0 success, 2 rejected input, 3 solver non-convergence,
/// 4 barrier or bracket failure. Every failure leaves a diagnostic record.
int run(const RunConfig& cfg, const RunOptions& opts);

}  // namespace pucci
