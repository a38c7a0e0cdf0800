#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "metric_cooks/diagnostics.hpp"
#include "metric_cooks/simgen.hpp"

namespace mcooks::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kParse = 3, kDimension = 4, kPipeline = 5 };

/// Runs the command line `args` (without the program name). Diagnostics go to
/// `err`; --help text goes to `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Observation indices (0-based) by decreasing distance. Values equal to 12
/// significant digits count as tied and keep index order.
std::vector<std::size_t> rank_observations(const Vector& distances);

/// Thread cap from METRIC_COOKS_THREADS; unset means auto.
Parallelism parallelism_from_env();

std::string simulate_csv(const std::vector<ExperimentRow>& rows);

}  // namespace mcooks::cli
