#pragma once

#include <iosfwd>

#include "dcsplit/config.h"

namespace dcsplit {

/// Each command writes its reports plus manifest.json into config.out and
/// returns the process exit code. Errors propagate as exceptions.
int cmd_decompose(const RunConfig& config, std::ostream& log);
/// 0 bounded, 2 diverging, 3 inconclusive (variation statistic).
int cmd_criterion(const RunConfig& config, std::ostream& log);
/// 0 converging, 2 diverging, 3 inconclusive.
int cmd_converge(const RunConfig& config, std::ostream& log);
int cmd_catalog(std::ostream& out);

/// Parses argv, dispatches, maps exceptions to exit code 1.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dcsplit
