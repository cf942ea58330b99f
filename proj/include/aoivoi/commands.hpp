#pragma once

#include <iosfwd>
#include <string>

#include "aoivoi/config.hpp"

namespace aoivoi {

// Process exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitSolverError = 2;
inline constexpr int kExitValidationFailure = 3;

// Each command writes its report to `out` and diagnostics to `err`.
int run_solve(const RunConfig& config, std::ostream& out, std::ostream& err);
int run_frontier(const RunConfig& config, std::ostream& out, std::ostream& err);
int run_simulate(const RunConfig& config, std::ostream& out, std::ostream& err);
int run_validate(const RunConfig& config, std::ostream& out, std::ostream& err);

// Frontier sweep serialized as CSV (header row plus one row per weight).
std::string frontier_csv(const std::vector<FrontierPoint>& points, std::size_t num_classes);

} // namespace aoivoi
