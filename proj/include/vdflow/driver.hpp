#pragma once

#include "vdflow/run_config.hpp"
#include "vdflow/scheme.hpp"

#include <string>

namespace vdflow {

// Exit codes shared by the driver and the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitSolverFailure = 3;
inline constexpr int kExitPropertyViolation = 4;

SchemeConfig scheme_config_from(const RunConfig& cfg, const CaseSetup& setup);

// Runs one case, writing diagnostics.csv and snapshot_####.vtk into the
// output directory. Returns kExitOk on success; throws on failures (the CLI
// maps exception types to exit codes).
int cmd_run(const RunConfig& cfg);

// Runs the manufactured case over the configured ladder of levels and writes
// errors.csv with per-level L2 errors and observed orders.
int cmd_convergence(const RunConfig& cfg);

int cmd_list_cases();

// Shared CSV formatting: scientific notation, 12 significant digits.
std::string format_csv_value(double v);

} // namespace vdflow
