#pragma once

#include "config.hpp"
#include "report.hpp"

namespace asianfb::cli {

Report cmd_solve(const RunConfig& config);
Report cmd_sweep(const RunConfig& config);
Report cmd_eoc(const RunConfig& config);
Report cmd_scaling(const RunConfig& config);
Report cmd_fit(const RunConfig& config);
Report cmd_oracle_compare(const RunConfig& config);

/// Dispatches on config.command.
Report run_command(const RunConfig& config);

} // namespace asianfb::cli
