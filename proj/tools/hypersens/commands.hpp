#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "run_config.hpp"

namespace hypersens::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailed = 1,  ///< ran to completion but the verdict was negative, or an unexpected error
  kExitInvalid = 2,
  kExitResource = 3,
  kExitNumerical = 4,
};

/// Each command writes its outputs into cfg.out and returns the metadata it
/// recorded. `log` receives a short human-readable summary.
nlohmann::ordered_json cmd_top_sim(const RunConfig& cfg, std::ostream& log);
nlohmann::ordered_json cmd_group_sweep(const RunConfig& cfg, std::ostream& log);
nlohmann::ordered_json cmd_angles(const RunConfig& cfg, std::ostream& log);
nlohmann::ordered_json cmd_theory(const RunConfig& cfg, std::ostream& log);
nlohmann::ordered_json cmd_classical(const RunConfig& cfg, std::ostream& log);
nlohmann::ordered_json cmd_haar_validate(const RunConfig& cfg, std::ostream& log);

/// Validates, takes the output-directory lock, dispatches, writes
/// <command>.json and maps exceptions to exit codes.
int run_command(const std::string& command, const RunConfig& cfg, std::ostream& log, std::ostream& err);

/// Full command-line entry point.
int run_main(int argc, const char* const* argv, std::ostream& log, std::ostream& err);

}  // namespace hypersens::cli
