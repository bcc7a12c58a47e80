#pragma once

#include <string>

#include <json.hpp>

#include "prodis/config.hpp"

namespace prodis::cli {

struct RunResult {
  bool checks_passed = true;
  nlohmann::json report;
  std::vector<std::string> artifacts;  // paths written, in write order
};

// Executes the experiment and writes its artifacts (effective_config.json,
// CSVs, report.json, SVG) into out_dir, creating the directory if needed.
// Rethrows CheckFailure for failing checks when config.strict is set.
RunResult run_experiment(const ExperimentConfig& config, const std::string& out_dir);

// Exit codes the command-line tool maps exceptions to.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitInvariant = 3;
inline constexpr int kExitCheckFailed = 4;

}  // namespace prodis::cli
