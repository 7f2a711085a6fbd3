#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "catsim/config.hpp"

namespace catsim {

struct RunResult {
  std::string summary_json;
  std::vector<std::filesystem::path> files;  // CSV data files, then the summary
};

/// Runs the configured experiment, writing `<name>.csv` data file(s) and
/// `<name>_summary.json` into `out_dir` (created if needed). Output bytes are
/// a pure function of the configuration.
RunResult run_experiment(const RunConfig& config, const std::filesystem::path& out_dir);

}  // namespace catsim
