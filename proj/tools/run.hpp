// run.hpp — subcommand dispatch

#pragma once

#include "config.hpp"

#include <json.hpp>

#include <filesystem>
#include <vector>

namespace starnet::cli {

struct RunOutcome {
    int exit_code{0};          // 0 ok, 1 parameter error, 2 numeric/resource error
    nlohmann::json report;     // always carries "status" and, on failure, "error.code"
    std::vector<std::filesystem::path> artifacts;
};

// Runs one command and writes its artifacts into `out_dir` (created if needed).
// Errors are caught and encoded in the outcome; report.json is still written
// when the directory is usable.
RunOutcome run(Command command, const RunConfig& cfg, const std::filesystem::path& out_dir);

// Report for a configuration that could not be loaded. Returns the exit code.
RunOutcome config_failure(Command command, const Error& error, const std::filesystem::path& out_dir);

} // namespace starnet::cli
