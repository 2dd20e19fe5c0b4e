#pragma once

#include "omitlab_cli/config.hpp"

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace omit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitSolver = 3;

struct RunResult {
    std::string summary;
    std::vector<std::filesystem::path> files;
    std::vector<std::string> lines;  // per-check report lines (reproduce only)
    bool checks_passed = true;
};

// Throws ConfigError or omit::Error; main() maps them to exit codes.
RunResult run(const RunConfig& cfg, unsigned threads = 0);

std::filesystem::path default_output_path(const RunConfig& cfg);

} // namespace omit::cli
