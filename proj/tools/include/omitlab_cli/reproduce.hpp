#pragma once

#include "omitlab_cli/figures.hpp"

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace omit::cli {

struct CheckResult {
    std::string id;  // fig2.x_w
    int criterion = 0;
    std::string kind;
    double value = 0.0;
    double expected = 0.0;
    std::string tolerance;  // human-readable, e.g. "rel 0.5%"
    bool pass = false;
    std::string detail;  // solver error text when the check could not be evaluated
};

struct ReproduceReport {
    std::string figure;
    std::vector<CheckResult> checks;
    std::vector<std::filesystem::path> files;
    std::string summary;
    bool passed() const;
};

// Solver errors inside a check are recorded as FAIL with detail; they do not abort.
ReproduceReport reproduce(const std::string& figure, const std::filesystem::path& out_dir,
                          unsigned threads = 0);

// Evaluates one check without computing plot data.
CheckResult evaluate_check(const Figure& fig, const FigureCheck& check);

std::string format_check(const CheckResult& r);
void print_report(std::ostream& os, const ReproduceReport& report);

} // namespace omit::cli
