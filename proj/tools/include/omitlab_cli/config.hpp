#pragma once

#include "omitlab/params.hpp"
#include "omitlab/response.hpp"
#include "omitlab/window.hpp"

#include <json.hpp>

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

namespace omit::cli {

// Validation failure; field() is the JSON path of the offending entry.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& what)
        : std::runtime_error(field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

enum class Task { spectrum, window, width, delay, absorption, simulate, reproduce };
enum class Format { csv, json };

std::optional<Task> parse_task(const std::string& name);
std::string to_string(Task t);
std::string to_string(Format f);

struct Grid {
    double x_min = 0.0;
    double x_max = 0.0;
    std::size_t n = 0;
};

struct SimulationConfig {
    double delta = 0.0;              // probe detuning omega_p - omega_c
    std::optional<double> t_end;
    std::optional<double> dt;
    std::size_t stride = 1;
    std::optional<double> eps_p;
    double g0 = 1e-3;                // used to realize reduced-mode parameters
};

struct RunConfig {
    std::variant<SystemParams, PhysicalParams> params;
    Task task = Task::spectrum;
    std::optional<Grid> grid;
    ResponseMode response = ResponseMode::simplified;
    WindowCriterion criterion = WindowCriterion::real_tangent;
    std::optional<SimulationConfig> simulation;
    std::optional<std::string> out_path;
    Format format = Format::csv;
    std::string unit;
    std::string figure;

    bool reduced() const { return std::holds_alternative<SystemParams>(params); }
};

// `task` comes from the command line; a task key in the document must agree with it.
RunConfig parse_config(const nlohmann::json& doc, std::optional<Task> task = std::nullopt);
RunConfig load_config(const std::filesystem::path& file, std::optional<Task> task = std::nullopt);

// Reduced parameters for the response tasks; physical configs go through steady_state.
SystemParams system_params(const RunConfig& cfg);

} // namespace omit::cli
