#pragma once

#include "omitlab/response.hpp"
#include "omitlab/slowlight.hpp"

#include <json.hpp>

#include <filesystem>
#include <span>
#include <string>

namespace omit::cli {

// Short form for summary lines.
std::string g6(double v);

std::string spectrum_csv(std::span<const ResponsePoint> pts);
std::string delay_csv(std::span<const DelayPoint> pts);

// Unwritable targets raise ConfigError on output.path.
void write_text(const std::filesystem::path& file, const std::string& body);
void write_json(const std::filesystem::path& file, const nlohmann::ordered_json& doc);

} // namespace omit::cli
