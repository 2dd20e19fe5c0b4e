#pragma once

#include "omitlab/params.hpp"
#include "omitlab_cli/config.hpp"

#include <json.hpp>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace omit::cli {

class UnknownFigure : public ConfigError {
public:
    explicit UnknownFigure(const std::string& name)
        : ConfigError("figure", "UnknownFigure: '" + name + "' (expected fig2 ... fig9)") {}
};

struct FigureSet {
    std::string label;
    SystemParams params;
};

struct FigureCheck {
    std::string id;
    int criterion = 0;
    std::string kind;
    std::size_t set = 0;
    std::optional<std::size_t> other;
    std::optional<double> expected;
    std::optional<double> rel_tol;
    std::optional<double> abs_tol;
    bool abs_tol_grid_step = false;
};

struct Figure {
    std::string name;
    std::string title;
    std::string quantity;  // re_epsT | im_epsT | tau
    double x_min = 0.0;
    double x_max = 0.0;
    std::size_t n = 0;
    std::vector<std::string> summary;
    std::vector<FigureSet> sets;
    std::vector<FigureCheck> checks;
};

// The embedded table, parsed once.
const nlohmann::json& figure_table();
int figure_table_version();
std::vector<std::string> figure_names();
Figure load_figure(const std::string& name);

} // namespace omit::cli
