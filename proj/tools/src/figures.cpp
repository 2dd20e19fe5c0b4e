#include "omitlab_cli/figures.hpp"

namespace omit::cli {

namespace detail {
extern const char* const kFigureTable;
}

namespace {

using nlohmann::json;

SystemParams set_params(const json& p) {
    SystemParams s;
    s.omega_m = p.at("omega_m").get<double>();
    s.gamma_m = p.at("gamma_m").get<double>();
    s.kappa1 = p.at("kappa1").get<double>();
    s.kappa2 = p.at("kappa2").get<double>();
    s.delta1 = p.value("delta1", s.omega_m);
    s.delta2 = p.value("delta2", s.omega_m);
    s.beta1 = p.at("beta1").get<double>();
    s.beta2 = p.at("beta2").get<double>();
    return s;
}

FigureCheck parse_check(const json& c) {
    FigureCheck out;
    out.id = c.at("id").get<std::string>();
    out.criterion = c.at("criterion").get<int>();
    out.kind = c.at("kind").get<std::string>();
    out.set = c.value("set", std::size_t{0});
    if (c.contains("other")) out.other = c.at("other").get<std::size_t>();
    if (c.contains("expected")) out.expected = c.at("expected").get<double>();
    if (c.contains("rel_tol")) out.rel_tol = c.at("rel_tol").get<double>();
    if (c.contains("abs_tol")) {
        const json& t = c.at("abs_tol");
        if (t.is_string() && t.get<std::string>() == "grid_step")
            out.abs_tol_grid_step = true;
        else
            out.abs_tol = t.get<double>();
    }
    return out;
}

} // namespace

const json& figure_table() {
    static const json table = json::parse(detail::kFigureTable);
    return table;
}

int figure_table_version() { return figure_table().at("version").get<int>(); }

std::vector<std::string> figure_names() {
    std::vector<std::string> names;
    for (const auto& [name, _] : figure_table().at("figures").items()) names.push_back(name);
    return names;
}

Figure load_figure(const std::string& name) {
    const json& figs = figure_table().at("figures");
    if (!figs.contains(name)) throw UnknownFigure(name);
    const json& f = figs.at(name);
    Figure fig;
    fig.name = name;
    fig.title = f.at("title").get<std::string>();
    fig.quantity = f.at("quantity").get<std::string>();
    fig.x_min = f.at("x_range").at(0).get<double>();
    fig.x_max = f.at("x_range").at(1).get<double>();
    fig.n = f.at("n").get<std::size_t>();
    fig.summary = f.at("summary").get<std::vector<std::string>>();
    for (const auto& s : f.at("sets"))
        fig.sets.push_back({s.at("label").get<std::string>(), set_params(s.at("params"))});
    for (const auto& c : f.at("checks")) fig.checks.push_back(parse_check(c));
    return fig;
}

} // namespace omit::cli
