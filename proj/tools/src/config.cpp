#include "omitlab_cli/config.hpp"

#include "omitlab/errors.hpp"
#include "omitlab/steady_state.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <set>
#include <string_view>

namespace omit::cli {

namespace {

using nlohmann::json;

constexpr std::array kTasks{
    std::pair{Task::spectrum, "spectrum"}, std::pair{Task::window, "window"},
    std::pair{Task::width, "width"},       std::pair{Task::delay, "delay"},
    std::pair{Task::absorption, "absorption"}, std::pair{Task::simulate, "simulate"},
    std::pair{Task::reproduce, "reproduce"},
};

void reject_unknown(const json& obj, const std::string& where, std::set<std::string_view> allowed,
                    std::set<std::string_view> forbidden = {}, std::string_view why = {}) {
    for (const auto& [key, _] : obj.items()) {
        if (forbidden.contains(key))
            throw ConfigError(where + "." + key, std::string(why));
        if (!allowed.contains(key)) throw ConfigError(where + "." + key, "unknown key");
    }
}

double number(const json& obj, const std::string& where, const char* key,
              std::optional<double> fallback = std::nullopt) {
    const std::string field = where + "." + key;
    if (!obj.contains(key)) {
        if (fallback) return *fallback;
        throw ConfigError(field, "required");
    }
    const json& v = obj.at(key);
    if (!v.is_number()) throw ConfigError(field, "must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(field, "must be finite");
    return d;
}

std::optional<double> maybe_number(const json& obj, const std::string& where, const char* key) {
    if (!obj.contains(key)) return std::nullopt;
    return number(obj, where, key);
}

std::string text(const json& obj, const std::string& where, const char* key,
                 std::string fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_string()) throw ConfigError(where + "." + key, "must be a string");
    return v.get<std::string>();
}

std::size_t count(const json& obj, const std::string& where, const char* key) {
    const std::string field = where + "." + key;
    if (!obj.contains(key)) throw ConfigError(field, "required");
    const json& v = obj.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 1)
        throw ConfigError(field, "must be a positive integer");
    return static_cast<std::size_t>(v.get<long long>());
}

SystemParams parse_reduced(const json& p) {
    reject_unknown(p, "params",
                   {"omega_m", "gamma_m", "kappa1", "kappa2", "delta1", "delta2", "beta1", "beta2"},
                   {"g0", "m", "hbar", "eps_c", "eps_d", "eps_p", "delta_c", "delta_d"},
                   "not allowed in reduced mode");
    SystemParams s;
    s.omega_m = number(p, "params", "omega_m");
    s.gamma_m = number(p, "params", "gamma_m");
    s.kappa1 = number(p, "params", "kappa1");
    s.kappa2 = number(p, "params", "kappa2");
    s.delta1 = number(p, "params", "delta1", s.omega_m);
    s.delta2 = number(p, "params", "delta2", s.omega_m);
    s.beta1 = number(p, "params", "beta1");
    s.beta2 = number(p, "params", "beta2", 0.0);
    return s;
}

PhysicalParams parse_physical(const json& p) {
    reject_unknown(p, "params",
                   {"omega_m", "gamma_m", "kappa1", "kappa2", "g0", "m", "hbar", "delta_c",
                    "delta_d", "eps_c", "eps_d", "eps_p"},
                   {"beta1", "beta2", "delta1", "delta2"}, "not allowed in physical mode");
    PhysicalParams q;
    q.omega_m = number(p, "params", "omega_m");
    q.gamma_m = number(p, "params", "gamma_m");
    q.kappa1 = number(p, "params", "kappa1");
    q.kappa2 = number(p, "params", "kappa2");
    q.g0 = number(p, "params", "g0");
    q.m = number(p, "params", "m", 1.0);
    q.hbar = number(p, "params", "hbar", 1.0);
    q.delta_c = number(p, "params", "delta_c");
    q.delta_d = number(p, "params", "delta_d");
    q.eps_c = number(p, "params", "eps_c");
    q.eps_d = number(p, "params", "eps_d");
    q.eps_p = number(p, "params", "eps_p", 0.0);
    return q;
}

// Re-raise core validation failures as config errors naming the params block.
template <class P>
void check_params(const P& p) {
    try {
        validate(p);
    } catch (const Error& e) {
        throw ConfigError("params", e.what());
    }
}

} // namespace

std::optional<Task> parse_task(const std::string& name) {
    for (const auto& [t, n] : kTasks)
        if (name == n) return t;
    return std::nullopt;
}

std::string to_string(Task t) {
    for (const auto& [k, n] : kTasks)
        if (k == t) return n;
    return "unknown";
}

std::string to_string(Format f) { return f == Format::csv ? "csv" : "json"; }

RunConfig parse_config(const json& doc, std::optional<Task> task) {
    if (!doc.is_object()) throw ConfigError("$", "config must be a JSON object");
    reject_unknown(doc, "$",
                   {"mode", "unit", "task", "params", "grid", "response", "window", "simulation",
                    "output", "figure"});
    RunConfig cfg;

    const std::string mode = text(doc, "$", "mode", "");
    if (mode.empty()) throw ConfigError("mode", "required (reduced | physical)");
    if (!doc.contains("params") || !doc.at("params").is_object())
        throw ConfigError("params", "required object");
    if (mode == "reduced")
        cfg.params = parse_reduced(doc.at("params"));
    else if (mode == "physical")
        cfg.params = parse_physical(doc.at("params"));
    else
        throw ConfigError("mode", "must be reduced or physical, got '" + mode + "'");
    std::visit([](const auto& p) { check_params(p); }, cfg.params);

    cfg.unit = text(doc, "$", "unit", "");

    if (doc.contains("task")) {
        const std::string name = text(doc, "$", "task", "");
        const auto parsed = parse_task(name);
        if (!parsed) throw ConfigError("task", "unknown task '" + name + "'");
        if (task && *task != *parsed)
            throw ConfigError("task", "config says '" + name + "' but command is '" +
                                          to_string(*task) + "'");
        cfg.task = *parsed;
    } else if (task) {
        cfg.task = *task;
    } else {
        throw ConfigError("task", "required");
    }

    if (doc.contains("grid")) {
        const json& g = doc.at("grid");
        if (!g.is_object()) throw ConfigError("grid", "must be an object");
        reject_unknown(g, "grid", {"x_min", "x_max", "n"});
        Grid grid{number(g, "grid", "x_min"), number(g, "grid", "x_max"), count(g, "grid", "n")};
        if (!(grid.x_max > grid.x_min)) throw ConfigError("grid.x_max", "must exceed x_min");
        if (grid.n < 2) throw ConfigError("grid.n", "must be at least 2");
        cfg.grid = grid;
    }

    const std::string response = text(doc, "$", "response", "simplified");
    if (response == "simplified")
        cfg.response = ResponseMode::simplified;
    else if (response == "full")
        cfg.response = ResponseMode::full;
    else
        throw ConfigError("response", "must be simplified or full");

    if (doc.contains("window")) {
        const json& w = doc.at("window");
        if (!w.is_object()) throw ConfigError("window", "must be an object");
        reject_unknown(w, "window", {"criterion"});
        const std::string c = text(w, "window", "criterion", "real_tangent");
        if (c == "real_tangent")
            cfg.criterion = WindowCriterion::real_tangent;
        else if (c == "complex_pole")
            cfg.criterion = WindowCriterion::complex_pole;
        else
            throw ConfigError("window.criterion", "must be real_tangent or complex_pole");
    }

    if (doc.contains("simulation")) {
        const json& s = doc.at("simulation");
        if (!s.is_object()) throw ConfigError("simulation", "must be an object");
        reject_unknown(s, "simulation", {"delta", "t_end", "dt", "stride", "eps_p", "g0"});
        SimulationConfig sim;
        sim.delta = number(s, "simulation", "delta");
        sim.t_end = maybe_number(s, "simulation", "t_end");
        sim.dt = maybe_number(s, "simulation", "dt");
        if (s.contains("stride")) sim.stride = count(s, "simulation", "stride");
        sim.eps_p = maybe_number(s, "simulation", "eps_p");
        if (s.contains("g0")) {
            if (!cfg.reduced()) throw ConfigError("simulation.g0", "only used in reduced mode");
            sim.g0 = number(s, "simulation", "g0");
            if (!(sim.g0 > 0.0)) throw ConfigError("simulation.g0", "must be positive");
        }
        if (sim.t_end && !(*sim.t_end > 0.0))
            throw ConfigError("simulation.t_end", "must be positive");
        if (sim.dt && !(*sim.dt > 0.0)) throw ConfigError("simulation.dt", "must be positive");
        cfg.simulation = sim;
    }

    if (doc.contains("output")) {
        const json& o = doc.at("output");
        if (!o.is_object()) throw ConfigError("output", "must be an object");
        reject_unknown(o, "output", {"path", "format"});
        if (o.contains("path")) cfg.out_path = text(o, "output", "path", "");
        const std::string f = text(o, "output", "format", "csv");
        if (f == "csv")
            cfg.format = Format::csv;
        else if (f == "json")
            cfg.format = Format::json;
        else
            throw ConfigError("output.format", "must be csv or json");
    }

    cfg.figure = text(doc, "$", "figure", "");

    switch (cfg.task) {
    case Task::spectrum:
    case Task::delay:
        if (!cfg.grid) throw ConfigError("grid", "required for task " + to_string(cfg.task));
        break;
    case Task::simulate:
        if (!cfg.simulation) throw ConfigError("simulation", "required for task simulate");
        break;
    case Task::reproduce:
        if (cfg.figure.empty()) throw ConfigError("figure", "required for task reproduce");
        break;
    default:
        break;
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path& file, std::optional<Task> task) {
    std::ifstream in(file);
    if (!in) throw ConfigError("--config", "cannot open " + file.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("--config", std::string("invalid JSON: ") + e.what());
    }
    return parse_config(doc, task);
}

SystemParams system_params(const RunConfig& cfg) {
    if (const auto* s = std::get_if<SystemParams>(&cfg.params)) return *s;
    return reduced_from_physical(std::get<PhysicalParams>(cfg.params));
}

} // namespace omit::cli
