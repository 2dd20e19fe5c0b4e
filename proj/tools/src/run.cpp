#include "omitlab_cli/run.hpp"

#include "omitlab/errors.hpp"
#include "omitlab/format.hpp"
#include "omitlab/oracle.hpp"
#include "omitlab/slowlight.hpp"
#include "omitlab/steady_state.hpp"
#include "omitlab/window.hpp"
#include "omitlab_cli/output.hpp"
#include "omitlab_cli/reproduce.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace omit::cli {

namespace {

using nlohmann::ordered_json;

ordered_json header(const RunConfig& cfg) {
    ordered_json j;
    j["task"] = to_string(cfg.task);
    j["mode"] = cfg.reduced() ? "reduced" : "physical";
    if (!cfg.unit.empty()) j["unit"] = cfg.unit;
    return j;
}

RunResult done(std::string summary, const std::filesystem::path& out) {
    RunResult r;
    r.summary = std::move(summary);
    r.files.push_back(out);
    return r;
}

ordered_json complex_json(cplx z) { return ordered_json{{"re", z.real()}, {"im", z.imag()}}; }

RunResult run_spectrum(const RunConfig& cfg, const std::filesystem::path& out, unsigned threads) {
    const SystemParams s = system_params(cfg);
    const Grid& g = *cfg.grid;
    const auto pts = spectrum(s, g.x_min, g.x_max, g.n, cfg.response, threads);

    if (cfg.format == Format::csv) {
        write_text(out, spectrum_csv(pts));
    } else {
        ordered_json j = header(cfg);
        ordered_json rows = ordered_json::array();
        for (const auto& p : pts)
            rows.push_back({{"x", p.x}, {"re_epsT", p.re}, {"im_epsT", p.im},
                            {"abs_epsT", std::abs(p.eps_T)}});
        j["points"] = std::move(rows);
        write_json(out, j);
    }
    const auto lowest = std::min_element(pts.begin(), pts.end(),
                                         [](const auto& a, const auto& b) { return a.re < b.re; });
    return done("spectrum: n=" + std::to_string(pts.size()) + " min_re_epsT=" + g6(lowest->re) +
                " at x=" + g6(lowest->x), out);
}

WindowSolution solve_window(const RunConfig& cfg, const SystemParams& s) {
    WindowOptions opts;
    opts.criterion = cfg.criterion;
    return perfect_window_general(s, opts);
}

std::optional<double> closed_form_width(const SystemParams& s) {
    try {
        return window_width_equal_kappa(s);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::unequal_kappas) return std::nullopt;
        throw;
    }
}

RunResult run_window(const RunConfig& cfg, const std::filesystem::path& out) {
    const SystemParams s = system_params(cfg);
    WindowSolution win = solve_window(cfg, s);
    const double width = window_width_numeric(win.apply(s), win, cfg.response);

    if (cfg.format == Format::csv) {
        std::ostringstream os;
        os << "x_w,beta2,width,method\n"
           << g12(win.x_w) << ',' << g12(win.beta2) << ',' << g12(width) << ','
           << to_string(win.method) << '\n';
        write_text(out, os.str());
    } else {
        ordered_json j = header(cfg);
        j["x_w"] = win.x_w;
        j["beta2"] = win.beta2;
        j["width"] = width;
        j["method"] = std::string(to_string(win.method));
        j["xi"] = win.xi;
        if (win.eta) j["eta"] = *win.eta;
        j["iterations"] = win.iterations;
        ordered_json alts = ordered_json::array();
        for (const auto& a : win.alternates) alts.push_back({{"x", a.x}, {"beta2", a.beta2}});
        j["alternates"] = std::move(alts);
        j["warnings"] = win.warnings;
        write_json(out, j);
    }
    return done("window: x_w=" + g6(win.x_w) + " beta2=" + g6(win.beta2) + " width=" + g6(width), out);
}

RunResult run_width(const RunConfig& cfg, const std::filesystem::path& out) {
    const SystemParams s = system_params(cfg);
    const auto closed = closed_form_width(s);
    WindowSolution win = solve_window(cfg, s);
    const double numeric = window_width_numeric(win.apply(s), win, cfg.response);

    if (cfg.format == Format::csv) {
        std::ostringstream os;
        os << "width_closed_form,width_numeric,x_w,beta2\n"
           << (closed ? g12(*closed) : std::string("nan")) << ',' << g12(numeric) << ','
           << g12(win.x_w) << ',' << g12(win.beta2) << '\n';
        write_text(out, os.str());
    } else {
        ordered_json j = header(cfg);
        j["width_closed_form"] = closed ? ordered_json(*closed) : ordered_json(nullptr);
        j["width_numeric"] = numeric;
        j["x_w"] = win.x_w;
        j["beta2"] = win.beta2;
        write_json(out, j);
    }
    std::string summary = "width: width=" + g6(closed.value_or(numeric));
    summary += " fwhm=" + g6(numeric);
    return done(summary, out);
}

RunResult run_delay(const RunConfig& cfg, const std::filesystem::path& out, unsigned threads) {
    const SystemParams s = system_params(cfg);
    const Grid& g = *cfg.grid;
    DelayOptions opts;
    opts.mode = cfg.response;
    const auto pts = delay_curve(s, g.x_min, g.x_max, g.n, opts, threads);

    if (cfg.format == Format::csv) {
        write_text(out, delay_csv(pts));
    } else {
        ordered_json j = header(cfg);
        ordered_json rows = ordered_json::array();
        for (const auto& p : pts)
            rows.push_back({{"x", p.x}, {"tau", p.tau},
                            {"kind", std::string(to_string(p.classification))}});
        j["points"] = std::move(rows);
        write_json(out, j);
    }
    const auto top = std::max_element(pts.begin(), pts.end(),
                                      [](const auto& a, const auto& b) { return a.tau < b.tau; });
    std::string summary = "delay: tau_max=" + g6(top->tau) + " at x=" + g6(top->x);
    if (above_threshold(s)) summary += " tau_window=" + g6(delay_at_window(s));
    return done(summary, out);
}

RunResult run_absorption(const RunConfig& cfg, const std::filesystem::path& out) {
    const SystemParams s = system_params(cfg);
    const cplx e0 = absorption_at_resonance(s);
    if (cfg.format == Format::csv) {
        std::ostringstream os;
        os << "re_epsT0,im_epsT0,abs_epsT0\n"
           << g12(e0.real()) << ',' << g12(e0.imag()) << ',' << g12(std::abs(e0)) << '\n';
        write_text(out, os.str());
    } else {
        ordered_json j = header(cfg);
        j["eps_T0"] = complex_json(e0);
        j["abs_epsT0"] = std::abs(e0);
        write_json(out, j);
    }
    return done("absorption: re_epsT0=" + g6(e0.real()) + " im_epsT0=" + g6(e0.imag()), out);
}

RunResult run_simulate(const RunConfig& cfg, const std::filesystem::path& out) {
    const SimulationConfig& sim = *cfg.simulation;
    PhysicalParams phys;
    if (const auto* s = std::get_if<SystemParams>(&cfg.params)) {
        PhysicalParams partial;
        partial.g0 = sim.g0;
        phys = drive_for_target(*s, partial).phys;
    } else {
        phys = std::get<PhysicalParams>(cfg.params);
    }
    if (sim.delta == 0.0) throw ConfigError("simulation.delta", "must be nonzero");
    const double eps_p = sim.eps_p.value_or(phys.eps_p > 0.0 ? phys.eps_p : 1e-3 * phys.eps_c);
    if (!(eps_p > 0.0)) throw ConfigError("simulation.eps_p", "probe amplitude is zero");

    PhysicalParams probe_off = phys;
    probe_off.eps_p = 0.0;
    const auto states = steady_state(probe_off);
    const SteadyState& ss = states.roots[states.adiabatic_index];
    const SystemParams sys = reduced_from_physical(probe_off, ss);

    PhysicalParams run = phys;
    run.eps_p = eps_p;
    const double dt = sim.dt.value_or(default_oracle_step(run, sim.delta));
    const double t_end = sim.t_end.value_or(1.25 * relaxation_time(run) +
                                            40.0 * 2.0 * std::numbers::pi / std::abs(sim.delta));
    const auto traj = integrate(run, sim.delta, t_end, dt, {SimState{}, 0.0, sim.stride});
    const auto fit = extract_sidebands(traj, sim.delta, eps_p);
    const cplx ref = response_full(sys, sim.delta);
    const double err = std::abs(fit.a1p_fit - ref) / std::abs(ref);

    if (cfg.format == Format::csv) {
        std::ostringstream os;
        write_trajectory_csv(os, traj);
        write_text(out, os.str());
    } else {
        ordered_json j = header(cfg);
        j["delta"] = sim.delta;
        j["eps_p"] = eps_p;
        j["dt"] = dt;
        j["t_end"] = t_end;
        j["samples"] = traj.size();
        j["a1_plus_fit"] = complex_json(fit.a1p_fit);
        j["a1_plus_ref"] = complex_json(ref);
        j["a1_minus_fit"] = complex_json(fit.a1m_fit);
        j["rel_error"] = err;
        j["fit_residual_rms"] = fit.residual_rms;
        write_json(out, j);
    }
    return done("simulate: samples=" + std::to_string(traj.size()) + " rel_error=" + g6(err), out);
}

} // namespace

std::filesystem::path default_output_path(const RunConfig& cfg) {
    return to_string(cfg.task) + "." + to_string(cfg.format);
}

RunResult run(const RunConfig& cfg, unsigned threads) {
    const std::filesystem::path out = cfg.out_path ? std::filesystem::path(*cfg.out_path)
                                                   : default_output_path(cfg);
    switch (cfg.task) {
    case Task::spectrum: return run_spectrum(cfg, out, threads);
    case Task::window: return run_window(cfg, out);
    case Task::width: return run_width(cfg, out);
    case Task::delay: return run_delay(cfg, out, threads);
    case Task::absorption: return run_absorption(cfg, out);
    case Task::simulate: return run_simulate(cfg, out);
    case Task::reproduce: {
        const auto dir = cfg.out_path ? std::filesystem::path(*cfg.out_path)
                                      : std::filesystem::path(".");
        const auto report = reproduce(cfg.figure, dir, threads);
        RunResult r{report.summary, report.files, {}, report.passed()};
        for (const auto& c : report.checks) r.lines.push_back(format_check(c));
        return r;
    }
    }
    throw ConfigError("task", "unsupported");
}

} // namespace omit::cli
