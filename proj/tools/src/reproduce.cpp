#include "omitlab_cli/reproduce.hpp"

#include "omitlab/errors.hpp"
#include "omitlab/format.hpp"
#include "omitlab/response.hpp"
#include "omitlab/slowlight.hpp"
#include "omitlab/window.hpp"
#include "omitlab_cli/output.hpp"

#include <algorithm>
#include <cmath>

namespace omit::cli {

namespace {

struct Measured {
    double value = 0.0;
    double expected = 0.0;
    std::string tolerance;
    bool pass = false;
};

Measured within(double value, const FigureCheck& c, double expected, double grid_step) {
    Measured m{value, expected, {}, false};
    if (c.rel_tol) {
        m.tolerance = "rel " + g6(*c.rel_tol * 100.0) + "%";
        m.pass = std::abs(value - expected) <= *c.rel_tol * std::abs(expected);
    } else {
        const double tol = c.abs_tol_grid_step ? grid_step : c.abs_tol.value_or(0.0);
        m.tolerance = "abs " + g6(tol);
        m.pass = std::abs(value - expected) <= tol;
    }
    return m;
}

const SystemParams& set_of(const Figure& fig, std::size_t k) {
    if (k >= fig.sets.size())
        throw Error(ErrorCode::invalid_params, fig.name + " has no parameter set " + std::to_string(k));
    return fig.sets[k].params;
}

WindowSolution general_window(const SystemParams& s) { return perfect_window_general(s); }

double fwhm(const SystemParams& s) {
    const WindowSolution win = general_window(s);
    return window_width_numeric(win.apply(s), win);
}

// Numeric group delay at the window next to its closed form.
double numeric_window_delay(const SystemParams& s) {
    const WindowSolution win = general_window(s);
    return group_delay(win.apply(s), win.x_w).tau;
}

Measured measure(const Figure& fig, const FigureCheck& c) {
    const SystemParams& s = set_of(fig, c.set);
    const double step = (fig.x_max - fig.x_min) / static_cast<double>(fig.n - 1);
    const double expected = c.expected.value_or(0.0);
    const std::string& k = c.kind;

    if (k == "window_x_large_k2") return within(perfect_window_large_k2(s).x_w, c, expected, step);
    if (k == "window_beta2_large_k2")
        return within(perfect_window_large_k2(s).beta2, c, expected, step);
    if (k == "window_x_general") return within(general_window(s).x_w, c, expected, step);
    if (k == "window_beta2_general") return within(general_window(s).beta2, c, expected, step);
    if (k == "re_epsT_at_general_window") {
        const WindowSolution win = general_window(s);
        return within(eps_T(win.apply(s), win.x_w).real(), c, expected, step);
    }
    if (k == "width_closed_form") return within(window_width_equal_kappa(s), c, expected, step);
    if (k == "width_numeric_vs_closed_form")
        return within(fwhm(s), c, window_width_equal_kappa(s), step);
    if (k == "spectrum_min_location") {
        const auto pts = spectrum(s, fig.x_min, fig.x_max, fig.n);
        const auto lowest = std::min_element(
            pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.re < b.re; });
        return within(lowest->x, c, expected, step);
    }
    if (k == "window_slope_identity") {
        const WindowSolution win = general_window(s);
        const SystemParams at = win.apply(s);
        const double slope = -2.0 * at.kappa1 * response_jet(at, win.x_w).a_x.imag();
        return within(group_delay(at, win.x_w).tau, c, slope, step);
    }
    if (k == "delay_closed_form") return within(delay_at_window(s), c, expected, step);
    if (k == "delay_numeric_vs_closed_form")
        return within(numeric_window_delay(s), c, delay_at_window(s), step);
    if (k == "delay_max_ordering") {
        const SystemParams& o = set_of(fig, c.other.value());
        const double mine = max_delay_scan(s, fig.x_min, fig.x_max, fig.n).tau_star;
        const double theirs = max_delay_scan(o, fig.x_min, fig.x_max, fig.n).tau_star;
        return {mine, theirs, "value > expected", mine > theirs};
    }
    if (k == "absorption_re")
        return within(absorption_at_resonance(s).real(), c, expected, step);
    if (k == "absorption_ordering") {
        const SystemParams& o = set_of(fig, c.other.value());
        const double mine = absorption_at_resonance(s).real();
        const double theirs = absorption_at_resonance(o).real();
        return {mine, theirs, "value < expected", mine < theirs};
    }
    throw Error(ErrorCode::invalid_params, "unknown check kind '" + k + "'");
}

std::string summary_item(const std::string& key, const SystemParams& s) {
    if (key == "x_w") return "x_w=" + g6(general_window(s).x_w);
    if (key == "beta2") return "beta2=" + g6(general_window(s).beta2);
    if (key == "width") {
        if (std::abs(s.kappa1 - s.kappa2) <= 1e-12 * s.kappa1)
            return "width=" + g6(window_width_equal_kappa(s));
        return "width=" + g6(fwhm(s));
    }
    if (key == "tau") return "tau=" + g6(delay_at_window(s));
    if (key == "re_epsT0") return "re_epsT0=" + g6(absorption_at_resonance(s).real());
    return key + "=?";
}

std::string summarize(const Figure& fig) {
    std::string out = fig.name + ":";
    for (std::size_t k = 0; k < fig.sets.size(); ++k) {
        out += (k == 0 ? " " : "; ") + fig.sets[k].label + ":";
        for (const auto& key : fig.summary) {
            try {
                out += " " + summary_item(key, fig.sets[k].params);
            } catch (const Error& e) {
                out += " " + key + "=error(" + std::string(to_string(e.code())) + ")";
            }
        }
    }
    return out;
}

std::filesystem::path plot_file(const Figure& fig, std::size_t k,
                                const std::filesystem::path& dir) {
    if (fig.sets.size() == 1) return dir / (fig.name + ".csv");
    return dir / (fig.name + "_" + fig.sets[k].label + ".csv");
}

} // namespace

bool ReproduceReport::passed() const {
    return !checks.empty() &&
           std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
}

CheckResult evaluate_check(const Figure& fig, const FigureCheck& check) {
    CheckResult r;
    r.id = fig.name + "." + check.id;
    r.criterion = check.criterion;
    r.kind = check.kind;
    try {
        const Measured m = measure(fig, check);
        r.value = m.value;
        r.expected = m.expected;
        r.tolerance = m.tolerance;
        r.pass = m.pass;
    } catch (const Error& e) {
        r.pass = false;
        r.detail = e.what();
    }
    return r;
}

ReproduceReport reproduce(const std::string& figure, const std::filesystem::path& out_dir,
                          unsigned threads) {
    const Figure fig = load_figure(figure);
    ReproduceReport report;
    report.figure = fig.name;

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    for (std::size_t k = 0; k < fig.sets.size(); ++k) {
        const SystemParams& s = fig.sets[k].params;
        const auto file = plot_file(fig, k, out_dir);
        if (fig.quantity == "tau")
            write_text(file, delay_csv(delay_curve(s, fig.x_min, fig.x_max, fig.n, {}, threads)));
        else
            write_text(file, spectrum_csv(spectrum(s, fig.x_min, fig.x_max, fig.n,
                                                   ResponseMode::simplified, threads)));
        report.files.push_back(file);
    }

    for (const auto& c : fig.checks) report.checks.push_back(evaluate_check(fig, c));
    report.summary = summarize(fig);
    return report;
}

std::string format_check(const CheckResult& r) {
    std::string line = (r.pass ? "PASS " : "FAIL ") + r.id + " [criterion " +
                       std::to_string(r.criterion) + "]";
    if (!r.detail.empty()) return line + " error: " + r.detail;
    return line + " value=" + g12(r.value) + " expected=" + g12(r.expected) + " tol=" + r.tolerance;
}

void print_report(std::ostream& os, const ReproduceReport& report) {
    for (const auto& c : report.checks) os << format_check(c) << '\n';
    os << report.summary << '\n';
    std::size_t passed = 0;
    for (const auto& c : report.checks) passed += c.pass ? 1 : 0;
    os << report.figure << ": " << passed << "/" << report.checks.size() << " checks passed\n";
}

} // namespace omit::cli
