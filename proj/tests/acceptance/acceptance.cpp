// Acceptance suite: one PASS/FAIL line per criterion.
// Usage: omitlab_acceptance [--criterion N ...] [--omit-lab PATH] [--workdir DIR]

#include "omitlab/omitlab.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace omit;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = true;
    std::vector<std::string> notes;

    void require(bool ok, const std::string& what) {
        if (!ok) pass = false;
        notes.push_back(std::string(ok ? "ok " : "MISS ") + what);
    }
};

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.8g", v);
    return buf;
}

double rel(double value, double expected) { return std::abs(value - expected) / std::abs(expected); }

void near_rel(Outcome& o, const std::string& name, double value, double expected, double tol) {
    o.require(rel(value, expected) <= tol, name + "=" + num(value) + " (want " + num(expected) +
                                               " rel " + num(tol) + ")");
}

double elapsed_ms(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// Reduced sets quoted in the figure captions (unit: bare caption numbers).
SystemParams equal_kappa(double kappa, double gamma, double beta1, double beta2 = 0.0) {
    return {1e4, gamma, kappa, kappa, 1e4, 1e4, beta1, beta2};
}

SystemParams small_kappa2(double kappa2, double beta2) {
    return {1e4, 1.0, 4e3, kappa2, 1e4, 1e4, 1e5, beta2};
}

// 1. Closed-form window for the Fig. 2 set, and its cost.
Outcome window_large_k2() {
    Outcome o;
    const SystemParams s = equal_kappa(1e4, 1.0, 3e4);
    const int reps = 1000;
    WindowSolution w;
    const auto t0 = Clock::now();
    for (int k = 0; k < reps; ++k) w = perfect_window_large_k2(s);
    const double per_call = elapsed_ms(t0) / reps;
    near_rel(o, "x_w", w.x_w, -1.25, 5e-3);
    near_rel(o, "beta2", w.beta2, 1250.0, 5e-3);
    o.require(per_call < 1.0, "runtime " + num(per_call) + " ms < 1 ms");
    return o;
}

// 2. Window strength at higher damping.
Outcome window_high_damping() {
    Outcome o;
    near_rel(o, "beta2(gamma=10)", perfect_window_large_k2(equal_kappa(1e4, 10.0, 3e5)).beta2,
             1.25e4, 5e-3);
    near_rel(o, "beta2(gamma=100)", perfect_window_large_k2(equal_kappa(1e4, 100.0, 3e6)).beta2,
             1.25e5, 5e-3);
    return o;
}

// 3. Equal-kappa widths and the numeric FWHM.
Outcome widths() {
    Outcome o;
    const struct {
        SystemParams s;
        double expected;
    } cases[] = {{equal_kappa(1e4, 1.0, 3e4), 5.998},
                 {equal_kappa(1e4, 10.0, 3e5), 59.83},
                 {equal_kappa(1e4, 100.0, 3e6), 583.79}};
    for (const auto& c : cases) {
        const double closed = window_width_equal_kappa(c.s);
        near_rel(o, "width", closed, c.expected, 2e-3);
        const WindowSolution w = perfect_window_general(c.s);
        near_rel(o, "fwhm", window_width_numeric(w.apply(c.s), w), closed, 2e-2);
    }
    return o;
}

// 4. Small-kappa2 window by numeric root.
Outcome window_small_k2() {
    Outcome o;
    const SystemParams s = small_kappa2(10.0, 0.0);
    const WindowSolution w = perfect_window_general(s);
    near_rel(o, "x_w", w.x_w, -5.55, 1e-2);
    near_rel(o, "beta2", w.beta2, 5.91, 1e-2);
    const double re = eps_T(w.apply(s), w.x_w).real();
    o.require(std::abs(re) <= 1e-3, "|Re eps_T(x_w)|=" + num(std::abs(re)) + " <= 1e-3");
    return o;
}

// 5. Delays: closed form, numeric at the window, resolved/unresolved ordering.
Outcome delays() {
    Outcome o;
    const SystemParams red = equal_kappa(1e4, 1.0, 3e4, 1250.0);
    const SystemParams blue = equal_kappa(1e4, 10.0, 3e5, 1.25e4);
    const SystemParams unresolved = equal_kappa(2e4, 1.0, 3e4, 1e4);
    const SystemParams resolved = equal_kappa(8e3, 1.0, 3e4, 160.0);
    near_rel(o, "tau(red)", delay_at_window(red), 0.67, 1e-2);
    near_rel(o, "tau(blue)", delay_at_window(blue), 0.067, 1e-2);
    near_rel(o, "tau(unresolved)", delay_at_window(unresolved), 1.33, 1e-2);
    for (const SystemParams& s : {red, blue, unresolved}) {
        const WindowSolution w = perfect_window_general(s);
        near_rel(o, "group_delay(x_w)", group_delay(w.apply(s), w.x_w).tau, delay_at_window(s),
                 1e-2);
    }
    const double t_unres = max_delay_scan(unresolved, -50.0, 50.0, 2001).tau_star;
    const double t_res = max_delay_scan(resolved, -50.0, 50.0, 2001).tau_star;
    o.require(t_unres > t_res, "tau_max(2e4)=" + num(t_unres) + " > tau_max(8e3)=" + num(t_res));
    return o;
}

// 6. Absorption values.
Outcome absorption() {
    Outcome o;
    near_rel(o, "Re eps_T(0) kappa2=10", absorption_at_resonance(small_kappa2(10.0, 100.0)).real(),
             0.58, 2e-2);
    near_rel(o, "Re eps_T(0) kappa2=1", absorption_at_resonance(small_kappa2(1.0, 100.0)).real(),
             1.60, 2e-2);
    near_rel(o, "Re eps_T(0) beta2=1e5", absorption_at_resonance(small_kappa2(10.0, 1e5)).real(),
             1.9995, 1e-3);
    return o;
}

// 7. Back-substitution versus the closed form.
Outcome algebraic_equivalence() {
    Outcome o;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    const auto t0 = Clock::now();
    for (int draw = 0; draw < 20; ++draw) {
        SystemParams s;
        s.omega_m = 1e4;
        s.gamma_m = 0.5 + 20.0 * u(rng);
        s.kappa1 = 1e4 * (0.5 + 1.5 * u(rng));
        s.kappa2 = 1e4 * (0.5 + 1.5 * u(rng));
        s.delta1 = s.omega_m * (0.99 + 0.02 * u(rng));
        s.delta2 = s.omega_m * (0.99 + 0.02 * u(rng));
        s.beta1 = 1e4 + 9e4 * u(rng);
        s.beta2 = 1e2 + 1e4 * u(rng);
        PhysicalParams unit;
        unit.g0 = 1.0;
        const auto design = drive_for_target(s, unit);
        const SystemParams realized = reduced_from_physical(design.phys, design.state);
        for (double x : uniform_grid(-300.0, 300.0, 100)) {
            const double delta = s.omega_m + x;
            const cplx closed = response_full(realized, delta);
            const cplx solved = sideband_solve(design.phys, design.state, delta).a1_plus;
            worst = std::max(worst, std::abs(solved - closed) / std::abs(closed));
        }
    }
    const double ms = elapsed_ms(t0);
    o.require(worst <= 1e-10, "max rel diff " + num(worst) + " <= 1e-10 (2000 points)");
    o.require(ms < 1000.0, "runtime " + num(ms) + " ms < 1 s");
    return o;
}

// 8. Time-domain oracle on the scaled Fig. 2 window.
Outcome oracle_equivalence() {
    Outcome o;
    const auto t0 = Clock::now();
    const SystemParams scaled = equal_kappa(1e4, 1.0, 3e4, 1250.0).scaled(1e-4);
    PhysicalParams partial;
    partial.g0 = 1e-3;
    const auto design = drive_for_target(scaled, partial);

    const WindowSolution w = perfect_window_large_k2(scaled);
    const double width = window_width_equal_kappa(scaled);
    std::vector<double> deltas;
    for (double f : {-1.0, -0.5, 0.25, 0.5, 1.0})
        deltas.push_back(scaled.omega_m + w.x_w + f * width);

    OracleOptions opts;
    opts.eps_p = 1e-3 * design.phys.eps_c;
    const OracleReport report = validate_perturbative(design.phys, deltas, opts);
    for (const auto& pt : report.points) {
        if (pt.error) {
            o.require(false, "delta=" + num(pt.delta) + " error: " + *pt.error);
            continue;
        }
        o.require(pt.rel_error <= 1e-2,
                  "delta=" + num(pt.delta) + " rel err " + num(pt.rel_error) + " <= 1e-2");
    }

    // Probe-off flow from rest settles on the algebraic fixed point.
    PhysicalParams off = design.phys;
    off.eps_p = 0.0;
    const double t_end = 2.0 * relaxation_time(off);
    const auto traj = integrate(off, 1.0, t_end, default_oracle_step(off), {{}, 0.0, 1000});
    const std::size_t last = traj.size() - 1;
    const auto states = steady_state(off);
    const SteadyState& ss = states.roots[states.adiabatic_index];
    const double dq = std::abs(traj.q[last] - ss.q0) / std::abs(ss.q0);
    const double da1 = std::abs(traj.a1[last] - ss.a10) / std::abs(ss.a10);
    const double da2 = std::abs(traj.a2[last] - ss.a20) / std::abs(ss.a20);
    o.require(std::max({dq, da1, da2}) <= 1e-6,
              "fixed point q0/a10/a20 rel " + num(dq) + "/" + num(da1) + "/" + num(da2) + " <= 1e-6");

    const double s = elapsed_ms(t0) / 1000.0;
    o.require(s <= 600.0, "runtime " + num(s) + " s <= 600 s");
    return o;
}

PhysicalParams random_physical(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    PhysicalParams p;
    p.omega_m = 1.0;
    p.gamma_m = 1e-4 + 1e-2 * u(rng);
    p.kappa1 = 0.2 + 2.0 * u(rng);
    p.kappa2 = 0.2 + 2.0 * u(rng);
    p.g0 = 1e-3 * (0.1 + u(rng));
    p.delta_c = 0.5 + u(rng);
    p.delta_d = 0.5 + u(rng);
    p.eps_c = 30.0 * u(rng);
    p.eps_d = 30.0 * u(rng);
    return p;
}

// 9. Property suite.
Outcome properties() {
    Outcome o;

    {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        double worst = 0.0;
        for (int k = 0; k < 1000; ++k) {
            const PhysicalParams p = random_physical(rng);
            const auto set = steady_state(p);
            const SteadyState& ss = set.roots[set.adiabatic_index];
            const double delta = 0.5 + u(rng);
            const auto sb = sideband_solve(p, ss, delta, SidebandMethod::dense);
            const double scale = std::max(std::abs(sb.q_plus), 1e-300);
            worst = std::max(worst, std::abs(std::conj(sb.q_minus) - sb.q_plus) / scale);
        }
        o.require(worst <= 1e-12, "conj(q-)=q+ over 1000 draws, max rel " + num(worst));
    }

    {
        const SystemParams below = equal_kappa(1e4, 1.0, 2e4);
        int raised = 0;
        const std::function<void()> calls[] = {
            [&] { perfect_window_large_k2(below); },
            [&] { perfect_window_general(below); },
            [&] { delay_at_window(below); },
        };
        for (const auto& call : calls) {
            try {
                call();
            } catch (const Error& e) {
                raised += e.code() == ErrorCode::below_threshold;
            }
        }
        o.require(raised == 3, "BelowThreshold raised by " + std::to_string(raised) + "/3 solvers");
    }

    {
        const SystemParams s = equal_kappa(1e4, 1.0, 3e4);
        const double bound = 2.0 * s.omega_m * s.beta1 /
                             (s.kappa1 * s.kappa1 + 4.0 * s.omega_m * s.omega_m);
        double lowest = INFINITY;
        for (double b2 : uniform_grid(1e-6 * s.beta1, 10.0 * s.beta1, 100001))
            lowest = std::min(lowest, std::abs(window_residual(s, 0.0, b2)));
        o.require(lowest >= bound, "min |residual(x=0)| " + num(lowest) + " >= " + num(bound));
    }

    {
        const SystemParams base = equal_kappa(1e4, 1.0, 3e4, 1250.0);
        double worst_eps = 0.0, worst_tau = 0.0;
        for (double s : {1e-4, 1e4}) {
            const SystemParams scaled = base.scaled(s);
            for (double x : uniform_grid(-30.0, 30.0, 61)) {
                const cplx a = eps_T(base, x);
                const cplx b = eps_T(scaled, s * x);
                worst_eps = std::max(worst_eps, std::abs(a - b) / std::abs(a));
                const double ta = group_delay(base, x).tau;
                const double tb = s * group_delay(scaled, s * x).tau;
                worst_tau = std::max(worst_tau, std::abs(ta - tb) / std::abs(ta));
            }
        }
        o.require(worst_eps <= 1e-9, "scale invariance eps_T max rel " + num(worst_eps));
        o.require(worst_tau <= 1e-6, "scale covariance s*tau max rel " + num(worst_tau));
    }

    {
        double worst = 0.0;
        for (const SystemParams& base :
             {equal_kappa(1e4, 1.0, 3e4), equal_kappa(1e4, 10.0, 3e5), equal_kappa(2e4, 1.0, 3e4)}) {
            const WindowSolution w = perfect_window_general(base);
            const SystemParams s = w.apply(base);
            const double h = 1e-5 * window_width_equal_kappa(base);
            auto im = [&](double x) { return eps_T(s, x).imag(); };
            const double d1 = (im(w.x_w + h) - im(w.x_w - h)) / (2.0 * h);
            const double d2 = (im(w.x_w + 0.5 * h) - im(w.x_w - 0.5 * h)) / h;
            const double slope = -(4.0 * d2 - d1) / 3.0;
            const double tau = group_delay(s, w.x_w).tau;
            worst = std::max(worst, std::abs(tau - slope) / std::abs(slope));
        }
        o.require(worst <= 1e-6, "tau(x_w) = -dIm/dx max rel " + num(worst));
    }
    return o;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// 10. reproduce figN through the installed CLI, twice.
Outcome cli_reproduce(const std::string& omit_lab, const fs::path& workdir) {
    Outcome o;
    if (omit_lab.empty()) {
        o.require(false, "omit-lab path not given");
        return o;
    }
    for (int n = 2; n <= 9; ++n) {
        const std::string fig = "fig" + std::to_string(n);
        std::vector<fs::path> runs;
        bool exits_ok = true;
        for (const char* tag : {"a", "b"}) {
            const fs::path dir = workdir / tag / fig;
            fs::remove_all(dir);
            fs::create_directories(dir);
            const fs::path log = dir / "stdout.txt";
            const std::string cmd = "\"" + omit_lab + "\" reproduce " + fig + " --out \"" +
                                    dir.string() + "\" > \"" + log.string() + "\" 2>&1";
            const int rc = std::system(cmd.c_str());
            if (rc != 0) {
                exits_ok = false;
                std::string failed;
                std::istringstream lines(slurp(log));
                for (std::string line; std::getline(lines, line);)
                    if (line.rfind("FAIL", 0) == 0) failed += " [" + line + "]";
                if (std::string(tag) == "a") o.require(false, fig + " exit status nonzero:" + failed);
            }
            runs.push_back(dir);
        }
        if (exits_ok) o.require(true, fig + " exit 0, all checks PASS");

        bool same = true;
        for (const auto& entry : fs::directory_iterator(runs[0])) {
            const fs::path other = runs[1] / entry.path().filename();
            if (!fs::exists(other) || slurp(entry.path()) != slurp(other)) same = false;
        }
        o.require(same, fig + " outputs byte-identical across runs");
    }
    return o;
}

struct Criterion {
    int id;
    const char* title;
    std::function<Outcome()> run;
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"omitlab acceptance suite"};
    std::vector<int> selected;
    std::string omit_lab;
    std::string workdir = (fs::temp_directory_path() / "omitlab_acceptance").string();
    app.add_option("--criterion", selected, "Criteria to run (default: all)")
        ->check(CLI::Range(1, 10));
    app.add_option("--omit-lab", omit_lab, "Path to the omit-lab executable");
    app.add_option("--workdir", workdir, "Scratch directory for CLI outputs");
    CLI11_PARSE(app, argc, argv);

    const std::vector<Criterion> all{
        {1, "window location/strength, large kappa2", window_large_k2},
        {2, "window strength at higher damping", window_high_damping},
        {3, "window widths", widths},
        {4, "small-kappa2 numeric window", window_small_k2},
        {5, "group delays", delays},
        {6, "induced absorption at resonance", absorption},
        {7, "sideband solve vs closed form", algebraic_equivalence},
        {8, "time-domain oracle", oracle_equivalence},
        {9, "property suite", properties},
        {10, "CLI reproduce", [&] { return cli_reproduce(omit_lab, workdir); }},
    };

    bool all_pass = true;
    for (const auto& c : all) {
        if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end())
            continue;
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        all_pass = all_pass && o.pass;
        std::cout << "criterion " << c.id << ": " << (o.pass ? "PASS" : "FAIL") << "  " << c.title
                  << '\n';
        for (const auto& n : o.notes) std::cout << "    " << n << '\n';
    }
    return all_pass ? 0 : 1;
}
