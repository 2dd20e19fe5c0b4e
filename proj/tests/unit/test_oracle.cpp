#include "omitlab/errors.hpp"
#include "omitlab/oracle.hpp"
#include "omitlab/response.hpp"
#include "omitlab/window.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

using namespace omit;

namespace {

// Fig. 2 caption set in units of omega_m.
const SystemParams kScaled = SystemParams{1e4, 1.0, 1e4, 1e4, 1e4, 1e4, 3e4, 1250.0}.scaled(1e-4);

PhysicalParams fig2_drive() {
    PhysicalParams partial;
    partial.g0 = 1e-3;
    return drive_for_target(kScaled, partial).phys;
}

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error raised");
    return ErrorCode::invalid_params;
}

} // namespace

TEST_CASE("undriven cavity decays") {
    PhysicalParams p;
    p.omega_m = 1.0;
    p.gamma_m = 0.01;
    p.kappa1 = 0.5;
    p.kappa2 = 0.3;
    p.delta_c = 1.0;
    p.delta_d = 1.0;
    IntegrateOptions opts;
    opts.initial.a1 = 1.0;
    opts.initial.a2 = cplx(0.0, 0.5);
    opts.initial.q = 0.2;
    const double t_relax = relaxation_time(p);
    const auto traj = integrate(p, 1.0, t_relax, max_stable_step(p), opts);
    CHECK(std::abs(traj.a1.back()) < 1e-4);
    CHECK(std::abs(traj.a2.back()) < 1e-4 * 0.5);
}

TEST_CASE("sample grid is exact") {
    PhysicalParams p;
    const double dt = max_stable_step(p);
    const double t_end = 37.3;
    IntegrateOptions opts;
    opts.t_start = 1.5;
    const auto traj = integrate(p, 1.0, t_end, dt, opts);
    CHECK(traj.size() == static_cast<std::size_t>(std::floor((t_end - 1.5) / dt)) + 1);
    for (std::size_t k = 0; k < traj.size(); ++k) CHECK(traj.t[k] == 1.5 + static_cast<double>(k) * dt);

    opts.stride = 4;
    const auto coarse = integrate(p, 1.0, t_end, dt, opts);
    CHECK(coarse.dt == 4.0 * dt);
    CHECK(coarse.t[3] == traj.t[12]);
}

TEST_CASE("step above the stability bound is rejected") {
    PhysicalParams p;
    CHECK_THROWS_AS(integrate(p, 1.0, 10.0, 1.01 * max_stable_step(p)), Error);
}

TEST_CASE("probe-off flow settles on the algebraic steady state") {
    PhysicalParams p = fig2_drive();
    const auto set = steady_state(p);
    const SteadyState& ss = set.roots[set.adiabatic_index];
    const auto traj = integrate(p, 1.0, 2.0 * relaxation_time(p), default_oracle_step(p), {{}, 0.0, 1000});
    CHECK(std::abs(traj.q.back() - ss.q0) <= 1e-6 * std::abs(ss.q0));
    CHECK(std::abs(traj.a1.back() - ss.a10) <= 1e-6 * std::abs(ss.a10));
    CHECK(std::abs(traj.a2.back() - ss.a20) <= 1e-6 * std::abs(ss.a20));
}

TEST_CASE("late-time state is step-independent") {
    const PhysicalParams p = fig2_drive();
    const double dt = default_oracle_step(p, 1.0);
    const double t_end = 1.25 * relaxation_time(p);
    const auto a = integrate(p, 1.0, t_end, dt, {{}, 0.0, 1000});
    const auto b = integrate(p, 1.0, t_end, 0.5 * dt, {{}, 0.0, 2000});
    REQUIRE(a.t.back() == b.t.back());
    CHECK(std::abs(a.q.back() - b.q.back()) <= 1e-8 * std::abs(b.q.back()));
}

TEST_CASE("RK4 error falls sixteenfold per step halving") {
    PhysicalParams p = fig2_drive();
    p.eps_p = 1e-3 * p.eps_c;
    const double dt = default_oracle_step(p, 1.0);
    std::vector<cplx> end;
    for (int k : {1, 2, 4}) {
        const auto t = integrate(p, 1.0, 200.0, dt / k, {{}, 0.0, static_cast<std::size_t>(k)});
        end.push_back(t.a1.back());
    }
    const double ratio = std::abs(end[0] - end[1]) / std::abs(end[1] - end[2]);
    CHECK(ratio > 14.0);
    CHECK(ratio < 18.0);
}

TEST_CASE("three-tone fit recovers a constructed signal") {
    const double delta = 0.83;
    const cplx c0(1.5, -0.25), cp(0.03, 0.7), cm(-0.4, 0.11);
    std::vector<double> t;
    std::vector<cplx> y;
    for (int k = 0; k < 4000; ++k) {
        const double tk = 0.05 * k;
        t.push_back(tk);
        y.push_back(c0 + cp * std::polar(1.0, -delta * tk) + cm * std::polar(1.0, delta * tk));
    }
    const ToneFit f = fit_three_tone(t, y, delta);
    CHECK(std::abs(f.c0 - c0) <= 1e-12 * std::abs(c0));
    CHECK(std::abs(f.c_plus - cp) <= 1e-12 * std::abs(cp));
    CHECK(std::abs(f.c_minus - cm) <= 1e-12 * std::abs(cm));
    CHECK(f.residual_rms <= 1e-12);
}

TEST_CASE("too short a record is ill-conditioned") {
    PhysicalParams p;
    p.eps_p = 1e-3;
    const auto traj = integrate(p, 0.1, 50.0, max_stable_step(p));
    CHECK(code_of([&] { extract_sidebands(traj, 0.1, p.eps_p, FitWindow{0.0, 50.0}); }) ==
          ErrorCode::ill_conditioned);
}

TEST_CASE("bare cavity is reproduced to 1e-6") {
    PhysicalParams p;
    p.omega_m = 1.0;
    p.gamma_m = 0.01;
    p.kappa1 = 0.5;
    p.kappa2 = 0.5;
    p.g0 = 1e-3;
    p.delta_c = 1.0;
    p.delta_d = 1.0;
    p.eps_p = 1e-2;
    const double deltas[] = {0.7, 1.0, 1.4};
    const OracleReport r = validate_perturbative(p, deltas);
    for (const auto& pt : r.points) {
        REQUIRE_FALSE(pt.error.has_value());
        CHECK(pt.rel_error <= 1e-6);
    }
    CHECK(r.passed);
}

TEST_CASE("time-domain extraction across the scaled Fig. 2 window") {
    const PhysicalParams p = fig2_drive();
    const WindowSolution w = perfect_window_large_k2(kScaled);
    const double width = window_width_equal_kappa(kScaled);
    std::vector<double> deltas;
    for (double f : {-1.0, -0.5, 0.25, 0.5, 1.0}) deltas.push_back(1.0 + w.x_w + f * width);
    const OracleReport r = validate_perturbative(p, deltas);
    CHECK(r.passed);
    CHECK(r.max_error <= 1e-2);
    CHECK(r.median_error <= r.max_error);
    for (const auto& pt : r.points) {
        REQUIRE_FALSE(pt.error.has_value());
        CHECK(pt.a1m_rel_error <= 1e-2);
        CHECK(pt.residual_rms <= 1e-3);
    }
}

TEST_CASE("fitted response is transparent at the window") {
    PhysicalParams p = fig2_drive();
    p.eps_p = 1e-3 * p.eps_c;
    const double delta = 1.0 + perfect_window_large_k2(kScaled).x_w;
    const double t_end = 1.25 * relaxation_time(p) + 40.0 * 2.0 * std::numbers::pi / delta;
    const auto traj = integrate(p, delta, t_end, default_oracle_step(p), {{}, 0.0, 10});
    const SidebandFit fit = extract_sidebands(traj, delta, p.eps_p);
    CHECK(std::abs(2.0 * p.kappa1 * fit.a1p_fit.real()) <= 1e-2);
    CHECK(std::abs(std::conj(fit.q_minus_fit) - fit.q_plus_fit) <= 1e-2 * std::abs(fit.q_plus_fit));
}

TEST_CASE("linear response: halving the probe leaves the fit unchanged") {
    const PhysicalParams p = fig2_drive();
    const double delta = 1.0 + perfect_window_large_k2(kScaled).x_w + window_width_equal_kappa(kScaled);
    const double deltas[] = {delta};
    OracleOptions full, half;
    full.eps_p = 1e-3 * p.eps_c;
    half.eps_p = 0.5e-3 * p.eps_c;
    const auto a = validate_perturbative(p, deltas, full).points[0];
    const auto b = validate_perturbative(p, deltas, half).points[0];
    CHECK(std::abs(a.a1p_fit - b.a1p_fit) <= 1e-4 * std::abs(b.a1p_fit));
}

TEST_CASE("nonlinear error grows quadratically with the probe") {
    const PhysicalParams p = fig2_drive();
    const double delta = 1.0 + perfect_window_large_k2(kScaled).x_w + 0.5 * window_width_equal_kappa(kScaled);
    const double deltas[] = {delta};
    // Differences against a tiny probe remove the probe-independent step error.
    OracleOptions ref;
    ref.eps_p = 1e-4 * p.eps_c;
    const cplx base = validate_perturbative(p, deltas, ref).points[0].a1p_fit;
    std::vector<double> dev;
    for (double e : {0.03, 0.1}) {
        OracleOptions o;
        o.eps_p = e * p.eps_c;
        dev.push_back(std::abs(validate_perturbative(p, deltas, o).points[0].a1p_fit - base));
    }
    const double slope = std::log(dev[1] / dev[0]) / std::log(0.1 / 0.03);
    CHECK(slope >= 1.6);
    CHECK(slope <= 2.4);
}

TEST_CASE("failing points are recorded without aborting the rest") {
    const PhysicalParams p = fig2_drive();
    const double deltas[] = {1.0 + 2.0 * window_width_equal_kappa(kScaled), 1e-9};
    OracleOptions opts;
    opts.t_end = 2.0 * relaxation_time(p);
    const OracleReport r = validate_perturbative(p, deltas, opts);
    REQUIRE(r.points.size() == 2);
    CHECK_FALSE(r.points[0].error.has_value());
    CHECK(r.points[1].error.has_value());
    CHECK_FALSE(r.passed);
}

TEST_CASE("trajectory CSV schema") {
    PhysicalParams p;
    const auto traj = integrate(p, 1.0, 1.0, max_stable_step(p));
    std::ostringstream os;
    write_trajectory_csv(os, traj);
    std::istringstream in(os.str());
    std::string header;
    std::getline(in, header);
    CHECK(header == "t,re_a1,im_a1,re_a2,im_a2,q,p");
    std::size_t rows = 0;
    for (std::string line; std::getline(in, line);) ++rows;
    CHECK(rows == traj.size());
}
