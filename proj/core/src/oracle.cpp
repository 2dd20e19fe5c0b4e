#include "omitlab/oracle.hpp"

#include "omitlab/errors.hpp"
#include "omitlab/format.hpp"
#include "omitlab/parallel.hpp"
#include "omitlab/response.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace omit {

namespace {

constexpr cplx I{0.0, 1.0};
constexpr double kTwoPi = 2.0 * std::numbers::pi;

SimState operator+(const SimState& a, const SimState& b) {
    return {a.a1 + b.a1, a.a2 + b.a2, a.q + b.q, a.p + b.p};
}

SimState operator*(double s, const SimState& a) { return {s * a.a1, s * a.a2, s * a.q, s * a.p}; }

struct BlowupLimits {
    double a, q, p;
};

BlowupLimits blowup_limits(const PhysicalParams& p, const SimState& y0) {
    const double a_scale = std::max((p.eps_c + p.eps_p) / p.kappa1 + p.eps_d / p.kappa2 +
                                        std::abs(y0.a1) + std::abs(y0.a2),
                                    1e-100);
    const double q_scale =
        std::max(p.hbar * p.g0 * a_scale * a_scale / (p.m * p.omega_m * p.omega_m) +
                     std::abs(y0.q) + std::abs(y0.p) / (p.m * p.omega_m),
                 1e-100);
    return {1e12 * a_scale, 1e12 * q_scale, 1e12 * q_scale * p.m * p.omega_m};
}

} // namespace

double max_stable_step(const PhysicalParams& p) {
    const double fastest = std::max({p.omega_m, std::abs(p.delta_c), std::abs(p.delta_d),
                                     p.kappa1, p.kappa2});
    return kTwoPi / (40.0 * fastest);
}

double default_oracle_step(const PhysicalParams& p, double delta) {
    const double step = 0.5 * max_stable_step(p);
    if (delta == 0.0) return step;
    return std::min(step, kTwoPi / (80.0 * std::abs(delta)));
}

double relaxation_time(const PhysicalParams& p) {
    double slowest = std::min(p.kappa1, p.kappa2);
    if (p.gamma_m > 0.0) slowest = std::min(slowest, 0.5 * p.gamma_m);
    return 12.0 / slowest;
}

SimState mean_field_rhs(const PhysicalParams& p, double delta, double t, const SimState& y) {
    SimState d;
    d.a1 = -cplx(p.kappa1, p.delta_c - p.g0 * y.q) * y.a1 + p.eps_c +
           p.eps_p * std::polar(1.0, -delta * t);
    d.a2 = -cplx(p.kappa2, p.delta_d + p.g0 * y.q) * y.a2 + p.eps_d;
    d.p = -p.gamma_m * y.p - p.m * p.omega_m * p.omega_m * y.q +
          p.hbar * p.g0 * (std::norm(y.a1) - std::norm(y.a2));
    d.q = y.p / p.m;
    return d;
}

Trajectory integrate(const PhysicalParams& p, double delta, double t_end, double dt,
                     const IntegrateOptions& opts) {
    validate(p);
    if (!(dt > 0.0)) throw Error(ErrorCode::invalid_params, "dt must be > 0");
    if (dt > max_stable_step(p) * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "dt=" << dt << " exceeds 2 pi / (40 max frequency) = " << max_stable_step(p);
        throw Error(ErrorCode::invalid_params, os.str());
    }
    if (!(t_end > opts.t_start)) throw Error(ErrorCode::invalid_params, "t_end must exceed t_start");
    if (opts.stride == 0) throw Error(ErrorCode::invalid_params, "stride must be >= 1");

    const double t0 = opts.t_start;
    const auto steps = static_cast<std::size_t>(std::floor((t_end - t0) / dt));
    const std::size_t samples = steps / opts.stride + 1;
    const auto limits = blowup_limits(p, opts.initial);

    Trajectory traj;
    traj.dt = dt * static_cast<double>(opts.stride);
    traj.delta = delta;
    traj.params = p;
    traj.t.reserve(samples);
    traj.a1.reserve(samples);
    traj.a2.reserve(samples);
    traj.q.reserve(samples);
    traj.p.reserve(samples);

    auto record = [&](std::size_t k, const SimState& y) {
        traj.t.push_back(t0 + static_cast<double>(k) * dt);
        traj.a1.push_back(y.a1);
        traj.a2.push_back(y.a2);
        traj.q.push_back(y.q);
        traj.p.push_back(y.p);
    };

    SimState y = opts.initial;
    record(0, y);
    for (std::size_t k = 0; k < steps; ++k) {
        const double t = t0 + static_cast<double>(k) * dt;
        const SimState k1 = mean_field_rhs(p, delta, t, y);
        const SimState k2 = mean_field_rhs(p, delta, t + 0.5 * dt, y + (0.5 * dt) * k1);
        const SimState k3 = mean_field_rhs(p, delta, t + 0.5 * dt, y + (0.5 * dt) * k2);
        const SimState k4 = mean_field_rhs(p, delta, t + dt, y + dt * k3);
        y = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

        if (!(std::abs(y.a1) <= limits.a && std::abs(y.a2) <= limits.a &&
              std::abs(y.q) <= limits.q && std::abs(y.p) <= limits.p)) {
            std::ostringstream os;
            os << "state left 1e12 x drive scale at t=" << t + dt;
            throw Error(ErrorCode::blowup, os.str());
        }
        if ((k + 1) % opts.stride == 0) record(k + 1, y);
    }
    return traj;
}

ToneFit fit_three_tone(std::span<const double> t, std::span<const cplx> y, double delta) {
    if (t.size() != y.size() || t.size() < 3)
        throw Error(ErrorCode::invalid_params, "fit needs >= 3 samples with matching sizes");
    Eigen::Matrix3cd G = Eigen::Matrix3cd::Zero();
    Eigen::Vector3cd r = Eigen::Vector3cd::Zero();
    for (std::size_t k = 0; k < t.size(); ++k) {
        const cplx e = std::polar(1.0, -delta * t[k]);
        const Eigen::Vector3cd phi(1.0, e, std::conj(e));
        G += phi.conjugate() * phi.transpose();
        r += phi.conjugate() * y[k];
    }
    const Eigen::Vector3cd c = G.fullPivLu().solve(r);

    double ss = 0.0;
    for (std::size_t k = 0; k < t.size(); ++k) {
        const cplx e = std::polar(1.0, -delta * t[k]);
        ss += std::norm(y[k] - (c(0) + c(1) * e + c(2) * std::conj(e)));
    }
    return {c(0), c(1), c(2), std::sqrt(ss / static_cast<double>(t.size()))};
}

FitWindow default_fit_window(const Trajectory& traj) {
    if (traj.size() < 2) throw Error(ErrorCode::invalid_params, "empty trajectory");
    const double t0 = traj.t.front(), t1 = traj.t.back();
    const double settled = t0 + relaxation_time(traj.params);
    if (!(t1 > settled))
        throw Error(ErrorCode::invalid_params, "record ends before the transient has decayed");
    return {t1 - 0.6 * (t1 - settled), t1};
}

SidebandFit extract_sidebands(const Trajectory& traj, double delta, double eps_p,
                              std::optional<FitWindow> window) {
    if (!(eps_p > 0.0)) throw Error(ErrorCode::invalid_params, "eps_p must be > 0");
    const FitWindow w = window.value_or(default_fit_window(traj));
    if (!(std::abs(delta) * (w.end - w.start) >= 4.0 * std::numbers::pi)) {
        throw Error(ErrorCode::ill_conditioned,
                    "delta * window length < 4 pi: sidebands not resolvable");
    }
    const auto lo = static_cast<std::size_t>(
        std::lower_bound(traj.t.begin(), traj.t.end(), w.start) - traj.t.begin());
    const auto hi = static_cast<std::size_t>(
        std::upper_bound(traj.t.begin(), traj.t.end(), w.end) - traj.t.begin());
    if (hi <= lo + 3) throw Error(ErrorCode::ill_conditioned, "fit window holds too few samples");

    const std::span<const double> ts(traj.t.data() + lo, hi - lo);
    const ToneFit a = fit_three_tone(ts, std::span<const cplx>(traj.a1.data() + lo, hi - lo), delta);
    std::vector<cplx> qc(traj.q.begin() + static_cast<std::ptrdiff_t>(lo),
                         traj.q.begin() + static_cast<std::ptrdiff_t>(hi));
    const ToneFit q = fit_three_tone(ts, qc, delta);

    SidebandFit out;
    out.a10_fit = a.c0;
    out.a1p_fit = a.c_plus / eps_p;
    out.a1m_fit = a.c_minus / eps_p;
    out.q_plus_fit = q.c_plus / eps_p;
    out.q_minus_fit = q.c_minus / eps_p;
    const double scale = std::max({std::abs(a.c0), std::abs(a.c_plus), std::abs(a.c_minus), 1e-300});
    out.residual_rms = a.residual_rms / scale;
    out.window_start = w.start;
    out.window_end = w.end;
    return out;
}

OracleReport validate_perturbative(const PhysicalParams& p, std::span<const double> deltas,
                                   const OracleOptions& opts) {
    validate(p);
    OracleReport report;
    report.eps_p = opts.eps_p.value_or(p.eps_p > 0.0 ? p.eps_p : 1e-3 * p.eps_c);
    if (!(report.eps_p > 0.0))
        throw Error(ErrorCode::invalid_params, "probe amplitude is zero (set eps_p or eps_c)");

    PhysicalParams probe_off = p;
    probe_off.eps_p = 0.0;
    const auto states = steady_state(probe_off);
    const SteadyState& ss = states.roots[states.adiabatic_index];
    const SystemParams sys = reduced_from_physical(probe_off, ss);

    PhysicalParams run = p;
    run.eps_p = report.eps_p;

    report.points.resize(deltas.size());
    detail::parallel_for(deltas.size(), opts.threads, [&](std::size_t k) {
        OraclePoint& pt = report.points[k];
        pt.delta = deltas[k];
        try {
            const double d = std::abs(pt.delta);
            const double dt = opts.dt.value_or(default_oracle_step(run, pt.delta));
            const double t_end = opts.t_end.value_or(1.25 * relaxation_time(run) + 40.0 * kTwoPi / d);
            const double spacing = kTwoPi / (8.0 * std::max(d, run.omega_m));
            const std::size_t stride =
                opts.stride.value_or(std::max<std::size_t>(1, static_cast<std::size_t>(spacing / dt)));
            const auto traj = integrate(run, pt.delta, t_end, dt, {opts.initial, 0.0, stride});
            const auto fit = extract_sidebands(traj, pt.delta, report.eps_p);
            pt.a1p_fit = fit.a1p_fit;
            pt.a1m_fit = fit.a1m_fit;
            pt.residual_rms = fit.residual_rms;
            pt.a1p_ref = response_full(sys, pt.delta);
            pt.a1m_ref = sideband_solve(probe_off, ss, pt.delta).a1_minus;
            pt.rel_error = std::abs(pt.a1p_fit - pt.a1p_ref) / std::abs(pt.a1p_ref);
            pt.a1m_rel_error = std::abs(pt.a1m_fit - pt.a1m_ref) / std::abs(pt.a1m_ref);
        } catch (const std::exception& e) {
            pt.error = e.what();
        }
    });

    std::vector<double> errs;
    bool all_ok = true;
    for (const auto& pt : report.points) {
        if (pt.error) {
            all_ok = false;
            continue;
        }
        errs.push_back(pt.rel_error);
    }
    if (!errs.empty()) {
        std::sort(errs.begin(), errs.end());
        report.max_error = errs.back();
        const std::size_t m = errs.size() / 2;
        report.median_error = errs.size() % 2 ? errs[m] : 0.5 * (errs[m - 1] + errs[m]);
    }
    report.passed = all_ok && !errs.empty() && report.max_error <= opts.tolerance;
    return report;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
    os << "t,re_a1,im_a1,re_a2,im_a2,q,p\n";
    for (std::size_t k = 0; k < traj.size(); ++k) {
        os << g12(traj.t[k]) << ',' << g12(traj.a1[k].real()) << ',' << g12(traj.a1[k].imag())
           << ',' << g12(traj.a2[k].real()) << ',' << g12(traj.a2[k].imag()) << ','
           << g12(traj.q[k]) << ',' << g12(traj.p[k]) << '\n';
    }
}

} // namespace omit
