#include "omitlab/slowlight.hpp"

#include "omitlab/errors.hpp"
#include "omitlab/parallel.hpp"
#include "omitlab/window.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

namespace omit {

namespace {

constexpr double kPhaseFloor = 1e-12;

LightKind classify(double tau, double kappa1) {
    const double band = 1e-12 / kappa1;
    if (tau > band) return LightKind::slow;
    if (tau < -band) return LightKind::fast;
    return LightKind::neutral;
}

// Central differences at h and h/2 on an unwrapped phase.
std::array<double, 2> phase_slopes(const SystemParams& s, double x, double h, ResponseMode mode) {
    const std::array<double, 4> xs{x - h, x - 0.5 * h, x + 0.5 * h, x + h};
    std::array<double, 4> phase{};
    double prev_raw = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        const cplx z = eps_T(s, xs[k], mode) - 1.0;
        if (!(std::abs(z) >= kPhaseFloor)) {
            std::ostringstream os;
            os.precision(17);
            os << "|eps_T - 1| < 1e-12 at x=" << xs[k];
            throw Error(ErrorCode::phase_singularity, os.str());
        }
        const double raw = std::arg(z);
        if (k == 0) {
            phase[k] = raw;
        } else {
            double jump = raw - prev_raw;
            while (jump > std::numbers::pi) jump -= 2.0 * std::numbers::pi;
            while (jump < -std::numbers::pi) jump += 2.0 * std::numbers::pi;
            phase[k] = phase[k - 1] + jump;
        }
        prev_raw = raw;
    }
    return {(phase[3] - phase[0]) / (2.0 * h), (phase[2] - phase[1]) / h};
}

} // namespace

std::string_view to_string(LightKind k) noexcept {
    switch (k) {
    case LightKind::slow: return "slow";
    case LightKind::fast: return "fast";
    case LightKind::neutral: return "neutral";
    }
    return "unknown";
}

double delay_step(const SystemParams& s) {
    double width = s.gamma_m + 2.0 * s.beta1 / s.kappa1;
    if (above_threshold(s)) {
        try {
            const double w = window_width_equal_kappa(s);
            if (w > 0.0) width = w;
        } catch (const Error&) {
        }
    }
    double h = 1e-4 * std::max(width, s.gamma_m);
    if (!(h > 0.0)) h = 1e-4 * s.kappa1;
    return h;
}

DelayPoint group_delay(const SystemParams& s, double x, const DelayOptions& opts) {
    validate(s);
    double h = opts.step.value_or(delay_step(s));
    double tau = 0.0;
    for (int level = 0; level < 12; ++level) {
        const auto [d_h, d_half] = phase_slopes(s, x, h, opts.mode);
        tau = (4.0 * d_half - d_h) / 3.0;
        // Accept once the two levels agree; otherwise the step is outside the
        // asymptotic range and gets halved.
        if (std::abs(d_h - d_half) <= 1e-3 * std::abs(tau) + 1e-9 / s.kappa1) break;
        h *= 0.5;
    }
    return {x, tau, classify(tau, s.kappa1)};
}

std::vector<DelayPoint> delay_curve(const SystemParams& s, double x_min, double x_max,
                                    std::size_t n, const DelayOptions& opts, unsigned threads) {
    validate(s);
    const auto xs = uniform_grid(x_min, x_max, n);
    const DelayOptions fixed{opts.mode, opts.step.value_or(delay_step(s))};
    std::vector<DelayPoint> out(n);
    detail::parallel_for(n, threads, [&](std::size_t k) { out[k] = group_delay(s, xs[k], fixed); });
    return out;
}

double delay_at_window(const SystemParams& s) {
    validate(s);
    if (!above_threshold(s))
        throw Error(ErrorCode::below_threshold, "no perfect window below threshold");
    const double k1 = s.kappa1, k2 = s.kappa2, w2 = s.omega_m * s.omega_m;
    const double first =
        k1 * (8.0 * k2 * w2 + s.gamma_m * (k2 * k2 + 4.0 * w2)) / (4.0 * s.beta1 * k2 * w2);
    const double second = k1 * k1 * (k2 * k2 + 4.0 * w2) / (2.0 * k2 * w2 * (k1 * k1 + 4.0 * w2));
    return first - second;
}

DelayMaximum max_delay_scan(const SystemParams& s, double x_min, double x_max, std::size_t n,
                            const DelayOptions& opts) {
    if (n < 3) throw Error(ErrorCode::invalid_params, "max_delay_scan needs n >= 3");
    const DelayOptions fixed{opts.mode, opts.step.value_or(delay_step(s))};
    const auto curve = delay_curve(s, x_min, x_max, n, fixed, 1);

    std::size_t best = 0;
    for (std::size_t k = 1; k < n; ++k) {
        const auto& c = curve[k];
        const auto& b = curve[best];
        if (c.tau > b.tau || (c.tau == b.tau && std::abs(c.x) < std::abs(b.x))) best = k;
    }
    double a = curve[best == 0 ? 0 : best - 1].x;
    double b = curve[best + 1 == n ? n - 1 : best + 1].x;
    const double tol = 1e-6 * (x_max - x_min);
    auto tau = [&](double x) { return group_delay(s, x, fixed).tau; };

    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - phi * (b - a), d = a + phi * (b - a);
    double fc = tau(c), fd = tau(d);
    while (b - a > tol) {
        if (fc >= fd) {
            b = d; d = c; fd = fc;
            c = b - phi * (b - a); fc = tau(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + phi * (b - a); fd = tau(d);
        }
    }
    DelayMaximum out{0.5 * (a + b), 0.0};
    out.tau_star = tau(out.x_star);
    if (curve[best].tau > out.tau_star) out = {curve[best].x, curve[best].tau};
    return out;
}

} // namespace omit
