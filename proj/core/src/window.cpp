#include "omitlab/window.hpp"

#include "omitlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace omit {

namespace {

constexpr cplx I{0.0, 1.0};

void require_above_threshold(const SystemParams& s) {
    if (!above_threshold(s)) {
        std::ostringstream os;
        os << "2 beta1 kappa1 <= gamma_m (kappa1^2 + 4 omega_m^2); beta1 must exceed "
           << threshold_beta1(s) << " (got " << s.beta1 << ")";
        throw Error(ErrorCode::below_threshold, os.str());
    }
}

double xi_of(const SystemParams& s) {
    const double w2 = s.omega_m * s.omega_m;
    return 8.0 * s.kappa2 * w2 + s.gamma_m * (s.kappa2 * s.kappa2 + 4.0 * w2);
}

bool equal_kappas(const SystemParams& s) {
    return std::abs(s.kappa1 - s.kappa2) <= 1e-12 * std::max(s.kappa1, s.kappa2);
}

double eta_of(const SystemParams& s) {
    const double k = s.kappa1;
    const double w2 = s.omega_m * s.omega_m;
    return 8.0 * k * w2 - 2.0 * s.beta1 * k + s.gamma_m * (k * k + 4.0 * w2);
}

WindowSolution base_solution(const SystemParams& s) {
    WindowSolution w;
    w.xi = xi_of(s);
    if (equal_kappas(s)) w.eta = eta_of(s);
    return w;
}

// 2x2 real solve; false when singular.
bool solve2(double a, double b, double c, double d, double r0, double r1, double& u, double& v) {
    const double det = a * d - b * c;
    const double scale = std::abs(a * d) + std::abs(b * c);
    if (!(std::abs(det) > 1e-300) || std::abs(det) < 1e-15 * scale) return false;
    u = (r0 * d - b * r1) / det;
    v = (a * r1 - c * r0) / det;
    return true;
}

double pole_tolerance(const SystemParams& s, double x) { return 1e-9 * (s.gamma_m / 2.0 + std::abs(x)); }

// Damped Newton on (Re, Im) of window_residual over (x, beta2).
std::optional<WindowCandidate> newton_pole(const SystemParams& s, WindowCandidate v, int max_it,
                                           int& iterations) {
    auto norm_at = [&](const WindowCandidate& c) { return std::abs(window_residual(s, c.x, c.beta2)); };
    double r = norm_at(v);
    for (iterations = 0; iterations < max_it; ++iterations) {
        if (r <= 1e-4 * pole_tolerance(s, v.x)) break;
        const cplx S = window_residual(s, v.x, v.beta2);
        const cplx u = 1.0 / (s.kappa2 - I * v.x);
        const cplx Sx = -I + v.beta2 * I * u * u;
        const cplx Sb = u - 1.0 / (s.kappa2 - 2.0 * I * s.omega_m);
        double dx = 0, db = 0;
        if (!solve2(Sx.real(), Sb.real(), Sx.imag(), Sb.imag(), -S.real(), -S.imag(), dx, db))
            return std::nullopt;
        double lambda = 1.0;
        WindowCandidate trial{v.x + dx, v.beta2 + db};
        double rt = norm_at(trial);
        while (!(rt < r) && lambda > 1e-8) {
            lambda *= 0.5;
            trial = {v.x + lambda * dx, v.beta2 + lambda * db};
            rt = norm_at(trial);
        }
        if (!(rt < r)) break;
        const bool tiny = std::abs(lambda * dx) <= 1e-15 * (1.0 + std::abs(v.x)) &&
                          std::abs(lambda * db) <= 1e-15 * (1.0 + std::abs(v.beta2));
        v = trial;
        r = rt;
        if (tiny) break;
    }
    if (!(r <= pole_tolerance(s, v.x)) || !(v.beta2 > 0.0)) return std::nullopt;
    return v;
}

// Sign changes of Im[window_beta2_at] over x in [-kappa1, kappa1] with a
// positive real part, refined by bisection. Ordered by |x|.
std::vector<WindowCandidate> scan_pole_candidates(const SystemParams& s) {
    constexpr std::size_t n = 20001;
    const double lo = -s.kappa1, hi = s.kappa1;
    auto g = [&](double x) { return window_beta2_at(s, x); };
    std::vector<WindowCandidate> out;
    double x_prev = lo;
    cplx g_prev = g(lo);
    for (std::size_t k = 1; k < n; ++k) {
        const double x = lo + (hi - lo) * (static_cast<double>(k) / (n - 1));
        const cplx gx = g(x);
        const bool finite = std::isfinite(gx.real()) && std::isfinite(g_prev.real());
        if (finite && (gx.imag() < 0) != (g_prev.imag() < 0)) {
            double a = x_prev, b = x;
            double fa = g_prev.imag();
            for (int it = 0; it < 200 && b - a > 1e-15 * (1.0 + std::abs(a)); ++it) {
                const double mid = 0.5 * (a + b);
                if (mid <= a || mid >= b) break;
                const double fm = g(mid).imag();
                if ((fm < 0) == (fa < 0)) {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
            }
            const double xr = 0.5 * (a + b);
            const double b2 = g(xr).real();
            if (b2 > 0.0 && std::abs(window_residual(s, xr, b2)) <= pole_tolerance(s, xr))
                out.push_back({xr, b2});
        }
        x_prev = x;
        g_prev = gx;
    }
    std::stable_sort(out.begin(), out.end(), [](const WindowCandidate& l, const WindowCandidate& r) {
        return std::abs(l.x) < std::abs(r.x);
    });
    return out;
}

// Newton on (Re eps_T, d/dx Re eps_T) over (x, beta2).
std::optional<WindowCandidate> newton_tangent(const SystemParams& s, WindowCandidate v, int max_it,
                                              int& iterations) {
    const double k2 = 2.0 * s.kappa1;
    const double L = s.gamma_m / 2.0 + std::abs(v.x) + 1e-300;  // x scale for d/dx terms
    auto eval = [&](const WindowCandidate& c, ResponseJet& j) {
        SystemParams t = s;
        t.beta2 = c.beta2;
        j = response_jet(t, c.x);
        const double f1 = k2 * j.a.real();
        const double f2 = k2 * j.a_x.real() * L;
        return std::hypot(f1, f2);
    };
    ResponseJet j{};
    double r = eval(v, j);
    for (iterations = 0; iterations < max_it; ++iterations) {
        if (r <= 1e-14) break;
        double dx = 0, db = 0;
        if (!solve2(k2 * j.a_x.real(), k2 * j.a_b.real(), k2 * j.a_xx.real(), k2 * j.a_xb.real(),
                    -k2 * j.a.real(), -k2 * j.a_x.real(), dx, db))
            return std::nullopt;
        double lambda = 1.0;
        WindowCandidate trial{v.x + dx, v.beta2 + db};
        ResponseJet jt{};
        double rt = eval(trial, jt);
        while (!(rt < r) && lambda > 1e-8) {
            lambda *= 0.5;
            trial = {v.x + lambda * dx, v.beta2 + lambda * db};
            rt = eval(trial, jt);
        }
        if (!(rt < r)) break;
        const bool tiny = std::abs(lambda * dx) <= 1e-15 * (1.0 + std::abs(v.x)) &&
                          std::abs(lambda * db) <= 1e-15 * (1.0 + std::abs(v.beta2));
        v = trial;
        r = rt;
        j = jt;
        if (tiny) break;
    }
    if (!(r <= 1e-9) || !(v.beta2 > 0.0)) return std::nullopt;
    return v;
}

} // namespace

std::string_view to_string(WindowMethod m) noexcept {
    switch (m) {
    case WindowMethod::analytic_large_k2: return "analytic-large-k2";
    case WindowMethod::numeric_root: return "numeric-root";
    case WindowMethod::numeric_tangent: return "numeric-tangent";
    }
    return "unknown";
}

cplx window_residual(const SystemParams& s, double x, double beta2) {
    return s.gamma_m / 2.0 - I * x - s.beta1 / (s.kappa1 - 2.0 * I * s.omega_m) +
           beta2 / (s.kappa2 - I * x) - beta2 / (s.kappa2 - 2.0 * I * s.omega_m);
}

cplx window_beta2_at(const SystemParams& s, double x) {
    const cplx P = window_residual(s, x, 0.0);
    const cplx Q = 1.0 / (s.kappa2 - I * x) - 1.0 / (s.kappa2 - 2.0 * I * s.omega_m);
    return -P / Q;
}

WindowSolution perfect_window_large_k2(const SystemParams& s) {
    validate(s);
    require_above_threshold(s);
    const double w = s.omega_m, w2 = w * w;
    const double k1 = s.kappa1, k2 = s.kappa2, g = s.gamma_m, b1 = s.beta1;
    const double A = k1 * k1 + 4.0 * w2;
    const double B = k2 * k2 + 4.0 * w2;

    WindowSolution out = base_solution(s);
    const double den = A * out.xi - 2.0 * b1 * k1 * B;
    if (!(std::abs(den) >= 1e-30))
        throw Error(ErrorCode::singular_denominator, "window position denominator vanishes");
    out.x_w = 2.0 * k2 * w * (g * k2 * A - 2.0 * b1 * (k1 * k2 + 4.0 * w2)) / den;
    out.beta2 = k2 * B * (2.0 * b1 * k1 - g * A) / (8.0 * w2 * A);
    out.method = WindowMethod::analytic_large_k2;
    if (k2 < 20.0 * std::abs(out.x_w))
        out.warnings.emplace_back("kappa2 < 20 |x_w|: large-kappa2 closed form is unreliable");
    return out;
}

WindowSolution perfect_window_general(const SystemParams& s, const WindowOptions& opts) {
    validate(s);
    require_above_threshold(s);

    WindowCandidate seed;
    if (opts.seed) {
        seed = {opts.seed->first, opts.seed->second};
    } else {
        try {
            const auto analytic = perfect_window_large_k2(s);
            seed = {analytic.x_w, analytic.beta2};
        } catch (const Error&) {
            seed = {0.0, 0.0};
        }
    }

    WindowSolution out = base_solution(s);
    int iters = 0;
    std::optional<WindowCandidate> pole;
    if (seed.beta2 > 0.0) pole = newton_pole(s, seed, opts.max_iterations, iters);
    out.iterations = iters;

    const auto scanned = scan_pole_candidates(s);
    if (!pole && !scanned.empty()) {
        pole = *std::min_element(scanned.begin(), scanned.end(),
                                 [&](const WindowCandidate& l, const WindowCandidate& r) {
                                     return std::abs(l.x - seed.x) < std::abs(r.x - seed.x);
                                 });
        pole = newton_pole(s, *pole, opts.max_iterations, iters).value_or(*pole);
    }
    if (!pole) throw Error(ErrorCode::no_root, "no pole-condition root with beta2 > 0 found");
    for (const auto& c : scanned) {
        if (std::abs(c.x - pole->x) > 1e-6 * (1.0 + std::abs(pole->x))) out.alternates.push_back(c);
    }

    if (opts.criterion == WindowCriterion::complex_pole) {
        out.x_w = pole->x;
        out.beta2 = pole->beta2;
        out.method = WindowMethod::numeric_root;
        return out;
    }

    WindowCandidate start = opts.seed ? seed : *pole;
    auto tangent = newton_tangent(s, start, opts.max_iterations, iters);
    if (!tangent && opts.seed) tangent = newton_tangent(s, *pole, opts.max_iterations, iters);
    if (!tangent)
        throw Error(ErrorCode::no_root, "Re[eps_T] tangency condition did not converge");
    out.x_w = tangent->x;
    out.beta2 = tangent->beta2;
    out.iterations += iters;
    out.method = WindowMethod::numeric_tangent;
    return out;
}

double window_width_equal_kappa(const SystemParams& s) {
    validate(s);
    if (!equal_kappas(s))
        throw Error(ErrorCode::unequal_kappas, "closed-form width needs kappa1 == kappa2");
    const double k = s.kappa1, w = s.omega_m, w2 = w * w, b1 = s.beta1;
    const double eta = eta_of(s);
    const double scale = 8.0 * k * w2 + 2.0 * b1 * k + s.gamma_m * (k * k + 4.0 * w2);
    if (!(std::abs(eta) >= 1e-30 * scale))
        throw Error(ErrorCode::singular_eta, "eta vanishes");
    const double shift = w * (4.0 * b1 - 2.0 * k * s.gamma_m);
    const double common = 32.0 * b1 * w2 * eta;
    const double r1 = k * (common + k * (eta + shift) * (eta + shift));
    const double r2 = k * (common + k * (eta - shift) * (eta - shift));
    if (r1 < 0.0 || r2 < 0.0)
        throw Error(ErrorCode::domain_error, "negative radicand in closed-form width");
    return std::sqrt(r1) / (2.0 * eta) + std::sqrt(r2) / (2.0 * eta) - k;
}

namespace {

struct Flank {
    double x_peak;
    double peak;
};

// First local maximum of Re[eps_T] walking away from x_w (dir = +-1) on a
// log-spaced offset grid, polished by golden-section search.
std::optional<Flank> find_flank(const std::function<double(double)>& re, double x_w, int dir,
                                const std::vector<double>& offsets) {
    double prev2 = re(x_w), prev = re(x_w + dir * offsets[0]);
    for (std::size_t k = 1; k < offsets.size(); ++k) {
        const double cur = re(x_w + dir * offsets[k]);
        if (prev > prev2 && prev >= cur) {
            double a = x_w + dir * (k >= 2 ? offsets[k - 2] : 0.0);
            double b = x_w + dir * offsets[k];
            if (a > b) std::swap(a, b);
            const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
            double c = b - phi * (b - a), d = a + phi * (b - a);
            double fc = re(c), fd = re(d);
            for (int it = 0; it < 200 && b - a > 1e-12 * (std::abs(a) + std::abs(b) + 1e-300); ++it) {
                if (fc > fd) {
                    b = d; d = c; fd = fc;
                    c = b - phi * (b - a); fc = re(c);
                } else {
                    a = c; c = d; fc = fd;
                    d = a + phi * (b - a); fd = re(d);
                }
            }
            const double xm = 0.5 * (a + b);
            return Flank{xm, std::max(re(xm), prev)};
        }
        prev2 = prev;
        prev = cur;
    }
    return std::nullopt;
}

double half_crossing(const std::function<double(double)>& re, double x_w, int dir, double level,
                     const std::vector<double>& offsets, double x_limit, double tol) {
    double inner = x_w;
    for (double off : offsets) {
        const double x = x_w + dir * off;
        if (dir * (x - x_limit) > 0) break;
        if (re(x) >= level) {
            double a = inner, b = x;  // re(a) < level <= re(b)
            while (std::abs(b - a) > tol) {
                const double mid = 0.5 * (a + b);
                if (mid == a || mid == b) break;
                (re(mid) >= level ? b : a) = mid;
            }
            return 0.5 * (a + b);
        }
        inner = x;
    }
    throw Error(ErrorCode::no_dip, "no half-level crossing between window and flanking maximum");
}

} // namespace

double window_width_numeric(const SystemParams& s, const WindowSolution& win, ResponseMode mode) {
    validate(s);
    const SystemParams t = win.apply(s);
    const std::function<double(double)> re = [&](double x) { return eps_T(t, x, mode).real(); };

    constexpr std::size_t n = 20000;
    const double d_min = 1e-8 * s.kappa1, d_max = 10.0 * s.kappa1;
    std::vector<double> offsets(n);
    for (std::size_t k = 0; k < n; ++k)
        offsets[k] = d_min * std::pow(d_max / d_min, static_cast<double>(k) / (n - 1));

    const double dip = re(win.x_w);
    const auto left = find_flank(re, win.x_w, -1, offsets);
    const auto right = find_flank(re, win.x_w, +1, offsets);
    if (!left || !right || !(left->peak > 2.0 * dip) || !(right->peak > 2.0 * dip) ||
        !(left->peak > dip) || !(right->peak > dip))
        throw Error(ErrorCode::no_dip, "no flanking maxima above twice the dip value");

    const double reference = 0.5 * (left->peak + right->peak);
    const double level = dip + 0.5 * (reference - dip);
    const double tol = 1e-6 * s.kappa1;
    const double xl = half_crossing(re, win.x_w, -1, level, offsets, left->x_peak, tol);
    const double xr = half_crossing(re, win.x_w, +1, level, offsets, right->x_peak, tol);
    return xr - xl;
}

cplx absorption_at_resonance(const SystemParams& s) {
    validate(s);
    const cplx sub = s.gamma_m / 2.0 - s.beta1 / (s.kappa1 - 2.0 * I * s.omega_m) +
                     s.beta2 / s.kappa2 - s.beta2 / (s.kappa2 - 2.0 * I * s.omega_m);
    if (!(std::abs(sub) >= 1e-30))
        throw Error(ErrorCode::singular_denominator, "mechanical subfraction vanishes at x=0");
    const cplx den = s.kappa1 + s.beta1 / sub;
    if (!(std::abs(den) >= 1e-30))
        throw Error(ErrorCode::singular_denominator, "cavity response vanishes at x=0");
    return 2.0 * s.kappa1 / den;
}

ResponseJet response_jet(const SystemParams& s, double x) {
    const cplx u = 1.0 / (s.kappa2 - I * x);
    const cplx c2 = 1.0 / (s.kappa2 - 2.0 * I * s.omega_m);
    const cplx u_x = I * u * u;
    const cplx u_xx = -2.0 * u * u * u;

    const cplx S = s.gamma_m / 2.0 - I * x - s.beta1 / (s.kappa1 - 2.0 * I * s.omega_m) +
                   s.beta2 * (u - c2);
    const cplx S_x = -I + s.beta2 * u_x;
    const cplx S_xx = s.beta2 * u_xx;
    const cplx S_b = u - c2;
    const cplx S_xb = u_x;

    // a = S / M with M = S (kappa1 - ix) + beta1; M stays near beta1 at the
    // window where S -> 0, so no cancellation in the derivatives.
    const cplx c1 = s.kappa1 - I * x;
    const cplx M = S * c1 + s.beta1;
    const cplx M_x = S_x * c1 - I * S;
    const cplx M_xx = S_xx * c1 - 2.0 * I * S_x;
    const cplx M_b = S_b * c1;
    const cplx M_xb = S_xb * c1 - I * S_b;

    const cplx M2 = M * M, M3 = M2 * M;
    const cplx num_x = S_x * M - S * M_x;
    ResponseJet j;
    j.a = S / M;
    j.a_x = num_x / M2;
    j.a_xx = (S_xx * M - S * M_xx) / M2 - 2.0 * M_x * num_x / M3;
    j.a_b = (S_b * M - S * M_b) / M2;
    j.a_xb = (S_xb * M + S_x * M_b - S_b * M_x - S * M_xb) / M2 - 2.0 * M_b * num_x / M3;
    return j;
}

} // namespace omit
