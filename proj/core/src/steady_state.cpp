#include "omitlab/steady_state.hpp"

#include "omitlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

namespace omit {

namespace {

constexpr int kHomotopySteps = 8;
constexpr double kResidualTol = 1e-12;

std::size_t scan_points(const PhysicalParams& p, double half_width) {
    // Each cavity Lorentzian has width kappa/g0 in q; resolve it with >= 16 cells.
    const double cell = std::min(p.kappa1, p.kappa2) / (16.0 * p.g0);
    const double n = std::ceil(2.0 * half_width / cell) + 1.0;
    return static_cast<std::size_t>(std::clamp(n, 20001.0, 4000001.0));
}

double refine_root(const PhysicalParams& p, double lo, double hi, double flo, double scale) {
    const double bracket_lo = lo;
    const double bracket_hi = hi;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * scale; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = fixed_point_residual(p, mid);
        if (fm == 0.0) return mid;
        if ((fm < 0) == (flo < 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    // Secant polish, kept inside the final bracket.
    double x0 = lo, x1 = hi;
    double f0 = fixed_point_residual(p, x0), f1 = fixed_point_residual(p, x1);
    for (int it = 0; it < 8 && f1 != f0; ++it) {
        const double x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
        if (!(x2 >= lo && x2 <= hi)) break;
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = fixed_point_residual(p, x1);
        if (f1 == 0.0) break;
    }
    double best = std::abs(f0) < std::abs(f1) ? x0 : x1;
    if (std::abs(fixed_point_residual(p, best)) > kResidualTol * scale) {
        std::ostringstream os;
        os.precision(17);
        os << "steady-state refinement failed in bracket [" << bracket_lo << ", " << bracket_hi
           << "]";
        throw Error(ErrorCode::no_convergence, os.str());
    }
    return best;
}

std::vector<double> scan_roots(const PhysicalParams& p) {
    const double half = root_scan_half_width(p);
    if (!(half > 0.0)) return {0.0};

    const std::size_t n = scan_points(p, half);
    const double step = 2.0 * half / static_cast<double>(n - 1);
    std::vector<double> roots;
    double q_prev = -half;
    double f_prev = fixed_point_residual(p, q_prev);
    if (f_prev == 0.0) roots.push_back(q_prev);
    for (std::size_t i = 1; i < n; ++i) {
        const double q = (i + 1 == n) ? half : -half + static_cast<double>(i) * step;
        const double f = fixed_point_residual(p, q);
        if (f == 0.0) {
            roots.push_back(q);
        } else if (f_prev != 0.0 && (f < 0) != (f_prev < 0)) {
            roots.push_back(refine_root(p, q_prev, q, f_prev, half));
        }
        q_prev = q;
        f_prev = f;
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

std::size_t nearest(const std::vector<double>& roots, double target) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < roots.size(); ++i)
        if (std::abs(roots[i] - target) < std::abs(roots[best] - target)) best = i;
    return best;
}

} // namespace

cplx cavity1_amplitude(const PhysicalParams& p, double q0) {
    return p.eps_c / cplx(p.kappa1, p.delta_c - p.g0 * q0);
}

cplx cavity2_amplitude(const PhysicalParams& p, double q0) {
    return p.eps_d / cplx(p.kappa2, p.delta_d + p.g0 * q0);
}

double fixed_point_residual(const PhysicalParams& p, double q0) {
    const double n1 = std::norm(cavity1_amplitude(p, q0));
    const double n2 = std::norm(cavity2_amplitude(p, q0));
    return q0 - p.hbar * p.g0 * (n1 - n2) / (p.m * p.omega_m * p.omega_m);
}

double root_scan_half_width(const PhysicalParams& p) {
    const double c = p.eps_c / p.kappa1;
    const double d = p.eps_d / p.kappa2;
    return 4.0 * p.hbar * p.g0 * (c * c + d * d) / (p.m * p.omega_m * p.omega_m);
}

EffectiveCouplings effective_couplings(const PhysicalParams& p, const SteadyState& ss) {
    const double scale = p.hbar * p.g0 * p.g0 / (2.0 * p.m * p.omega_m);
    return {scale * std::norm(ss.a10), scale * std::norm(ss.a20)};
}

SteadyStateSet steady_state(const PhysicalParams& p) {
    validate(p);
    PhysicalParams probe_off = p;
    probe_off.eps_p = 0.0;

    const std::vector<double> qs = scan_roots(probe_off);
    SteadyStateSet out;
    out.roots.reserve(qs.size());
    for (double q : qs)
        out.roots.push_back({q, 0.0, cavity1_amplitude(p, q), cavity2_amplitude(p, q)});

    if (qs.size() > 1) {
        double tracked = 0.0;
        for (int k = 1; k < kHomotopySteps; ++k) {
            PhysicalParams ramp = probe_off;
            const double s = static_cast<double>(k) / kHomotopySteps;
            ramp.eps_c *= s;
            ramp.eps_d *= s;
            const auto rs = scan_roots(ramp);
            tracked = rs[nearest(rs, tracked)];
        }
        out.adiabatic_index = nearest(qs, tracked);
    }
    return out;
}

SystemParams reduced_from_physical(const PhysicalParams& p, const SteadyState& ss) {
    const auto betas = effective_couplings(p, ss);
    SystemParams s;
    s.omega_m = p.omega_m;
    s.gamma_m = p.gamma_m;
    s.kappa1 = p.kappa1;
    s.kappa2 = p.kappa2;
    s.delta1 = p.delta_c - p.g0 * ss.q0;
    s.delta2 = p.delta_d + p.g0 * ss.q0;
    s.beta1 = betas.beta1;
    s.beta2 = betas.beta2;
    return s;
}

SystemParams reduced_from_physical(const PhysicalParams& p, std::size_t branch) {
    const auto set = steady_state(p);
    const std::size_t idx = branch == kAdiabaticBranch ? set.adiabatic_index : branch;
    if (idx >= set.roots.size()) {
        throw Error(ErrorCode::branch_out_of_range,
                    "branch " + std::to_string(idx) + " requested, " +
                        std::to_string(set.roots.size()) + " steady states exist");
    }
    return reduced_from_physical(p, set.roots[idx]);
}

DriveDesign drive_for_target(const SystemParams& target, const PhysicalParams& partial) {
    validate(target);
    if (!(partial.g0 > 0.0))
        throw Error(ErrorCode::invalid_params, "g0 must be > 0 to realize a drive target");

    PhysicalParams phys = partial;
    phys.omega_m = target.omega_m;
    phys.gamma_m = target.gamma_m;
    phys.kappa1 = target.kappa1;
    phys.kappa2 = target.kappa2;
    phys.eps_p = 0.0;
    validate(phys);

    // |a_i0|^2 from the beta definitions, then q0 and the bare detunings.
    const double per_photon = phys.hbar * phys.g0 * phys.g0 / (2.0 * phys.m * phys.omega_m);
    const double n1 = target.beta1 / per_photon;
    const double n2 = target.beta2 / per_photon;
    const double q0 = phys.hbar * phys.g0 * (n1 - n2) / (phys.m * phys.omega_m * phys.omega_m);

    phys.delta_c = target.delta1 + phys.g0 * q0;
    phys.delta_d = target.delta2 - phys.g0 * q0;
    phys.eps_c = std::sqrt(n1) * std::abs(cplx(target.kappa1, target.delta1));
    phys.eps_d = std::sqrt(n2) * std::abs(cplx(target.kappa2, target.delta2));

    DriveDesign out{phys, {q0, 0.0, cavity1_amplitude(phys, q0), cavity2_amplitude(phys, q0)}};
    return out;
}

} // namespace omit
