#include "omitlab/response.hpp"

#include "omitlab/errors.hpp"
#include "omitlab/parallel.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <sstream>

namespace omit {

namespace {

constexpr cplx I{0.0, 1.0};
constexpr double kTinyDenominator = 1e-30;

cplx checked(cplx d, const char* what) {
    if (!(std::abs(d) >= kTinyDenominator)) {
        throw Error(ErrorCode::singular_denominator, std::string(what) + " vanishes");
    }
    return d;
}

cplx div(cplx num, cplx den, const char* what) { return num / checked(den, what); }

} // namespace

cplx response_full(const SystemParams& s, double delta) {
    const double w = s.omega_m;
    const cplx mech = div(cplx(delta * delta - w * w, delta * s.gamma_m), 2.0 * I * w,
                          "mechanical term");
    const cplx sub = mech - div(s.beta1, s.kappa1 - I * (delta + s.delta1), "kappa1 - i(delta+Delta1)") +
                     div(s.beta2, s.kappa2 - I * (delta - s.delta2), "kappa2 - i(delta-Delta2)") -
                     div(s.beta2, s.kappa2 - I * (delta + s.delta2), "kappa2 - i(delta+Delta2)");
    const cplx den = s.kappa1 - I * (delta - s.delta1) + div(s.beta1, sub, "mechanical subfraction");
    return div(1.0, den, "cavity response");
}

cplx response_simplified(const SystemParams& s, double x) {
    const cplx far1 = s.kappa1 - 2.0 * I * s.omega_m;
    const cplx far2 = s.kappa2 - 2.0 * I * s.omega_m;
    const cplx sub = s.gamma_m / 2.0 - I * x - div(s.beta1, far1, "kappa1 - 2i omega_m") +
                     div(s.beta2, s.kappa2 - I * x, "kappa2 - ix") -
                     div(s.beta2, far2, "kappa2 - 2i omega_m");
    const cplx den = s.kappa1 - I * x + div(s.beta1, sub, "mechanical subfraction");
    return div(1.0, den, "cavity response");
}

cplx eps_T(const SystemParams& s, double x, ResponseMode mode) {
    const cplx a = mode == ResponseMode::full ? response_full(s, s.omega_m + x)
                                              : response_simplified(s, x);
    return quadrature(a, s.kappa1);
}

namespace {

SidebandAmplitudes solve_back_substitution(const PhysicalParams& p, const SteadyState& ss,
                                           double delta) {
    const double d1 = p.delta_c - p.g0 * ss.q0;
    const double d2 = p.delta_d + p.g0 * ss.q0;
    const cplx B = div(1.0, p.kappa1 - I * (delta - d1), "kappa1 - i(delta-Delta1)");
    const cplx C = div(1.0, p.kappa1 - I * (delta + d1), "kappa1 - i(delta+Delta1)");
    const cplx D = div(1.0, p.kappa2 - I * (delta - d2), "kappa2 - i(delta-Delta2)");
    const cplx E = div(1.0, p.kappa2 - I * (delta + d2), "kappa2 - i(delta+Delta2)");
    const double n1 = std::norm(ss.a10);
    const double n2 = std::norm(ss.a20);

    // q_plus with A = m(omega_m^2 - delta^2 - i gamma_m delta)/(hbar g0) multiplied
    // through by hbar g0 / m so that g0 = 0 stays finite.
    const double hg_m = p.hbar * p.g0 / p.m;
    const cplx mech(p.omega_m * p.omega_m - delta * delta, -p.gamma_m * delta);
    const cplx den = mech - I * hg_m * p.g0 * ((B - C) * n1 + (D - E) * n2);

    SidebandAmplitudes out;
    out.q_plus = div(hg_m * B * std::conj(ss.a10), den, "q_plus denominator");
    out.a1_plus = (I * p.g0 * out.q_plus * ss.a10 + 1.0) * B;
    out.a2_plus = -I * p.g0 * out.q_plus * ss.a20 * D;
    out.q_minus = std::conj(out.q_plus);
    out.a1_minus = div(I * p.g0 * out.q_minus * ss.a10, p.kappa1 + I * (delta + d1),
                       "kappa1 + i(delta+Delta1)");
    out.a2_minus = div(-I * p.g0 * out.q_minus * ss.a20, p.kappa2 + I * (delta + d2),
                       "kappa2 + i(delta+Delta2)");
    return out;
}

SidebandAmplitudes solve_dense(const PhysicalParams& p, const SteadyState& ss, double delta) {
    const double d1 = p.delta_c - p.g0 * ss.q0;
    const double d2 = p.delta_d + p.g0 * ss.q0;
    const cplx M = p.m * cplx(p.omega_m * p.omega_m - delta * delta, -p.gamma_m * delta);
    const double h = p.hbar * p.g0;
    const cplx a1 = ss.a10, a2 = ss.a20;

    // Unknowns: q+, conj(q-), a1+, conj(a1-), a2+, conj(a2-).
    Eigen::Matrix<cplx, 6, 6> A = Eigen::Matrix<cplx, 6, 6>::Zero();
    Eigen::Matrix<cplx, 6, 1> b = Eigen::Matrix<cplx, 6, 1>::Zero();
    for (int r = 0; r < 2; ++r) {
        A(r, r) = M;
        A(r, 2) = -h * std::conj(a1);
        A(r, 3) = -h * a1;
        A(r, 4) = h * std::conj(a2);
        A(r, 5) = h * a2;
    }
    A(2, 2) = p.kappa1 - I * (delta - d1);
    A(2, 0) = -I * p.g0 * a1;
    b(2) = 1.0;
    A(3, 3) = p.kappa1 - I * (delta + d1);
    A(3, 1) = I * p.g0 * std::conj(a1);
    A(4, 4) = p.kappa2 - I * (delta - d2);
    A(4, 0) = I * p.g0 * a2;
    A(5, 5) = p.kappa2 - I * (delta + d2);
    A(5, 1) = -I * p.g0 * std::conj(a2);

    Eigen::PartialPivLU<Eigen::Matrix<cplx, 6, 6>> lu(A);
    if (!(std::abs(lu.determinant()) > 0.0))
        throw Error(ErrorCode::singular_denominator, "sideband system is singular");
    const Eigen::Matrix<cplx, 6, 1> u = lu.solve(b);

    SidebandAmplitudes out;
    out.q_plus = u(0);
    out.q_minus = std::conj(u(1));
    out.a1_plus = u(2);
    out.a1_minus = std::conj(u(3));
    out.a2_plus = u(4);
    out.a2_minus = std::conj(u(5));
    return out;
}

} // namespace

SidebandAmplitudes sideband_solve(const PhysicalParams& p, const SteadyState& ss, double delta,
                                  SidebandMethod method) {
    validate(p);
    if (delta == 0.0)
        throw Error(ErrorCode::invalid_params, "probe detuning delta must be nonzero");
    return method == SidebandMethod::dense ? solve_dense(p, ss, delta)
                                           : solve_back_substitution(p, ss, delta);
}

SidebandAmplitudes sideband_solve(const SystemParams& s, double delta, SidebandMethod method) {
    PhysicalParams unit;
    unit.g0 = 1.0;
    const auto design = drive_for_target(s, unit);
    return sideband_solve(design.phys, design.state, delta, method);
}

std::vector<double> uniform_grid(double x_min, double x_max, std::size_t n) {
    if (n < 2 || !(x_min < x_max))
        throw Error(ErrorCode::invalid_params, "grid needs n >= 2 and x_min < x_max");
    std::vector<double> xs(n);
    const double span = x_max - x_min;
    const double denom = static_cast<double>(n - 1);
    for (std::size_t k = 0; k < n; ++k)
        xs[k] = x_min + span * (static_cast<double>(k) / denom);
    xs.back() = x_max;
    return xs;
}

std::vector<ResponsePoint> spectrum(const SystemParams& s, double x_min, double x_max,
                                   std::size_t n, ResponseMode mode, unsigned threads) {
    validate(s);
    const auto xs = uniform_grid(x_min, x_max, n);
    std::vector<ResponsePoint> out(n);
    detail::parallel_for(n, threads, [&](std::size_t k) {
        const double x = xs[k];
        ResponsePoint pt;
        pt.x = x;
        pt.delta = s.omega_m + x;
        try {
            pt.a1_plus = mode == ResponseMode::full ? response_full(s, pt.delta)
                                                    : response_simplified(s, x);
        } catch (const Error& e) {
            std::ostringstream os;
            os.precision(17);
            os << "at x=" << x << ": " << e.what();
            throw Error(e.code(), os.str());
        }
        pt.eps_T = quadrature(pt.a1_plus, s.kappa1);
        pt.re = pt.eps_T.real();
        pt.im = pt.eps_T.imag();
        out[k] = pt;
    });
    return out;
}

} // namespace omit
