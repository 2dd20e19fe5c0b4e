#include "omitlab/params.hpp"

#include "omitlab/errors.hpp"

#include <cmath>
#include <sstream>

namespace omit {

namespace {

void require(bool ok, const char* field, const char* rule, double value) {
    if (ok) return;
    std::ostringstream os;
    os << field << " must be " << rule << " (got " << value << ")";
    throw Error(ErrorCode::invalid_params, os.str());
}

void require_finite(double v, const char* field) {
    require(std::isfinite(v), field, "finite", v);
}

} // namespace

SystemParams SystemParams::scaled(double s) const {
    SystemParams out = *this;
    out.omega_m *= s;
    out.gamma_m *= s;
    out.kappa1 *= s;
    out.kappa2 *= s;
    out.delta1 *= s;
    out.delta2 *= s;
    out.beta1 *= s * s;
    out.beta2 *= s * s;
    return out;
}

void validate(const PhysicalParams& p) {
    for (auto [v, name] : {std::pair{p.omega_m, "omega_m"}, {p.gamma_m, "gamma_m"},
                           {p.kappa1, "kappa1"}, {p.kappa2, "kappa2"}, {p.g0, "g0"},
                           {p.m, "m"}, {p.hbar, "hbar"}, {p.delta_c, "delta_c"},
                           {p.delta_d, "delta_d"}, {p.eps_c, "eps_c"}, {p.eps_d, "eps_d"},
                           {p.eps_p, "eps_p"}})
        require_finite(v, name);
    require(p.omega_m > 0, "omega_m", "> 0", p.omega_m);
    require(p.gamma_m >= 0, "gamma_m", ">= 0", p.gamma_m);
    require(p.kappa1 > 0, "kappa1", "> 0", p.kappa1);
    require(p.kappa2 > 0, "kappa2", "> 0", p.kappa2);
    require(p.g0 >= 0, "g0", ">= 0", p.g0);
    require(p.m > 0, "m", "> 0", p.m);
    require(p.hbar > 0, "hbar", "> 0", p.hbar);
    require(p.eps_c >= 0, "eps_c", ">= 0", p.eps_c);
    require(p.eps_d >= 0, "eps_d", ">= 0", p.eps_d);
    require(p.eps_p >= 0, "eps_p", ">= 0", p.eps_p);
}

void validate(const SystemParams& p) {
    for (auto [v, name] : {std::pair{p.omega_m, "omega_m"}, {p.gamma_m, "gamma_m"},
                           {p.kappa1, "kappa1"}, {p.kappa2, "kappa2"}, {p.delta1, "delta1"},
                           {p.delta2, "delta2"}, {p.beta1, "beta1"}, {p.beta2, "beta2"}})
        require_finite(v, name);
    require(p.omega_m > 0, "omega_m", "> 0", p.omega_m);
    require(p.gamma_m >= 0, "gamma_m", ">= 0", p.gamma_m);
    require(p.kappa1 > 0, "kappa1", "> 0", p.kappa1);
    require(p.kappa2 > 0, "kappa2", "> 0", p.kappa2);
    require(p.beta1 >= 0, "beta1", ">= 0", p.beta1);
    require(p.beta2 >= 0, "beta2", ">= 0", p.beta2);
}

std::vector<std::string> regime_warnings(const PhysicalParams& p) {
    std::vector<std::string> out;
    if (p.g0 > 0.01 * p.omega_m)
        out.emplace_back("g0 > 0.01 omega_m: mean-field factorization may not hold");
    if (p.eps_c > 0 && p.eps_p > 0.01 * p.eps_c)
        out.emplace_back("eps_p > 0.01 eps_c: probe may leave the linear-response regime");
    return out;
}

std::vector<std::string> regime_warnings(const SystemParams& p) {
    std::vector<std::string> out;
    if (std::abs(p.delta1 - p.omega_m) > 0.1 * p.omega_m ||
        std::abs(p.delta2 - p.omega_m) > 0.1 * p.omega_m)
        out.emplace_back("effective detunings far from omega_m: simplified response is inaccurate");
    return out;
}

double threshold_beta1(const SystemParams& p) {
    const double w2 = p.omega_m * p.omega_m;
    return p.gamma_m * (p.kappa1 * p.kappa1 + 4.0 * w2) / (2.0 * p.kappa1);
}

bool above_threshold(const SystemParams& p) {
    const double w2 = p.omega_m * p.omega_m;
    return 2.0 * p.beta1 * p.kappa1 > p.gamma_m * (p.kappa1 * p.kappa1 + 4.0 * w2);
}

} // namespace omit
