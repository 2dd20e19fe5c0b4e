#pragma once

#include "omitlab/params.hpp"
#include "omitlab/steady_state.hpp"

#include <complex>
#include <cstddef>
#include <vector>

namespace omit {

// First-order probe sidebands per unit probe amplitude: s = s0 + e^{-i delta t} s_plus
// + e^{+i delta t} s_minus.
struct SidebandAmplitudes {
    cplx q_plus{}, q_minus{};
    cplx a1_plus{}, a1_minus{};
    cplx a2_plus{}, a2_minus{};
};

enum class ResponseMode { full, simplified };

struct ResponsePoint {
    double x = 0.0;      // delta - omega_m
    double delta = 0.0;  // omega_p - omega_c
    cplx a1_plus{};
    cplx eps_T{};
    double re = 0.0;
    double im = 0.0;
};

// Nested-fraction response with the exact mechanical term
// (delta^2 - omega_m^2 + i delta gamma_m) / (2 i omega_m).
cplx response_full(const SystemParams& s, double delta);

// Near-resonance form in the window coordinate x = delta - omega_m.
cplx response_simplified(const SystemParams& s, double x);

inline cplx quadrature(cplx a1_plus, double kappa1) { return 2.0 * kappa1 * a1_plus; }

// Output quadrature eps_T at window coordinate x.
cplx eps_T(const SystemParams& s, double x, ResponseMode mode = ResponseMode::simplified);

enum class SidebandMethod {
    back_substitution,  // closed-form elimination through q_plus
    dense,              // generic 6x6 LU solve; kept as a cross-check
};

SidebandAmplitudes sideband_solve(const PhysicalParams& p, const SteadyState& ss, double delta,
                                  SidebandMethod method = SidebandMethod::back_substitution);

// Uses a canonical physical realization (hbar = m = g0 = 1) of `s`.
SidebandAmplitudes sideband_solve(const SystemParams& s, double delta,
                                  SidebandMethod method = SidebandMethod::back_substitution);

// Uniform grid x_k = x_min + k (x_max - x_min) / (n - 1), endpoints exact.
std::vector<double> uniform_grid(double x_min, double x_max, std::size_t n);

// Points are computed independently (in parallel when `threads` > 1) and
// returned in grid order.
std::vector<ResponsePoint> spectrum(const SystemParams& s, double x_min, double x_max,
                                   std::size_t n, ResponseMode mode = ResponseMode::simplified,
                                   unsigned threads = 0);

} // namespace omit
