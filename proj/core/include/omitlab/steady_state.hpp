#pragma once

#include "omitlab/params.hpp"

#include <complex>
#include <cstddef>
#include <limits>
#include <vector>

namespace omit {

using cplx = std::complex<double>;

// Drive-on, probe-off operating point of the mean-field equations.
struct SteadyState {
    double q0 = 0.0;
    double p0 = 0.0;  // always 0 at a fixed point
    cplx a10{};
    cplx a20{};
};

struct SteadyStateSet {
    std::vector<SteadyState> roots;  // ascending in q0
    // Root reached by ramping both drives from zero (8 homotopy steps).
    std::size_t adiabatic_index = 0;
};

// Cavity amplitudes consistent with a given displacement.
cplx cavity1_amplitude(const PhysicalParams& p, double q0);
cplx cavity2_amplitude(const PhysicalParams& p, double q0);

// f(q0) = q0 - hbar g0 (|a10|^2 - |a20|^2) / (m omega_m^2)
double fixed_point_residual(const PhysicalParams& p, double q0);

// Half-width Q of the interval [-Q, Q] that contains every root.
double root_scan_half_width(const PhysicalParams& p);

struct EffectiveCouplings {
    double beta1 = 0.0;
    double beta2 = 0.0;
};

EffectiveCouplings effective_couplings(const PhysicalParams& p, const SteadyState& ss);

// All real roots of the fixed-point equation.
SteadyStateSet steady_state(const PhysicalParams& p);

inline constexpr std::size_t kAdiabaticBranch = std::numeric_limits<std::size_t>::max();

// Reduced parameters at one steady-state branch (index into the ascending
// root list, or kAdiabaticBranch).
SystemParams reduced_from_physical(const PhysicalParams& p, std::size_t branch = kAdiabaticBranch);
SystemParams reduced_from_physical(const PhysicalParams& p, const SteadyState& ss);

struct DriveDesign {
    PhysicalParams phys;  // eps_c, eps_d, delta_c, delta_d filled in; eps_p = 0
    SteadyState state;    // the designed operating point
};

// Drive amplitudes and drive detunings that realize a reduced parameter set
// for the given g0, m, hbar (taken from `partial`; its eps/delta fields are
// ignored). omega_m, gamma_m and the kappas come from `target`.
DriveDesign drive_for_target(const SystemParams& target, const PhysicalParams& partial);

} // namespace omit
