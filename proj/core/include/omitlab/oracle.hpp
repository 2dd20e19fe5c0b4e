#pragma once

#include "omitlab/params.hpp"
#include "omitlab/steady_state.hpp"

#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace omit {

struct SimState {
    cplx a1{};
    cplx a2{};
    double q = 0.0;
    double p = 0.0;
};

// Uniformly sampled solution of the mean-field equations with a weak probe on
// cavity 1. Sample k sits at t0 + k * dt exactly.
struct Trajectory {
    std::vector<double> t;
    std::vector<cplx> a1, a2;
    std::vector<double> q, p;
    double dt = 0.0;  // sample spacing (integration step times stride)
    double delta = 0.0;
    PhysicalParams params;

    std::size_t size() const { return t.size(); }
};

struct IntegrateOptions {
    SimState initial{};
    double t_start = 0.0;
    std::size_t stride = 1;  // keep every stride-th step
};

// Largest step accepted by integrate(): 2 pi / (40 max(omega_m, |Delta_c|, |Delta_d|, kappa1, kappa2)).
double max_stable_step(const PhysicalParams& p);

// Step used by validate_perturbative unless overridden: half the maximum.
// RK4 shifts the mechanical frequency by ~(omega_m dt)^4 / 120, which matters
// against windows a few 1e-4 omega_m wide.
// Half the stability bound, and at least 80 steps per probe beat period.
double default_oracle_step(const PhysicalParams& p, double delta = 0.0);

// 12 / min(kappa1, kappa2, gamma_m / 2).
double relaxation_time(const PhysicalParams& p);

// Right-hand side of the mean-field equations at time t.
SimState mean_field_rhs(const PhysicalParams& p, double delta, double t, const SimState& y);

// Classical fixed-step RK4.
Trajectory integrate(const PhysicalParams& p, double delta, double t_end, double dt,
                     const IntegrateOptions& opts = {});

struct ToneFit {
    cplx c0{}, c_plus{}, c_minus{};  // constant, e^{-i delta t}, e^{+i delta t}
    double residual_rms = 0.0;       // absolute
};

// Least squares of y(t) onto {1, e^{-i delta t}, e^{+i delta t}} through the
// 3x3 normal equations.
ToneFit fit_three_tone(std::span<const double> t, std::span<const cplx> y, double delta);

struct SidebandFit {
    cplx a10_fit{}, a1p_fit{}, a1m_fit{};
    cplx q_plus_fit{}, q_minus_fit{};
    double residual_rms = 0.0;  // relative to the fitted signal scale
    double window_start = 0.0, window_end = 0.0;
};

struct FitWindow {
    double start = 0.0;
    double end = 0.0;
};

// Default window: last 60% of the record after relaxation_time().
FitWindow default_fit_window(const Trajectory& traj);

SidebandFit extract_sidebands(const Trajectory& traj, double delta, double eps_p,
                              std::optional<FitWindow> window = std::nullopt);

struct OracleOptions {
    std::optional<double> t_end;
    std::optional<double> dt;  // default_oracle_step()
    std::optional<std::size_t> stride;
    std::optional<double> eps_p;  // default phys.eps_p, else 1e-3 eps_c
    SimState initial{};
    unsigned threads = 0;
    double tolerance = 1e-2;
};

struct OraclePoint {
    double delta = 0.0;
    cplx a1p_fit{}, a1p_ref{};
    cplx a1m_fit{}, a1m_ref{};
    double rel_error = 0.0;
    double a1m_rel_error = 0.0;
    double residual_rms = 0.0;
    std::optional<std::string> error;
};

struct OracleReport {
    std::vector<OraclePoint> points;
    double max_error = 0.0;
    double median_error = 0.0;
    double eps_p = 0.0;
    bool passed = false;
};

// Time-domain a1_plus versus the closed-form response at each delta.
// Failures at one delta are recorded on that point; the rest still run.
OracleReport validate_perturbative(const PhysicalParams& p, std::span<const double> deltas,
                                   const OracleOptions& opts = {});

// CSV with header t,re_a1,im_a1,re_a2,im_a2,q,p.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

} // namespace omit
