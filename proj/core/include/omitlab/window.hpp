#pragma once

#include "omitlab/params.hpp"
#include "omitlab/response.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace omit {

enum class WindowMethod { analytic_large_k2, numeric_root, numeric_tangent };

std::string_view to_string(WindowMethod m) noexcept;

struct WindowCandidate {
    double x = 0.0;
    double beta2 = 0.0;
};

struct WindowSolution {
    double x_w = 0.0;
    double beta2 = 0.0;
    double xi = 0.0;             // 8 kappa2 omega_m^2 + gamma_m (kappa2^2 + 4 omega_m^2)
    std::optional<double> eta;   // equal-kappa width intermediate, only when kappa1 == kappa2
    std::optional<double> width;
    WindowMethod method = WindowMethod::analytic_large_k2;
    int iterations = 0;
    std::vector<WindowCandidate> alternates;  // other roots seen while scanning
    std::vector<std::string> warnings;

    // `sys` with beta2 replaced by the window's drive strength.
    SystemParams apply(SystemParams sys) const {
        sys.beta2 = beta2;
        return sys;
    }
};

// Left side of the pole condition
//   gamma_m/2 - ix - beta1/(kappa1 - 2i omega_m) + beta2/(kappa2 - ix) - beta2/(kappa2 - 2i omega_m).
cplx window_residual(const SystemParams& s, double x, double beta2);

// The (complex) beta2 that zeroes window_residual at x. A real positive value
// marks a physical perfect window.
cplx window_beta2_at(const SystemParams& s, double x);

// Closed form valid for kappa2 >> |x_w|.
WindowSolution perfect_window_large_k2(const SystemParams& s);

enum class WindowCriterion {
    // Re[eps_T] touches zero: Re eps_T = 0 and d/dx Re eps_T = 0.
    real_tangent,
    // Complex pole condition window_residual = 0 (eps_T itself vanishes).
    complex_pole,
};

struct WindowOptions {
    WindowCriterion criterion = WindowCriterion::real_tangent;
    std::optional<std::pair<double, double>> seed;  // (x, beta2)
    int max_iterations = 200;
};

WindowSolution perfect_window_general(const SystemParams& s, const WindowOptions& opts = {});

// FWHM closed form for kappa1 == kappa2.
double window_width_equal_kappa(const SystemParams& s);

// FWHM of the Re[eps_T] dip around win.x_w, with win.beta2 applied.
double window_width_numeric(const SystemParams& s, const WindowSolution& win,
                            ResponseMode mode = ResponseMode::simplified);

// eps_T at x = 0.
cplx absorption_at_resonance(const SystemParams& s);

// Simplified-response a1_plus with analytic derivatives in x and beta2.
struct ResponseJet {
    cplx a, a_x, a_xx, a_b, a_xb;
};
ResponseJet response_jet(const SystemParams& s, double x);

} // namespace omit
