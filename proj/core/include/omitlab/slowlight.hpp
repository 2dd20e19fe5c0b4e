#pragma once

#include "omitlab/params.hpp"
#include "omitlab/response.hpp"

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

namespace omit {

enum class LightKind { slow, fast, neutral };

std::string_view to_string(LightKind k) noexcept;

struct DelayPoint {
    double x = 0.0;
    double tau = 0.0;  // 1 / (frequency unit)
    LightKind classification = LightKind::neutral;
};

struct DelayOptions {
    ResponseMode mode = ResponseMode::simplified;
    // Base differentiation step; default 1e-4 max(width, gamma_m).
    std::optional<double> step;
};

// Default base step used by group_delay.
double delay_step(const SystemParams& s);

// tau = d arg[eps_T - 1] / d omega_p, by central differences with two-level
// Richardson extrapolation on an unwrapped phase.
DelayPoint group_delay(const SystemParams& s, double x, const DelayOptions& opts = {});

std::vector<DelayPoint> delay_curve(const SystemParams& s, double x_min, double x_max,
                                    std::size_t n, const DelayOptions& opts = {},
                                    unsigned threads = 0);

// Closed-form delay at the perfect window.
double delay_at_window(const SystemParams& s);

struct DelayMaximum {
    double x_star = 0.0;
    double tau_star = 0.0;
};

// Grid argmax refined by golden section to 1e-6 (x_max - x_min).
DelayMaximum max_delay_scan(const SystemParams& s, double x_min, double x_max, std::size_t n,
                            const DelayOptions& opts = {});

} // namespace omit
