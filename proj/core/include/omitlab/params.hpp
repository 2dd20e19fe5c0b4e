#pragma once

#include <string>
#include <vector>

namespace omit {

// Laboratory-level parameters of the two-cavity / one-membrane system.
// All rates and detunings share one angular-frequency unit.
struct PhysicalParams {
    double omega_m = 1.0;  // mechanical frequency
    double gamma_m = 0.0;  // mechanical damping
    double kappa1 = 1.0;   // cavity 1 damping
    double kappa2 = 1.0;   // cavity 2 damping
    double g0 = 0.0;       // coupling per unit displacement
    double m = 1.0;        // effective mass
    double hbar = 1.0;
    double delta_c = 0.0;  // omega_0 - omega_c
    double delta_d = 0.0;  // omega_0 - omega_d
    double eps_c = 0.0;    // coupling field amplitude (cavity 1)
    double eps_d = 0.0;    // driving field amplitude (cavity 2)
    double eps_p = 0.0;    // probe amplitude (cavity 1)
};

// Reduced parameter set that drives every analytic formula. The betas carry
// frequency^2.
struct SystemParams {
    double omega_m = 1.0;
    double gamma_m = 0.0;
    double kappa1 = 1.0;
    double kappa2 = 1.0;
    double delta1 = 1.0;  // Delta_c - g0 q0
    double delta2 = 1.0;  // Delta_d + g0 q0
    double beta1 = 0.0;
    double beta2 = 0.0;

    // Frequencies times s, betas times s^2.
    SystemParams scaled(double s) const;
};

// Throw Error{invalid_params} naming the offending field.
void validate(const PhysicalParams& p);
void validate(const SystemParams& p);

// Non-fatal regime flags (weak coupling, weak probe, near-resonance).
std::vector<std::string> regime_warnings(const PhysicalParams& p);
std::vector<std::string> regime_warnings(const SystemParams& p);

// 2 beta1 kappa1 > gamma_m (kappa1^2 + 4 omega_m^2): a perfect window needs a
// positive beta2.
bool above_threshold(const SystemParams& p);
double threshold_beta1(const SystemParams& p);

} // namespace omit
