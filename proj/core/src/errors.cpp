#include "omitlab/errors.hpp"

namespace omit {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::invalid_params: return "InvalidParams";
    case ErrorCode::singular_denominator: return "SingularDenominator";
    case ErrorCode::no_convergence: return "NoConvergence";
    case ErrorCode::branch_out_of_range: return "BranchOutOfRange";
    case ErrorCode::below_threshold: return "BelowThreshold";
    case ErrorCode::no_root: return "NoRoot";
    case ErrorCode::unequal_kappas: return "UnequalKappas";
    case ErrorCode::singular_eta: return "SingularEta";
    case ErrorCode::domain_error: return "DomainError";
    case ErrorCode::no_dip: return "NoDip";
    case ErrorCode::phase_singularity: return "PhaseSingularity";
    case ErrorCode::blowup: return "Blowup";
    case ErrorCode::ill_conditioned: return "IllConditioned";
    }
    return "Unknown";
}

} // namespace omit
