#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace omit {

enum class ErrorCode {
    invalid_params,
    singular_denominator,
    no_convergence,
    branch_out_of_range,
    below_threshold,
    no_root,
    unequal_kappas,
    singular_eta,
    domain_error,
    no_dip,
    phase_singularity,
    blowup,
    ill_conditioned,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries one of the codes above so the
// CLI can map solver failures to exit codes without string matching.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace omit
