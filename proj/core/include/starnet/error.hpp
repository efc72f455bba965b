// error.hpp — error type shared by all starnet modules

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace starnet {

enum class ErrorCode {
    parameter,                 // invalid or inconsistent input parameters
    domain,                    // argument outside the mathematical domain
    degenerate_network,        // all couplings zero, analytic eigensystem undefined
    perturbation_inapplicable, // xi undefined (g_av = 0)
    instability,               // non-positive Hooke constant / eigenvalue
    contract,                  // caller violated a precondition (frame, empty grid, ...)
    resource,                  // configured resource cap exceeded
    integration_accuracy,      // oracle integrator failed its accuracy checks
    diagnostics,               // numeric diagnostics failed (convergence, short window, ...)
    degenerate_fit,            // nothing to fit
};

std::string_view to_string(ErrorCode code) noexcept;

// Numeric/resource failures map to exit status 2, everything else to 1.
bool is_numeric(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace starnet
