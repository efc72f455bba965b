#include "starnet/error.hpp"

namespace starnet {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::parameter: return "parameter_error";
    case ErrorCode::domain: return "domain_error";
    case ErrorCode::degenerate_network: return "degenerate_network";
    case ErrorCode::perturbation_inapplicable: return "perturbation_inapplicable";
    case ErrorCode::instability: return "instability";
    case ErrorCode::contract: return "contract_error";
    case ErrorCode::resource: return "resource_error";
    case ErrorCode::integration_accuracy: return "integration_accuracy";
    case ErrorCode::diagnostics: return "diagnostics_error";
    case ErrorCode::degenerate_fit: return "degenerate_fit";
    }
    return "unknown";
}

bool is_numeric(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::instability:
    case ErrorCode::resource:
    case ErrorCode::integration_accuracy:
    case ErrorCode::diagnostics:
    case ErrorCode::degenerate_fit:
        return true;
    default:
        return false;
    }
}

} // namespace starnet
