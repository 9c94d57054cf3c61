#include "biasforge/errors.hpp"

namespace biasforge {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::non_integrable: return "NonIntegrable";
    case ErrorCode::no_sampler: return "NoSampler";
    case ErrorCode::zero_normalizer: return "ZeroNormalizer";
    case ErrorCode::negative_weight: return "NegativeWeight";
    case ErrorCode::weight_mismatch: return "WeightMismatch";
    case ErrorCode::parity_mismatch: return "ParityMismatch";
    case ErrorCode::sign_violation: return "SignViolation";
    case ErrorCode::degenerate_alpha: return "DegenerateAlpha";
    case ErrorCode::negative_alpha: return "NegativeAlpha";
    case ErrorCode::degenerate_beta: return "DegenerateBeta";
    case ErrorCode::all_beta_zero: return "AllBetaZero";
    case ErrorCode::rejection_exhausted: return "RejectionExhausted";
    }
    return "Unknown";
}

}  // namespace biasforge
