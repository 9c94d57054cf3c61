#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace biasforge {

enum class ErrorCode {
    invalid_argument,
    non_integrable,
    no_sampler,
    zero_normalizer,
    negative_weight,
    weight_mismatch,
    parity_mismatch,
    sign_violation,
    degenerate_alpha,
    negative_alpha,
    degenerate_beta,
    all_beta_zero,
    rejection_exhausted,
};

/// Stable machine-readable name, e.g. "DegenerateAlpha".
std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

inline void require(bool condition, const std::string& message) {
    if (!condition) fail(ErrorCode::invalid_argument, message);
}

}  // namespace biasforge
