#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hotstream {

enum class ErrorCode {
    invalid_params,
    out_of_universe,
    duplicate_key,
    missing_entry,
    lambda_underflow,
    queue_underflow,
    budget_exceeded,
    integrity_violation,
    bad_cardinality,
    alpha_too_small,
    non_integral_alpha,
    parse_error,
    io_error,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Single exception type for the library; `code()` tells callers (and the CLI
/// exit-code mapping) which contract was broken.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace hotstream
