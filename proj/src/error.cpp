#include "hotstream/error.hpp"

namespace hotstream {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::invalid_params: return "invalid-params";
    case ErrorCode::out_of_universe: return "out-of-universe";
    case ErrorCode::duplicate_key: return "duplicate-key";
    case ErrorCode::missing_entry: return "missing-entry";
    case ErrorCode::lambda_underflow: return "lambda-underflow";
    case ErrorCode::queue_underflow: return "queue-underflow";
    case ErrorCode::budget_exceeded: return "budget-exceeded";
    case ErrorCode::integrity_violation: return "integrity-violation";
    case ErrorCode::bad_cardinality: return "bad-cardinality";
    case ErrorCode::alpha_too_small: return "alpha-too-small";
    case ErrorCode::non_integral_alpha: return "non-integral-alpha";
    case ErrorCode::parse_error: return "parse-error";
    case ErrorCode::io_error: return "io-error";
    }
    return "unknown";
}

} // namespace hotstream
