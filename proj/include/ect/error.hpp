#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ect {

enum class ErrorCode {
    io_failure,
    bad_magic,
    malformed_header,
    unsupported_dtype,
    truncated_payload,
    trailing_data,
    shape_mismatch,
    invalid_argument,
    invalid_value,
    empty_volume,
    range_mismatch,
    undefined_metric,
    out_of_bounds,
};

std::string_view to_string(ErrorCode code) noexcept;

// Domain error carrying a machine-readable code. The CLI maps these to exit 1.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace ect
