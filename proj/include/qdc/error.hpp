#pragma once

#include <stdexcept>
#include <string>

namespace qdc {

// Mirrors qdc_status in the C API; values are part of the ABI.
enum class ErrorCode : int {
    InvalidArgument = 1,
    DimensionMismatch = 2,
    Parse = 3,
    NotUnitary = 4,
    NotConverged = 5,
    Io = 6,
    Internal = 7,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace qdc
