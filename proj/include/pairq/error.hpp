#pragma once

#include <stdexcept>
#include <string>

namespace pairq {

enum class ErrorKind {
    InvalidArgument,
    DimensionMismatch,
    NotSymmetric,
    NotPositiveSemidefinite,
    OutOfRange,
    ModeMismatch,
    NonFinite,
    Io,
    Format,
};

const char* to_string(ErrorKind kind) noexcept;

/// Exception carrying a machine-checkable category in addition to the message.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace pairq
