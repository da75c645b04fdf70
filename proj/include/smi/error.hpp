#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace smi {

enum class ErrorKind {
    Range,
    EmptyGroup,
    MissingAgent,
    InvalidPartition,
    EmptyContext,
    DimensionMismatch,
    NotAMember,
    NoCandidates,
    ActionSetMismatch,
    ConfigInvalid,
    IncompleteLog,
    Parse,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Single exception type for the library; `kind()` identifies the failure class.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message);

    ErrorKind kind() const noexcept { return kind_; }
    /// Message without the kind prefix.
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorKind kind_;
    std::string detail_;
};

}  // namespace smi
