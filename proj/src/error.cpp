#include "smi/error.hpp"

namespace smi {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::Range: return "RangeError";
        case ErrorKind::EmptyGroup: return "EmptyGroup";
        case ErrorKind::MissingAgent: return "MissingAgent";
        case ErrorKind::InvalidPartition: return "InvalidPartition";
        case ErrorKind::EmptyContext: return "EmptyContext";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::NotAMember: return "NotAMember";
        case ErrorKind::NoCandidates: return "NoCandidates";
        case ErrorKind::ActionSetMismatch: return "ActionSetMismatch";
        case ErrorKind::ConfigInvalid: return "ConfigInvalid";
        case ErrorKind::IncompleteLog: return "IncompleteLog";
        case ErrorKind::Parse: return "ParseError";
    }
    return "Error";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind), detail_(message) {}

}  // namespace smi
