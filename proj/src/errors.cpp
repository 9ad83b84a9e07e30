#include "roofline/errors.hpp"

namespace roofline {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::UnknownGpu: return "UnknownGpu";
        case ErrorCode::InvalidSpec: return "InvalidSpec";
        case ErrorCode::EmptyInput: return "EmptyInput";
        case ErrorCode::MissingColumn: return "MissingColumn";
        case ErrorCode::MalformedRow: return "MalformedRow";
        case ErrorCode::NoFunctionsFound: return "NoFunctionsFound";
        case ErrorCode::FunctionNotFound: return "FunctionNotFound";
        case ErrorCode::MissingDuration: return "MissingDuration";
        case ErrorCode::NoInstructionMetric: return "NoInstructionMetric";
        case ErrorCode::InvalidNumber: return "InvalidNumber";
        case ErrorCode::InvalidProfile: return "InvalidProfile";
        case ErrorCode::Overflow: return "Overflow";
        case ErrorCode::NonPositiveRuntime: return "NonPositiveRuntime";
        case ErrorCode::ZeroTraffic: return "ZeroTraffic";
        case ErrorCode::ZeroTransactions: return "ZeroTransactions";
        case ErrorCode::MissingMetric: return "MissingMetric";
        case ErrorCode::ModeUnsupported: return "ModeUnsupported";
        case ErrorCode::InconsistentMode: return "InconsistentMode";
        case ErrorCode::NonPositiveValue: return "NonPositiveValue";
        case ErrorCode::InvalidOptions: return "InvalidOptions";
        case ErrorCode::Io: return "Io";
        case ErrorCode::Config: return "Config";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code), detail_(detail) {}

Error Error::with_context(const std::string& context) const {
    return Error(code_, context + ": " + detail_);
}

}  // namespace roofline
