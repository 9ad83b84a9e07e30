#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace roofline {

enum class ErrorCode {
    // hardware registry
    UnknownGpu,
    InvalidSpec,
    // ingestion
    EmptyInput,
    MissingColumn,
    MalformedRow,
    NoFunctionsFound,
    FunctionNotFound,
    MissingDuration,
    NoInstructionMetric,
    InvalidNumber,
    InvalidProfile,
    // metrics
    Overflow,
    NonPositiveRuntime,
    ZeroTraffic,
    ZeroTransactions,
    MissingMetric,
    ModeUnsupported,
    // model / render
    InconsistentMode,
    NonPositiveValue,
    InvalidOptions,
    // cli
    Io,
    Config,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library. what() carries the detail text; the
// code is stable and is what tests and the CLI dispatch on.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& detail);

    ErrorCode code() const noexcept { return code_; }
    const std::string& detail() const noexcept { return detail_; }

    // Same code, detail prefixed with context such as a file path.
    Error with_context(const std::string& context) const;

private:
    ErrorCode code_;
    std::string detail_;
};

}  // namespace roofline
