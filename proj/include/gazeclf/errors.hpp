#pragma once

#include <stdexcept>
#include <string>

namespace gazeclf {

/// Every failure raised by the library carries one of these kinds; the CLI
/// maps the category (config / data / numerical) to its exit code.
enum class ErrorKind {
    // configuration
    Config,
    InvalidArgument,
    // data
    MalformedRow,
    DuplicateOnset,
    UnknownLabel,
    NotPgm,
    UnsupportedMaxval,
    AllBackground,
    EmptyTrial,
    EmptyMask,
    DimensionMismatch,
    TooFewPerClass,
    SingleClassTruth,
    KTooLarge,
    EmptyGroup,
    RejectionOverflow,
    // numerical
    DegenerateData,
    NonFiniteKernel,
    IllConditionedKernel,
};

inline const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Config: return "ConfigError";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::MalformedRow: return "MalformedRow";
        case ErrorKind::DuplicateOnset: return "DuplicateOnset";
        case ErrorKind::UnknownLabel: return "UnknownLabel";
        case ErrorKind::NotPgm: return "NotPgm";
        case ErrorKind::UnsupportedMaxval: return "UnsupportedMaxval";
        case ErrorKind::AllBackground: return "AllBackground";
        case ErrorKind::EmptyTrial: return "EmptyTrial";
        case ErrorKind::EmptyMask: return "EmptyMask";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::TooFewPerClass: return "TooFewPerClass";
        case ErrorKind::SingleClassTruth: return "SingleClassTruth";
        case ErrorKind::KTooLarge: return "KTooLarge";
        case ErrorKind::EmptyGroup: return "EmptyGroup";
        case ErrorKind::RejectionOverflow: return "RejectionOverflow";
        case ErrorKind::DegenerateData: return "DegenerateData";
        case ErrorKind::NonFiniteKernel: return "NonFiniteKernel";
        case ErrorKind::IllConditionedKernel: return "IllConditionedKernel";
    }
    return "Unknown";
}

enum class ErrorCategory { Config, Data, Numerical };

inline ErrorCategory category_of(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Config:
        case ErrorKind::InvalidArgument:
            return ErrorCategory::Config;
        case ErrorKind::DegenerateData:
        case ErrorKind::NonFiniteKernel:
        case ErrorKind::IllConditionedKernel:
            return ErrorCategory::Numerical;
        default:
            return ErrorCategory::Data;
    }
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }
    ErrorCategory category() const noexcept { return category_of(kind_); }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

inline void require(bool condition, ErrorKind kind, const std::string& message) {
    if (!condition) fail(kind, message);
}

}  // namespace gazeclf
