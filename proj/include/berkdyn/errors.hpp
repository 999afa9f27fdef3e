#pragma once

#include <stdexcept>
#include <string>

namespace berkdyn {

// Error classes surfaced to callers and mapped to CLI exit codes.
enum class ErrorCode {
    NonUnit,
    FieldTooLarge,
    NotACycle,
    DegreeOverflow,
    ZeroPolynomial,
    InseparableWronskian,
    TypeIInfinite,
    EqualPoints,
    NonIntegralExponent,
    TargetEqualsBase,
    OutOfRange,
    DisjointUnion,
    EmptyIntersection,
    ZeroOrPoleInAnnulus,
    UnsupportedRamification,
    HenselObstruction,
    JetTailDominates,
    NotInvariant,
    PrecisionExhausted,
    BudgetExhausted,
    SyntaxError,
    ConstantMap,
    InvalidArgument,
    Internal,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

inline const char* error_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::NonUnit: return "NonUnit";
        case ErrorCode::FieldTooLarge: return "FieldTooLarge";
        case ErrorCode::NotACycle: return "NotACycle";
        case ErrorCode::DegreeOverflow: return "DegreeOverflow";
        case ErrorCode::ZeroPolynomial: return "ZeroPolynomial";
        case ErrorCode::InseparableWronskian: return "InseparableWronskian";
        case ErrorCode::TypeIInfinite: return "TypeIInfinite";
        case ErrorCode::EqualPoints: return "EqualPoints";
        case ErrorCode::NonIntegralExponent: return "NonIntegralExponent";
        case ErrorCode::TargetEqualsBase: return "TargetEqualsBase";
        case ErrorCode::OutOfRange: return "OutOfRange";
        case ErrorCode::DisjointUnion: return "DisjointUnion";
        case ErrorCode::EmptyIntersection: return "EmptyIntersection";
        case ErrorCode::ZeroOrPoleInAnnulus: return "ZeroOrPoleInAnnulus";
        case ErrorCode::UnsupportedRamification: return "UnsupportedRamification";
        case ErrorCode::HenselObstruction: return "HenselObstruction";
        case ErrorCode::JetTailDominates: return "JetTailDominates";
        case ErrorCode::NotInvariant: return "NotInvariant";
        case ErrorCode::PrecisionExhausted: return "PrecisionExhausted";
        case ErrorCode::BudgetExhausted: return "BudgetExhausted";
        case ErrorCode::SyntaxError: return "SyntaxError";
        case ErrorCode::ConstantMap: return "ConstantMap";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::Internal: return "Internal";
    }
    return "Unknown";
}

[[noreturn]] inline void fail(ErrorCode c, const std::string& msg) {
    throw Error(c, std::string(error_name(c)) + ": " + msg);
}

} // namespace berkdyn
