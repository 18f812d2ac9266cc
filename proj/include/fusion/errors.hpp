#pragma once

#include <stdexcept>
#include <string>

#include "fusion/rational.hpp"

namespace fusion {

struct FusionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GeneratorEvalError : FusionError {
    using FusionError::FusionError;
};

struct InvalidChildIndexError : FusionError {
    using FusionError::FusionError;
};

struct ExpansionTooLargeError : FusionError {
    BigInt count;  // exact tile count from the transition matrix
    ExpansionTooLargeError(const std::string& msg, BigInt c)
        : FusionError(msg), count(std::move(c)) {}
};

struct NotConstantLengthError : FusionError {
    using FusionError::FusionError;
};

struct NotStronglyPrimitiveError : FusionError {
    using FusionError::FusionError;
};

struct NotUnitGeometryError : FusionError {
    using FusionError::FusionError;
};

struct HorizonTooSmallError : FusionError {
    using FusionError::FusionError;
};

struct DimensionTooHighError : FusionError {
    using FusionError::FusionError;
};

struct ZeroColumnError : FusionError {
    using FusionError::FusionError;
};

struct UnknownCatalogEntryError : FusionError {
    using FusionError::FusionError;
};

struct BadParamError : FusionError {
    using FusionError::FusionError;
};

// Parse failure with position and the tokens that would have been accepted.
struct ParseError : FusionError {
    int line = 0;
    int column = 0;
    std::string expected;
    ParseError(const std::string& msg, int l, int c, std::string exp = {})
        : FusionError(msg + " at line " + std::to_string(l) + ", column " +
                      std::to_string(c) + (exp.empty() ? "" : " (expected " + exp + ")")),
          line(l), column(c), expected(std::move(exp)) {}
};

}  // namespace fusion
