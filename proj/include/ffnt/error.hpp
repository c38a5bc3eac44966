#pragma once

#include <stdexcept>
#include <string>

namespace ffnt {

enum class ErrorCode {
    NotPrime,
    EvenCharacteristic,
    ReducibleModulus,
    FieldMismatch,
    DivisionByZero,
    ZeroPolynomial,
    DegreeContractViolated,
    ConstantPolynomial,
    NotCoprime,
    ZeroModulus,
    ZeroDenominator,
    DegreeOutOfRange,
    NotCoprimeModuli,
    ZeroInverse,
    PrecisionExhausted,
    NotIndefinite,
    ReducibleF,
    NotMonic,
    NotPrimitive,
    NotASolution,
    NotStandardDefinite,
    NotShortVector,
    WrongMode,
    NotUnimodular,
    InfiniteIntersection,
    NoProbePoint,
    CoefficientBoundViolated,
    Inseparable,
    MissingDirichletComponent,
    DegenerateDiscriminant,
    ParseError,
    UsageError,
    AuditFailure,
    Internal,
};

const char* error_name(ErrorCode c);

struct Error : std::runtime_error {
    ErrorCode code;
    Error(ErrorCode c, const std::string& what)
        : std::runtime_error(std::string(error_name(c)) + ": " + what), code(c) {}
};

}  // namespace ffnt
