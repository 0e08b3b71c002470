#pragma once

#include <stdexcept>
#include <string>

namespace qpr {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct NonUnit : Error {
    explicit NonUnit(const std::string& msg) : Error("NonUnit: " + msg) {}
};

struct PrecisionExhausted : Error {
    explicit PrecisionExhausted(const std::string& msg) : Error("PrecisionExhausted: " + msg) {}
};

struct DomainViolation : Error {
    explicit DomainViolation(const std::string& msg) : Error("DomainViolation: " + msg) {}
};

struct NotDivisible : Error {
    explicit NotDivisible(const std::string& msg) : Error("NotDivisible: " + msg) {}
};

struct SingularAtPrecision : Error {
    explicit SingularAtPrecision(const std::string& msg) : Error("SingularAtPrecision: " + msg) {}
};

struct LevelExceedsK : Error {
    explicit LevelExceedsK(const std::string& msg) : Error("LevelExceedsK: " + msg) {}
};

struct SpectraNotDisjoint : Error {
    explicit SpectraNotDisjoint(const std::string& msg) : Error("SpectraNotDisjoint: " + msg) {}
};

struct ResidueFieldTooSmall : Error {
    explicit ResidueFieldTooSmall(const std::string& msg) : Error("ResidueFieldTooSmall: " + msg) {}
};

struct AmbiguousAtPrecision : Error {
    explicit AmbiguousAtPrecision(const std::string& msg) : Error("AmbiguousAtPrecision: " + msg) {}
};

struct ResidueRootMissing : Error {
    explicit ResidueRootMissing(const std::string& msg) : Error("ResidueRootMissing: " + msg) {}
};

struct NotIntegrable : Error {
    explicit NotIntegrable(const std::string& msg) : Error("NotIntegrable: " + msg) {}
};

struct NotACocycle : Error {
    explicit NotACocycle(const std::string& msg) : Error("NotACocycle: " + msg) {}
};

struct NotCommuting : Error {
    explicit NotCommuting(const std::string& msg) : Error("NotCommuting: " + msg) {}
};

struct ExtensionCommutationFailure : Error {
    explicit ExtensionCommutationFailure(const std::string& msg)
        : Error("ExtensionCommutationFailure: " + msg) {}
};

struct SerializationError : Error {
    explicit SerializationError(const std::string& msg) : Error("SerializationError: " + msg) {}
};

struct UsageError : Error {
    explicit UsageError(const std::string& msg) : Error("UsageError: " + msg) {}
};

} // namespace qpr
