#pragma once

#include <stdexcept>
#include <string>

namespace spinbeat {

// Base class for all domain errors raised by the library.
struct SimError : std::runtime_error {
    explicit SimError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ZeroNorm : SimError {
    ZeroNorm() : SimError("spinor norm is (numerically) zero") {}
};

struct NonPositiveWavelength : SimError {
    NonPositiveWavelength() : SimError("wavelength must be > 0") {}
};

struct NonPositiveSpeed : SimError {
    NonPositiveSpeed() : SimError("speed must be > 0") {}
};

struct NonPositiveField : SimError {
    NonPositiveField() : SimError("field magnitude must be > 0") {}
};

struct UnsupportedProfile : SimError {
    UnsupportedProfile()
        : SimError("analytic propagator supports the continuous rotation profile only; "
                   "use evolve_numeric for oscillating profiles") {}
};

struct NoConvergence : SimError {
    explicit NoConvergence(const std::string& msg) : SimError(msg) {}
};

struct NonPositiveFrequency : SimError {
    NonPositiveFrequency() : SimError("wave frequency must be > 0") {}
};

struct InvalidQuantumNumber : SimError {
    InvalidQuantumNumber() : SimError("M must be an integer or half-odd-integer") {}
};

struct NonPositiveOutput : SimError {
    NonPositiveOutput() : SimError("output frequency is non-positive; parameters outside validity") {}
};

struct InsufficientData : SimError {
    explicit InsufficientData(const std::string& msg) : SimError(msg) {}
};

struct DegenerateFit : SimError {
    explicit DegenerateFit(const std::string& msg) : SimError(msg) {}
};

struct ConfigError : SimError {
    explicit ConfigError(const std::string& msg) : SimError(msg) {}
};

}  // namespace spinbeat
