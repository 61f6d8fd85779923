#pragma once

#include <cmath>
#include <utility>

#include "spinbeat/constants.hpp"
#include "spinbeat/errors.hpp"

namespace spinbeat {

// Photon helicity along the propagation axis.
struct Helicity {
    int value = +1;  // +1 or -1

    static Helicity plus() { return {+1}; }
    static Helicity minus() { return {-1}; }
    Helicity flipped() const { return {-value}; }
};

struct RotatingObserver {
    double Omega = 0.0;  // rad/s, signed, along the propagation axis
    double gamma = 1.0;  // Lorentz factor

    void validate() const {
        if (gamma < 1.0) throw ConfigError("Lorentz factor must be >= 1");
    }
};

// Frequency seen in the rotating frame: omega' = gamma (omega -+ Omega), the
// upper sign for positive helicity. May be negative; no clamping.
inline double doppler_shift(double omega, const RotatingObserver& obs, Helicity h) {
    if (!(omega > 0.0)) throw NonPositiveFrequency{};
    return obs.gamma * (omega - h.value * obs.Omega);
}

// E' = gamma (E - hbar M Omega), M the total magnetic quantum number along the
// rotation axis (integer or half-odd-integer).
inline double rotating_observer_energy(double E, double M, const RotatingObserver& obs,
                                       const PhysicalConstants& k) {
    const double twice = 2.0 * M;
    if (std::fabs(twice - std::round(twice)) > 1e-9) throw InvalidQuantumNumber{};
    return obs.gamma * (E - k.hbar * M * obs.Omega);
}

struct HalfWavePlateResult {
    double omega_out = 0.0;
    Helicity helicity_out{};
};

// Uniformly rotating half-wave plate at gamma ~ 1: omega' is conserved through
// the plate and the helicity flips, so omega_out = omega_in - 2 h Omega.
inline HalfWavePlateResult half_wave_plate_shift(double omega_in, double Omega, Helicity h_in) {
    if (!(omega_in > 0.0)) throw NonPositiveFrequency{};
    const double omega_out = omega_in - 2.0 * h_in.value * Omega;
    if (omega_out <= 0.0) throw NonPositiveOutput{};
    return {omega_out, h_in.flipped()};
}

}  // namespace spinbeat
