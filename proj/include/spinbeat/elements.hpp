#pragma once

#include <cmath>
#include <numbers>
#include <variant>

#include "spinbeat/constants.hpp"
#include "spinbeat/errors.hpp"
#include "spinbeat/spinor.hpp"

namespace spinbeat {

// Coil axis angle as a function of time. Continuous: alpha(t) = alpha0 + Omega t.
// Oscillating: triangle wave about alpha0 with the given amplitude and period,
// alpha(0) = alpha0.
struct ContinuousProfile {};

struct OscillatingProfile {
    double amplitude_angle = 2.0 * std::numbers::pi / 3.0;  // rad
    double period = 60.0;                                   // s
};

using RotationProfile = std::variant<ContinuousProfile, OscillatingProfile>;

// Triangle wave 0 -> A -> 0 -> ... with the given period, zero at t = 0.
inline double triangle_wave(double t, double amplitude, double period) {
    double u = t / period - std::floor(t / period);  // in [0, 1)
    return amplitude * (1.0 - std::fabs(2.0 * u - 1.0));
}

struct StaticFlipper {
    double B = 0.0;          // T
    double axis_angle = 0.0;  // rad, from +x toward +y
    double width = 0.0;       // m
};

struct RotatingFlipper {
    double B = 0.0;       // T
    double Omega = 0.0;   // rad/s, signed, about +z
    double alpha0 = 0.0;  // rad, axis angle at t = 0
    double width = 0.0;   // m
    RotationProfile profile = ContinuousProfile{};

    // Instantaneous coil axis angle.
    double axis_angle_at(double t) const {
        if (std::holds_alternative<ContinuousProfile>(profile))
            return alpha0 + Omega * t;
        const auto& osc = std::get<OscillatingProfile>(profile);
        return alpha0 + triangle_wave(t, osc.amplitude_angle, osc.period);
    }

    // Slope of the axis angle; for the triangle wave this is the segment slope.
    double omega_effective() const {
        if (std::holds_alternative<ContinuousProfile>(profile)) return Omega;
        const auto& osc = std::get<OscillatingProfile>(profile);
        return osc.amplitude_angle / (0.5 * osc.period);
    }
};

// Stationary coil producing a rotating transverse field
// B(t) = B (cos(Omega t + alpha0), sin(Omega t + alpha0), 0);
// alpha0 = pi/2 gives B (-sin Omega t, cos Omega t, 0).
struct QuadratureCoil {
    double B = 0.0;
    double Omega = 0.0;
    double alpha0 = 0.0;
    double width = 0.0;
};

struct PhaseShifter {
    double chi = 0.0;  // rad
};

struct FreeFlight {
    double length = 0.0;  // m
};

using FieldElement =
    std::variant<StaticFlipper, RotatingFlipper, QuadratureCoil, PhaseShifter, FreeFlight>;

inline void validate(const FieldElement& e) {
    std::visit(
        [](const auto& el) {
            using T = std::decay_t<decltype(el)>;
            if constexpr (std::is_same_v<T, StaticFlipper> ||
                          std::is_same_v<T, RotatingFlipper> ||
                          std::is_same_v<T, QuadratureCoil>) {
                if (el.B < 0.0) throw ConfigError("field magnitude B must be >= 0");
                if (!(el.width > 0.0)) throw ConfigError("element width must be > 0");
            } else if constexpr (std::is_same_v<T, FreeFlight>) {
                if (el.length < 0.0) throw ConfigError("free-flight length must be >= 0");
            }
        },
        e);
}

// The rotating-wave treatment assumes |Omega| << |gamma_n| B. Not enforced,
// only flagged.
inline bool slow_rotation_violated(double Omega, double B, const PhysicalConstants& k,
                                   double ratio = 0.01) {
    return std::fabs(Omega) > ratio * std::fabs(k.gyromagnetic_ratio_neutron) * B;
}

// Geometric extent of an element along the beam.
inline double element_length(const FieldElement& e) {
    return std::visit(
        [](const auto& el) -> double {
            using T = std::decay_t<decltype(el)>;
            if constexpr (std::is_same_v<T, PhaseShifter>)
                return 0.0;
            else if constexpr (std::is_same_v<T, FreeFlight>)
                return el.length;
            else
                return el.width;
        },
        e);
}

// de Broglie speed v = h / (m lambda)
inline double neutron_speed(double wavelength, const PhysicalConstants& k) {
    if (!(wavelength > 0.0)) throw NonPositiveWavelength{};
    return k.planck_h / (k.neutron_mass * wavelength);
}

// pi-flip width w = pi v / (|gamma_n| B)
inline double flipper_width(double speed, double B, const PhysicalConstants& k) {
    if (!(speed > 0.0)) throw NonPositiveSpeed{};
    if (!(B > 0.0)) throw NonPositiveField{};
    return std::numbers::pi * speed / (std::fabs(k.gyromagnetic_ratio_neutron) * B);
}

struct BeamSpec {
    double wavelength = 2e-10;  // m
    double speed = 0.0;         // m/s, derived
    double kinetic_energy = 0.0;  // J, derived
    Spinor initial_spin{};      // longitudinally polarized by default

    static BeamSpec from_wavelength(double wavelength, const Spinor& spin0,
                                    const PhysicalConstants& k) {
        BeamSpec b;
        b.wavelength = wavelength;
        b.speed = neutron_speed(wavelength, k);
        b.kinetic_energy = 0.5 * k.neutron_mass * b.speed * b.speed;
        b.initial_spin = normalize(spin0);
        return b;
    }
};

}  // namespace spinbeat
