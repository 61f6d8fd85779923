#pragma once

#include <cmath>

#include "spinbeat/errors.hpp"

namespace spinbeat {

// Physical constants in SI units. Defaults are CODATA 2018; every value can be
// overridden (e.g. from a config file) so tests can pin exact numbers.
struct PhysicalConstants {
    double hbar = 1.054571817e-34;                    // J s
    double neutron_mass = 1.67492749804e-27;          // kg
    double planck_h = 6.62607015e-34;                 // J s
    double gyromagnetic_ratio_neutron = -1.83247171e8;  // rad s^-1 T^-1, signed
    double ev_per_joule = 6.241509074e18;             // eV / J

    void validate() const {
        if (hbar == 0.0 || neutron_mass == 0.0 || planck_h == 0.0 ||
            gyromagnetic_ratio_neutron == 0.0 || ev_per_joule == 0.0)
            throw ConfigError("physical constants must be nonzero");
        if (gyromagnetic_ratio_neutron >= 0.0)
            throw ConfigError("neutron gyromagnetic ratio must be negative");
    }
};

inline PhysicalConstants codata2018() { return PhysicalConstants{}; }

}  // namespace spinbeat
