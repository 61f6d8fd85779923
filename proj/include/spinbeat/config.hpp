#pragma once

#include <cstdint>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "spinbeat/constants.hpp"
#include "spinbeat/detection.hpp"
#include "spinbeat/elements.hpp"
#include "spinbeat/interferometer.hpp"

namespace spinbeat {

inline constexpr const char* kToolVersion = "1.0.0";

struct RunManifest {
    std::string config_digest;
    std::string tool_version = kToolVersion;
    PhysicalConstants constants_used;
    std::vector<std::string> warnings;
};

struct ParsedRun {
    PhysicalConstants constants;
    InterferometerConfig interferometer;
    std::optional<CountingConfig> counting;
    RunManifest manifest;
};

namespace detail {

// FNV-1a 64-bit over the canonical (key-sorted) JSON dump.
inline std::string canonical_digest(const nlohmann::json& j) {
    const std::string canon = j.dump();  // nlohmann objects are key-sorted maps
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canon) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline double require_number(const nlohmann::json& j, const std::string& key,
                             const std::string& ctx) {
    if (!j.contains(key) || !j[key].is_number())
        throw ConfigError(ctx + ": missing or non-numeric field '" + key + "'");
    return j[key].get<double>();
}

inline double number_or(const nlohmann::json& j, const std::string& key, double dflt) {
    if (!j.contains(key)) return dflt;
    if (!j[key].is_number()) throw ConfigError("field '" + key + "' must be numeric");
    return j[key].get<double>();
}

// Omega in rad/s, accepting the rotation_period_s convenience.
inline double parse_omega(const nlohmann::json& j, const std::string& ctx) {
    if (j.contains("rotation_period_s")) {
        const double p = require_number(j, "rotation_period_s", ctx);
        if (!(p != 0.0)) throw ConfigError(ctx + ": rotation_period_s must be nonzero");
        return 2.0 * std::numbers::pi / p;
    }
    return number_or(j, "Omega", 0.0);
}

inline RotationProfile parse_profile(const nlohmann::json& j, const std::string& ctx) {
    if (!j.contains("profile")) return ContinuousProfile{};
    const auto& p = j["profile"];
    const std::string type = p.value("type", "continuous");
    if (type == "continuous") return ContinuousProfile{};
    if (type == "oscillating") {
        OscillatingProfile o;
        o.amplitude_angle = number_or(p, "amplitude_angle", 2.0 * std::numbers::pi / 3.0);
        o.period = number_or(p, "period", 60.0);
        if (!(o.period > 0.0)) throw ConfigError(ctx + ": profile.period must be > 0");
        return o;
    }
    throw ConfigError(ctx + ": unknown profile type '" + type + "'");
}

inline FieldElement parse_element(const nlohmann::json& j, const BeamSpec& beam,
                                  const PhysicalConstants& k, const std::string& ctx) {
    if (!j.contains("type") || !j["type"].is_string())
        throw ConfigError(ctx + ": element needs a string 'type'");
    const std::string type = j["type"].get<std::string>();

    auto width_of = [&](double B) {
        if (j.contains("width")) return require_number(j, "width", ctx);
        if (!(B > 0.0))
            throw ConfigError(ctx + ": width required when B = 0 (no pi-flip default)");
        return flipper_width(beam.speed, B, k);  // pi-flip by default
    };

    if (type == "static_flipper") {
        StaticFlipper e;
        e.B = require_number(j, "B", ctx);
        e.axis_angle = number_or(j, "axis_angle", std::numbers::pi / 2.0);
        e.width = width_of(e.B);
        return e;
    }
    if (type == "rotating_flipper") {
        RotatingFlipper e;
        e.B = require_number(j, "B", ctx);
        e.Omega = parse_omega(j, ctx);
        e.alpha0 = number_or(j, "alpha0", std::numbers::pi / 2.0);
        e.width = width_of(e.B);
        e.profile = parse_profile(j, ctx);
        return e;
    }
    if (type == "quadrature_coil") {
        QuadratureCoil e;
        e.B = require_number(j, "B", ctx);
        e.Omega = parse_omega(j, ctx);
        e.alpha0 = number_or(j, "alpha0", std::numbers::pi / 2.0);
        e.width = width_of(e.B);
        return e;
    }
    if (type == "phase_shifter") {
        return PhaseShifter{require_number(j, "chi", ctx)};
    }
    if (type == "free_flight") {
        return FreeFlight{require_number(j, "length", ctx)};
    }
    throw ConfigError(ctx + ": unknown element type '" + type + "'");
}

inline BeamPath parse_path(const nlohmann::json& j, const std::string& key,
                           const BeamSpec& beam, const PhysicalConstants& k) {
    if (!j.contains(key) || !j[key].is_array())
        throw ConfigError("config: '" + key + "' must be an array of elements");
    BeamPath p;
    p.label = (key == "path_I") ? "I" : "II";
    int idx = 0;
    for (const auto& ej : j[key]) {
        p.elements.push_back(parse_element(ej, beam, k, key + "[" + std::to_string(idx) + "]"));
        ++idx;
    }
    return p;
}

inline void collect_warnings(const BeamPath& p, const PhysicalConstants& k,
                             std::vector<std::string>& warnings) {
    for (const auto& e : p.elements) {
        double B = 0.0, Omega = 0.0;
        if (const auto* r = std::get_if<RotatingFlipper>(&e)) {
            B = r->B;
            Omega = r->omega_effective();
        } else if (const auto* q = std::get_if<QuadratureCoil>(&e)) {
            B = q->B;
            Omega = q->Omega;
        } else {
            continue;
        }
        if (B > 0.0 && slow_rotation_violated(Omega, B, k)) {
            std::ostringstream os;
            os << "path " << p.label << ": |Omega| = " << std::fabs(Omega)
               << " rad/s is not small against |gamma_n| B = "
               << std::fabs(k.gyromagnetic_ratio_neutron) * B << " rad/s";
            warnings.push_back(os.str());
        }
    }
}

}  // namespace detail

inline ParsedRun parse_run_config(const nlohmann::json& j) {
    ParsedRun run;

    if (j.contains("constants")) {
        const auto& c = j["constants"];
        run.constants.hbar = detail::number_or(c, "hbar", run.constants.hbar);
        run.constants.planck_h = detail::number_or(c, "planck_h", run.constants.planck_h);
        run.constants.neutron_mass =
            detail::number_or(c, "neutron_mass", run.constants.neutron_mass);
        run.constants.gyromagnetic_ratio_neutron = detail::number_or(
            c, "gyromagnetic_ratio_neutron", run.constants.gyromagnetic_ratio_neutron);
        run.constants.ev_per_joule =
            detail::number_or(c, "ev_per_joule", run.constants.ev_per_joule);
    }
    run.constants.validate();
    const PhysicalConstants& k = run.constants;

    if (!j.contains("beam")) throw ConfigError("config: missing 'beam' section");
    const auto& bj = j["beam"];
    double wavelength;
    if (bj.contains("wavelength_angstrom"))
        wavelength = detail::require_number(bj, "wavelength_angstrom", "beam") * 1e-10;
    else
        wavelength = detail::require_number(bj, "wavelength", "beam");
    Spinor spin0{{1, 0}, {0, 0}};
    if (bj.contains("initial_spin")) {
        const auto& s = bj["initial_spin"];
        if (!s.is_array() || s.size() != 2 || !s[0].is_array() || s[0].size() != 2 ||
            !s[1].is_array() || s[1].size() != 2)
            throw ConfigError("beam.initial_spin must be [[re,im],[re,im]]");
        spin0.up = cplx{s[0][0].get<double>(), s[0][1].get<double>()};
        spin0.down = cplx{s[1][0].get<double>(), s[1][1].get<double>()};
    }
    run.interferometer.beam = BeamSpec::from_wavelength(wavelength, spin0, k);
    if (bj.contains("wavelength_sigma_angstrom"))
        run.interferometer.wavelength_sigma =
            detail::require_number(bj, "wavelength_sigma_angstrom", "beam") * 1e-10;

    run.interferometer.path_I = detail::parse_path(j, "path_I", run.interferometer.beam, k);
    run.interferometer.path_II = detail::parse_path(j, "path_II", run.interferometer.beam, k);

    if (j.contains("phase_shifter"))
        run.interferometer.phase_shifter_chi =
            detail::require_number(j["phase_shifter"], "chi", "phase_shifter");

    if (!j.contains("sampling")) throw ConfigError("config: missing 'sampling' section");
    const auto& sj = j["sampling"];
    run.interferometer.sampling.t_start = detail::number_or(sj, "t_start", 0.0);
    run.interferometer.sampling.t_end = detail::require_number(sj, "t_end", "sampling");
    if (!sj.contains("n_samples") || !sj["n_samples"].is_number_integer())
        throw ConfigError("sampling: missing or non-integer field 'n_samples'");
    run.interferometer.sampling.n_samples = sj["n_samples"].get<int>();

    run.interferometer.validate();

    if (j.contains("counting")) {
        const auto& cj = j["counting"];
        CountingConfig cc;
        cc.mean_rate = detail::require_number(cj, "mean_rate", "counting");
        cc.dwell = detail::number_or(cj, "dwell", 1.0);
        cc.seed = cj.value("seed", std::uint64_t{0});
        cc.validate();
        run.counting = cc;
    }

    run.manifest.config_digest = detail::canonical_digest(j);
    run.manifest.constants_used = k;
    detail::collect_warnings(run.interferometer.path_I, k, run.manifest.warnings);
    detail::collect_warnings(run.interferometer.path_II, k, run.manifest.warnings);
    return run;
}

inline ParsedRun load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    return parse_run_config(j);
}

}  // namespace spinbeat
