// spinbeat: batch front end for the spin-rotation-coupling interferometry
// simulator. Subcommands: run, photon, sweep, fit.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "spinbeat/config.hpp"
#include "spinbeat/csv.hpp"
#include "spinbeat/detection.hpp"
#include "spinbeat/interferometer.hpp"
#include "spinbeat/wave_coupling.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_manifest(const std::string& path, const spinbeat::RunManifest& m) {
    std::ofstream out(path, std::ios::binary);
    const auto& k = m.constants_used;
    out << "config_digest: " << m.config_digest << "\n"
        << "tool_version: " << m.tool_version << "\n"
        << "constants.hbar: " << fmt(k.hbar) << "\n"
        << "constants.planck_h: " << fmt(k.planck_h) << "\n"
        << "constants.neutron_mass: " << fmt(k.neutron_mass) << "\n"
        << "constants.gyromagnetic_ratio_neutron: " << fmt(k.gyromagnetic_ratio_neutron)
        << "\n"
        << "constants.ev_per_joule: " << fmt(k.ev_per_joule) << "\n";
    for (const auto& w : m.warnings) out << "warning: " << w << "\n";
}

void write_fit_report(std::ostream& out, const spinbeat::BeatFit& fit,
                      const spinbeat::PhysicalConstants& k, const char* unit) {
    const auto e = spinbeat::energy_shift_report(fit, k);
    out << "offset_" << unit << ": " << fmt(fit.offset) << "\n"
        << "amplitude_" << unit << ": " << fmt(fit.amplitude) << "\n"
        << "angular_frequency_rad_per_s: " << fmt(fit.angular_frequency) << "\n"
        << "phase_rad: " << fmt(fit.phase) << "\n"
        << "residual_rms_" << unit << ": " << fmt(fit.residual_rms) << "\n"
        << "amplitude_stderr_" << unit << ": " << fmt(fit.amplitude_stderr) << "\n"
        << "energy_shift_J: " << fmt(e.joules) << "\n"
        << "energy_shift_eV: " << fmt(e.electron_volts) << "\n";
}

int cmd_run(const std::string& config_path, const std::string& out_dir, bool quiet) {
    namespace fs = std::filesystem;
    spinbeat::ParsedRun run = spinbeat::load_run_config(config_path);
    fs::create_directories(out_dir);

    const spinbeat::IntensityTrace trace =
        spinbeat::simulate_trace(run.interferometer, run.constants);
    spinbeat::write_trace_csv((fs::path(out_dir) / "trace.csv").string(), trace);

    std::ofstream fit_out(fs::path(out_dir) / "fit.txt", std::ios::binary);
    try {
        if (run.counting) {
            const spinbeat::CountTrace counts = spinbeat::sample_counts(trace, *run.counting);
            spinbeat::write_counts_csv((fs::path(out_dir) / "counts.csv").string(), counts);
            write_fit_report(fit_out, spinbeat::fit_beat(counts), run.constants,
                             "counts_per_s");
        } else {
            write_fit_report(fit_out, spinbeat::fit_intensity(trace), run.constants,
                             "intensity");
        }
    } catch (const spinbeat::DegenerateFit& e) {
        fit_out << "fit_error: " << e.what() << "\n";
    } catch (const spinbeat::InsufficientData& e) {
        fit_out << "fit_error: " << e.what() << "\n";
    }

    write_manifest((fs::path(out_dir) / "manifest.txt").string(), run.manifest);
    if (!quiet) {
        std::cout << "wrote " << out_dir << "/trace.csv";
        if (run.counting) std::cout << ", counts.csv";
        std::cout << ", fit.txt, manifest.txt\n";
        for (const auto& w : run.manifest.warnings) std::cout << "warning: " << w << "\n";
    }
    return kExitOk;
}

struct PhotonArgs {
    double omega = 0.0;
    double Omega = 0.0;
    double gamma = 1.0;
    std::string helicity = "+";
    bool half_wave_plate = false;
    std::optional<double> energy;
    std::optional<double> M;
};

int cmd_photon(const PhotonArgs& a, bool quiet) {
    const spinbeat::PhysicalConstants k;
    const spinbeat::RotatingObserver obs{a.Omega, a.gamma};
    obs.validate();
    if (a.energy && a.M) {
        const double e = spinbeat::rotating_observer_energy(*a.energy, *a.M, obs, k);
        std::cout << (quiet ? "" : "E_prime_J: ") << fmt(e) << "\n";
        return kExitOk;
    }
    spinbeat::Helicity h = (a.helicity == "-") ? spinbeat::Helicity::minus()
                                               : spinbeat::Helicity::plus();
    if (a.helicity != "+" && a.helicity != "-")
        throw spinbeat::ConfigError("helicity must be '+' or '-'");
    if (a.half_wave_plate) {
        const auto r = spinbeat::half_wave_plate_shift(a.omega, a.Omega, h);
        std::cout << (quiet ? "" : "omega_out_rad_per_s: ") << fmt(r.omega_out) << "\n"
                  << (quiet ? "" : "helicity_out: ") << (r.helicity_out.value > 0 ? "+" : "-")
                  << "\n";
    } else {
        const double w = spinbeat::doppler_shift(a.omega, obs, h);
        std::cout << (quiet ? "" : "omega_prime_rad_per_s: ") << fmt(w) << "\n";
    }
    return kExitOk;
}

// Override the swept parameter in the raw JSON, then reparse, so derived
// quantities (pi-flip widths, beam speed) follow the swept value.
void apply_parameter(nlohmann::json& j, const std::string& param, double value) {
    auto for_coils = [&](const char* path, auto f) {
        if (!j.contains(path)) return;
        for (auto& e : j[path]) {
            const std::string type = e.value("type", "");
            if (type == "rotating_flipper" || type == "quadrature_coil") f(e);
        }
    };
    if (param == "Omega") {
        for_coils("path_I", [&](nlohmann::json& e) {
            e.erase("rotation_period_s");
            e["Omega"] = value;
        });
    } else if (param == "B") {
        auto set_b = [&](nlohmann::json& e) { e["B"] = value; };
        for_coils("path_I", set_b);
        if (j.contains("path_II"))
            for (auto& e : j["path_II"])
                if (e.value("type", "") == "static_flipper") e["B"] = value;
    } else if (param == "wavelength") {
        j["beam"].erase("wavelength_angstrom");
        j["beam"]["wavelength"] = value;
    } else if (param == "chi") {
        j["phase_shifter"]["chi"] = value;
    } else if (param == "seed") {
        if (!j.contains("counting"))
            throw spinbeat::ConfigError("sweep over seed needs a 'counting' section");
        j["counting"]["seed"] = static_cast<std::uint64_t>(value);
    } else {
        throw spinbeat::ConfigError(
            "unknown sweep parameter '" + param +
            "' (expected Omega, B, wavelength, chi, or seed)");
    }
}

std::vector<double> parse_value_list(const std::string& text) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(token, &used);
        } catch (const std::exception&) {
            throw spinbeat::ConfigError("sweep: bad value '" + token + "'");
        }
        if (used != token.size())
            throw spinbeat::ConfigError("sweep: bad value '" + token + "'");
        values.push_back(v);
    }
    return values;
}

int cmd_sweep(const std::string& config_path, const std::string& param,
              const std::string& values_arg, const std::string& out_dir, bool quiet) {
    namespace fs = std::filesystem;
    std::vector<double> values = parse_value_list(values_arg);
    if (values.empty()) throw spinbeat::ConfigError("sweep: empty value range");
    std::sort(values.begin(), values.end());

    std::ifstream in(config_path);
    if (!in) throw spinbeat::ConfigError("cannot open config file: " + config_path);
    nlohmann::json base;
    try {
        in >> base;
    } catch (const nlohmann::json::exception& e) {
        throw spinbeat::ConfigError(std::string("config parse error: ") + e.what());
    }

    fs::create_directories(out_dir);
    std::ofstream out(fs::path(out_dir) / "sweep.csv", std::ios::binary);
    out << "parameter,value,fitted_omega_rad_per_s,amplitude,visibility,"
           "energy_shift_J,energy_shift_eV\n";

    for (double v : values) {
        nlohmann::json j = base;
        apply_parameter(j, param, v);
        spinbeat::ParsedRun run = spinbeat::parse_run_config(j);
        const spinbeat::IntensityTrace trace =
            spinbeat::simulate_trace(run.interferometer, run.constants);
        double w = std::nan(""), amp = std::nan(""), vis = std::nan("");
        double ej = std::nan(""), eev = std::nan("");
        try {
            spinbeat::BeatFit fit;
            if (run.counting)
                fit = spinbeat::fit_beat(spinbeat::sample_counts(trace, *run.counting));
            else
                fit = spinbeat::fit_intensity(trace);
            w = fit.angular_frequency;
            amp = fit.amplitude;
            vis = (fit.offset > 0.0) ? fit.amplitude / fit.offset : std::nan("");
            const auto e = spinbeat::energy_shift_report(fit, run.constants);
            ej = e.joules;
            eev = e.electron_volts;
        } catch (const spinbeat::DegenerateFit&) {
        } catch (const spinbeat::InsufficientData&) {
        }
        out << param << "," << fmt(v) << "," << fmt(w) << "," << fmt(amp) << "," << fmt(vis)
            << "," << fmt(ej) << "," << fmt(eev) << "\n";
    }
    if (!quiet) std::cout << "wrote " << out_dir << "/sweep.csv\n";
    return kExitOk;
}

int cmd_fit(const std::string& counts_path, double dwell, std::optional<double> freq_hint) {
    const spinbeat::PhysicalConstants k;
    const spinbeat::CountTrace counts = spinbeat::read_counts_csv(counts_path, dwell);
    const spinbeat::BeatFit fit = spinbeat::fit_beat(counts, freq_hint);
    write_fit_report(std::cout, fit, k, "counts_per_s");
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"neutron spin-rotation coupling interferometry simulator"};
    app.require_subcommand(1);
    bool quiet = false;
    app.add_flag("--quiet", quiet, "suppress informational output");

    std::string config_path, out_dir = ".";
    auto* run = app.add_subcommand("run", "simulate an interferometer config");
    run->add_option("--config", config_path, "config JSON path")->required();
    run->add_option("--out", out_dir, "output directory");

    PhotonArgs pa;
    auto* photon = app.add_subcommand("photon", "photon-sector rotating-frame formulas");
    photon->add_option("--omega", pa.omega, "wave frequency, rad/s");
    photon->add_option("--Omega", pa.Omega, "observer/plate rotation rate, rad/s");
    photon->add_option("--gamma", pa.gamma, "Lorentz factor");
    photon->add_option("--helicity", pa.helicity, "+ or -");
    photon->add_flag("--half-wave-plate", pa.half_wave_plate,
                     "frequency and helicity after a rotating half-wave plate");
    double energy_arg = 0.0, m_arg = 0.0;
    auto* eopt = photon->add_option("--energy", energy_arg, "particle energy, J");
    auto* mopt = photon->add_option("--M", m_arg, "magnetic quantum number");

    std::string sweep_param;
    std::string sweep_values;
    auto* sweep = app.add_subcommand("sweep", "run the config across parameter values");
    sweep->add_option("--config", config_path, "config JSON path")->required();
    sweep->add_option("--param", sweep_param, "Omega | B | wavelength | chi | seed")
        ->required();
    sweep->add_option("--values", sweep_values, "comma-separated sweep values")->required();
    sweep->add_option("--out", out_dir, "output directory");

    std::string counts_path;
    double dwell = 1.0;
    double freq_hint_val = 0.0;
    auto* fitcmd = app.add_subcommand("fit", "fit a counts CSV (t_s,counts)");
    fitcmd->add_option("--counts", counts_path, "counts CSV path")->required();
    fitcmd->add_option("--dwell", dwell, "dwell time per bin, s");
    auto* hint = fitcmd->add_option("--freq-hint", freq_hint_val, "angular frequency hint");

    for (CLI::App* sub : {run, photon, sweep, fitcmd}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (*run) return cmd_run(config_path, out_dir, quiet);
        if (*photon) {
            if (*eopt && *mopt) {
                pa.energy = energy_arg;
                pa.M = m_arg;
            }
            return cmd_photon(pa, quiet);
        }
        if (*sweep) return cmd_sweep(config_path, sweep_param, sweep_values, out_dir, quiet);
        if (*fitcmd) {
            std::optional<double> fh;
            if (*hint) fh = freq_hint_val;
            return cmd_fit(counts_path, dwell, fh);
        }
    } catch (const spinbeat::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const spinbeat::NoConvergence& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const spinbeat::DegenerateFit& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const spinbeat::InsufficientData& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const spinbeat::SimError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitOk;
}
