// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Each check pins its tolerance in code.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <vector>

#include "spinbeat/constants.hpp"
#include "spinbeat/detection.hpp"
#include "spinbeat/evolve.hpp"
#include "spinbeat/interferometer.hpp"
#include "spinbeat/propagators.hpp"
#include "spinbeat/rng.hpp"
#include "spinbeat/wave_coupling.hpp"

using namespace spinbeat;
using std::numbers::pi;

namespace {

const PhysicalConstants kc;
const double kOmega = 2.0 * pi / 60.0;
const double kB = 2e-3;
int failures = 0;

void report(int idx, const char* name, bool pass, double seconds) {
    std::printf("%s: criterion %d (%s) [%.2f s]\n", pass ? "PASS" : "FAIL", idx, name,
                seconds);
    if (!pass) ++failures;
}

template <typename F>
void criterion(int idx, const char* name, F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    bool pass = false;
    try {
        pass = f();
    } catch (const std::exception& e) {
        std::printf("  exception: %s\n", e.what());
    }
    const auto t1 = std::chrono::steady_clock::now();
    report(idx, name, pass, std::chrono::duration<double>(t1 - t0).count());
}

InterferometerConfig case_config(bool quadrature, double Omega) {
    InterferometerConfig cfg;
    cfg.beam = BeamSpec::from_wavelength(2e-10, Spinor{{1, 0}, {0, 0}}, kc);
    const double w = flipper_width(cfg.beam.speed, kB, kc);
    if (quadrature)
        cfg.path_I.elements = {FreeFlight{0.05}, QuadratureCoil{kB, Omega, pi / 2.0, w},
                               FreeFlight{0.05}};
    else
        cfg.path_I.elements = {FreeFlight{0.05},
                               RotatingFlipper{kB, Omega, pi / 2.0, w, ContinuousProfile{}},
                               FreeFlight{0.05}};
    cfg.path_I.label = "I";
    cfg.path_II.elements = {FreeFlight{0.05}, StaticFlipper{kB, pi / 2.0, w},
                            FreeFlight{0.05}};
    cfg.path_II.label = "II";
    cfg.sampling = {0.0, 180.0, 181};
    return cfg;
}

double two_path_intensity(const Spinor& a, const Spinor& b, double chi) {
    const cplx ph = std::polar(1.0, chi);
    return 0.25 * (std::norm(a.up + ph * b.up) + std::norm(a.down + ph * b.down));
}

}  // namespace

int main() {
    // Criteria 1 and 2 share the monochromatic case-(1) fit.
    BeatFit case1_fit;
    bool have_fit = false;

    criterion(1, "energy-shift magnitude hbar*Omega", [&] {
        const IntensityTrace trace = simulate_trace(case_config(false, kOmega), kc);
        const CountTrace counts = sample_counts(trace, {1e5, 1.0, 7});
        case1_fit = fit_beat(counts);
        have_fit = true;
        const EnergyShiftReport r = energy_shift_report(case1_fit, kc);
        const double expected_ev = kc.hbar * kOmega * kc.ev_per_joule;  // 6.89e-17 eV
        return std::fabs(r.electron_volts - expected_ev) <= 1e-3 * expected_ev &&
               std::fabs(expected_ev - 6.89e-17) <= 1e-3 * 6.89e-17;
    });

    criterion(2, "beat period equals the rotation period", [&] {
        if (!have_fit) return false;
        return std::fabs(case1_fit.angular_frequency - kOmega) <= 1e-3 * kOmega;
    });

    criterion(3, "case-(1)/case-(2) trace equivalence", [&] {
        const IntensityTrace a = simulate_trace(case_config(false, kOmega), kc);
        const IntensityTrace b = simulate_trace(case_config(true, kOmega), kc);
        if (a.intensity.size() != b.intensity.size()) return false;
        for (std::size_t i = 0; i < a.intensity.size(); ++i)
            if (std::fabs(a.intensity[i] - b.intensity[i]) > 1e-10) return false;
        return true;
    });

    criterion(4, "photon half-wave-plate shift and Eq.(1)/(2) consistency", [&] {
        for (double omega : {10.0, 100.0, 1e6}) {
            const auto r = half_wave_plate_shift(omega, 1.0, Helicity::plus());
            if (r.omega_out - omega != -2.0 || r.helicity_out.value != -1) return false;
        }
        SplitMix64 rng(1234);
        for (int i = 0; i < 10000; ++i) {
            const double omega = 1e12 * (0.1 + rng.uniform());
            const double Omega = 1e3 * (rng.uniform() - 0.5);
            const double gamma = 1.0 + 2.0 * rng.uniform();
            const RotatingObserver obs{Omega, gamma};
            const int h = rng.next() & 1 ? +1 : -1;
            const double lhs = kc.hbar * doppler_shift(omega, obs, Helicity{h});
            const double rhs = rotating_observer_energy(kc.hbar * omega, h, obs, kc);
            if (std::fabs(lhs - rhs) > 1e-13 * std::fabs(rhs)) return false;
        }
        return true;
    });

    criterion(5, "analytic rotating-frame propagator vs RK4 oracle", [&] {
        const BeamSpec beam = BeamSpec::from_wavelength(2e-10, Spinor{{1, 0}, {0, 0}}, kc);
        SplitMix64 rng(777);
        for (int i = 0; i < 100; ++i) {
            const double B = 1e-4 + 5e-3 * rng.uniform();
            const double gB = std::fabs(kc.gyromagnetic_ratio_neutron) * B;
            const double Omega = 0.1 * gB * rng.uniform();
            const double w = 1e-3 + 4e-2 * rng.uniform();
            const double a0 = 2.0 * pi * rng.uniform();
            const double t0 = 10.0 * rng.uniform();
            const double tau = w / beam.speed;
            const RotatingFlipper rf{B, Omega, a0, w, ContinuousProfile{}};
            const Spinor s0 = normalize(Spinor{{rng.uniform() - 0.5, rng.uniform() - 0.5},
                                               {rng.uniform() - 0.5, rng.uniform() - 0.5}});
            const Spinor analytic = rotating_flipper_propagator(rf, beam, t0, kc).apply(s0);
            const FieldFunction field = [rf](double t) { return element_field(rf, t); };
            const Spinor numeric = evolve_numeric(field, s0, t0, t0 + tau, kc);
            const double d = std::sqrt(std::norm(analytic.up - numeric.up) +
                                       std::norm(analytic.down - numeric.down));
            if (d > 1e-8) return false;
        }
        return true;
    });

    criterion(6, "pi-flip design formula at 2 A and 2 mT", [&] {
        const BeamSpec beam = BeamSpec::from_wavelength(2e-10, Spinor{{1, 0}, {0, 0}}, kc);
        if (std::fabs(beam.speed - 1978.0) > 1.0) return false;
        const double w = flipper_width(beam.speed, kB, kc);
        const StaticFlipper sf{kB, pi / 2.0, w};
        const Spinor out = static_flipper_propagator(sf, beam, kc).apply(beam.initial_spin);
        return std::norm(out.down) >= 1.0 - 1e-9;
    });

    criterion(7, "counting-statistics amplitude recovery (100 seeds)", [&] {
        InterferometerConfig cfg = case_config(false, kOmega);
        cfg.sampling = {0.0, 1799.0, 1800};
        const IntensityTrace trace = simulate_trace(cfg, kc);
        int within = 0;
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            const CountTrace counts = sample_counts(trace, {60.0, 1.0, seed});
            const BeatFit fit = fit_beat(counts, kOmega);
            if (std::fabs(fit.amplitude - 30.0) <= 3.0 * fit.amplitude_stderr) ++within;
        }
        std::printf("  %d/100 seeds within 3 standard errors\n", within);
        return within >= 95;
    });

    criterion(8, "Larmor correspondence with B' = Omega/gamma_n", [&] {
        InterferometerConfig cfg = case_config(false, kOmega);
        cfg.sampling = {-90.0, 90.0, 181};
        const IntensityTrace rotating = simulate_trace(cfg, kc);
        const double w = flipper_width(cfg.beam.speed, kB, kc);
        const double tau = w / cfg.beam.speed;
        const double tau_flight = 0.05 / cfg.beam.speed;
        const double bp = larmor_equivalent_field(kOmega, kc);
        const double prec = -kc.gyromagnetic_ratio_neutron * bp;
        const SpinPropagator u_flip =
            static_flipper_propagator(StaticFlipper{kB, pi / 2.0, w}, cfg.beam, kc);
        for (std::size_t i = 0; i < rotating.times.size(); ++i) {
            const double tc = rotating.times[i] + tau_flight;
            const SpinPropagator uI = rot_z(prec * (cfg.sampling.t_end - tc - tau)) * u_flip *
                                      rot_z(prec * (tc - cfg.sampling.t_start));
            const SpinPropagator uII =
                path_propagator(cfg.path_II, cfg.beam, rotating.times[i], kc);
            const double alt = two_path_intensity(uI.apply(cfg.beam.initial_spin),
                                                  uII.apply(cfg.beam.initial_spin),
                                                  cfg.phase_shifter_chi);
            if (std::fabs(rotating.intensity[i] - alt) > 1e-6) return false;
        }
        return true;
    });

    criterion(9, "120-degree oscillating mode phase tracking", [&] {
        InterferometerConfig cfg = case_config(false, 0.0);
        const double w = flipper_width(cfg.beam.speed, kB, kc);
        const double tau = w / cfg.beam.speed;
        const double tau_flight = 0.05 / cfg.beam.speed;
        RotatingFlipper rf{kB, 0.0, pi / 2.0, w, OscillatingProfile{2.0 * pi / 3.0, 60.0}};
        cfg.path_I.elements = {FreeFlight{0.05}, rf, FreeFlight{0.05}};
        cfg.sampling = {0.0, 60.0, 61};
        double ref = 0.0;
        bool have_ref = false;
        for (int i = 0; i < cfg.sampling.n_samples; ++i) {
            const double t = i * 1.0;
            const double phase = interference_phase(cfg, t, kc);
            const double angle = rf.axis_angle_at(t + tau_flight + 0.5 * tau);
            const double d = std::remainder(phase - angle, 2.0 * pi);
            if (!have_ref) {
                ref = d;
                have_ref = true;
            }
            if (std::fabs(std::remainder(d - ref, 2.0 * pi)) > 1e-6) return false;
        }
        return true;
    });

    if (failures == 0)
        std::printf("acceptance: all criteria passed\n");
    else
        std::printf("acceptance: %d criteria FAILED\n", failures);
    return failures == 0 ? 0 : 1;
}
