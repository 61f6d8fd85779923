#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "spinbeat/constants.hpp"
#include "spinbeat/elements.hpp"
#include "spinbeat/errors.hpp"
#include "spinbeat/evolve.hpp"
#include "spinbeat/propagators.hpp"
#include "spinbeat/spinor.hpp"

namespace spinbeat {

struct BeamPath {
    std::vector<FieldElement> elements;
    std::string label;  // "I" or "II"

    double total_length() const {
        double l = 0.0;
        for (const auto& e : elements) l += element_length(e);
        return l;
    }
};

struct SamplingWindow {
    double t_start = 0.0;
    double t_end = 180.0;
    int n_samples = 181;
};

struct InterferometerConfig {
    BeamPath path_I;
    BeamPath path_II;
    BeamSpec beam;
    double phase_shifter_chi = 0.0;
    SamplingWindow sampling;
    // Optional Gaussian wavelength spread (1-sigma, meters); 0 = monochromatic.
    double wavelength_sigma = 0.0;

    void validate() const {
        if (sampling.n_samples < 2) throw ConfigError("sampling.n_samples must be >= 2");
        if (!(sampling.t_end > sampling.t_start))
            throw ConfigError("sampling.t_end must exceed sampling.t_start");
        for (const auto& e : path_I.elements) spinbeat::validate(e);
        for (const auto& e : path_II.elements) spinbeat::validate(e);
        const double lI = path_I.total_length();
        const double lII = path_II.total_length();
        const double scale = std::max({lI, lII, 1e-12});
        if (std::fabs(lI - lII) > 1e-9 * scale)
            throw ConfigError("paths must have equal total geometric length "
                              "(pad with free_flight)");
        if (wavelength_sigma < 0.0) throw ConfigError("wavelength_sigma must be >= 0");
        if (wavelength_sigma > 0.0 && wavelength_sigma > beam.wavelength / 15.0)
            throw ConfigError("wavelength_sigma too large for the quadrature grid");
    }
};

struct IntensityTrace {
    std::vector<double> times;
    std::vector<double> intensity;  // normalized to unit input flux
};

namespace detail {

// Propagator of one element entered at t_entry. Oscillating rotation profiles
// have no closed form and go through the numeric integrator column by column.
inline SpinPropagator element_propagator(const FieldElement& e, const BeamSpec& beam,
                                         double t_entry, const PhysicalConstants& k) {
    return std::visit(
        [&](const auto& el) -> SpinPropagator {
            using T = std::decay_t<decltype(el)>;
            if constexpr (std::is_same_v<T, StaticFlipper>) {
                return static_flipper_propagator(el, beam, k);
            } else if constexpr (std::is_same_v<T, RotatingFlipper>) {
                if (std::holds_alternative<ContinuousProfile>(el.profile))
                    return rotating_flipper_propagator(el, beam, t_entry, k);
                const double tau = el.width / beam.speed;
                const FieldFunction field = [el](double t) { return element_field(el, t); };
                const Spinor c0 =
                    evolve_numeric(field, Spinor{{1, 0}, {0, 0}}, t_entry, t_entry + tau, k);
                const Spinor c1 =
                    evolve_numeric(field, Spinor{{0, 0}, {1, 0}}, t_entry, t_entry + tau, k);
                SpinPropagator u;
                u.m[0] = c0.up;
                u.m[2] = c0.down;
                u.m[1] = c1.up;
                u.m[3] = c1.down;
                return u;
            } else if constexpr (std::is_same_v<T, QuadratureCoil>) {
                return quadrature_coil_propagator(el, beam, t_entry, k);
            } else if constexpr (std::is_same_v<T, PhaseShifter>) {
                return SpinPropagator::identity().scaled(std::polar(1.0, el.chi));
            } else {  // FreeFlight: common kinetic phase dropped
                return SpinPropagator::identity();
            }
        },
        e);
}

}  // namespace detail

// Ordered product of element propagators, each entered when the neutron
// actually reaches it (t_entry plus cumulative upstream transit).
inline SpinPropagator path_propagator(const BeamPath& p, const BeamSpec& beam, double t_entry,
                                      const PhysicalConstants& k) {
    if (!(beam.speed > 0.0)) throw NonPositiveSpeed{};
    SpinPropagator u = SpinPropagator::identity();
    double t = t_entry;
    for (const auto& e : p.elements) {
        u = detail::element_propagator(e, beam, t, k) * u;
        t += element_length(e) / beam.speed;
    }
    return u;
}

namespace detail {

inline double two_path_intensity(const SpinPropagator& uI, const SpinPropagator& uII,
                                 const Spinor& psi0, double chi) {
    const Spinor a = uI.apply(psi0);
    const Spinor b = uII.apply(psi0);
    const cplx ph = std::polar(1.0, chi);
    const cplx su = a.up + ph * b.up;
    const cplx sd = a.down + ph * b.down;
    return 0.25 * (std::norm(su) + std::norm(sd));
}

// 33-node Gauss-Hermite rule for integral of exp(-x^2) f(x); nodes by Newton
// iteration on the Hermite recurrence.
inline void gauss_hermite(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    const double eps = 1e-14;
    const int m = (n + 1) / 2;
    double z = 0.0;
    for (int i = 0; i < m; ++i) {
        if (i == 0) {
            z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
        } else if (i == 1) {
            z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
        } else if (i == 2) {
            z = 1.86 * z - 0.86 * x[0];
        } else if (i == 3) {
            z = 1.91 * z - 0.91 * x[1];
        } else {
            z = 2.0 * z - x[i - 2];
        }
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = std::pow(std::numbers::pi, -0.25);
            double p2 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / j) * p2 - std::sqrt((j - 1.0) / j) * p3;
            }
            pp = std::sqrt(2.0 * n) * p2;
            const double dz = p1 / pp;
            z -= dz;
            if (std::fabs(dz) <= eps) break;
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = 2.0 / (pp * pp);
        w[n - 1 - i] = w[i];
    }
}

}  // namespace detail

// Forward-detector intensity for a neutron entering the interferometer at t:
//   I = 1/4 | U_I psi0 + e^{i chi} U_II psi0 |^2
// The 1/4 encodes two ideal 50/50 splits to the forward port.
inline double output_intensity(const InterferometerConfig& cfg, double t,
                               const PhysicalConstants& k) {
    const SpinPropagator uI = path_propagator(cfg.path_I, cfg.beam, t, k);
    const SpinPropagator uII = path_propagator(cfg.path_II, cfg.beam, t, k);
    return detail::two_path_intensity(uI, uII, cfg.beam.initial_spin, cfg.phase_shifter_chi);
}

// Complementary output port (relative phase chi + pi).
inline double complementary_intensity(const InterferometerConfig& cfg, double t,
                                      const PhysicalConstants& k) {
    const SpinPropagator uI = path_propagator(cfg.path_I, cfg.beam, t, k);
    const SpinPropagator uII = path_propagator(cfg.path_II, cfg.beam, t, k);
    return detail::two_path_intensity(uI, uII, cfg.beam.initial_spin,
                                      cfg.phase_shifter_chi + std::numbers::pi);
}

// arg <U_II psi0 | U_I psi0>, the phase of the interference term.
inline double interference_phase(const InterferometerConfig& cfg, double t,
                                 const PhysicalConstants& k) {
    const Spinor a = path_propagator(cfg.path_I, cfg.beam, t, k).apply(cfg.beam.initial_spin);
    const Spinor b = path_propagator(cfg.path_II, cfg.beam, t, k).apply(cfg.beam.initial_spin);
    return std::arg(inner(b, a));
}

inline IntensityTrace simulate_trace(const InterferometerConfig& cfg,
                                     const PhysicalConstants& k) {
    cfg.validate();
    IntensityTrace trace;
    const int n = cfg.sampling.n_samples;
    const double dt = (cfg.sampling.t_end - cfg.sampling.t_start) / (n - 1);
    trace.times.resize(n);
    trace.intensity.resize(n);

    std::vector<double> nodes, weights;
    std::vector<InterferometerConfig> cfgs;
    if (cfg.wavelength_sigma > 0.0) {
        detail::gauss_hermite(33, nodes, weights);
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            InterferometerConfig c = cfg;
            const double lam = cfg.beam.wavelength + std::sqrt(2.0) * cfg.wavelength_sigma * nodes[i];
            c.beam = BeamSpec::from_wavelength(lam, cfg.beam.initial_spin, k);
            cfgs.push_back(std::move(c));
        }
    }

    for (int s = 0; s < n; ++s) {
        const double t = cfg.sampling.t_start + dt * s;
        trace.times[s] = t;
        if (cfg.wavelength_sigma > 0.0) {
            double acc = 0.0;
            for (std::size_t i = 0; i < nodes.size(); ++i)
                acc += weights[i] * output_intensity(cfgs[i], t, k);
            trace.intensity[s] = acc / std::sqrt(std::numbers::pi);
        } else {
            trace.intensity[s] = output_intensity(cfg, t, k);
        }
    }
    return trace;
}

}  // namespace spinbeat
