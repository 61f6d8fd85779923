#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <vector>

#include "spinbeat/constants.hpp"
#include "spinbeat/errors.hpp"
#include "spinbeat/interferometer.hpp"
#include "spinbeat/rng.hpp"

namespace spinbeat {

struct CountingConfig {
    double mean_rate = 100.0;  // counts/s at unit normalized intensity
    double dwell = 1.0;        // s per bin
    std::uint64_t seed = 0;

    void validate() const {
        if (!(mean_rate > 0.0)) throw ConfigError("counting.mean_rate must be > 0");
        if (!(dwell > 0.0)) throw ConfigError("counting.dwell must be > 0");
    }
};

struct CountTrace {
    std::vector<double> bin_centers;      // s
    std::vector<std::uint64_t> counts;
    double dwell = 1.0;                   // s, carried for rate conversion
};

struct BeatFit {
    double offset = 0.0;             // counts/s
    double amplitude = 0.0;          // counts/s
    double angular_frequency = 0.0;  // rad/s
    double phase = 0.0;              // rad, in (-pi, pi]
    double residual_rms = 0.0;       // counts/s
    double amplitude_stderr = 0.0;   // counts/s
};

// counts[k] ~ Poisson(mean_rate * intensity[k] * dwell), one RNG stream per bin
// index derived from the seed, so traces are reproducible bin by bin.
inline CountTrace sample_counts(const IntensityTrace& trace, const CountingConfig& cfg) {
    cfg.validate();
    CountTrace out;
    out.bin_centers = trace.times;
    out.dwell = cfg.dwell;
    out.counts.resize(trace.intensity.size());
    for (std::size_t i = 0; i < trace.intensity.size(); ++i) {
        const double mean = cfg.mean_rate * trace.intensity[i] * cfg.dwell;
        SplitMix64 rng = SplitMix64::stream(cfg.seed, static_cast<std::uint64_t>(i));
        out.counts[i] = poisson_sample(mean, rng);
    }
    return out;
}

namespace detail {

struct LinearSineFit {
    double c0 = 0.0, cc = 0.0, cs = 0.0;  // y = c0 + cc cos(wt) + cs sin(wt)
    double ssr = 0.0;                     // weighted sum of squared residuals
    double cov_cc = 0.0, cov_cs = 0.0, cov_ss = 0.0;  // covariance of (cc, cs)
};

// Weighted least squares on the (1, cos wt, sin wt) basis via 3x3 normal
// equations; covariance from the inverse.
inline LinearSineFit solve_at_frequency(const std::vector<double>& t,
                                        const std::vector<double>& y,
                                        const std::vector<double>& w, double omega) {
    double A[3][3] = {};
    double rhs[3] = {};
    const std::size_t n = t.size();
    for (std::size_t k = 0; k < n; ++k) {
        const double c = std::cos(omega * t[k]);
        const double s = std::sin(omega * t[k]);
        const double b[3] = {1.0, c, s};
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) A[i][j] += w[k] * b[i] * b[j];
            rhs[i] += w[k] * b[i] * y[k];
        }
    }
    // inverse of the symmetric 3x3 by cofactors
    const double det = A[0][0] * (A[1][1] * A[2][2] - A[1][2] * A[2][1]) -
                       A[0][1] * (A[1][0] * A[2][2] - A[1][2] * A[2][0]) +
                       A[0][2] * (A[1][0] * A[2][1] - A[1][1] * A[2][0]);
    if (std::fabs(det) < 1e-300) throw DegenerateFit("singular normal equations");
    double inv[3][3];
    inv[0][0] = (A[1][1] * A[2][2] - A[1][2] * A[2][1]) / det;
    inv[0][1] = (A[0][2] * A[2][1] - A[0][1] * A[2][2]) / det;
    inv[0][2] = (A[0][1] * A[1][2] - A[0][2] * A[1][1]) / det;
    inv[1][0] = inv[0][1];
    inv[1][1] = (A[0][0] * A[2][2] - A[0][2] * A[2][0]) / det;
    inv[1][2] = (A[0][2] * A[1][0] - A[0][0] * A[1][2]) / det;
    inv[2][0] = inv[0][2];
    inv[2][1] = inv[1][2];
    inv[2][2] = (A[0][0] * A[1][1] - A[0][1] * A[1][0]) / det;

    LinearSineFit f;
    f.c0 = inv[0][0] * rhs[0] + inv[0][1] * rhs[1] + inv[0][2] * rhs[2];
    f.cc = inv[1][0] * rhs[0] + inv[1][1] * rhs[1] + inv[1][2] * rhs[2];
    f.cs = inv[2][0] * rhs[0] + inv[2][1] * rhs[1] + inv[2][2] * rhs[2];
    f.cov_cc = inv[1][1];
    f.cov_cs = inv[1][2];
    f.cov_ss = inv[2][2];
    for (std::size_t k = 0; k < n; ++k) {
        const double r = y[k] - (f.c0 + f.cc * std::cos(omega * t[k]) +
                                 f.cs * std::sin(omega * t[k]));
        f.ssr += w[k] * r * r;
    }
    return f;
}

// Coarse frequency from the peak of a 4x zero-padded discrete Fourier spectrum
// of the mean-subtracted series. Throws DegenerateFit when no nonzero-frequency
// peak rises above 3x the noise floor, taken as the median nonzero-bin power
// scaled by log2(n): the expected maximum of an exponential noise spectrum, so
// pure shot noise does not pass as a beat.
inline double fourier_peak_frequency(const std::vector<double>& t,
                                     const std::vector<double>& y) {
    const std::size_t n = t.size();
    const double dt = (t.back() - t.front()) / static_cast<double>(n - 1);
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(n);

    const std::size_t npad = 4 * n;
    const std::size_t nbins = npad / 2;
    std::vector<double> power(nbins, 0.0);
    for (std::size_t j = 1; j < nbins; ++j) {
        const double w = 2.0 * std::numbers::pi * static_cast<double>(j) /
                         (static_cast<double>(npad) * dt);
        std::complex<double> acc{0.0, 0.0};
        for (std::size_t k = 0; k < n; ++k)
            acc += (y[k] - mean) * std::polar(1.0, -w * (t[k] - t.front()));
        power[j] = std::norm(acc);
    }
    std::size_t peak = 1;
    for (std::size_t j = 2; j < nbins; ++j)
        if (power[j] > power[peak]) peak = j;

    std::vector<double> sorted(power.begin() + 1, power.end());
    std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
    const double floor_power =
        sorted[sorted.size() / 2] * std::log2(static_cast<double>(n));
    if (!(power[peak] > 3.0 * floor_power) || power[peak] <= 0.0)
        throw DegenerateFit("no spectral peak above 3x the noise floor");
    return 2.0 * std::numbers::pi * static_cast<double>(peak) /
           (static_cast<double>(npad) * dt);
}

inline double golden_section_refine(const std::vector<double>& t, const std::vector<double>& y,
                                    const std::vector<double>& w, double lo, double hi) {
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double x1 = b - gr * (b - a);
    double x2 = a + gr * (b - a);
    double f1 = solve_at_frequency(t, y, w, x1).ssr;
    double f2 = solve_at_frequency(t, y, w, x2).ssr;
    for (int it = 0; it < 120 && (b - a) > 1e-12 * std::max(1.0, b); ++it) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = solve_at_frequency(t, y, w, x1).ssr;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = solve_at_frequency(t, y, w, x2).ssr;
        }
    }
    return 0.5 * (a + b);
}

inline BeatFit fit_series(const std::vector<double>& t, const std::vector<double>& y,
                          const std::vector<double>& w, std::optional<double> freq_hint) {
    if (t.size() < 8) throw InsufficientData("need at least 8 bins");
    const double span = t.back() - t.front();

    double omega;
    if (freq_hint) {
        omega = *freq_hint;
        if (!(omega > 0.0)) throw InsufficientData("freq_hint must be > 0");
        if (span * omega < 1.5 * 2.0 * std::numbers::pi - 1e-9)
            throw InsufficientData("series spans fewer than 1.5 periods of freq_hint");
    } else {
        const double coarse = fourier_peak_frequency(t, y);
        const double bin = 2.0 * std::numbers::pi / span;
        omega = golden_section_refine(t, y, w, std::max(coarse - bin, 0.25 * bin),
                                      coarse + bin);
        if (span * omega < 1.5 * 2.0 * std::numbers::pi - 1e-9)
            throw InsufficientData("series spans fewer than 1.5 fitted periods");
    }

    const LinearSineFit f = solve_at_frequency(t, y, w, omega);
    BeatFit fit;
    fit.offset = f.c0;
    fit.amplitude = std::hypot(f.cc, f.cs);
    fit.angular_frequency = omega;
    // y = c0 + A cos(wt + phi), cc = A cos phi, cs = -A sin phi
    fit.phase = std::atan2(-f.cs, f.cc);
    if (fit.phase <= -std::numbers::pi) fit.phase += 2.0 * std::numbers::pi;
    double ss = 0.0;
    for (std::size_t k = 0; k < t.size(); ++k) {
        const double r = y[k] - (f.c0 + f.cc * std::cos(omega * t[k]) +
                                 f.cs * std::sin(omega * t[k]));
        ss += r * r;
    }
    fit.residual_rms = std::sqrt(ss / static_cast<double>(t.size()));
    if (fit.amplitude > 0.0) {
        const double var = (f.cc * f.cc * f.cov_cc + 2.0 * f.cc * f.cs * f.cov_cs +
                            f.cs * f.cs * f.cov_ss) /
                           (fit.amplitude * fit.amplitude);
        fit.amplitude_stderr = std::sqrt(std::max(var, 0.0));
    }
    return fit;
}

}  // namespace detail

// Fit rate(t) = offset + amplitude cos(w t + phi) to a count trace. Poisson
// weights 1/max(counts, 1) seed the linear solve; the final parameters come
// from reweighting against the fitted model (weights tied to the observed
// counts correlate with the shot noise and bias the amplitude low). The
// frequency comes from a zero-padded Fourier peak refined by golden-section
// search unless freq_hint is given (which skips the Fourier stage).
inline BeatFit fit_beat(const CountTrace& counts, std::optional<double> freq_hint = {}) {
    if (counts.bin_centers.size() != counts.counts.size())
        throw InsufficientData("bin/count length mismatch");
    const std::size_t n = counts.counts.size();
    if (n < 8) throw InsufficientData("need at least 8 bins");
    std::vector<double> y(n), w(n);
    for (std::size_t k = 0; k < n; ++k) {
        y[k] = static_cast<double>(counts.counts[k]);
        w[k] = 1.0 / std::max<double>(y[k], 1.0);
    }
    BeatFit fit = detail::fit_series(counts.bin_centers, y, w, freq_hint);
    for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t k = 0; k < n; ++k) {
            const double model =
                fit.offset + fit.amplitude * std::cos(fit.angular_frequency *
                                                          counts.bin_centers[k] +
                                                      fit.phase);
            w[k] = 1.0 / std::max(model, 1.0);
        }
        fit = detail::fit_series(counts.bin_centers, y, w, fit.angular_frequency);
    }
    // counts -> counts/s
    fit.offset /= counts.dwell;
    fit.amplitude /= counts.dwell;
    fit.residual_rms /= counts.dwell;
    fit.amplitude_stderr /= counts.dwell;
    return fit;
}

// Same fit on a noiseless intensity trace (unit weights; result in intensity
// units rather than counts/s).
inline BeatFit fit_intensity(const IntensityTrace& trace, std::optional<double> freq_hint = {}) {
    const std::size_t n = trace.intensity.size();
    if (n < 8) throw InsufficientData("need at least 8 samples");
    std::vector<double> w(n, 1.0);
    return detail::fit_series(trace.times, trace.intensity, w, freq_hint);
}

struct EnergyShiftReport {
    double joules = 0.0;
    double electron_volts = 0.0;
};

// hbar * fitted beat frequency: the measured spin-rotation energy splitting.
inline EnergyShiftReport energy_shift_report(const BeatFit& fit, const PhysicalConstants& k) {
    EnergyShiftReport r;
    r.joules = k.hbar * fit.angular_frequency;
    r.electron_volts = r.joules * k.ev_per_joule;
    return r;
}

}  // namespace spinbeat
