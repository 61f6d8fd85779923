#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstring>
#include <numbers>

#include "spinbeat/detection.hpp"
#include "spinbeat/rng.hpp"

using namespace spinbeat;
using std::numbers::pi;

namespace {

const PhysicalConstants kc;

IntensityTrace constant_trace(double value, int n, double dt = 1.0) {
    IntensityTrace t;
    for (int i = 0; i < n; ++i) {
        t.times.push_back(i * dt);
        t.intensity.push_back(value);
    }
    return t;
}

IntensityTrace beat_trace(double offset, double amp, double omega, double phase, int n,
                          double dt = 1.0) {
    IntensityTrace t;
    for (int i = 0; i < n; ++i) {
        const double tt = i * dt;
        t.times.push_back(tt);
        t.intensity.push_back(offset + amp * std::cos(omega * tt + phase));
    }
    return t;
}

}  // namespace

TEST_CASE("poisson counting") {
    SECTION("zero mean gives zero counts") {
        const CountTrace c = sample_counts(constant_trace(0.0, 100), {100.0, 1.0, 1});
        for (auto k : c.counts) CHECK(k == 0);
    }

    SECTION("sample mean tracks the rate (large-mean path)") {
        const CountTrace c = sample_counts(constant_trace(1.0, 10000), {100.0, 1.0, 7});
        double mean = 0.0;
        for (auto k : c.counts) mean += static_cast<double>(k);
        mean /= 1e4;
        CHECK(std::fabs(mean - 100.0) < 1.0);
        double var = 0.0;
        for (auto k : c.counts) var += (k - mean) * (k - mean);
        var /= 1e4;
        CHECK(var == Catch::Approx(100.0).epsilon(0.1));
    }

    SECTION("small-mean inversion path") {
        const CountTrace c = sample_counts(constant_trace(1.0, 20000), {5.0, 1.0, 9});
        double mean = 0.0;
        for (auto k : c.counts) mean += static_cast<double>(k);
        mean /= 2e4;
        CHECK(std::fabs(mean - 5.0) < 0.15);
    }

    SECTION("fixed seed reproduces the trace bit for bit") {
        const IntensityTrace t = beat_trace(0.6, 0.3, 0.1, 0.0, 500);
        const CountTrace a = sample_counts(t, {80.0, 1.0, 12345});
        const CountTrace b = sample_counts(t, {80.0, 1.0, 12345});
        REQUIRE(a.counts.size() == b.counts.size());
        CHECK(std::memcmp(a.counts.data(), b.counts.data(),
                          a.counts.size() * sizeof(std::uint64_t)) == 0);
        const CountTrace c = sample_counts(t, {80.0, 1.0, 12346});
        CHECK(std::memcmp(a.counts.data(), c.counts.data(),
                          a.counts.size() * sizeof(std::uint64_t)) != 0);
    }
}

TEST_CASE("fit on a noiseless sinusoid recovers the generator") {
    const double omega = 0.1047;
    const IntensityTrace t = beat_trace(50.0, 30.0, omega, 0.8, 300);
    const BeatFit fit = fit_intensity(t);
    CHECK(fit.angular_frequency == Catch::Approx(omega).epsilon(1e-3));
    CHECK(fit.amplitude == Catch::Approx(30.0).epsilon(1e-3));
    CHECK(fit.offset == Catch::Approx(50.0).epsilon(1e-3));
    CHECK(std::remainder(fit.phase - 0.8, 2.0 * pi) == Catch::Approx(0.0).margin(1e-3));
    CHECK(fit.residual_rms < 1e-3);
}

TEST_CASE("paper-scale synthetic run recovers the 30 counts/s amplitude") {
    const double omega = 2.0 * pi / 60.0;
    // intensity in [0,1]; rate 60/s at unit intensity -> 30 counts/s modulation
    const IntensityTrace t = beat_trace(0.5, 0.5, omega, 0.0, 1800);
    const CountTrace counts = sample_counts(t, {60.0, 1.0, 2718});
    const BeatFit fit = fit_beat(counts);
    CHECK(fit.angular_frequency == Catch::Approx(omega).epsilon(0.01));
    CHECK(std::fabs(fit.amplitude - 30.0) < 3.0 * fit.amplitude_stderr);
    CHECK(fit.amplitude_stderr > 0.0);
    CHECK(fit.amplitude_stderr < 2.0);
}

TEST_CASE("degenerate and insufficient inputs") {
    SECTION("constant rate has no beat") {
        const CountTrace c = sample_counts(constant_trace(1.0, 400), {100.0, 1.0, 4});
        CHECK_THROWS_AS(fit_beat(c), DegenerateFit);
    }
    SECTION("too few bins") {
        const CountTrace c = sample_counts(constant_trace(1.0, 5), {100.0, 1.0, 4});
        CHECK_THROWS_AS(fit_beat(c), InsufficientData);
    }
    SECTION("hint with too short a span") {
        const IntensityTrace t = beat_trace(50.0, 30.0, 0.1, 0.0, 30);
        CHECK_THROWS_AS(fit_intensity(t, 0.1), InsufficientData);
    }
}

TEST_CASE("fit determinism") {
    const double omega = 0.07;
    const IntensityTrace t = beat_trace(0.5, 0.4, omega, 0.3, 600);
    const CountTrace counts = sample_counts(t, {90.0, 1.0, 31});
    const BeatFit a = fit_beat(counts);
    const BeatFit b = fit_beat(counts);
    CHECK(std::memcmp(&a, &b, sizeof(BeatFit)) == 0);
}

TEST_CASE("frequency error shrinks as the span grows", "[property]") {
    const double omega = 2.0 * pi / 60.0;
    auto mean_abs_err = [&](int nbins) {
        double acc = 0.0;
        const IntensityTrace t = beat_trace(0.5, 0.5, omega, 0.0, nbins);
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const CountTrace c = sample_counts(t, {60.0, 1.0, seed});
            acc += std::fabs(fit_beat(c).angular_frequency - omega);
        }
        return acc / 20.0;
    };
    const double err_short = mean_abs_err(450);
    const double err_long = mean_abs_err(900);
    CHECK(err_long < 0.75 * err_short);
}

TEST_CASE("energy shift report") {
    BeatFit fit;
    fit.angular_frequency = 2.0 * pi / 60.0;
    const EnergyShiftReport r = energy_shift_report(fit, kc);
    CHECK(r.joules == Catch::Approx(kc.hbar * fit.angular_frequency).epsilon(1e-14));
    CHECK(r.electron_volts == Catch::Approx(6.9e-17).epsilon(5e-3));

    fit.angular_frequency = 0.0;
    CHECK(energy_shift_report(fit, kc).joules == 0.0);

    fit.angular_frequency = 4.0 * pi / 60.0;
    CHECK(energy_shift_report(fit, kc).electron_volts ==
          Catch::Approx(2.0 * r.electron_volts).epsilon(1e-12));
}
