#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "spinbeat/constants.hpp"
#include "spinbeat/elements.hpp"
#include "spinbeat/evolve.hpp"
#include "spinbeat/propagators.hpp"
#include "spinbeat/rng.hpp"

using namespace spinbeat;
using std::numbers::pi;

namespace {

const PhysicalConstants kc;

double state_distance(const Spinor& a, const Spinor& b) {
    return std::sqrt(std::norm(a.up - b.up) + std::norm(a.down - b.down));
}

Spinor random_state(SplitMix64& rng) {
    return normalize(Spinor{{rng.uniform() - 0.5, rng.uniform() - 0.5},
                            {rng.uniform() - 0.5, rng.uniform() - 0.5}});
}

}  // namespace

TEST_CASE("zero field leaves the state alone") {
    const FieldFunction zero = [](double) { return std::array<double, 3>{0, 0, 0}; };
    const Spinor s0 = normalize(Spinor{{0.6, 0.1}, {0.3, -0.4}});
    const Spinor s1 = evolve_numeric(zero, s0, 0.0, 1.0, kc);
    CHECK(state_distance(s0, s1) < 1e-14);
}

TEST_CASE("static transverse field matches the closed form") {
    const BeamSpec beam = BeamSpec::from_wavelength(2e-10, Spinor{{1, 0}, {0, 0}}, kc);
    const double B = 2e-3;
    const double w = flipper_width(beam.speed, B, kc);
    const double tau = w / beam.speed;

    const FieldFunction field = [B](double) { return std::array<double, 3>{0.0, B, 0.0}; };
    const Spinor numeric = evolve_numeric(field, beam.initial_spin, 0.0, tau, kc);

    const StaticFlipper sf{B, pi / 2.0, w};
    const Spinor analytic = static_flipper_propagator(sf, beam, kc).apply(beam.initial_spin);
    CHECK(state_distance(numeric, analytic) < 1e-8);
    CHECK(std::norm(numeric.down) == Catch::Approx(1.0).margin(1e-8));
}

TEST_CASE("rotating flipper analytic propagator vs RK4 oracle", "[property]") {
    const BeamSpec beam = BeamSpec::from_wavelength(2e-10, Spinor{{1, 0}, {0, 0}}, kc);
    SplitMix64 rng(99);
    for (int i = 0; i < 20; ++i) {
        const double B = 1e-4 + 5e-3 * rng.uniform();
        const double gB = std::fabs(kc.gyromagnetic_ratio_neutron) * B;
        const double Omega = 0.1 * gB * rng.uniform();
        const double w = 1e-3 + 4e-2 * rng.uniform();
        const double a0 = 2.0 * pi * rng.uniform();
        const double t0 = 10.0 * rng.uniform();
        const double tau = w / beam.speed;

        const RotatingFlipper rf{B, Omega, a0, w, ContinuousProfile{}};
        const Spinor s0 = random_state(rng);
        const Spinor analytic = rotating_flipper_propagator(rf, beam, t0, kc).apply(s0);
        const FieldFunction field = [rf](double t) { return element_field(rf, t); };
        const Spinor numeric = evolve_numeric(field, s0, t0, t0 + tau, kc);
        CHECK(state_distance(analytic, numeric) < 1e-8);
    }
}

TEST_CASE("oscillating profile: flip survives and segments match the closed form") {
    const BeamSpec beam = BeamSpec::from_wavelength(2e-10, Spinor{{1, 0}, {0, 0}}, kc);
    const double B = 2e-3;
    const double w = flipper_width(beam.speed, B, kc);
    const double tau = w / beam.speed;

    RotatingFlipper rf{B, 0.0, pi / 2.0, w, OscillatingProfile{2.0 * pi / 3.0, 60.0}};
    const FieldFunction field = [rf](double t) { return element_field(rf, t); };

    SECTION("adiabatic-in-Omega regime still flips the spin") {
        for (double t0 : {0.0, 7.3, 31.0, 45.5}) {
            const Spinor out = evolve_numeric(field, Spinor{{1, 0}, {0, 0}}, t0, t0 + tau, kc);
            CHECK(std::norm(out.down) > 0.999);
        }
    }

    SECTION("transit inside one linear segment equals the continuous closed form") {
        // t0 = 7.3 s sits on the rising segment: slope = 2A / (P/2)
        const double t0 = 7.3;
        const auto& osc = std::get<OscillatingProfile>(rf.profile);
        const double slope = osc.amplitude_angle / (0.5 * osc.period);
        RotatingFlipper equivalent{B, slope, rf.axis_angle_at(t0) - slope * t0, w,
                                   ContinuousProfile{}};
        const Spinor s0 = normalize(Spinor{{0.8, 0.0}, {0.1, 0.55}});
        const Spinor analytic =
            rotating_flipper_propagator(equivalent, beam, t0, kc).apply(s0);
        const Spinor numeric = evolve_numeric(field, s0, t0, t0 + tau, kc);
        CHECK(state_distance(analytic, numeric) < 1e-8);
    }
}

TEST_CASE("integrator reports convergence metadata") {
    const FieldFunction field = [](double) { return std::array<double, 3>{0.0, 2e-3, 0.0}; };
    const EvolveResult res =
        evolve_numeric_full(field, Spinor{{1, 0}, {0, 0}}, 0.0, 1e-5, kc);
    CHECK(res.richardson_diff < 1e-10);
    CHECK(res.steps >= 32);
    CHECK(res.norm_drift < 1e-9);
}

TEST_CASE("step cap raises NoConvergence") {
    const FieldFunction field = [](double) { return std::array<double, 3>{0.0, 1.0, 0.0}; };
    EvolveOptions opt;
    opt.max_steps = 64;  // far too few for a 1 T field over a long window
    CHECK_THROWS_AS(evolve_numeric(field, Spinor{{1, 0}, {0, 0}}, 0.0, 1.0, kc, opt),
                    NoConvergence);
}

TEST_CASE("reversed interval is rejected") {
    const FieldFunction zero = [](double) { return std::array<double, 3>{0, 0, 0}; };
    CHECK_THROWS_AS(evolve_numeric(zero, Spinor{{1, 0}, {0, 0}}, 1.0, 0.0, kc), SimError);
}
