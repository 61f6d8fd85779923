#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>

#include "spinbeat/constants.hpp"
#include "spinbeat/errors.hpp"
#include "spinbeat/spinor.hpp"

namespace spinbeat {

using FieldFunction = std::function<std::array<double, 3>(double)>;  // t -> B (T)

struct EvolveOptions {
    double tolerance = 1e-10;
    std::uint64_t max_steps = std::uint64_t{1} << 24;
};

struct EvolveResult {
    Spinor psi;
    std::uint64_t steps = 0;      // steps of the finest accepted grid
    double richardson_diff = 0.0; // norm distance between the last two refinements
    double norm_drift = 0.0;      // |norm - 1| before any renormalization
    bool renormalized = false;
};

namespace detail {

inline Spinor schroedinger_rhs(const FieldFunction& field, double gamma_n, double t,
                               const Spinor& psi) {
    // i hbar dpsi/dt = -gamma_n B.S psi  =>  dpsi/dt = (i gamma_n / 2) (B.sigma) psi
    const auto b = field(t);
    const cplx i{0.0, 1.0};
    const cplx bz{b[2], 0.0};
    const cplx bm{b[0], -b[1]};  // bx - i by
    const cplx bp{b[0], b[1]};
    const cplx f = 0.5 * i * gamma_n;
    return {f * (bz * psi.up + bm * psi.down), f * (bp * psi.up - bz * psi.down)};
}

inline Spinor rk4_run(const FieldFunction& field, double gamma_n, Spinor psi, double t0,
                      double t1, std::uint64_t n) {
    const double h = (t1 - t0) / static_cast<double>(n);
    for (std::uint64_t j = 0; j < n; ++j) {
        const double t = t0 + h * static_cast<double>(j);
        const Spinor k1 = schroedinger_rhs(field, gamma_n, t, psi);
        const Spinor p2{psi.up + 0.5 * h * k1.up, psi.down + 0.5 * h * k1.down};
        const Spinor k2 = schroedinger_rhs(field, gamma_n, t + 0.5 * h, p2);
        const Spinor p3{psi.up + 0.5 * h * k2.up, psi.down + 0.5 * h * k2.down};
        const Spinor k3 = schroedinger_rhs(field, gamma_n, t + 0.5 * h, p3);
        const Spinor p4{psi.up + h * k3.up, psi.down + h * k3.down};
        const Spinor k4 = schroedinger_rhs(field, gamma_n, t + h, p4);
        psi.up += h / 6.0 * (k1.up + 2.0 * k2.up + 2.0 * k3.up + k4.up);
        psi.down += h / 6.0 * (k1.down + 2.0 * k2.down + 2.0 * k3.down + k4.down);
    }
    return psi;
}

inline double state_distance(const Spinor& a, const Spinor& b) {
    return std::sqrt(std::norm(a.up - b.up) + std::norm(a.down - b.down));
}

}  // namespace detail

// Fixed-step RK4 with step-halving until successive refinements agree to the
// tolerance. Independent of the analytic propagators; used as their oracle.
inline EvolveResult evolve_numeric_full(const FieldFunction& field, const Spinor& spin0,
                                        double t0, double t1, const PhysicalConstants& k,
                                        const EvolveOptions& opt = {}) {
    if (t1 < t0) throw SimError("evolve_numeric: t1 < t0");
    EvolveResult res;
    res.psi = spin0;
    if (t1 == t0) return res;

    std::uint64_t n = 16;
    Spinor prev = detail::rk4_run(field, k.gyromagnetic_ratio_neutron, spin0, t0, t1, n);
    for (;;) {
        n *= 2;
        if (n > opt.max_steps)
            throw NoConvergence("evolve_numeric: step cap exceeded before convergence");
        Spinor cur = detail::rk4_run(field, k.gyromagnetic_ratio_neutron, spin0, t0, t1, n);
        const double diff = detail::state_distance(cur, prev);
        if (diff < opt.tolerance) {
            res.psi = cur;
            res.steps = n;
            res.richardson_diff = diff;
            break;
        }
        prev = cur;
    }

    res.norm_drift = std::fabs(res.psi.norm() - spin0.norm());
    if (res.norm_drift > 10.0 * opt.tolerance) {
        res.psi = normalize(res.psi);
        res.renormalized = true;
    }
    return res;
}

inline Spinor evolve_numeric(const FieldFunction& field, const Spinor& spin0, double t0,
                             double t1, const PhysicalConstants& k,
                             const EvolveOptions& opt = {}) {
    return evolve_numeric_full(field, spin0, t0, t1, k, opt).psi;
}

}  // namespace spinbeat
