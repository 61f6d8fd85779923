#pragma once

#include <array>
#include <cmath>
#include <complex>

#include "spinbeat/errors.hpp"

namespace spinbeat {

using cplx = std::complex<double>;

// Neutron spin state in the z-basis, z along the beam / rotation axis.
struct Spinor {
    cplx up{1.0, 0.0};
    cplx down{0.0, 0.0};

    double norm2() const { return std::norm(up) + std::norm(down); }
    double norm() const { return std::sqrt(norm2()); }
};

inline Spinor normalize(const Spinor& s) {
    const double n = s.norm();
    if (n < 1e-300) throw ZeroNorm{};
    return {s.up / n, s.down / n};
}

inline cplx inner(const Spinor& a, const Spinor& b) {
    return std::conj(a.up) * b.up + std::conj(a.down) * b.down;
}

// 2x2 complex matrix, row-major; the transfer matrix of a beamline element.
struct SpinPropagator {
    std::array<cplx, 4> m{cplx{1, 0}, cplx{0, 0}, cplx{0, 0}, cplx{1, 0}};

    static SpinPropagator identity() { return {}; }

    cplx& operator()(int r, int c) { return m[2 * r + c]; }
    const cplx& operator()(int r, int c) const { return m[2 * r + c]; }

    Spinor apply(const Spinor& s) const {
        return {m[0] * s.up + m[1] * s.down, m[2] * s.up + m[3] * s.down};
    }

    SpinPropagator operator*(const SpinPropagator& o) const {
        SpinPropagator r;
        r.m[0] = m[0] * o.m[0] + m[1] * o.m[2];
        r.m[1] = m[0] * o.m[1] + m[1] * o.m[3];
        r.m[2] = m[2] * o.m[0] + m[3] * o.m[2];
        r.m[3] = m[2] * o.m[1] + m[3] * o.m[3];
        return r;
    }

    SpinPropagator scaled(cplx z) const {
        SpinPropagator r;
        for (int i = 0; i < 4; ++i) r.m[i] = z * m[i];
        return r;
    }

    SpinPropagator dagger() const {
        SpinPropagator r;
        r.m[0] = std::conj(m[0]);
        r.m[1] = std::conj(m[2]);
        r.m[2] = std::conj(m[1]);
        r.m[3] = std::conj(m[3]);
        return r;
    }

    cplx det() const { return m[0] * m[3] - m[1] * m[2]; }

    // max elementwise deviation of m m^dagger from the identity
    double unitarity_defect() const {
        const SpinPropagator p = (*this) * dagger();
        double d = 0.0;
        d = std::max(d, std::abs(p.m[0] - cplx{1, 0}));
        d = std::max(d, std::abs(p.m[1]));
        d = std::max(d, std::abs(p.m[2]));
        d = std::max(d, std::abs(p.m[3] - cplx{1, 0}));
        return d;
    }
};

inline double frobenius_distance(const SpinPropagator& a, const SpinPropagator& b) {
    double s = 0.0;
    for (int i = 0; i < 4; ++i) s += std::norm(a.m[i] - b.m[i]);
    return std::sqrt(s);
}

// exp(-i theta/2 n.sigma) = cos(theta/2) I - i sin(theta/2) n.sigma, |n| = 1.
inline SpinPropagator su2_rotation(double theta, double nx, double ny, double nz) {
    const double c = std::cos(0.5 * theta);
    const double s = std::sin(0.5 * theta);
    SpinPropagator u;
    u.m[0] = cplx{c, -s * nz};
    u.m[1] = cplx{-s * ny, -s * nx};
    u.m[2] = cplx{s * ny, -s * nx};
    u.m[3] = cplx{c, s * nz};
    return u;
}

// R_z(phi) = exp(-i phi sigma_z / 2) = diag(e^{-i phi/2}, e^{+i phi/2})
inline SpinPropagator rot_z(double phi) {
    SpinPropagator u;
    u.m[0] = std::polar(1.0, -0.5 * phi);
    u.m[1] = cplx{0, 0};
    u.m[2] = cplx{0, 0};
    u.m[3] = std::polar(1.0, 0.5 * phi);
    return u;
}

}  // namespace spinbeat
