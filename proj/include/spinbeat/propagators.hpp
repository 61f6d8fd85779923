#pragma once

#include <array>
#include <cmath>

#include "spinbeat/constants.hpp"
#include "spinbeat/elements.hpp"
#include "spinbeat/errors.hpp"
#include "spinbeat/spinor.hpp"

namespace spinbeat {

// H = -gamma_n B (S_x cos a + S_y sin a), transit tau = width / speed.
// Closed form: exp(-i H tau / hbar) = exp(-i theta n.sigma / 2) with
// theta = -gamma_n B tau (positive for the neutron) and n the field axis.
inline SpinPropagator static_flipper_propagator(const StaticFlipper& e, const BeamSpec& beam,
                                                const PhysicalConstants& k) {
    if (!(beam.speed > 0.0)) throw NonPositiveSpeed{};
    validate(FieldElement{e});
    const double tau = e.width / beam.speed;
    const double theta = -k.gyromagnetic_ratio_neutron * e.B * tau;
    return su2_rotation(theta, std::cos(e.axis_angle), std::sin(e.axis_angle), 0.0);
}

// Time-independent Hamiltonian in the frame co-rotating with the field axis:
//   H_rot = -gamma_n B S_x' - Omega S_z
// The -Omega S_z term is the spin-rotation coupling. Returned as a 2x2 matrix in J.
inline SpinPropagator rotating_frame_hamiltonian(double B, double Omega,
                                                 const PhysicalConstants& k) {
    const double gB = k.gyromagnetic_ratio_neutron * B;
    SpinPropagator h;
    h.m[0] = cplx{-0.5 * k.hbar * Omega, 0.0};
    h.m[1] = cplx{-0.5 * k.hbar * gB, 0.0};
    h.m[2] = cplx{-0.5 * k.hbar * gB, 0.0};
    h.m[3] = cplx{0.5 * k.hbar * Omega, 0.0};
    return h;
}

inline SpinPropagator rotating_frame_hamiltonian(const RotatingFlipper& e,
                                                 const PhysicalConstants& k) {
    return rotating_frame_hamiltonian(e.B, e.Omega, k);
}

inline SpinPropagator rotating_frame_hamiltonian(const QuadratureCoil& e,
                                                 const PhysicalConstants& k) {
    return rotating_frame_hamiltonian(e.B, e.Omega, k);
}

// Eigenvalue splitting of H_rot: hbar sqrt((gamma_n B)^2 + Omega^2).
inline double rotating_frame_splitting(double B, double Omega, const PhysicalConstants& k) {
    const double gB = k.gyromagnetic_ratio_neutron * B;
    return k.hbar * std::hypot(gB, Omega);
}

namespace detail {

// exp(-i H_rot tau / hbar) for H_rot = -gamma_n B S_x - Omega S_z.
inline SpinPropagator rotating_frame_exp(double B, double Omega, double tau,
                                         const PhysicalConstants& k) {
    const double gB = k.gyromagnetic_ratio_neutron * B;
    const double w = std::hypot(gB, Omega);
    if (w == 0.0) return SpinPropagator::identity();
    // theta n = -tau (gB, 0, Omega)
    return su2_rotation(tau * w, -gB / w, 0.0, -Omega / w);
}

}  // namespace detail

// Exact lab-frame propagator of a continuously rotating flipper entered at t_entry:
//   U = R_z(alpha(t_exit)) exp(-i H_rot tau / hbar) R_z(-alpha(t_entry))
inline SpinPropagator rotating_flipper_propagator(const RotatingFlipper& e, const BeamSpec& beam,
                                                  double t_entry, const PhysicalConstants& k) {
    if (!std::holds_alternative<ContinuousProfile>(e.profile)) throw UnsupportedProfile{};
    if (!(beam.speed > 0.0)) throw NonPositiveSpeed{};
    validate(FieldElement{e});
    const double tau = e.width / beam.speed;
    const double a_entry = e.axis_angle_at(t_entry);
    const double a_exit = e.axis_angle_at(t_entry + tau);
    return rot_z(a_exit) * detail::rotating_frame_exp(e.B, e.Omega, tau, k) * rot_z(-a_entry);
}

// Same contract as rotating_flipper_propagator, but the bookkeeping is done from
// the instantaneous field vector of the stationary coil:
//   U = R_z(Omega tau) exp(-i (H(t_entry) - Omega S_z) tau / hbar)
// with H(t_entry) = -gamma_n B(t_entry).S read off from the field components.
inline SpinPropagator quadrature_coil_propagator(const QuadratureCoil& e, const BeamSpec& beam,
                                                 double t_entry, const PhysicalConstants& k) {
    if (!(beam.speed > 0.0)) throw NonPositiveSpeed{};
    validate(FieldElement{e});
    const double tau = e.width / beam.speed;
    const double bx = e.B * std::cos(e.Omega * t_entry + e.alpha0);
    const double by = e.B * std::sin(e.Omega * t_entry + e.alpha0);
    const double gx = k.gyromagnetic_ratio_neutron * bx;
    const double gy = k.gyromagnetic_ratio_neutron * by;
    const double w = std::sqrt(gx * gx + gy * gy + e.Omega * e.Omega);
    SpinPropagator frame = SpinPropagator::identity();
    if (w != 0.0)
        frame = su2_rotation(tau * w, -gx / w, -gy / w, -e.Omega / w);
    return rot_z(e.Omega * tau) * frame;
}

// Lab-frame field vector of an element at time t (transverse coil, B_z = 0).
inline std::array<double, 3> element_field(const RotatingFlipper& e, double t) {
    const double a = e.axis_angle_at(t);
    return {e.B * std::cos(a), e.B * std::sin(a), 0.0};
}

inline std::array<double, 3> element_field(const QuadratureCoil& e, double t) {
    return {e.B * std::cos(e.Omega * t + e.alpha0), e.B * std::sin(e.Omega * t + e.alpha0), 0.0};
}

// Energy offset between the spin states of a particle crossing a pi-flipper
// rotating at Omega: magnitude 2 hbar |Omega| s, down-shifted for spin
// initially parallel to Omega. hbar Omega for neutrons (s = 1/2).
inline double spin_flip_energy_shift(double Omega, double spin_magnitude,
                                     const PhysicalConstants& k) {
    return -2.0 * k.hbar * Omega * spin_magnitude;
}

// Larmor theorem: rotation at Omega corresponds to a longitudinal field
// B' = Omega / gamma_n (signed; negative for the neutron at Omega > 0).
inline double larmor_equivalent_field(double Omega, const PhysicalConstants& k) {
    return Omega / k.gyromagnetic_ratio_neutron;
}

}  // namespace spinbeat
