#pragma once

#include <array>
#include <utility>

#include "qtransfer/pulse.hpp"

namespace qtransfer {

// Spherical angles of a real, normalized three-level state vector:
// C_a = sin(theta) cos(phi), C_b = sin(theta) sin(phi), C_c = cos(theta).
struct AngleState {
    double theta = 0.0; // [0, pi]
    double phi = 0.0;   // (-pi, pi]
};

// Throws ConfigError when C is not normalized to 1e-9, DomainError at the
// poles (sin theta = 0, azimuth undefined).
AngleState to_spherical(const std::array<double, 3>& c);
std::array<double, 3> from_spherical(const AngleState& a);

struct AngleDeriv {
    double dphi = 0.0;
    double dtheta = 0.0;
};

// phidot = tan(theta - pi/2)/2 * Omega * cos(phi + Phi);
// thetadot = -(Omega/2) sin(phi + Phi). Throws DomainError at the poles.
AngleDeriv angle_rhs(double omega_total, double mix_angle, const AngleState& a);

// tau(t) = int_{t0}^{t} Omega(t')/2 dt' with Omega = sqrt(W1^2 + W2^2).
double rescaled_time(const PulseSpec& p1, const PulseSpec& p2, double t0, double t,
                     double abs_tol = 1e-10);

struct DeviationPair {
    double dphi = 0.0;
    double dtheta = 0.0;
    double coherent_dphi = 0.0; // Phi(t0)-driven term
    double coherent_dtheta = 0.0;
    double convolution_dphi = 0.0; // Phi_dot-driven term
    double convolution_dtheta = 0.0;
    bool small_angle_ok = true; // false when either deviation exceeds 0.3 rad
};

// Evaluates both terms of the linearized small-deviation solutions at t1,
// with Phi(t0) standing in for Phi(-infinity).
DeviationPair linearized_deviations(const PulseSpec& p1, const PulseSpec& p2, double t0,
                                    double t1, double outer_tol = 1e-12);

// p = | int exp(i int_t^{t1} Omega/2 dt') dPhi/dt dt |^2 over [t0, t1].
double failure_integral(const PulseSpec& p1, const PulseSpec& p2, double t0, double t1,
                        double outer_tol = 1e-12);

// Closed form for the windowed sin/cos pair: 16 sin^2(pi x / 4) / x^2, x = Omega_0 T.
double analytic_example_p(double x);

// The Ch. 3 exact pair: pump = Omega_0 sin(t/T), coupling = Omega_0 cos(t/T),
// both supported on [-T pi/2, T pi/2].
std::pair<PulseSpec, PulseSpec> make_sincos_pair(double omega0, double T);
std::pair<double, double> sincos_window(double T);

} // namespace qtransfer
