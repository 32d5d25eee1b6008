#pragma once

#include <array>

#include "qtransfer/integrator.hpp"
#include "qtransfer/pulse.hpp"

namespace qtransfer {

// Rotating-frame pseudospin (u, v, w); w is the population inversion.
// Only the rotating-frame system is integrated: the lab-frame equations
// differ by the optical-frequency rotation that the (u, v, w) frame removes,
// so integrating them would resolve ~1e15 Hz oscillations for no information.
struct PseudospinState {
    double u = 0.0;
    double v = 0.0;
    double w = -1.0;
};

// Resonant drive Omega(t) plus detuning Delta = omega_0 - omega. The torque
// vector is N = (-Omega, 0, Delta).
struct TorqueSpec {
    PulseSpec pulse;
    double detuning = 0.0;
};

// udot = -Delta v; vdot = Delta u + Omega w; wdot = -Omega v.
std::array<double, 3> pseudospin_rhs(const TorqueSpec& ts, double t, const PseudospinState& s);

// Resonant rotation by pulse area theta:
// u = u0; v = w0 sin + v0 cos; w = -v0 sin + w0 cos.
PseudospinState rotation_solution(double theta, const PseudospinState& s0);

struct Bloch2Result {
    PseudospinState final_state;
    double area = 0.0;        // pulse area accumulated over the window
    double norm_drift = 0.0;  // max | ||s|| - 1 | along the trajectory
    std::int64_t accepted_steps = 0;
    std::int64_t rejected_steps = 0;
};

Bloch2Result simulate_two_level(const TorqueSpec& ts, double t0, double t1,
                                const PseudospinState& s0, const IntegratorConfig& cfg = {});

} // namespace qtransfer
