#pragma once

#include <array>
#include <optional>

#include "qtransfer/integrator.hpp"
#include "qtransfer/pulse.hpp"
#include "qtransfer/transfer_result.hpp"

namespace qtransfer {

// Three-level Lambda amplitudes, stored as [Re Ca, Im Ca, Re Cb, Im Cb, Re Cc, Im Cc].
// |a> is the initial ground state, |b> the target ground state, |c> the
// excited intermediate.
inline constexpr std::array<const char*, 6> kLambda3Labels = {
    "re_ca", "im_ca", "re_cb", "im_cb", "re_cc", "im_cc"};

struct Lambda3Params {
    PulseSpec pump;   // Omega_1, couples a <-> c
    PulseSpec stokes; // Omega_2, couples b <-> c
    double delta1 = 0.0;
    double delta2 = 0.0;
};

// i Cdot = H C with H = (1/2) [[2 d1, 0, W1], [0, 2(d1+d2), W2], [W1, W2, 0]].
void lambda3_rhs(const Lambda3Params& par, double t, const double y[6], double dy[6]);

struct DressedBasis {
    std::array<double, 3> w_plus;  // components on (a, b, c)
    std::array<double, 3> w_zero;
    std::array<double, 3> w_minus;
    double omega_plus = 0.0;
    double omega_zero = 0.0;
    double omega_minus = 0.0;
};

// Instantaneous eigenbasis of the resonant RWA Hamiltonian at Rabi values
// (W1, W2). Throws DomainError when both vanish.
DressedBasis dressed_states(double omega1, double omega2);

// |Phi_dot| / Omega_eff with Omega_eff = sqrt(W1^2 + W2^2)/2.
double adiabaticity_margin(const PulseSpec& p1, const PulseSpec& p2, double t);

struct StirapOptions {
    std::optional<std::array<double, 6>> initial;       // default |a>
    std::optional<double> sample_every;
};

// Integrates from C = (1, 0, 0) (unless overridden) and reports
// p = 1 - |C_b(t1)|^2 plus the peak intermediate population max |C_c|^2.
TransferResult stirap_transfer(const PulseSpec& pump, const PulseSpec& stokes, double delta1,
                               double delta2, double t0, double t1,
                               const IntegratorConfig& cfg = {},
                               const StirapOptions& opts = {});

// Window covering both pulses at their 1e-6-amplitude footprint.
std::pair<double, double> lambda3_window(const PulseSpec& p1, const PulseSpec& p2);

} // namespace qtransfer
