#pragma once

#include <array>
#include <optional>

#include "qtransfer/integrator.hpp"
#include "qtransfer/pulse.hpp"
#include "qtransfer/transfer_result.hpp"

namespace qtransfer {

// Four-level atom + cavity density matrix, real-encoded. Vector order:
// rho_a0a0, rho_b0b0, rho_b1b1, rho_c0c0, rho_e0e0 (populations),
// rho_a0e0, rho_a0b1, rho_b1e0 (Re coherences).
inline constexpr int kCavity4Dim = 8;
inline constexpr std::array<const char*, kCavity4Dim> kCavity4Labels = {
    "rho_a0a0", "rho_b0b0", "rho_b1b1", "rho_c0c0",
    "rho_e0e0", "rho_a0e0", "rho_a0b1", "rho_b1e0"};

// Which final populations count as the transfer target.
// AnyG0 / PhotonEmitted: rho_b1b1 + rho_b0b0 (the g0 Zeeman level with either
// photon number). PhotonOnly: rho_b1b1 alone.
enum class TargetConvention { AnyG0, PhotonEmitted, PhotonOnly };

struct Cavity4Config {
    PulseSpec pulse_omega; // classical field, couples a0 <-> e0
    PulseSpec pulse_g;     // cavity coupling, couples b1 <-> e0
    double gamma = 0.0;    // spontaneous emission
    double kappa = 0.0;    // cavity decay
    double window_t0 = 0.0;
    double window_t1 = 0.0;
    TargetConvention target = TargetConvention::AnyG0;

    void validate() const;
};

// The eight density-matrix ODEs, verbatim.
void cavity4_rhs(const Cavity4Config& cfg, double t, const double y[8], double dy[8]);

// Normalized dark-family coefficients (2 g sqrt(n+1), Omega) /
// sqrt(Omega^2 + 4 g^2 (n+1)) on (|g1, n>, |g2, n+1>).
std::array<double, 2> dark_state_family(double omega_val, double g_val, int n);

// Density-matrix dark state of the eight-ODE system itself (kernel of the
// coupling at frozen Omega, g): amplitudes (g, 0, -Omega) on (a0, e0, b1).
std::array<double, kCavity4Dim> coupling_dark_density(double omega_val, double g_val);

struct Cavity4Options {
    std::optional<double> sample_every;
    bool lorentzian_doubling = true; // widen Lorentzian windows until log10 p settles
};

// Counterintuitive ordering: g leads at t = 0, Omega delayed to t = delay.
Cavity4Config make_adiabatic_config(PulseSpec omega, PulseSpec g, double delay, double gamma,
                                    double kappa = 0.0,
                                    TargetConvention target = TargetConvention::AnyG0);

// Intuitive ordering: Omega leads at t = 0, g delayed to t = delay.
Cavity4Config make_pi_config(PulseSpec omega, PulseSpec g, double delay, double gamma,
                             double kappa = 0.0,
                             TargetConvention target = TargetConvention::AnyG0);

// Runs the configured protocol from rho_a0a0 = 1.
TransferResult run_cavity4_transfer(const Cavity4Config& cfg, const IntegratorConfig& icfg = {},
                                    const Cavity4Options& opts = {});

TransferResult adiabatic_transfer(const Cavity4Config& cfg, const IntegratorConfig& icfg = {},
                                  const Cavity4Options& opts = {});
TransferResult pi_pulse_transfer(const Cavity4Config& cfg, const IntegratorConfig& icfg = {},
                                 const Cavity4Options& opts = {});

} // namespace qtransfer
