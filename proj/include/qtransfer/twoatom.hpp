#pragma once

#include <array>
#include <optional>

#include "qtransfer/integrator.hpp"
#include "qtransfer/pulse.hpp"
#include "qtransfer/transfer_result.hpp"

namespace qtransfer {

// Two-atom + cavity amplitudes in the tilde convention (Ct = i C), order:
// C_ab, Ct_cb, C_bb, Ct_bc, C_ba over the basis
// |a b 0>, |c b 0>, |b b 1>, |b c 0>, |b a 0>.
inline constexpr int kAmp5Dim = 5;
inline constexpr std::array<const char*, kAmp5Dim> kAmp5Labels = {
    "c_ab", "ct_cb", "c_bb", "ct_bc", "c_ba"};

// 25 real-encoded density-matrix elements, row-major over the same basis;
// entries with exactly one excited-tilde index carry the tilde convention.
inline constexpr int kRho25Dim = 25;
extern const std::array<const char*, kRho25Dim> kRho25Labels;

struct TwoAtomParams {
    PulseSpec omega1; // drives atom 1 (a <-> c)
    PulseSpec omega2; // drives atom 2 (a <-> c)
    double g = 1.0;   // constant cavity coupling
    double gamma = 0.0;

    void validate() const;
};

void amp5_rhs(const TwoAtomParams& par, double t, const double y[5], double dy[5]);
void rho25_rhs(const TwoAtomParams& par, double t, const double y[25], double dy[25]);

// Normalized dark-state coefficients (W2 g, -W1 W2, W1 g) / sqrt(W0^2 g^2 +
// W1^2 W2^2) on (|a b 0>, |b b 1>, |b a 0>), W0^2 = W1^2 + W2^2.
std::array<double, 3> dark_state(double omega1_val, double omega2_val, double g);

// Symmetric (EIT-like) three-level subsystem, equal drive Omega:
// B1dot = -(W/2) B2; B2dot = (W/2) B1 - (G/2) B2 + (g/sqrt 2) B3;
// B3dot = -(g/sqrt 2) B2.
void symmetric_rhs(const PulseSpec& omega, double g, double gamma, double t, const double y[3],
                   double dy[3]);

// Antisymmetric two-level subsystem: A1dot = -(W/2) A2;
// A2dot = (W/2) A1 - (G/2) A2.
void antisymmetric_rhs(const PulseSpec& omega, double gamma, double t, const double y[2],
                       double dy[2]);

struct SymAntiState {
    double b1 = 0.0, b2 = 0.0, b3 = 0.0;
    double a1 = 0.0, a2 = 0.0;
};

SymAntiState decompose(const std::array<double, 5>& c);
std::array<double, 5> reconstruct(const SymAntiState& s);

enum class CoherenceModel { Amplitudes, Density };

struct CoherenceOptions {
    std::optional<double> sample_every;
    std::optional<std::pair<double, double>> window; // override the default rule
};

// Counterintuitive coherence transfer |a b 0> -> |b a 0>: Omega_2 leads at
// t = 0, Omega_1 delayed to t = delay. p = 1 - rho_baba (Density) or
// 1 - C_ba^2 (Amplitudes).
// The run starts from |a b 0|. A general superposition A|a b 0> + B|b b 0>
// only adds an inert |b b 0> amplitude outside this five-state basis (it
// couples to nothing), so the B = 0 case carries all the dynamics.
TransferResult coherence_transfer(CoherenceModel model, PulseSpec omega1, PulseSpec omega2,
                                  double delay, double g, double gamma,
                                  const IntegratorConfig& icfg = {},
                                  const CoherenceOptions& opts = {});

// Default window: covers both pulses at their per-shape footprint.
std::pair<double, double> twoatom_window(const PulseSpec& omega1, const PulseSpec& omega2);

struct SymAntiRun {
    TransferResult result;
    SymAntiState initial_state;
    SymAntiState final_state;
    std::array<double, 5> reconstructed_final{};
};

// Equal-drive run through the symmetric/antisymmetric split: integrates the
// two subsystems from the decomposition of |a b 0| and reconstructs the
// five amplitudes at the end.
SymAntiRun symanti_transfer(const PulseSpec& omega, double g, double gamma,
                            const IntegratorConfig& icfg = {},
                            const CoherenceOptions& opts = {});

} // namespace qtransfer
