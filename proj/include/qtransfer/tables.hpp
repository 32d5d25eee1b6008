#pragma once

#include <span>
#include <string>
#include <vector>

#include "qtransfer/pulse.hpp"
#include "qtransfer/transfer_result.hpp"

namespace qtransfer {

// One row of the pi-pulse or adiabatic-passage reference tables
// (single-atom four-level system).
struct Cavity4Row {
    PulseShape shape;
    double gamma;
    double omega0;
    double sigma;
    double g0;
    double sigma_g;
    double delay;
    double log10_p; // reference value
};

// One row of the coherence-transfer reference table (two-atom system).
struct CoherenceRow {
    PulseShape shape;
    double gamma;
    double omega10;
    double sigma1;
    double omega20;
    double sigma2;
    double g;
    double delay;
    double log10_p;
};

std::span<const Cavity4Row> pi_pulse_table();
std::span<const Cavity4Row> adiabatic_table();
std::span<const CoherenceRow> coherence_table();

struct RowOutcome {
    int index = 0;
    double reference = 0.0;
    double computed = 0.0;
    double delta = 0.0;
    double seconds = 0.0;
};

RowOutcome run_pi_row(int index, double rtol = 1e-9, double atol = 1e-12);
RowOutcome run_adiabatic_row(int index, double rtol = 1e-9, double atol = 1e-12);
RowOutcome run_coherence_row(int index, double rtol = 1e-9, double atol = 1e-12);

// Formats one report line: index, parameters, reference vs computed vs delta.
std::string describe_pi_row(const RowOutcome& o);
std::string describe_adiabatic_row(const RowOutcome& o);
std::string describe_coherence_row(const RowOutcome& o);

} // namespace qtransfer
